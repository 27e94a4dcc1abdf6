//! Fixed-precision binary floating point on top of `num_bigint`.
//!
//! The alternating binomial sums behind the censored-MLE moments cancel
//! catastrophically in `f64` once the sample size grows (the coefficients
//! reach ~1e39 while the results stay at the scale of the mean life), so
//! those series are evaluated here with a configurable significand width
//! and converted to `f64` only at the very end.
//!
//! A value is `mant * 2^exp` with the mantissa held exactly; every
//! arithmetic result is rounded back to the context precision with
//! round-half-to-even.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Default significand width (bits) for the moment series.
pub const DEFAULT_PREC_BITS: u32 = 256;

/// An arbitrary-range binary float. Construct and combine through [`Ctx`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigFloat {
    mant: BigInt,
    exp: i64,
}

impl BigFloat {
    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn neg(&self) -> BigFloat {
        BigFloat {
            mant: -self.mant.clone(),
            exp: self.exp,
        }
    }

    /// Exponent of the most significant bit, i.e. the value lies in
    /// `[2^(e-1), 2^e)`. Zero returns `i64::MIN`.
    pub fn msb_exponent(&self) -> i64 {
        if self.is_zero() {
            i64::MIN
        } else {
            self.exp + self.mant.magnitude().bits() as i64
        }
    }

    /// Round to `f64`. Values beyond the `f64` range saturate to
    /// `infinity`/`0` with the appropriate sign.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mant.magnitude().bits();
        // Keep 64 significant bits so the final rounding happens once.
        let (top, shift) = if bits > 64 {
            let sh = bits - 64;
            ((self.mant.magnitude() >> sh).to_u64().unwrap(), sh as i64)
        } else {
            (self.mant.magnitude().to_u64().unwrap(), 0)
        };
        let mut x = top as f64;
        if self.mant.is_negative() {
            x = -x;
        }
        ldexp(x, self.exp + shift)
    }

    /// Exact ordering; alignment is performed without rounding.
    pub fn cmp_value(&self, other: &BigFloat) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        match (self.is_zero(), other.is_zero()) {
            (true, true) => return Ordering::Equal,
            (true, false) => {
                return if other.is_negative() {
                    Ordering::Greater
                } else {
                    Ordering::Less
                }
            }
            (false, true) => {
                return if self.is_negative() {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            }
            _ => {}
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as usize;
        let b = &other.mant << (other.exp - e) as usize;
        a.cmp(&b)
    }
}

/// Scale by a power of two, saturating outside the `f64` range.
pub fn ldexp(x: f64, e: i64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    if e > 2200 {
        return if x > 0.0 {
            f64::INFINITY
        } else {
            f64::NEG_INFINITY
        };
    }
    if e < -2200 {
        return if x > 0.0 { 0.0 } else { -0.0 };
    }
    let mut out = x;
    let mut rem = e;
    while rem != 0 {
        let step = rem.clamp(-1000, 1000);
        out *= f64::powi(2.0, step as i32);
        rem -= step;
    }
    out
}

/// Arithmetic context: every operation rounds its result to `prec` bits.
#[derive(Debug, Clone, Copy)]
pub struct Ctx {
    prec: u32,
}

impl Ctx {
    pub fn new(prec: u32) -> Ctx {
        assert!(prec >= 16, "precision must be at least 16 bits");
        Ctx { prec }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn zero(&self) -> BigFloat {
        BigFloat {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn one(&self) -> BigFloat {
        self.from_u64(1)
    }

    fn norm(&self, mant: BigInt, exp: i64) -> BigFloat {
        if mant.is_zero() {
            return self.zero();
        }
        let bits = mant.magnitude().bits();
        let prec = self.prec as u64;
        if bits <= prec {
            return BigFloat { mant, exp };
        }
        let sh = bits - prec;
        let neg = mant.is_negative();
        let mag = mant.magnitude();
        let mut q: BigUint = mag >> sh;
        let rem = mag - (&q << sh);
        let half: BigUint = BigUint::one() << (sh - 1);
        if rem > half || (rem == half && q.bit(0)) {
            q += 1u32;
        }
        let mut e = exp + sh as i64;
        if q.bits() > prec {
            // carry out of the rounding, q is now exactly 2^prec
            q >>= 1;
            e += 1;
        }
        let sign = if neg { Sign::Minus } else { Sign::Plus };
        BigFloat {
            mant: BigInt::from_biguint(sign, q),
            exp: e,
        }
    }

    pub fn from_bigint(&self, v: &BigInt) -> BigFloat {
        self.norm(v.clone(), 0)
    }

    pub fn from_u64(&self, v: u64) -> BigFloat {
        self.norm(BigInt::from(v), 0)
    }

    pub fn from_i64(&self, v: i64) -> BigFloat {
        self.norm(BigInt::from(v), 0)
    }

    /// Exact conversion; every finite `f64` is representable.
    pub fn from_f64(&self, x: f64) -> BigFloat {
        assert!(x.is_finite(), "cannot convert {x} to BigFloat");
        if x == 0.0 {
            return self.zero();
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1 } else { 1 };
        let biased = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, exp) = if biased == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), biased - 1075)
        };
        self.norm(BigInt::from(sign) * BigInt::from(mant), exp)
    }

    pub fn from_ratio(&self, num: u64, den: u64) -> BigFloat {
        self.div(&self.from_u64(num), &self.from_u64(den))
    }

    pub fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        if a.is_zero() {
            return self.norm(b.mant.clone(), b.exp);
        }
        if b.is_zero() {
            return self.norm(a.mant.clone(), a.exp);
        }
        let e = a.exp.min(b.exp);
        let ma = &a.mant << (a.exp - e) as usize;
        let mb = &b.mant << (b.exp - e) as usize;
        self.norm(ma + mb, e)
    }

    pub fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        self.add(a, &b.neg())
    }

    pub fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        if a.is_zero() || b.is_zero() {
            return self.zero();
        }
        self.norm(&a.mant * &b.mant, a.exp + b.exp)
    }

    /// Division; panics on a zero divisor (callers guard their inputs).
    pub fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        assert!(!b.is_zero(), "BigFloat division by zero");
        if a.is_zero() {
            return self.zero();
        }
        // scale so the quotient carries at least prec + 2 bits however the
        // operand widths compare
        let sh = self.prec as u64 + 2 + b.mant.magnitude().bits();
        let num = a.mant.magnitude() << sh;
        let mut q = &num / b.mant.magnitude();
        let rem = num - &q * b.mant.magnitude();
        let mut e = a.exp - sh as i64 - b.exp;
        if !rem.is_zero() {
            // sticky bit so norm() can round correctly
            q = (q << 1u32) | BigUint::one();
            e -= 1;
        }
        let neg = a.mant.is_negative() != b.mant.is_negative();
        let sign = if neg { Sign::Minus } else { Sign::Plus };
        self.norm(BigInt::from_biguint(sign, q), e)
    }

    pub fn recip(&self, a: &BigFloat) -> BigFloat {
        self.div(&self.one(), a)
    }

    /// Integer power by repeated squaring.
    pub fn powi(&self, a: &BigFloat, e: u64) -> BigFloat {
        if e == 0 {
            return self.one();
        }
        let work = Ctx::new(self.prec + 32);
        let mut base = a.clone();
        let mut acc: Option<BigFloat> = None;
        let mut k = e;
        loop {
            if k & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(v) => work.mul(&v, &base),
                });
            }
            k >>= 1;
            if k == 0 {
                break;
            }
            base = work.mul(&base, &base);
        }
        let v = acc.unwrap();
        self.norm(v.mant, v.exp)
    }

    /// `e^x` for any sign of `x`, via halving reduction and the Taylor
    /// series on `[0, 1/2]`. Guard bits cover the re-squaring error.
    pub fn exp(&self, x: &BigFloat) -> BigFloat {
        if x.is_zero() {
            return self.one();
        }
        let negative = x.is_negative();
        let z = if negative { x.neg() } else { x.clone() };
        let top = z.msb_exponent();
        let halvings = if top >= 0 { (top + 1) as u32 } else { 0 };
        let work = Ctx::new(self.prec + 64 + 2 * halvings);
        let y = BigFloat {
            mant: z.mant.clone(),
            exp: z.exp - halvings as i64,
        };
        // Taylor series of e^y, y in [0, 1/2]
        let mut sum = work.one();
        let mut term = work.one();
        let cutoff = -(work.prec as i64 + 4);
        let mut j = 1u64;
        loop {
            term = work.div(&work.mul(&term, &y), &work.from_u64(j));
            if term.msb_exponent() < cutoff {
                break;
            }
            sum = work.add(&sum, &term);
            j += 1;
        }
        for _ in 0..halvings {
            sum = work.mul(&sum, &sum);
        }
        if negative {
            sum = work.recip(&sum);
        }
        self.norm(sum.mant, sum.exp)
    }
}

/// Exact binomial coefficient.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Exact factorial.
pub fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= BigInt::from(i);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> Ctx {
        Ctx::new(DEFAULT_PREC_BITS)
    }

    #[test]
    fn f64_round_trip_is_exact() {
        let c = ctx();
        for &x in &[1.0, -3.5, 0.1, 1e300, -2.2250738585072014e-308, 13403.0] {
            assert_eq!(c.from_f64(x).to_f64(), x);
        }
        assert_eq!(c.from_f64(0.0).to_f64(), 0.0);
    }

    #[test]
    fn arithmetic_matches_f64_on_small_values() {
        let c = ctx();
        let a = c.from_f64(1.25);
        let b = c.from_f64(-0.75);
        assert_eq!(c.add(&a, &b).to_f64(), 0.5);
        assert_eq!(c.mul(&a, &b).to_f64(), -0.9375);
        let q = c.div(&c.from_u64(1), &c.from_u64(3)).to_f64();
        assert!((q - 1.0 / 3.0).abs() < 1e-16);
    }

    #[test]
    fn exp_agrees_with_f64_and_inverts() {
        let c = ctx();
        for &x in &[-0.3, -1.0, -7.5, 0.4, 3.0, -50.0, 12.0] {
            let got = c.exp(&c.from_f64(x)).to_f64();
            let want = x.exp();
            assert!(
                (got - want).abs() <= 4.0 * f64::EPSILON * want.abs(),
                "exp({x}): {got} vs {want}"
            );
        }
        // residual of exp(1)*exp(-1)-1 stays at the working precision
        let e1 = c.exp(&c.from_i64(1));
        let em1 = c.exp(&c.from_i64(-1));
        let resid = c.sub(&c.mul(&e1, &em1), &c.one());
        assert!(resid.msb_exponent() < -(DEFAULT_PREC_BITS as i64 - 8));
    }

    #[test]
    fn powi_matches_repeated_multiplication() {
        let c = ctx();
        let v = c.from_f64(0.7);
        let mut acc = c.one();
        for _ in 0..13 {
            acc = c.mul(&acc, &v);
        }
        let fast = c.powi(&v, 13);
        let resid = c.sub(&acc, &fast);
        assert!(resid.is_zero() || resid.msb_exponent() < fast.msb_exponent() - 240);
    }

    #[test]
    fn binomials_are_exact() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(10, 10), BigInt::one());
        assert_eq!(binomial(3, 7), BigInt::zero());
        // binom(92, 46) overflows f64 integer arithmetic; check digits exactly
        assert_eq!(
            binomial(92, 46).to_string(),
            "410795449442059149332177040"
        );
        assert_eq!(factorial(10), BigInt::from(3628800u64));
    }

    #[test]
    fn comparison_is_exact_across_scales() {
        let c = ctx();
        let small = c.from_f64(1e-200);
        let big = c.from_f64(1e200);
        assert_eq!(small.cmp_value(&big), std::cmp::Ordering::Less);
        assert_eq!(
            big.neg().cmp_value(&small),
            std::cmp::Ordering::Less
        );
        assert_eq!(small.cmp_value(&small), std::cmp::Ordering::Equal);
    }
}
