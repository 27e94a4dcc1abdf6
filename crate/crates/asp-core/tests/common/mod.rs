//! Shared oracles for the integration suites: Gauss-Legendre quadrature
//! and a high-precision normal-CDF series evaluated with the crate's
//! extended-precision floats (a path fully independent of the production
//! `normal_cdf`).

#![allow(dead_code)]

use asp_core::bigfloat::{BigFloat, Ctx};

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on the
/// Legendre polynomial.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; order];
    let mut weights = vec![0.0; order];
    let n = order as f64;
    for i in 0..order.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // evaluate P_n and P_n' by the three-term recurrence
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=order {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[order - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[order - 1 - i] = w;
    }
    (nodes, weights)
}

/// Integrate `f` over `[a, b]` with a fixed-order Gauss-Legendre rule.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, order: usize) -> f64 {
    let (nodes, weights) = gauss_legendre(order);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for (x, w) in nodes.iter().zip(&weights) {
        acc += w * f(mid + half * x);
    }
    acc * half
}

/// Integrate across the given knots (must be sorted and bracket the
/// domain); the integrand may kink or jump at interior knots.
pub fn integrate_piecewise<F: Fn(f64) -> f64>(f: &F, knots: &[f64], order: usize) -> f64 {
    let mut acc = 0.0;
    for pair in knots.windows(2) {
        if pair[1] > pair[0] {
            acc += integrate(f, pair[0], pair[1], order);
        }
    }
    acc
}

/// pi by Machin's formula at the context precision.
pub fn pi_const(ctx: &Ctx) -> BigFloat {
    let atan_recip = |x: u64| -> BigFloat {
        // atan(1/x) = sum (-1)^k / ((2k+1) x^(2k+1))
        let xbf = ctx.from_u64(x);
        let x2 = ctx.mul(&xbf, &xbf);
        let mut power = ctx.recip(&xbf);
        let mut sum = power.clone();
        let cutoff = -(ctx.prec() as i64 + 8);
        let mut k = 1u64;
        loop {
            power = ctx.div(&power, &x2);
            let term = ctx.div(&power, &ctx.from_u64(2 * k + 1));
            if term.msb_exponent() < cutoff {
                break;
            }
            sum = if k % 2 == 1 {
                ctx.sub(&sum, &term)
            } else {
                ctx.add(&sum, &term)
            };
            k += 1;
        }
        sum
    };
    let a = ctx.mul(&ctx.from_u64(16), &atan_recip(5));
    let b = ctx.mul(&ctx.from_u64(4), &atan_recip(239));
    ctx.sub(&a, &b)
}

/// Square root by Newton iteration from the f64 seed.
pub fn sqrt_bf(ctx: &Ctx, x: &BigFloat) -> BigFloat {
    assert!(!x.is_negative() && !x.is_zero());
    let mut y = ctx.from_f64(x.to_f64().sqrt());
    let half = ctx.from_ratio(1, 2);
    for _ in 0..12 {
        let quot = ctx.div(x, &y);
        y = ctx.mul(&half, &ctx.add(&y, &quot));
    }
    y
}

/// erf by the alternating Maclaurin series at the context precision:
/// `erf(z) = (2/sqrt(pi)) sum (-1)^k z^(2k+1) / (k! (2k+1))`.
pub fn erf_oracle(ctx: &Ctx, z: f64) -> BigFloat {
    let zbf = ctx.from_f64(z.abs());
    let z2 = ctx.mul(&zbf, &zbf);
    let mut term = zbf.clone(); // z^(2k+1) / k!
    let mut sum = zbf.clone();
    let cutoff = -(ctx.prec() as i64 + 8);
    let mut k = 1u64;
    loop {
        term = ctx.div(&ctx.mul(&term, &z2), &ctx.from_u64(k));
        let add = ctx.div(&term, &ctx.from_u64(2 * k + 1));
        sum = if k % 2 == 1 {
            ctx.sub(&sum, &add)
        } else {
            ctx.add(&sum, &add)
        };
        if k > z.abs() as u64 * z.abs() as u64 + 2 && add.msb_exponent() < cutoff {
            break;
        }
        k += 1;
        assert!(k < 2000, "erf series failed to converge");
    }
    let pi = pi_const(ctx);
    let coef = ctx.div(&ctx.from_u64(2), &sqrt_bf(ctx, &pi));
    let out = ctx.mul(&coef, &sum);
    if z < 0.0 {
        out.neg()
    } else {
        out
    }
}

/// Standard normal CDF at ~30 significant digits, returned as `f64`.
pub fn normal_cdf_oracle(z: f64) -> f64 {
    let ctx = Ctx::new(256);
    let sqrt2 = sqrt_bf(&ctx, &ctx.from_u64(2));
    let arg = ctx.div(&ctx.from_f64(z), &sqrt2).to_f64();
    let erf = erf_oracle(&ctx, arg);
    let half = ctx.from_ratio(1, 2);
    ctx.mul(&half, &ctx.add(&ctx.one(), &erf)).to_f64()
}

#[cfg(test)]
mod self_checks {
    use super::*;

    #[test]
    fn quadrature_integrates_polynomials_exactly() {
        let f = |x: f64| 3.0 * x * x;
        let v = integrate(&f, 0.0, 2.0, 20);
        assert!((v - 8.0).abs() < 1e-12);
    }

    #[test]
    fn oracle_matches_known_digits() {
        // Phi(1) = 0.841344746068542948585232545632...
        let v = normal_cdf_oracle(1.0);
        assert!((v - 0.8413447460685429).abs() < 1e-15);
        let half = normal_cdf_oracle(0.0);
        assert_eq!(half, 0.5);
    }
}
