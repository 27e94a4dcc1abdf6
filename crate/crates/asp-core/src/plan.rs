//! Sampling-plan probabilities, the expected-testing-cost objective, and
//! the constrained minimization over `(gamma, n, t1, t2)`.
//!
//! A plan draws a fresh hybrid-censored sample whenever the Bayes estimate
//! lands in the continuation band `[t1, t2)`; it accepts at or above `t2`
//! and rejects below `t1`. Under the delta-method normal law the band
//! induces per-batch probabilities `p_a`, `p_r`, `p_c`, long-run risks
//! `p_a/(1-p_c)` and `p_r/(1-p_c)`, and the objective
//! `C * E(estimate) / (1 - p_c)` evaluated at the acceptable quality level.
//!
//! The solver follows a two-step scheme: find the least `gamma` for which
//! any `(n, t1, t2)` within bounds satisfies both long-run risk
//! constraints, then minimize the objective at that `gamma` with an
//! exhaustive integer scan over `n` and a seeded differential-evolution
//! search over the thresholds. Everything is deterministic for a fixed
//! seed.

use std::collections::HashMap;

use crate::bayes::{estimator_moments_from_mle, EstimatorMoments, Loss, Prior};
use crate::censoring::CensoringScheme;
use crate::error::{Error, Result};
use crate::mle_dist::mle_moments;
use crate::normal::{normal_cdf, normal_quantile, normal_sf};
use crate::rng::{derive_seed, SplitMix64};

/// Design inputs for a plan: quality levels, risks, test duration, unit
/// testing cost, prior, and loss.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanSpec {
    pub theta_a: f64,
    pub theta_u: f64,
    pub time_limit: f64,
    pub alpha: f64,
    pub beta: f64,
    pub unit_cost: f64,
    pub prior: Prior,
    pub loss: Loss,
}

impl PlanSpec {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        theta_a: f64,
        theta_u: f64,
        time_limit: f64,
        alpha: f64,
        beta: f64,
        unit_cost: f64,
        prior: Prior,
        loss: Loss,
    ) -> Result<PlanSpec> {
        for (name, v) in [
            ("theta_a", theta_a),
            ("theta_u", theta_u),
            ("time_limit", time_limit),
            ("unit_cost", unit_cost),
        ] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::Invalid(format!("{name} must be positive, got {v}")));
            }
        }
        // equality is allowed through so the solver can report it infeasible
        if theta_a < theta_u {
            return Err(Error::Invalid(format!(
                "acceptable quality level {theta_a} must not be below the \
                 unacceptable level {theta_u}"
            )));
        }
        for (name, v) in [("alpha", alpha), ("beta", beta)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::Invalid(format!("{name} must lie in (0,1), got {v}")));
            }
        }
        Ok(PlanSpec {
            theta_a,
            theta_u,
            time_limit,
            alpha,
            beta,
            unit_cost,
            prior,
            loss,
        })
    }
}

/// Per-batch and long-run decision probabilities of a threshold pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanProbabilities {
    pub p_accept: f64,
    pub p_reject: f64,
    pub p_continue: f64,
    /// `p_a / (1 - p_c)`
    pub accept_long_run: f64,
    /// `p_r / (1 - p_c)`
    pub reject_long_run: f64,
}

/// Probabilities of accept/reject/continue under the normal approximation
/// with the given moments.
pub fn plan_probabilities(
    t1: f64,
    t2: f64,
    moments: &EstimatorMoments,
) -> Result<PlanProbabilities> {
    if !(t2 > t1) {
        return Err(Error::Invalid(format!(
            "thresholds must satisfy t2 > t1, got t1={t1}, t2={t2}"
        )));
    }
    if !(moments.variance > 0.0) {
        return Err(Error::Invalid(format!(
            "estimator variance must be positive, got {}",
            moments.variance
        )));
    }
    let s = moments.variance.sqrt();
    let p_reject = normal_cdf((t1 - moments.mean) / s);
    let p_accept = normal_sf((t2 - moments.mean) / s);
    let p_continue = (1.0 - p_accept - p_reject).max(0.0);
    let decision = p_accept + p_reject;
    if decision <= 0.0 {
        return Err(Error::DegeneratePlan(
            "continuation probability is 1: the band swallows the whole law".into(),
        ));
    }
    Ok(PlanProbabilities {
        p_accept,
        p_reject,
        p_continue,
        accept_long_run: p_accept / decision,
        reject_long_run: p_reject / decision,
    })
}

/// Optimizer output: the design point, its objective value, and the
/// recomputed constraint slacks (non-negative means satisfied).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanSolution {
    pub gamma: u32,
    pub n: u32,
    pub t1: f64,
    pub t2: f64,
    pub etc: f64,
    pub feasible: bool,
    pub slack_alpha: f64,
    pub slack_beta: f64,
}

/// Search bounds for the solver.
#[derive(Debug, Clone, Copy)]
pub struct SearchBounds {
    pub n_max: u32,
    /// Upper bound for both thresholds; defaults to `5 * theta_a`.
    pub t_max: Option<f64>,
    /// Fixed failure count used inside the delta-method moments; defaults
    /// to the candidate `gamma`.
    pub d_convention: Option<u32>,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds {
            n_max: 150,
            t_max: None,
            d_convention: None,
        }
    }
}

const DELTA_MIN_FACTOR: f64 = 1e-6;
const DE_POPULATION: usize = 40;
const DE_GENERATIONS: usize = 300;
const DE_RESTARTS: u64 = 4;
const DE_WEIGHT: f64 = 0.7;
const DE_CROSSOVER: f64 = 0.9;
const PROBE_GRID: usize = 512;

/// Expected testing cost of the given thresholds at the acceptable quality
/// level: `C * E(estimate at theta_A) / (1 - p_c at theta_A)`.
pub fn expected_testing_cost(
    spec: &PlanSpec,
    scheme: &CensoringScheme,
    t1: f64,
    t2: f64,
    d_convention: u32,
) -> Result<f64> {
    if scheme.time_limit() != spec.time_limit {
        return Err(Error::Invalid(format!(
            "scheme duration {} disagrees with the plan duration {}",
            scheme.time_limit(),
            spec.time_limit
        )));
    }
    let mle = mle_moments(scheme, spec.theta_a)?;
    let m = estimator_moments_from_mle(&mle, &spec.prior, &spec.loss, d_convention)?;
    let probs = plan_probabilities(t1, t2, &m)?;
    let decision = p_decision(&probs);
    Ok(spec.unit_cost * m.mean / decision)
}

#[inline]
fn p_decision(p: &PlanProbabilities) -> f64 {
    p.p_accept + p.p_reject
}

/// Re-evaluate a full design point from scratch: fresh moments, fresh
/// probabilities, no solver state involved.
pub fn evaluate_plan(
    spec: &PlanSpec,
    gamma: u32,
    n: u32,
    t1: f64,
    t2: f64,
    d_convention: Option<u32>,
) -> Result<PlanSolution> {
    let scheme = CensoringScheme::new(n, gamma, spec.time_limit)?;
    let d = d_convention.unwrap_or(gamma);
    let mle_a = mle_moments(&scheme, spec.theta_a)?;
    let mle_u = mle_moments(&scheme, spec.theta_u)?;
    let m_a = estimator_moments_from_mle(&mle_a, &spec.prior, &spec.loss, d)?;
    let m_u = estimator_moments_from_mle(&mle_u, &spec.prior, &spec.loss, d)?;
    let eval = evaluate_point(spec, &m_a, &m_u, t1, t2)
        .ok_or_else(|| Error::DegeneratePlan("thresholds leave no decision mass".into()))?;
    Ok(PlanSolution {
        gamma,
        n,
        t1,
        t2,
        etc: eval.etc,
        feasible: eval.is_feasible(),
        slack_alpha: eval.slack_alpha,
        slack_beta: eval.slack_beta,
    })
}

#[derive(Debug, Clone, Copy)]
struct PointEval {
    etc: f64,
    slack_alpha: f64,
    slack_beta: f64,
}

impl PointEval {
    fn is_feasible(&self) -> bool {
        self.slack_alpha >= 0.0 && self.slack_beta >= 0.0
    }

    fn violation(&self) -> f64 {
        (-self.slack_alpha).max(0.0) + (-self.slack_beta).max(0.0)
    }
}

fn evaluate_point(
    spec: &PlanSpec,
    m_a: &EstimatorMoments,
    m_u: &EstimatorMoments,
    t1: f64,
    t2: f64,
) -> Option<PointEval> {
    let at_a = plan_probabilities(t1, t2, m_a).ok()?;
    let at_u = plan_probabilities(t1, t2, m_u).ok()?;
    let etc = spec.unit_cost * m_a.mean / p_decision(&at_a);
    Some(PointEval {
        etc,
        slack_alpha: spec.alpha - at_a.reject_long_run,
        slack_beta: spec.beta - at_u.accept_long_run,
    })
}

/// Moment cache keyed by `(gamma, n, theta bits)`; the threshold search
/// re-reads the same moments tens of thousands of times.
struct MomentTable<'a> {
    spec: &'a PlanSpec,
    d_override: Option<u32>,
    cache: HashMap<(u32, u32, u64), (f64, f64)>,
}

impl<'a> MomentTable<'a> {
    fn new(spec: &'a PlanSpec, d_override: Option<u32>) -> Self {
        MomentTable {
            spec,
            d_override,
            cache: HashMap::new(),
        }
    }

    /// Estimator moments, or `None` when the estimator is undefined at
    /// this design point (log-domain or posterior-mean failures count as
    /// infeasible, not fatal).
    fn get(&mut self, gamma: u32, n: u32, theta: f64) -> Result<Option<EstimatorMoments>> {
        let key = (gamma, n, theta.to_bits());
        let (mean, variance) = match self.cache.get(&key) {
            Some(&v) => v,
            None => {
                let scheme = CensoringScheme::new(n, gamma, self.spec.time_limit)?;
                let m = mle_moments(&scheme, theta)?;
                self.cache.insert(key, (m.mean, m.variance));
                (m.mean, m.variance)
            }
        };
        let mle = crate::mle_dist::MleMoments {
            mean,
            second_moment: variance + mean * mean,
            variance,
        };
        let d = self.d_override.unwrap_or(gamma);
        match estimator_moments_from_mle(&mle, &self.spec.prior, &self.spec.loss, d) {
            Ok(m) if m.variance > 0.0 => Ok(Some(m)),
            Ok(_) => Ok(None),
            Err(Error::LinexLogDomain(_)) | Err(Error::UndefinedPosteriorMean(_)) => Ok(None),
            Err(e) => Err(e),
        }
    }
}

/// Deterministic feasibility probe for one `(gamma, n)`.
///
/// Both long-run constraints reduce to bounds on the odds-like ratios
/// `R(t1, t2) = Phi(t1) / (1 - Phi(t2))` at the two quality levels, and
/// both ratios increase in each threshold. Any feasible pair can therefore
/// be pushed onto the frontier where the producer constraint binds, so
/// scanning that one-dimensional frontier for the consumer constraint
/// decides feasibility up to grid resolution.
fn frontier_probe(
    spec: &PlanSpec,
    m_a: &EstimatorMoments,
    m_u: &EstimatorMoments,
    t_max: f64,
    delta_min: f64,
) -> (Option<(f64, f64)>, Option<(f64, f64, PointEval)>) {
    let r_a = spec.alpha / (1.0 - spec.alpha);
    let r_u = (1.0 - spec.beta) / spec.beta;
    let s_a = m_a.variance.sqrt();
    let s_u = m_u.variance.sqrt();

    let frontier_t2 = |t1: f64| -> Option<f64> {
        let phi_a = normal_cdf((t1 - m_a.mean) / s_a);
        let q = 1.0 - phi_a / r_a;
        if !(q > 0.0 && q < 1.0) {
            return None;
        }
        let t2 = m_a.mean + s_a * normal_quantile(q);
        if t2 < t1 + delta_min {
            return None;
        }
        Some(t2.min(t_max))
    };
    let consumer_ratio = |t1: f64, t2: f64| -> f64 {
        let den = normal_sf((t2 - m_u.mean) / s_u);
        if den <= 0.0 {
            f64::NEG_INFINITY
        } else {
            normal_cdf((t1 - m_u.mean) / s_u) / den
        }
    };

    let mut best_ratio = f64::NEG_INFINITY;
    let mut best_point: Option<(f64, f64)> = None;
    let mut verified: Option<(f64, f64)> = None;
    for i in 1..=PROBE_GRID {
        let t1 = t_max * i as f64 / (PROBE_GRID + 2) as f64;
        let Some(t2) = frontier_t2(t1) else { continue };
        let ratio = consumer_ratio(t1, t2);
        if ratio > best_ratio {
            best_ratio = ratio;
            best_point = Some((t1, t2));
        }
        if ratio >= r_u && verified.is_none() {
            if verify_point(spec, m_a, m_u, (t1, t2)).is_some() {
                verified = Some((t1, t2));
                break;
            }
        }
    }
    // also try the degenerate band around the two one-sided quantiles
    if verified.is_none() {
        let hi = m_a.mean + s_a * normal_quantile(spec.alpha);
        let lo = m_u.mean + s_u * normal_quantile(1.0 - spec.beta);
        for t in [lo, 0.5 * (lo + hi), hi] {
            if t > 0.0 && t + delta_min <= t_max {
                let pt = (t, t + delta_min);
                if verify_point(spec, m_a, m_u, pt).is_some() {
                    verified = Some(pt);
                    break;
                }
            }
        }
    }
    // refine the consumer ratio around the grid maximum when undecided
    if verified.is_none() {
        if let Some((seed_t1, _)) = best_point {
            let step = t_max / (PROBE_GRID + 2) as f64;
            let mut lo = (seed_t1 - step).max(step * 0.5);
            let mut hi = (seed_t1 + step).min(t_max);
            for _ in 0..48 {
                let m1 = lo + (hi - lo) / 3.0;
                let m2 = hi - (hi - lo) / 3.0;
                let v1 = frontier_t2(m1).map_or(f64::NEG_INFINITY, |t2| consumer_ratio(m1, t2));
                let v2 = frontier_t2(m2).map_or(f64::NEG_INFINITY, |t2| consumer_ratio(m2, t2));
                if v1 < v2 {
                    lo = m1;
                } else {
                    hi = m2;
                }
            }
            let t1 = 0.5 * (lo + hi);
            if let Some(t2) = frontier_t2(t1) {
                let ratio = consumer_ratio(t1, t2);
                if ratio > best_ratio {
                    best_point = Some((t1, t2));
                }
                if ratio >= r_u && verify_point(spec, m_a, m_u, (t1, t2)).is_some() {
                    verified = Some((t1, t2));
                }
            }
        }
    }

    let fallback = best_point
        .and_then(|(t1, t2)| evaluate_point(spec, m_a, m_u, t1, t2).map(|e| (t1, t2, e)));
    (verified, fallback)
}

fn verify_point(
    spec: &PlanSpec,
    m_a: &EstimatorMoments,
    m_u: &EstimatorMoments,
    pt: (f64, f64),
) -> Option<PointEval> {
    evaluate_point(spec, m_a, m_u, pt.0, pt.1).filter(|e| e.is_feasible())
}

/// Deb-style comparison: feasible beats infeasible, feasible points rank
/// by objective, infeasible points rank by total violation.
fn better(a: &(PointEval, f64, f64), b: &(PointEval, f64, f64)) -> bool {
    match (a.0.is_feasible(), b.0.is_feasible()) {
        (true, false) => true,
        (false, true) => false,
        (true, true) => (a.0.etc, a.1) < (b.0.etc, b.1),
        (false, false) => a.0.violation() < b.0.violation(),
    }
}

fn de_search(
    spec: &PlanSpec,
    m_a: &EstimatorMoments,
    m_u: &EstimatorMoments,
    t_max: f64,
    delta_min: f64,
    seed: u64,
    init: &[(f64, f64)],
) -> Option<(PointEval, f64, f64)> {
    let lo = [delta_min, delta_min];
    let hi = [t_max - delta_min, t_max];
    let decode = |g: &[f64; 2]| -> (f64, f64) {
        let t1 = g[0];
        let t2 = (t1 + g[1]).min(t_max).max(t1 + delta_min);
        (t1, t2)
    };
    let fitness = |g: &[f64; 2]| -> (PointEval, f64, f64) {
        let (t1, t2) = decode(g);
        match evaluate_point(spec, m_a, m_u, t1, t2) {
            Some(e) => (e, t1, t2),
            None => (
                PointEval {
                    etc: f64::INFINITY,
                    slack_alpha: f64::NEG_INFINITY,
                    slack_beta: f64::NEG_INFINITY,
                },
                t1,
                t2,
            ),
        }
    };

    let mut global: Option<(PointEval, f64, f64)> = None;
    for restart in 0..DE_RESTARTS {
        let mut rng = SplitMix64::new(derive_seed(seed, restart));
        let mut pop: Vec<[f64; 2]> = Vec::with_capacity(DE_POPULATION);
        for pt in init.iter().take(DE_POPULATION / 2) {
            let delta = (pt.1 - pt.0).max(delta_min);
            pop.push([pt.0.clamp(lo[0], hi[0]), delta.clamp(lo[1], hi[1])]);
        }
        while pop.len() < DE_POPULATION {
            pop.push([
                lo[0] + (hi[0] - lo[0]) * rng.next_open01(),
                lo[1] + (hi[1] - lo[1]) * rng.next_open01(),
            ]);
        }
        let mut scores: Vec<(PointEval, f64, f64)> = pop.iter().map(&fitness).collect();
        for _ in 0..DE_GENERATIONS {
            for i in 0..DE_POPULATION {
                let mut pick = || loop {
                    let r = (rng.next_u64() % DE_POPULATION as u64) as usize;
                    if r != i {
                        return r;
                    }
                };
                let (r1, r2, r3) = (pick(), pick(), pick());
                let mut trial = pop[i];
                let j_forced = (rng.next_u64() % 2) as usize;
                for j in 0..2 {
                    if j == j_forced || rng.next_open01() < DE_CROSSOVER {
                        let v = pop[r1][j] + DE_WEIGHT * (pop[r2][j] - pop[r3][j]);
                        trial[j] = v.clamp(lo[j], hi[j]);
                    }
                }
                let trial_score = fitness(&trial);
                if better(&trial_score, &scores[i]) {
                    pop[i] = trial;
                    scores[i] = trial_score;
                }
            }
        }
        for s in &scores {
            if global.as_ref().map_or(true, |g| better(s, g)) {
                global = Some(*s);
            }
        }
    }
    global.filter(|g| g.0.is_feasible())
}

/// Two-step design optimizer. Returns the best feasible design found, or
/// an explicitly infeasible solution carrying the least-violating candidate
/// when no `(gamma, n, t1, t2)` within bounds satisfies the risks.
pub fn solve_plan(spec: &PlanSpec, bounds: &SearchBounds, seed: u64) -> Result<PlanSolution> {
    if bounds.n_max < 2 {
        return Err(Error::Invalid("n_max must be at least 2".into()));
    }
    let t_max = match bounds.t_max {
        Some(t) => {
            if !t.is_finite() || t <= 0.0 {
                return Err(Error::Invalid(format!("t_max must be positive, got {t}")));
            }
            t
        }
        None => 5.0 * spec.theta_a,
    };
    if let Some(d) = bounds.d_convention {
        if d == 0 {
            return Err(Error::Invalid("d_convention must be at least 1".into()));
        }
    }
    let delta_min = DELTA_MIN_FACTOR * spec.theta_a;
    let mut table = MomentTable::new(spec, bounds.d_convention);

    // Step 1: least gamma with any feasible design point
    let mut gamma_star: Option<u32> = None;
    let mut least_violation: Option<(PointEval, u32, u32, f64, f64)> = None;
    'gammas: for gamma in 1..bounds.n_max {
        for n in gamma + 1..=bounds.n_max {
            let Some(m_a) = table.get(gamma, n, spec.theta_a)? else {
                continue;
            };
            let Some(m_u) = table.get(gamma, n, spec.theta_u)? else {
                continue;
            };
            let (found, fallback) = frontier_probe(spec, &m_a, &m_u, t_max, delta_min);
            if let Some((t1, t2, eval)) = fallback {
                let replace = least_violation
                    .as_ref()
                    .map_or(true, |(e, ..)| eval.violation() < e.violation());
                if replace {
                    least_violation = Some((eval, gamma, n, t1, t2));
                }
            }
            if found.is_some() {
                gamma_star = Some(gamma);
                break 'gammas;
            }
        }
    }
    let Some(gamma) = gamma_star else {
        let (eval, g, n, t1, t2) = least_violation.ok_or_else(|| {
            Error::DegeneratePlan("no evaluable design point within bounds".into())
        })?;
        return Ok(PlanSolution {
            gamma: g,
            n,
            t1,
            t2,
            etc: eval.etc,
            feasible: false,
            slack_alpha: eval.slack_alpha,
            slack_beta: eval.slack_beta,
        });
    };

    // Step 2: minimize the objective over n and the thresholds at gamma
    let mut best: Option<(PointEval, u32, f64, f64)> = None;
    for n in gamma + 1..=bounds.n_max {
        let Some(m_a) = table.get(gamma, n, spec.theta_a)? else {
            continue;
        };
        let Some(m_u) = table.get(gamma, n, spec.theta_u)? else {
            continue;
        };
        let (found, fallback) = frontier_probe(spec, &m_a, &m_u, t_max, delta_min);
        let Some(probe_pt) = found else {
            continue;
        };
        let mut seeds = vec![probe_pt];
        if let Some((t1, t2, _)) = fallback {
            seeds.push((t1, t2));
        }
        let s_a = m_a.variance.sqrt();
        let s_u = m_u.variance.sqrt();
        let hi_q = m_a.mean + s_a * normal_quantile(spec.alpha);
        let lo_q = m_u.mean + s_u * normal_quantile(1.0 - spec.beta);
        for t in [lo_q, 0.5 * (lo_q + hi_q), hi_q] {
            if t > 0.0 && t + delta_min <= t_max {
                seeds.push((t, t + delta_min));
            }
        }
        let run_seed = derive_seed(seed, (u64::from(gamma) << 32) | u64::from(n));
        if let Some((eval, t1, t2)) =
            de_search(spec, &m_a, &m_u, t_max, delta_min, run_seed, &seeds)
        {
            let replace = match &best {
                None => true,
                Some((b_eval, b_n, b_t1, _)) => {
                    (eval.etc, n, t1) < (b_eval.etc, *b_n, *b_t1)
                }
            };
            if replace {
                best = Some((eval, n, t1, t2));
            }
        }
    }
    let Some((eval, n, t1, t2)) = best else {
        // the probe saw feasibility in step 1 but the search could not
        // verify any point; report the least-violating candidate
        let (eval, g, n, t1, t2) = least_violation.unwrap();
        return Ok(PlanSolution {
            gamma: g,
            n,
            t1,
            t2,
            etc: eval.etc,
            feasible: false,
            slack_alpha: eval.slack_alpha,
            slack_beta: eval.slack_beta,
        });
    };
    Ok(PlanSolution {
        gamma,
        n,
        t1,
        t2,
        etc: eval.etc,
        feasible: true,
        slack_alpha: eval.slack_alpha,
        slack_beta: eval.slack_beta,
    })
}

/// Restrict a solved design's thresholds to integers by local search over
/// the floor/ceil neighborhood, expanding the window until a feasible pair
/// appears or `max_window` is reached.
pub fn refine_integer_thresholds(
    spec: &PlanSpec,
    solution: &PlanSolution,
    d_convention: Option<u32>,
    max_window: i64,
) -> Result<Option<PlanSolution>> {
    let base1 = solution.t1.floor() as i64;
    let base2 = solution.t2.ceil() as i64;
    let mut best: Option<PlanSolution> = None;
    for window in 1..=max_window {
        for u1 in (base1 - window)..=(base1 + window) {
            for u2 in (base2 - window)..=(base2 + window) {
                if u1 < 1 || u2 <= u1 {
                    continue;
                }
                let sol = evaluate_plan(
                    spec,
                    solution.gamma,
                    solution.n,
                    u1 as f64,
                    u2 as f64,
                    d_convention,
                )?;
                if sol.feasible
                    && best
                        .as_ref()
                        .map_or(true, |b| (sol.etc, sol.t1) < (b.etc, b.t1))
                {
                    best = Some(sol);
                }
            }
        }
        if best.is_some() {
            break;
        }
    }
    Ok(best)
}
