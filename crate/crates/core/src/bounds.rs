//! Sup-norm estimation for real-rooted polynomials and randomized checks of
//! the midpoint sup-norm inequalities.
//!
//! A configuration places `n₁` zeros `ζ` left of `−ε`, `n₂` zeros `η` right of
//! `ε`, and two more zeros at `±ε`, so `p(z) = (z² − ε²)·q₁(z)·q₂(z)` with `q₁`
//! collecting the `ζ` and `q₂` the `η`. With `m` the maximizer of `|p|` on
//! `I = [−ε, ε]` the checks are:
//!
//! * for `m > 0`: `|q₂(m)| < exp(ε Σ 1/|η|)·|q₂(0)|` and `|p₁(m)| < ε·|p₁'(ε)|`;
//! * for `m < 0`: `|q₁(m)| < exp(ε Σ 1/|η|)·|q₁(0)|` and `|p₂(m)| < ε·|p₂'(−ε)|`;
//! * always: `‖p‖_I / |p(0)| ≤ 2·exp(ε (Σ 1/|ζ| + Σ 1/|η|))`.
//!
//! where `p₁ = (z² − ε²)q₁` and `p₂ = (z² − ε²)q₂`. Everything is compared in
//! log space.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{chebyshev_grid, concave_peak, is_tie, log_abs_prod, log_derivative};

/// Grid maxima within this many nats of the best are refined.
const REFINE_BAND: f64 = 0.05;

/// `|m|` at or below `VACUOUS_REL · ε` counts as `m = 0`.
pub const VACUOUS_REL: f64 = 1e-7;

/// Maximizer and maximum of `Σ ln|x − z|` over `[a, b]`.
///
/// Samples a Chebyshev grid of `max(64, 8·#zeros)` points, then refines every
/// grid-local maximum that comes within [`REFINE_BAND`] of the best sample.
/// Between consecutive real zeros `ln|p|` is concave, so each refinement
/// bisects the sign of the derivative inside the bracket, clipped to the
/// surrounding zeros, down to width `tol`. Ties go to the smaller abscissa.
pub fn supnorm(zeros: &[f64], a: f64, b: f64, tol: f64) -> Result<(f64, f64)> {
    if !(a < b) {
        return Err(Error::InvalidConfig(format!("sup-norm interval [{a}, {b}] is empty")));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidConfig(format!("sup-norm tolerance {tol} must be positive")));
    }
    let mut sorted = zeros.to_vec();
    sorted.sort_by(f64::total_cmp);

    let count = 64.max(8 * zeros.len());
    let grid = chebyshev_grid(a, b, count);
    let vals: Vec<f64> = grid.iter().map(|&x| log_abs_prod(x, zeros)).collect();
    let top = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if top == f64::NEG_INFINITY {
        return Ok((a, top));
    }

    let mut best = (a, f64::NEG_INFINITY);
    let offer = |x: f64, v: f64, best: &mut (f64, f64)| {
        let better = if is_tie(v, best.1) { x < best.0 } else { v > best.1 };
        if better {
            *best = (x, v);
        }
    };
    for i in 0..count {
        let v = vals[i];
        if v < top - REFINE_BAND || !v.is_finite() {
            continue;
        }
        let left = if i > 0 { vals[i - 1] } else { f64::NEG_INFINITY };
        let right = if i + 1 < count { vals[i + 1] } else { f64::NEG_INFINITY };
        if v < left || v < right {
            continue;
        }
        let x = grid[i];
        let mut lo = if i > 0 { grid[i - 1] } else { a };
        let mut hi = if i + 1 < count { grid[i + 1] } else { b };
        let k = sorted.partition_point(|&z| z < x);
        if k > 0 {
            lo = lo.max(sorted[k - 1]);
        }
        if k < sorted.len() {
            hi = hi.min(sorted[k]);
        }
        let peak = concave_peak(|y| log_derivative(y, &sorted), lo, hi, tol);
        let pv = log_abs_prod(peak, zeros);
        if pv >= v {
            offer(peak, pv, &mut best);
        } else {
            offer(x, v, &mut best);
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundConfig {
    pub epsilon: f64,
    pub zetas: Vec<f64>,
    pub etas: Vec<f64>,
}

impl BoundConfig {
    /// Validates `ζ₁ < … < ζ_{n₁} < −ε < ε < η₁ < … < η_{n₂}` with `n₁, n₂ ≥ 1`.
    pub fn new(epsilon: f64, zetas: Vec<f64>, etas: Vec<f64>) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return bad(format!("epsilon {epsilon} must be positive"));
        }
        if zetas.is_empty() || etas.is_empty() {
            return bad("need at least one zero on each side".into());
        }
        if zetas.iter().chain(&etas).any(|z| !z.is_finite()) {
            return bad("zeros must be finite".into());
        }
        if !zetas.windows(2).all(|w| w[0] < w[1]) || !etas.windows(2).all(|w| w[0] < w[1]) {
            return bad("zeros must be strictly increasing".into());
        }
        if zetas[zetas.len() - 1] >= -epsilon {
            return bad(format!("zeta {} not below -epsilon", zetas[zetas.len() - 1]));
        }
        if etas[0] <= epsilon {
            return bad(format!("eta {} not above epsilon", etas[0]));
        }
        Ok(BoundConfig { epsilon, zetas, etas })
    }

    /// Random configuration with `ε ∈ [0.01, 0.3]`, one to eight zeros per
    /// side, kept at least 0.05 away from `±ε` and within `[−3, 3]`.
    pub fn random<R: Rng>(rng: &mut R) -> Self {
        const STANDOFF: f64 = 0.05;
        const REACH: f64 = 3.0;
        loop {
            let epsilon = rng.random_range(0.01..=0.3);
            let n1 = rng.random_range(1..=8usize);
            let n2 = rng.random_range(1..=8usize);
            let mut zetas: Vec<f64> = (0..n1)
                .map(|_| rng.random_range(-REACH..=-epsilon - STANDOFF))
                .collect();
            let mut etas: Vec<f64> = (0..n2)
                .map(|_| rng.random_range(epsilon + STANDOFF..=REACH))
                .collect();
            zetas.sort_by(f64::total_cmp);
            etas.sort_by(f64::total_cmp);
            if let Ok(c) = BoundConfig::new(epsilon, zetas, etas) {
                return c;
            }
        }
    }

    /// Every zero of `p`, ascending, including `±ε`.
    pub fn zeros(&self) -> Vec<f64> {
        let mut z = self.zetas.clone();
        z.push(-self.epsilon);
        z.push(self.epsilon);
        z.extend_from_slice(&self.etas);
        z
    }

    /// Every coordinate multiplied by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> BoundConfig {
        BoundConfig {
            epsilon: self.epsilon * factor,
            zetas: self.zetas.iter().map(|z| z * factor).collect(),
            etas: self.etas.iter().map(|z| z * factor).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundCheck {
    pub config: BoundConfig,
    pub m: f64,
    pub lemma2_ok: bool,
    pub prop3_ok: bool,
    /// `ln(rhs) − ln(lhs)` of the sup-norm ratio bound.
    pub prop3_margin: f64,
}

fn argmax_on_i(c: &BoundConfig) -> f64 {
    let eps = c.epsilon;
    supnorm(&c.zeros(), -eps, eps, 1e-15 * eps)
        .expect("validated configuration")
        .0
}

/// `Σ ln|1 − m/z|`, i.e. `ln(|q(m)| / |q(0)|)` for zeros `z` of `q` with `|m| < |z|`.
fn log_ratio(m: f64, zeros: &[f64]) -> f64 {
    zeros.iter().map(|&z| (-m / z).ln_1p()).sum()
}

fn recip_sum(zeros: &[f64]) -> f64 {
    zeros.iter().map(|z| 1.0 / z.abs()).sum()
}

fn lemma2_holds(c: &BoundConfig, m: f64) -> bool {
    let eps = c.epsilon;
    if m.abs() <= VACUOUS_REL * eps {
        return true;
    }
    let growth = eps * recip_sum(&c.etas);
    // |z² − ε²| at m, and ε·|d/dz (z² − ε²)| at the end point
    let log_quad = ((eps - m) * (eps + m)).ln();
    let log_end = (2.0 * eps * eps).ln();
    let (near, far) = if m > 0.0 { (&c.zetas, &c.etas) } else { (&c.etas, &c.zetas) };
    let edge = if m > 0.0 { eps } else { -eps };
    let first = log_ratio(m, far) < growth;
    let lhs = log_quad + near.iter().map(|&z| (m - z).abs().ln()).sum::<f64>();
    let rhs = log_end + near.iter().map(|&z| (edge - z).abs().ln()).sum::<f64>();
    first && lhs < rhs
}

fn prop3_margin(c: &BoundConfig, m: f64) -> f64 {
    let eps = c.epsilon;
    let r = m / eps;
    let lhs = (-r * r).ln_1p() + log_ratio(m, &c.zetas) + log_ratio(m, &c.etas);
    std::f64::consts::LN_2 + eps * (recip_sum(&c.zetas) + recip_sum(&c.etas)) - lhs
}

fn check(config: &BoundConfig) -> BoundCheck {
    let m = argmax_on_i(config);
    let margin = prop3_margin(config, m);
    BoundCheck {
        config: config.clone(),
        m,
        lemma2_ok: lemma2_holds(config, m),
        prop3_ok: margin > 0.0,
        prop3_margin: margin,
    }
}

/// Locates `m` and evaluates the pair of inequalities for its sign; `m = 0`
/// passes vacuously. The returned check also carries the ratio-bound verdict.
pub fn check_lemma2(config: &BoundConfig) -> Result<BoundCheck> {
    BoundConfig::new(config.epsilon, config.zetas.clone(), config.etas.clone())?;
    Ok(check(config))
}

/// Evaluates `‖p‖_I / |p(0)| ≤ 2·exp(ε (Σ 1/|ζ| + Σ 1/|η|))`, including at
/// `m = 0`. The returned check also carries the midpoint-inequality verdict.
pub fn check_prop3(config: &BoundConfig) -> Result<BoundCheck> {
    check_lemma2(config)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRow {
    pub trial: usize,
    pub epsilon: f64,
    pub n1: usize,
    pub n2: usize,
    pub m: f64,
    pub lemma2_ok: bool,
    pub prop3_ok: bool,
    pub prop3_log_margin: f64,
}

/// Configuration of trial `i`, drawn from its own generator seeded `base + i`.
pub fn trial_config(base_seed: u64, i: usize) -> BoundConfig {
    let mut rng = ChaCha8Rng::seed_from_u64(base_seed.wrapping_add(i as u64));
    BoundConfig::random(&mut rng)
}

/// Runs `trials` independent random checks; rows come back in trial order.
pub fn run_trials(base_seed: u64, trials: usize) -> Vec<TrialRow> {
    (0..trials)
        .into_par_iter()
        .map(|i| {
            let c = check(&trial_config(base_seed, i));
            TrialRow {
                trial: i,
                epsilon: c.config.epsilon,
                n1: c.config.zetas.len(),
                n2: c.config.etas.len(),
                m: c.m,
                lemma2_ok: c.lemma2_ok,
                prop3_ok: c.prop3_ok,
                prop3_log_margin: c.prop3_margin,
            }
        })
        .collect()
}
