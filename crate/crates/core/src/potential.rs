//! Vandermonde growth, transfinite-diameter estimates and the ratio between
//! `‖p_n‖` and the value `|p_n(a_n)|` at the next point of a sequence.
//!
//! For a sequence `a_0, a_1, …` let `p_n(z) = ∏_{k<n} (z − a_k)` and let
//! `L_n = ∏_{j<k≤n} |a_j − a_k|` be the Vandermonde modulus of the first
//! `n + 1` points, so that `L_n / L_{n−1} = |p_n(a_n)|`. A [`GrowthRow`] at
//! stage `n` therefore looks at `n + 1` points, and its `dn_root` uses the
//! exponent `2/(n(n+1))` on those `n + 1` points. The standalone [`dn_root`]
//! instead applies `2/(n(n+1))` to the `n` points it is given.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::supnorm;
use crate::domain::DomainSpec;
use crate::error::{Error, Result};
use crate::leja::{generate_state, log_abs_poly};
use crate::numeric::{is_tie, linspace, log_abs_prod};

/// Running sum with Neumaier compensation.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LogSum {
    pub hi: f64,
    pub lo: f64,
}

impl LogSum {
    pub fn add(&mut self, x: f64) {
        let t = self.hi + x;
        if self.hi.abs() >= x.abs() {
            self.lo += (self.hi - t) + x;
        } else {
            self.lo += (x - t) + self.hi;
        }
        self.hi = t;
    }

    pub fn value(&self) -> f64 {
        self.hi + self.lo
    }

    /// `self − other` without rounding the two totals first.
    pub fn diff(&self, other: &LogSum) -> f64 {
        (self.hi - other.hi) + (self.lo - other.lo)
    }
}

fn vdm_sum<F: Fn(usize) -> f64>(n: usize, row: F) -> LogSum {
    let mut acc = LogSum::default();
    for k in 1..n {
        let r = row(k);
        if r == f64::NEG_INFINITY {
            return LogSum { hi: r, lo: 0.0 };
        }
        acc.add(r);
    }
    acc
}

/// `Σ_{j<k} ln|a_j − a_k|` over real points, compensated; `−∞` on a repeat.
pub fn log_vdm_sum(points: &[f64]) -> LogSum {
    vdm_sum(points.len(), |k| log_abs_prod(points[k], &points[..k]))
}

/// `ln |VDM|` of real points; `−∞` when two coincide.
pub fn log_vdm(points: &[f64]) -> f64 {
    log_vdm_sum(points).value()
}

/// `ln |VDM|` of points in the plane.
pub fn log_vdm_complex(points: &[Complex64]) -> f64 {
    vdm_sum(points.len(), |k| {
        let mut s = 0.0;
        for z in &points[..k] {
            let d = (points[k] - z).norm();
            if d == 0.0 {
                return f64::NEG_INFINITY;
            }
            s += d.ln();
        }
        s
    })
    .value()
}

/// `|VDM|^{2/(n(n+1))}` for the `n` given points.
pub fn dn_root(points: &[f64]) -> Result<f64> {
    let n = points.len();
    if n < 2 {
        return Err(Error::TooFewPoints { need: 2, got: n });
    }
    let n = n as f64;
    Ok((2.0 * log_vdm(points) / (n * (n + 1.0))).exp())
}

/// `τ_n([a, b]) = (2·((b − a)/4)^n)^{1/n}`, the n-th root of the least
/// sup-norm of a monic degree-`n` polynomial on the interval.
pub fn cheb_constant(domain: &DomainSpec, n: usize) -> Result<f64> {
    let DomainSpec::Interval { a, b } = domain else {
        return Err(Error::UnsupportedDomain("a single interval"));
    };
    if n == 0 {
        return Err(Error::InvalidConfig("degree must be at least 1".into()));
    }
    Ok(2f64.powf(1.0 / n as f64) * (b - a) / 4.0)
}

/// `ln ‖∏(x − z)‖` over the real parts of `domain` with its maximizer.
pub fn log_supnorm(zeros: &[f64], domain: &DomainSpec) -> Result<(f64, f64)> {
    if !domain.is_real() {
        return Err(Error::UnsupportedDomain("a real domain"));
    }
    let mut best = (f64::NAN, f64::NEG_INFINITY);
    for part in domain.parts() {
        let tol = 1e-14 * part.len().max(part.a.abs()).max(part.b.abs());
        let (x, v) = supnorm(zeros, part.a, part.b, tol)?;
        if best.0.is_nan() || (v > best.1 && !is_tie(v, best.1)) {
            best = (x, v);
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthRow {
    pub n: usize,
    /// `ln L_n` over the first `n + 1` points.
    pub log_vdm: f64,
    /// `L_n^{2/(n(n+1))}`.
    pub dn_root: f64,
    /// `ln|p_n(a_n)|`; the value itself underflows once `n` is in the hundreds.
    pub step_ratio: f64,
    /// `|p_n(a_n)| / ‖p_n‖`, real domains only.
    pub tau_ratio: Option<f64>,
    /// `(1/n)·ln(‖p_n‖ / |p_n(a_n)|)`, real domains only.
    pub pseudo_growth: Option<f64>,
}

/// Growth observables of `seq` (natural coordinates of `domain`) at each stage.
///
/// The sup-norm is never taken below the value at `a_n` itself, so
/// `tau_ratio ≤ 1` even when the estimate falls a rounding error short.
pub fn growth_report(seq: &[f64], domain: &DomainSpec, stages: &[usize]) -> Result<Vec<GrowthRow>> {
    crate::star::check_stages(stages, seq.len().saturating_sub(1))?;
    if stages.first() == Some(&0) {
        return Err(Error::InvalidConfig("stage must be at least 1".into()));
    }
    stages
        .par_iter()
        .map(|&n| growth_row(seq, domain, n))
        .collect()
}

fn growth_row(seq: &[f64], domain: &DomainSpec, n: usize) -> Result<GrowthRow> {
    let zeros = &seq[..n];
    let log_l = if domain.is_real() {
        log_vdm(&seq[..=n])
    } else {
        let pts: Vec<Complex64> = seq[..=n].iter().map(|&x| domain.point(x)).collect();
        log_vdm_complex(&pts)
    };
    let nf = n as f64;
    let step = log_abs_poly(zeros, domain, seq[n]);
    let (tau_ratio, pseudo_growth) = if domain.is_real() {
        let (_, sup) = log_supnorm(zeros, domain)?;
        let sup = sup.max(step);
        (Some((step - sup).exp()), Some((sup - step) / nf))
    } else {
        (None, None)
    };
    Ok(GrowthRow {
        n,
        log_vdm: log_l,
        dn_root: (2.0 * log_l / (nf * (nf + 1.0))).exp(),
        step_ratio: step,
        tau_ratio,
        pseudo_growth,
    })
}

/// Graph of `p_13` for the first 13 fast Leja points on `[0, 1]` together with
/// the doubled values at the candidate midpoints.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Fig3Data {
    pub zeros: Vec<f64>,
    pub graph: Vec<(f64, f64)>,
    pub midpoints: Vec<(f64, f64)>,
}

pub const FIG3_N: usize = 13;
pub const FIG3_SAMPLES: usize = 2001;

pub fn fig3_data() -> Fig3Data {
    let domain = DomainSpec::unit_interval();
    let state = generate_state(&domain, FIG3_N, crate::leja::DEFAULT_S1).expect("fixed recipe");
    let zeros = state.insertion_order().to_vec();
    let p = |x: f64| zeros.iter().map(|z| x - z).product::<f64>();
    let graph = linspace(0.0, 1.0, FIG3_SAMPLES).into_iter().map(|x| (x, p(x))).collect();
    let midpoints = state.candidates().iter().map(|&m| (m, 2.0 * p(m))).collect();
    Fig3Data { zeros, graph, midpoints }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::leja::generate;
    use approx::assert_relative_eq;

    #[test]
    fn vdm_small_sets() {
        assert_eq!(log_vdm(&[0.0, 1.0]), 0.0);
        assert_relative_eq!(log_vdm(&[0.0, 0.5, 1.0]), 0.25f64.ln(), epsilon = 1e-15);
        assert_eq!(log_vdm(&[0.0, 1.0, 1.0]), f64::NEG_INFINITY);
        let z = [Complex64::new(0.0, 0.0), Complex64::new(3.0, 4.0), Complex64::new(0.0, 1.0)];
        assert_relative_eq!(log_vdm_complex(&z), (5.0 * 1.0 * 18f64.sqrt()).ln(), epsilon = 1e-14);
    }

    #[test]
    fn dn_root_small_sets() {
        assert_eq!(dn_root(&[0.0, 1.0]).unwrap(), 1.0);
        assert_relative_eq!(dn_root(&[0.0, 0.5, 1.0]).unwrap(), 0.25f64.powf(1.0 / 6.0), epsilon = 1e-15);
        assert_relative_eq!(dn_root(&[0.0, 0.5, 1.0]).unwrap(), 0.793_700_525_984_099_7, epsilon = 1e-15);
        assert!(dn_root(&[0.5]).is_err());
    }

    #[test]
    fn chebyshev_constants() {
        let unit = DomainSpec::unit_interval();
        assert_relative_eq!(cheb_constant(&unit, 1).unwrap(), 0.5, epsilon = 1e-16);
        assert_relative_eq!(cheb_constant(&unit, 50).unwrap(), 0.253_489_870, epsilon = 1e-9);
        let sym = DomainSpec::interval(-1.0, 1.0).unwrap();
        assert_relative_eq!(cheb_constant(&sym, 3).unwrap(), 0.25f64.cbrt(), epsilon = 1e-15);
        assert!(cheb_constant(&DomainSpec::union(vec![(0.0, 1.0), (2.0, 3.0)]).unwrap(), 2).is_err());
        assert!(cheb_constant(&unit, 0).is_err());
    }

    #[test]
    fn early_stages_on_unit_interval() {
        let unit = DomainSpec::unit_interval();
        let seq = generate(&unit, 8, 0.5).unwrap();
        let rows = growth_report(&seq, &unit, &[2, 3]).unwrap();
        assert_eq!(rows[0].tau_ratio, Some(1.0));
        assert_relative_eq!(rows[0].step_ratio, 0.25f64.ln(), epsilon = 1e-15);
        let c = (3.0 - 3f64.sqrt()) / 6.0;
        let sup = c * (1.0 - c) * (0.5 - c);
        assert_relative_eq!(sup, 0.048_112_5, epsilon = 1e-7);
        assert_relative_eq!(rows[1].step_ratio.exp(), 0.046875, epsilon = 1e-16);
        assert_relative_eq!(rows[1].tau_ratio.unwrap(), 0.046875 / sup, epsilon = 1e-12);
        assert_relative_eq!(rows[1].tau_ratio.unwrap(), 0.974_278, epsilon = 1e-6);
    }

    #[test]
    fn telescoping_and_accumulation() {
        let unit = DomainSpec::unit_interval();
        let seq = generate(&unit, 200, 0.5).unwrap();
        let mut prev = log_vdm_sum(&seq[..2]);
        let mut acc = LogSum::default();
        for n in 2..seq.len() {
            let cur = log_vdm_sum(&seq[..=n]);
            let step = log_abs_poly(&seq[..n], &unit, seq[n]);
            assert!((cur.diff(&prev) - step).abs() <= 1e-10 * step.abs(), "n = {n}");
            acc.add(step);
            prev = cur;
        }
        let total = log_vdm(&seq);
        assert_relative_eq!(acc.value(), total, max_relative = 1e-9);
    }

    #[test]
    fn rows_are_bounded_and_ordered() {
        let unit = DomainSpec::unit_interval();
        let seq = generate(&unit, 130, 0.5).unwrap();
        let stages: Vec<usize> = (1..129).collect();
        let rows = growth_report(&seq, &unit, &stages).unwrap();
        for (r, &n) in rows.iter().zip(&stages) {
            assert_eq!(r.n, n);
            let t = r.tau_ratio.unwrap();
            assert!(t > 0.0 && t <= 1.0);
            assert!(r.pseudo_growth.unwrap() >= 0.0);
            assert!(r.dn_root <= 1.0);
        }
    }

    #[test]
    fn union_and_curve_reports() {
        let u = DomainSpec::union(vec![(0.0, 0.3), (0.5, 1.0)]).unwrap();
        let seq = generate(&u, 40, 0.5).unwrap();
        let rows = growth_report(&seq, &u, &[4, 10, 39]).unwrap();
        assert!(rows.iter().all(|r| r.tau_ratio.unwrap() <= 1.0));

        let c = DomainSpec::curve(crate::domain::Curve::UnitCircle);
        let seq = generate(&c, 33, 0.5).unwrap();
        let rows = growth_report(&seq, &c, &[8, 31]).unwrap();
        assert!(rows.iter().all(|r| r.tau_ratio.is_none() && r.pseudo_growth.is_none()));
        // 32 points are the 32nd roots of unity, whose Vandermonde modulus is 32^16
        assert_relative_eq!(rows[1].log_vdm, 16.0 * 32f64.ln(), max_relative = 1e-12);
        assert_relative_eq!(rows[1].dn_root, (32.0 * 32f64.ln() / (31.0 * 32.0)).exp(), max_relative = 1e-12);
    }

    #[test]
    fn stage_errors() {
        let unit = DomainSpec::unit_interval();
        let seq = generate(&unit, 10, 0.5).unwrap();
        assert!(growth_report(&seq, &unit, &[10]).is_err());
        assert!(growth_report(&seq, &unit, &[3, 3]).is_err());
        assert!(growth_report(&seq, &unit, &[0, 3]).is_err());
    }

    #[test]
    fn fig3_layout() {
        let d = fig3_data();
        assert_eq!(d.zeros.len(), 13);
        assert_eq!(d.graph.len(), 2001);
        assert_eq!(d.midpoints.len(), 12);
        assert_eq!(d.graph[0], (0.0, 0.0));
        let peak = d.graph.iter().map(|g| g.1.abs()).fold(0.0, f64::max);
        // doubled candidate values dominate the graph, one of them reaches it
        let doubled = d.midpoints.iter().map(|m| m.1.abs()).fold(0.0, f64::max);
        assert!(doubled >= peak);
    }
}
