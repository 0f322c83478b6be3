//! Gap-versus-harmonic-distance diagnostics for rows of sorted points.
//!
//! For a sorted row `ζ_1 < … < ζ_n` and each adjacent gap `j`, let `m_j` be
//! the gap midpoint, `s_j = m_j − ζ_j` the half-gap and
//! `1/H_j = (1/n) Σ_k 1/|m_j − ζ_k|` (all `k`, both neighbours included). The
//! interesting quantity is `max_j s_j / H_j` and whether it tends to zero as
//! the row grows.
//!
//! Also here: separation-exponent witnesses
//! `B₁|(j−k)/n|^α₁ ≤ |b_j − b_k| ≤ B₂|(j−k)/n|^α₂`, and the Kolmogorov–Smirnov
//! distance from a row's empirical CDF to the uniform or arcsine law.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{beats, ls_slope};

/// Strictly increasing points of one stage of a triangular array.
#[derive(Debug, Clone, PartialEq)]
pub struct ArrayRow {
    points: Vec<f64>,
}

impl ArrayRow {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if let Some(w) = points.windows(2).find(|w| !(w[0] < w[1])) {
            return Err(Error::Duplicate(w[1]));
        }
        Ok(ArrayRow { points })
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn scaled(&self, factor: f64) -> ArrayRow {
        ArrayRow { points: self.points.iter().map(|x| x * factor).collect() }
    }
}

/// The first `n` entries of `seq`, sorted.
pub fn sorted_prefix(seq: &[f64], n: usize) -> Result<ArrayRow> {
    if n > seq.len() {
        return Err(Error::StageOutOfRange { stage: n, len: seq.len() });
    }
    let mut pts = seq[..n].to_vec();
    pts.sort_by(f64::total_cmp);
    if let Some(w) = pts.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::Duplicate(w[0]));
    }
    ArrayRow::new(pts)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StarEntry {
    /// 1-based gap index.
    pub j: usize,
    pub midpoint: f64,
    pub s: f64,
    #[serde(rename = "H")]
    pub h: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StarReport {
    pub n: usize,
    pub entries: Vec<StarEntry>,
    pub max_ratio: f64,
    pub argmax_j: usize,
}

/// Half-gaps, harmonic distances and their ratios for every gap of `row`.
pub fn star_metrics(row: &ArrayRow) -> Result<StarReport> {
    let pts = row.points();
    let n = pts.len();
    if n < 2 {
        return Err(Error::TooFewPoints { need: 2, got: n });
    }
    let inv_n = 1.0 / n as f64;
    let entries: Vec<StarEntry> = (0..n - 1)
        .into_par_iter()
        .map(|i| {
            let m = 0.5 * (pts[i] + pts[i + 1]);
            let s = 0.5 * (pts[i + 1] - pts[i]);
            // distances measured from the nearer gap end keep small gaps
            // free of cancellation against the midpoint's rounding
            let mut sum = 0.0;
            for (k, &z) in pts.iter().enumerate() {
                let d = if k <= i { (pts[i] - z) + s } else { (z - pts[i + 1]) + s };
                sum += 1.0 / d;
            }
            let inv_h = inv_n * sum;
            StarEntry { j: i + 1, midpoint: m, s, h: 1.0 / inv_h, ratio: s * inv_h }
        })
        .collect();
    let mut best = 0;
    for (i, e) in entries.iter().enumerate() {
        if beats(e.ratio, entries[best].ratio) {
            best = i;
        }
    }
    Ok(StarReport {
        n,
        max_ratio: entries[best].ratio,
        argmax_j: entries[best].j,
        entries,
    })
}

/// Exact `(s_j, 1/H_j)` for the 1-based gap `j` of a rational row.
pub fn star_terms_exact(points: &[BigRational], j: usize) -> (BigRational, BigRational) {
    assert!(j >= 1 && j < points.len(), "gap index out of range");
    let two = BigRational::from_integer(BigInt::from(2));
    let m = (&points[j - 1] + &points[j]) / &two;
    let s = (&m - &points[j - 1]).abs();
    let mut sum = BigRational::zero();
    for z in points {
        sum += (&m - z).abs().recip();
    }
    let n = BigRational::from_integer(BigInt::from(points.len()));
    (s, sum / n)
}

/// `max_j s_j / H_j` of the sorted first-`n` prefix of `seq`, per stage.
pub fn star_trend(seq: &[f64], stages: &[usize]) -> Result<Vec<(usize, f64)>> {
    check_stages(stages, seq.len())?;
    stages
        .par_iter()
        .map(|&n| {
            let row = sorted_prefix(seq, n)?;
            Ok((n, star_metrics(&row)?.max_ratio))
        })
        .collect()
}

/// Least-squares slope of `ln max_ratio` against `ln n`.
pub fn trend_slope(trend: &[(usize, f64)]) -> f64 {
    let xs: Vec<f64> = trend.iter().map(|(n, _)| (*n as f64).ln()).collect();
    let ys: Vec<f64> = trend.iter().map(|(_, r)| r.ln()).collect();
    ls_slope(&xs, &ys)
}

pub(crate) fn check_stages(stages: &[usize], len: usize) -> Result<()> {
    if !stages.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::StagesNotIncreasing);
    }
    if let Some(&last) = stages.last() {
        if last > len {
            return Err(Error::StageOutOfRange { stage: last, len });
        }
    }
    Ok(())
}

/// `0, 1, 1/2, 1/4, 3/4, 1/8, 3/8, …`: dyadic rationals by denominator, then
/// numerator.
pub fn dyadic_sequence(len: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(len);
    out.extend([0.0, 1.0].into_iter().take(len));
    let mut denom: u64 = 2;
    while out.len() < len {
        let mut num = 1;
        while num < denom && out.len() < len {
            out.push(num as f64 / denom as f64);
            num += 2;
        }
        denom *= 2;
    }
    out
}

/// Slack applied to both separation bounds so that exact equalities survive
/// rounding in `|b_j − b_k|`.
pub const SEPARATION_REL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeparationConstants {
    pub alpha1: f64,
    pub alpha2: f64,
    #[serde(rename = "B1")]
    pub b1: f64,
    #[serde(rename = "B2")]
    pub b2: f64,
}

impl SeparationConstants {
    /// Positive constants with `0 < α₂ ≤ α₁ < 1 + α₂`.
    pub fn validate(&self) -> Result<()> {
        let SeparationConstants { alpha1, alpha2, b1, b2 } = *self;
        if !(alpha1 > 0.0 && alpha2 > 0.0 && b1 > 0.0 && b2 > 0.0) {
            return Err(Error::InvalidConfig("separation constants must be positive".into()));
        }
        if !(alpha2 <= alpha1 && alpha1 < 1.0 + alpha2) {
            return Err(Error::InvalidConfig(format!(
                "need alpha2 <= alpha1 < 1 + alpha2, got alpha1 = {alpha1}, alpha2 = {alpha2}"
            )));
        }
        Ok(())
    }
}

/// A finite union of closed subintervals of `[0, 1]` excused from the bounds.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Exclusion(pub Vec<(f64, f64)>);

impl Exclusion {
    pub fn empty() -> Self {
        Exclusion(Vec::new())
    }

    /// `[0, w/2] ∪ [1 − w/2, 1]`, total length `w`.
    pub fn endpoints(total: f64) -> Self {
        Exclusion(vec![(0.0, 0.5 * total), (1.0 - 0.5 * total, 1.0)])
    }

    pub fn contains(&self, x: f64) -> bool {
        self.0.iter().any(|&(a, b)| a <= x && x <= b)
    }

    pub fn total_length(&self) -> f64 {
        self.0.iter().map(|(a, b)| b - a).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Violation {
    pub n: usize,
    pub j: usize,
    pub k: usize,
    pub lower: f64,
    pub distance: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparationFit {
    pub schema_version: &'static str,
    #[serde(flatten)]
    pub constants: SeparationConstants,
    #[serde(rename = "J")]
    pub exclusion: Exclusion,
    #[serde(rename = "J_length")]
    pub exclusion_length: f64,
    pub n0: usize,
    pub feasible: bool,
    pub first_violation: Option<Violation>,
}

impl SeparationFit {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}

/// Checks both separation bounds for the 1-based index `j` against every `k`.
pub fn separation_check_at(row: &ArrayRow, j: usize, c: &SeparationConstants) -> Option<Violation> {
    let b = row.points();
    let n = b.len();
    let nf = n as f64;
    let bj = b[j - 1];
    for k in 1..=n {
        if k == j {
            continue;
        }
        let x = (j as f64 - k as f64).abs() / nf;
        let d = (bj - b[k - 1]).abs();
        let lower = c.b1 * x.powf(c.alpha1);
        let upper = c.b2 * x.powf(c.alpha2);
        if lower > d * (1.0 + SEPARATION_REL_TOL) || d > upper * (1.0 + SEPARATION_REL_TOL) {
            return Some(Violation { n, j, k, lower, distance: d, upper });
        }
    }
    None
}

/// Verifies the separation bounds on every row with `n ≥ n0`, for every `j`
/// with `j/n ∉ J`. Rows are scanned in the given order.
pub fn separation_check(
    rows: &[ArrayRow],
    constants: SeparationConstants,
    exclusion: Exclusion,
    n0: usize,
) -> Result<SeparationFit> {
    constants.validate()?;
    let mut first_violation = None;
    'rows: for row in rows.iter().filter(|r| r.n() >= n0) {
        let nf = row.n() as f64;
        for j in 1..=row.n() {
            if exclusion.contains(j as f64 / nf) {
                continue;
            }
            if let Some(v) = separation_check_at(row, j, &constants) {
                first_violation = Some(v);
                break 'rows;
            }
        }
    }
    Ok(SeparationFit {
        schema_version: "1",
        constants,
        exclusion_length: exclusion.total_length(),
        exclusion,
        n0,
        feasible: first_violation.is_none(),
        first_violation,
    })
}

/// Heuristic witness constants for the supplied rows.
///
/// With `alphas = None` a common exponent is taken from the log-log
/// regression of `|b_j − b_k|` on `|j − k|/n` over the admissible pairs; the
/// constants are then the extreme observed ratios widened by a factor of two.
/// Only `j` with `j/n ∉ J` are used (any `k`). The result is a candidate to be
/// passed to [`separation_check`], not a proof of anything.
pub fn fit_separation(
    rows: &[ArrayRow],
    exclusion: &Exclusion,
    alphas: Option<(f64, f64)>,
) -> SeparationConstants {
    let mut pairs: Vec<(f64, f64)> = Vec::new();
    for row in rows {
        let b = row.points();
        let n = b.len();
        for j in 1..=n {
            if exclusion.contains(j as f64 / n as f64) {
                continue;
            }
            for k in 1..=n {
                if k != j {
                    let x = (j as f64 - k as f64).abs() / n as f64;
                    pairs.push((x, (b[j - 1] - b[k - 1]).abs()));
                }
            }
        }
    }
    let (alpha1, alpha2) = alphas.unwrap_or_else(|| {
        let xs: Vec<f64> = pairs.iter().map(|p| p.0.ln()).collect();
        let ys: Vec<f64> = pairs.iter().map(|p| p.1.ln()).collect();
        let a = ls_slope(&xs, &ys);
        (a, a)
    });
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    for &(x, d) in &pairs {
        lo = lo.min(d / x.powf(alpha1));
        hi = hi.max(d / x.powf(alpha2));
    }
    SeparationConstants { alpha1, alpha2, b1: 0.5 * lo, b2: 2.0 * hi }
}

/// Reference distribution for [`empirical_cdf_distance`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CdfTarget {
    Uniform { a: f64, b: f64 },
    /// The equilibrium (arcsine) law of `[a, b]`.
    Arcsine { a: f64, b: f64 },
}

impl CdfTarget {
    pub fn from_id(id: &str, a: f64, b: f64) -> Result<Self> {
        match id {
            "uniform" => Ok(CdfTarget::Uniform { a, b }),
            "arcsine" => Ok(CdfTarget::Arcsine { a, b }),
            other => Err(Error::UnknownTarget(other.to_string())),
        }
    }

    pub fn support(&self) -> (f64, f64) {
        match *self {
            CdfTarget::Uniform { a, b } | CdfTarget::Arcsine { a, b } => (a, b),
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        let (a, b) = self.support();
        let u = ((x - a) / (b - a)).clamp(0.0, 1.0);
        match self {
            CdfTarget::Uniform { .. } => u,
            CdfTarget::Arcsine { .. } => std::f64::consts::FRAC_2_PI * u.sqrt().asin(),
        }
    }

    pub fn quantile(&self, p: f64) -> f64 {
        let (a, b) = self.support();
        let u = match self {
            CdfTarget::Uniform { .. } => p,
            CdfTarget::Arcsine { .. } => {
                let s = (std::f64::consts::FRAC_PI_2 * p).sin();
                s * s
            }
        };
        a + (b - a) * u
    }
}

/// `sup_x |F_n(x) − F(x)|`, evaluated on both sides of every jump of `F_n`.
pub fn empirical_cdf_distance(row: &ArrayRow, target: CdfTarget) -> Result<f64> {
    let (a, b) = target.support();
    let pts = row.points();
    if let Some(&x) = pts.iter().find(|&&x| x < a || x > b) {
        return Err(Error::OutsideSupport { x, a, b });
    }
    let n = pts.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in pts.iter().enumerate() {
        let f = target.cdf(x);
        d = d.max((i as f64 + 1.0) / n - f).max(f - i as f64 / n);
    }
    Ok(d)
}
