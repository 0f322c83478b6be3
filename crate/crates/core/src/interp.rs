//! Barycentric Lagrange interpolation on real nodes, Lebesgue constants and
//! sup-error studies.
//!
//! A set of `n` nodes interpolates with a polynomial of degree `n − 1`; stage
//! `n` in every report means `n` nodes.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::domain::{DomainSpec, Part};
use crate::error::{Error, Result};
use crate::leja::{generate, true_leja, DEFAULT_S1};
use crate::numeric::{chebyshev_grid, golden_max, is_tie, linspace};

/// Built-in test functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FnId {
    Exp,
    /// `1 / (1 + 25 (x − ½)²)`
    Runge25,
    /// `1 / (x + 2)`
    Pole2,
    /// `|x − ½|`
    AbsHalf,
    /// `x^k`
    Monomial(u32),
}

impl FnId {
    pub fn eval(self, x: f64) -> f64 {
        match self {
            FnId::Exp => x.exp(),
            FnId::Runge25 => 1.0 / (1.0 + 25.0 * (x - 0.5) * (x - 0.5)),
            FnId::Pole2 => 1.0 / (x + 2.0),
            FnId::AbsHalf => (x - 0.5).abs(),
            FnId::Monomial(k) => x.powi(k as i32),
        }
    }
}

impl fmt::Display for FnId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FnId::Exp => f.write_str("exp"),
            FnId::Runge25 => f.write_str("runge25"),
            FnId::Pole2 => f.write_str("pole2"),
            FnId::AbsHalf => f.write_str("abs-half"),
            FnId::Monomial(k) => write!(f, "x^{k}"),
        }
    }
}

impl FromStr for FnId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exp" => Ok(FnId::Exp),
            "runge25" => Ok(FnId::Runge25),
            "pole2" => Ok(FnId::Pole2),
            "abs-half" => Ok(FnId::AbsHalf),
            _ => s
                .strip_prefix("x^")
                .and_then(|k| k.parse().ok())
                .map(FnId::Monomial)
                .ok_or_else(|| Error::UnknownFunction(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Interpolant {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    values: Vec<f64>,
    #[serde(serialize_with = "ser_display")]
    fn_id: FnId,
}

fn ser_display<S: serde::Serializer>(v: &FnId, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// Barycentric weights `1/∏_{k≠j}(a_j − a_k)` scaled so the largest has
/// magnitude one. Magnitudes are formed as sums of logarithms.
pub fn barycentric_weights(nodes: &[f64]) -> Result<Vec<f64>> {
    let n = nodes.len();
    let mut logs = vec![0.0; n];
    let mut neg = vec![false; n];
    for j in 0..n {
        let mut acc = 0.0;
        let mut flips = false;
        for k in 0..n {
            if k == j {
                continue;
            }
            let d = nodes[j] - nodes[k];
            if d == 0.0 {
                return Err(Error::Duplicate(nodes[j]));
            }
            acc -= d.abs().ln();
            flips ^= d < 0.0;
        }
        logs[j] = acc;
        neg[j] = flips;
    }
    let top = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok(logs
        .iter()
        .zip(&neg)
        .map(|(&l, &s)| {
            let w = (l - top).exp();
            if s {
                -w
            } else {
                w
            }
        })
        .collect())
}

pub fn build_interpolant(nodes: &[f64], fn_id: FnId) -> Result<Interpolant> {
    let weights = barycentric_weights(nodes)?;
    Ok(Interpolant {
        nodes: nodes.to_vec(),
        weights,
        values: nodes.iter().map(|&x| fn_id.eval(x)).collect(),
        fn_id,
    })
}

impl Interpolant {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn fn_id(&self) -> FnId {
        self.fn_id
    }

    /// The same interpolant with every weight multiplied by `factor`.
    pub fn with_scaled_weights(&self, factor: f64) -> Interpolant {
        let mut out = self.clone();
        out.weights.iter_mut().for_each(|w| *w *= factor);
        out
    }

    /// Second barycentric form; a node returns its stored value.
    pub fn eval(&self, x: f64) -> f64 {
        let mut num = 0.0;
        let mut den = 0.0;
        for ((&a, &w), &f) in self.nodes.iter().zip(&self.weights).zip(&self.values) {
            let d = x - a;
            if d == 0.0 {
                return f;
            }
            let t = w / d;
            num += t * f;
            den += t;
        }
        num / den
    }
}

pub fn eval_interpolant(ip: &Interpolant, x: f64) -> f64 {
    ip.eval(x)
}

/// `Σ_j |ℓ_j(x)|` for the given weights.
fn lebesgue_fn(nodes: &[f64], weights: &[f64], x: f64) -> f64 {
    let mut abs = 0.0;
    let mut den = 0.0;
    for (&a, &w) in nodes.iter().zip(weights) {
        let d = x - a;
        if d == 0.0 {
            return 1.0;
        }
        let t = w / d;
        abs += t.abs();
        den += t;
    }
    abs / den.abs()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LebesgueReport {
    pub n: usize,
    pub lambda: f64,
    pub argmax_x: f64,
    pub grid_size: usize,
}

impl LebesgueReport {
    pub fn nth_root(&self) -> f64 {
        self.lambda.powf(1.0 / self.n as f64)
    }
}

fn real_parts(domain: &DomainSpec) -> Result<Vec<Part>> {
    if !domain.is_real() {
        return Err(Error::UnsupportedDomain("a real domain"));
    }
    Ok(domain.parts())
}

/// Maximum of the Lebesgue function over `domain`.
///
/// Each part is sampled on a Chebyshev grid of `grid_multiplier·n²` points;
/// the cell around the best sample, clipped to the adjacent nodes, is then
/// refined by golden-section search to width `1e-10` relative to the part.
pub fn lebesgue_constant(nodes: &[f64], domain: &DomainSpec, grid_multiplier: usize) -> Result<LebesgueReport> {
    if grid_multiplier < 10 {
        return Err(Error::InvalidConfig(format!("grid multiplier {grid_multiplier} < 10")));
    }
    let n = nodes.len();
    if n == 0 {
        return Err(Error::TooFewPoints { need: 1, got: 0 });
    }
    let parts = real_parts(domain)?;
    let weights = barycentric_weights(nodes)?;
    let mut sorted = nodes.to_vec();
    sorted.sort_by(f64::total_cmp);
    let per_part = (grid_multiplier * n * n).max(3);

    let mut best = (f64::NAN, f64::NEG_INFINITY);
    for part in &parts {
        let grid = chebyshev_grid(part.a, part.b, per_part);
        let vals: Vec<f64> = grid.par_iter().map(|&x| lebesgue_fn(nodes, &weights, x)).collect();
        let mut i_best = 0;
        for i in 1..vals.len() {
            if vals[i] > vals[i_best] && !is_tie(vals[i], vals[i_best]) {
                i_best = i;
            }
        }
        let x = grid[i_best];
        let mut lo = grid[i_best.saturating_sub(1)];
        let mut hi = grid[(i_best + 1).min(grid.len() - 1)];
        let k = sorted.partition_point(|&z| z < x);
        if k > 0 && sorted[k - 1] > lo && sorted[k - 1] < x {
            lo = sorted[k - 1];
        }
        let k_hi = sorted.partition_point(|&z| z <= x);
        if k_hi < sorted.len() && sorted[k_hi] < hi {
            hi = sorted[k_hi];
        }
        let (mut bx, mut bv) = (x, vals[i_best]);
        if lo < hi {
            let (gx, gv) = golden_max(|y| lebesgue_fn(nodes, &weights, y), lo, hi, 1e-10 * part.len());
            if gv > bv && !is_tie(gv, bv) {
                bx = gx;
                bv = gv;
            }
        }
        if best.0.is_nan() || (bv > best.1 && !is_tie(bv, best.1)) {
            best = (bx, bv);
        }
    }
    Ok(LebesgueReport {
        n,
        lambda: best.1,
        argmax_x: best.0,
        grid_size: per_part * parts.len(),
    })
}

/// Where interpolation nodes come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeSource {
    FastLeja,
    TrueLeja,
    Chebyshev,
    Equispaced,
}

impl NodeSource {
    pub const ALL: [NodeSource; 4] =
        [NodeSource::FastLeja, NodeSource::TrueLeja, NodeSource::Chebyshev, NodeSource::Equispaced];

    pub fn id(self) -> &'static str {
        match self {
            NodeSource::FastLeja => "fast-leja",
            NodeSource::TrueLeja => "true-leja",
            NodeSource::Chebyshev => "chebyshev",
            NodeSource::Equispaced => "equispaced",
        }
    }

    /// `n` nodes on `domain`. Chebyshev and equispaced sets need a single
    /// interval; Chebyshev nodes are the zeros of `T_n` mapped to it.
    pub fn nodes(self, domain: &DomainSpec, n: usize) -> Result<Vec<f64>> {
        match self {
            NodeSource::FastLeja => generate(domain, n, DEFAULT_S1),
            NodeSource::TrueLeja => true_leja(domain, n, (20 * n).max(2000)),
            NodeSource::Chebyshev | NodeSource::Equispaced => {
                let DomainSpec::Interval { a, b } = *domain else {
                    return Err(Error::UnsupportedDomain("a single interval"));
                };
                if n == 0 {
                    return Err(Error::TooFewPoints { need: 1, got: 0 });
                }
                if self == NodeSource::Equispaced {
                    if n == 1 {
                        return Ok(vec![0.5 * (a + b)]);
                    }
                    return Ok(linspace(a, b, n));
                }
                let h = std::f64::consts::PI / (2 * n) as f64;
                Ok((0..n)
                    .map(|j| {
                        let near = j.min(n - 1 - j);
                        let s = (h * (near as f64 + 0.5)).sin();
                        if near == j {
                            a + (b - a) * s * s
                        } else {
                            b - (b - a) * s * s
                        }
                    })
                    .collect())
            }
        }
    }
}

impl FromStr for NodeSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        NodeSource::ALL
            .into_iter()
            .find(|src| src.id() == s)
            .ok_or_else(|| Error::UnknownNodeSource(s.to_string()))
    }
}

/// Largest `|f − L f|` over a Chebyshev probe grid of `10·n²` points per part.
pub fn sup_error(ip: &Interpolant, domain: &DomainSpec) -> Result<f64> {
    let n = ip.nodes().len();
    let count = (10 * n * n).max(64);
    let f = ip.fn_id();
    let mut worst: f64 = 0.0;
    for part in real_parts(domain)? {
        let grid = chebyshev_grid(part.a, part.b, count);
        let e = grid
            .par_iter()
            .map(|&x| (f.eval(x) - ip.eval(x)).abs())
            .reduce(|| 0.0, f64::max);
        worst = worst.max(e);
    }
    Ok(worst)
}

/// `(n, sup-error)` for each stage.
pub fn error_study(fn_id: FnId, source: NodeSource, stages: &[usize], domain: &DomainSpec) -> Result<Vec<(usize, f64)>> {
    if !stages.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::StagesNotIncreasing);
    }
    real_parts(domain)?;
    let longest = match (source, stages.last()) {
        (NodeSource::FastLeja, Some(&n)) => Some(generate(domain, n, DEFAULT_S1)?),
        _ => None,
    };
    stages
        .iter()
        .map(|&n| {
            let nodes = match &longest {
                Some(seq) => seq[..n].to_vec(),
                None => source.nodes(domain, n)?,
            };
            let ip = build_interpolant(&nodes, fn_id)?;
            Ok((n, sup_error(&ip, domain)?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn unit() -> DomainSpec {
        DomainSpec::unit_interval()
    }

    /// `ℓ_j(x)` as a quotient of Vandermonde determinants.
    fn vdm_quotient(nodes: &[f64], j: usize, x: f64) -> f64 {
        let vdm = |pts: &[f64]| {
            let mut p = 1.0;
            for k in 0..pts.len() {
                for i in 0..k {
                    p *= pts[k] - pts[i];
                }
            }
            p
        };
        let mut moved = nodes.to_vec();
        moved[j] = x;
        vdm(&moved) / vdm(nodes)
    }

    #[test]
    fn weights_small_sets() {
        let ip = build_interpolant(&[0.0, 1.0], FnId::Exp).unwrap();
        assert_eq!(ip.weights(), &[-1.0, 1.0]);
        let ip = build_interpolant(&[0.0, 0.5, 1.0], FnId::Exp).unwrap();
        assert_eq!(ip.weights(), &[0.5, -1.0, 0.5]);
        assert!(matches!(build_interpolant(&[0.0, 0.0, 1.0], FnId::Exp), Err(Error::Duplicate(_))));
    }

    #[test]
    fn evaluation_examples() {
        let ip = build_interpolant(&[0.0, 1.0], FnId::Exp).unwrap();
        assert_eq!(ip.eval(0.0), 1.0);
        assert_relative_eq!(ip.eval(0.5), (1.0 + 1f64.exp()) / 2.0, epsilon = 1e-15);
        let sq = build_interpolant(&[0.0, 0.5, 1.0], FnId::Monomial(2)).unwrap();
        assert!((sq.eval(0.25) - 0.0625).abs() <= 1e-14);
    }

    #[test]
    fn registry_ids_round_trip() {
        for f in [FnId::Exp, FnId::Runge25, FnId::Pole2, FnId::AbsHalf, FnId::Monomial(3)] {
            assert_eq!(f.to_string().parse::<FnId>().unwrap(), f);
        }
        assert!("sin".parse::<FnId>().is_err());
        assert!("x^".parse::<FnId>().is_err());
        for s in NodeSource::ALL {
            assert_eq!(s.id().parse::<NodeSource>().unwrap(), s);
        }
        assert!("gauss".parse::<NodeSource>().is_err());
    }

    #[test]
    fn lebesgue_three_equispaced() {
        let r = lebesgue_constant(&[0.0, 0.5, 1.0], &unit(), 10).unwrap();
        assert_relative_eq!(r.lambda, 1.25, epsilon = 1e-12);
        assert!((r.argmax_x - 0.25).abs() < 1e-5, "{}", r.argmax_x);
        assert_eq!(r.grid_size, 90);
    }

    #[test]
    fn lebesgue_two_nodes() {
        let r = lebesgue_constant(&[0.0, 1.0], &unit(), 10).unwrap();
        assert_relative_eq!(r.lambda, 1.0, epsilon = 1e-14);
        assert!(lebesgue_constant(&[0.0, 1.0], &unit(), 9).is_err());
    }

    #[test]
    fn fundamental_polynomials_match_vdm_quotients() {
        let nodes = generate(&unit(), 12, 0.5).unwrap();
        let w = barycentric_weights(&nodes).unwrap();
        for &x in &[0.013, 0.21, 0.5003, 0.77, 0.999] {
            let den: f64 = nodes.iter().zip(&w).map(|(a, w)| w / (x - a)).sum();
            for j in 0..nodes.len() {
                let l = w[j] / (x - nodes[j]) / den;
                assert_relative_eq!(l, vdm_quotient(&nodes, j, x), max_relative = 1e-10, epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn error_study_examples() {
        let rows = error_study(FnId::Pole2, NodeSource::FastLeja, &[10, 30], &unit()).unwrap();
        assert!(rows[1].1 < 1e-8, "{rows:?}");
        for src in NodeSource::ALL {
            let rows = error_study(FnId::Monomial(3), src, &[4, 6], &unit()).unwrap();
            assert!(rows.iter().all(|r| r.1 <= 1e-12), "{src:?}: {rows:?}");
        }
        let u = DomainSpec::union(vec![(0.0, 0.3), (0.5, 1.0)]).unwrap();
        assert!(error_study(FnId::Exp, NodeSource::Chebyshev, &[5], &u).is_err());
        assert!(error_study(FnId::Exp, NodeSource::FastLeja, &[6, 5], &unit()).is_err());
    }

    #[test]
    fn chebyshev_nodes_are_symmetric() {
        let c = NodeSource::Chebyshev.nodes(&unit(), 7).unwrap();
        assert_relative_eq!(c[3], 0.5, epsilon = 1e-16);
        assert!(c.windows(2).all(|w| w[0] < w[1]));
        for j in 0..7 {
            assert_relative_eq!(c[j] + c[6 - j], 1.0, epsilon = 1e-15);
        }
    }

    fn node_set() -> impl Strategy<Value = Vec<f64>> {
        (2usize..30, any::<u64>()).prop_map(|(n, seed)| {
            let src = NodeSource::ALL[(seed % 3) as usize];
            src.nodes(&DomainSpec::unit_interval(), n).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn reproduces_low_degree_monomials(nodes in node_set(), k_frac in 0.0f64..1.0) {
            let n = nodes.len();
            let k = ((n as f64) * k_frac) as u32 % n as u32;
            let ip = build_interpolant(&nodes, FnId::Monomial(k)).unwrap();
            let dom = DomainSpec::unit_interval();
            for x in chebyshev_grid(0.0, 1.0, 10 * n * n) {
                let exact = x.powi(k as i32);
                prop_assert!((ip.eval(x) - exact).abs() <= 1e-11 * exact.abs().max(1.0));
            }
            prop_assert!(sup_error(&ip, &dom).unwrap() <= 1e-11);
        }

        #[test]
        fn node_hits_are_exact(nodes in node_set()) {
            let ip = build_interpolant(&nodes, FnId::Runge25).unwrap();
            for (&a, &v) in ip.nodes().iter().zip(ip.values()) {
                prop_assert_eq!(ip.eval(a).to_bits(), v.to_bits());
            }
        }

        #[test]
        fn weight_scale_invariance(nodes in node_set(), e in -40i32..40, c in 0.01f64..100.0, x in 0.0f64..1.0) {
            let ip = build_interpolant(&nodes, FnId::Exp).unwrap();
            let v = ip.eval(x);
            prop_assert_eq!(ip.with_scaled_weights(2f64.powi(e)).eval(x), v);
            prop_assert_eq!(ip.with_scaled_weights(-1.0).eval(x), v);
            let w = ip.with_scaled_weights(c).eval(x);
            prop_assert!((w - v).abs() <= 1e-13 * v.abs());
        }

        #[test]
        fn lebesgue_at_least_one(nodes in node_set()) {
            let r = lebesgue_constant(&nodes, &DomainSpec::unit_interval(), 10).unwrap();
            prop_assert!(r.lambda >= 1.0 - 1e-12);
            prop_assert!((0.0..=1.0).contains(&r.argmax_x));
        }
    }
}
