//! Fast Leja points and the interlacing candidate set.
//!
//! The state holds the chosen points in insertion order and sorted order, and
//! the sorted candidate set, all in the domain's natural coordinate (see
//! [`crate::domain`]). Each step moves the best candidate into the point set
//! and replaces it by the midpoints of the two gaps it splits.
//!
//! Candidate log-magnitudes are cached and updated with one new term per step,
//! so a step costs O(n). The cache is summed in insertion order, which makes it
//! bitwise equal to a fresh [`log_abs_poly`] over the same points.

use crate::domain::DomainSpec;
use crate::error::{Error, Result};
use crate::numeric::{argmax_first, beats, concave_peak, is_tie, linspace, log_derivative, ternary_max};

pub const DEFAULT_S1: f64 = 0.5;

/// Which end of a tied set of candidates wins.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieBreak {
    #[default]
    Smallest,
    Largest,
}

/// `Σ ln|z(x) − z(t)|` over `points`, or `−∞` when `x` coincides with one.
pub fn log_abs_poly(points: &[f64], domain: &DomainSpec, x: f64) -> f64 {
    let mut acc = 0.0;
    for &t in points {
        let d = domain.distance(x, t);
        if d == 0.0 {
            return f64::NEG_INFINITY;
        }
        acc += d.ln();
    }
    acc
}

#[derive(Debug, Clone)]
pub struct LejaState {
    domain: DomainSpec,
    insertion_order: Vec<f64>,
    sorted_points: Vec<f64>,
    candidates: Vec<f64>,
    candidate_logs: Vec<f64>,
    tie_break: TieBreak,
}

/// Builds the starting configuration.
///
/// Intervals and open arcs start from both endpoints with one candidate at
/// parameter `s1`; unions start from every endpoint with one candidate at the
/// midpoint of each part (`s1` is unused); closed curves start from `z(0)`
/// with the single candidate `s1`.
pub fn init_state(domain: DomainSpec, s1: f64) -> Result<LejaState> {
    if !(s1 > 0.0 && s1 < 1.0) {
        return Err(Error::InitialCandidate(s1));
    }
    let (points, candidates) = match &domain {
        DomainSpec::Interval { .. } => (
            vec![domain.coord_of_param(0.0), domain.coord_of_param(1.0)],
            vec![domain.coord_of_param(s1)],
        ),
        DomainSpec::IntervalUnion { parts } => (
            parts.iter().flat_map(|p| [p.a, p.b]).collect(),
            parts.iter().map(|p| p.midpoint()).collect(),
        ),
        DomainSpec::ParamCurve { curve } if curve.closed() => (vec![0.0], vec![s1]),
        DomainSpec::ParamCurve { .. } => (vec![0.0, 1.0], vec![s1]),
    };
    let mut sorted_points = points.clone();
    sorted_points.sort_by(f64::total_cmp);
    let candidate_logs = candidates
        .iter()
        .map(|&c| log_abs_poly(&points, &domain, c))
        .collect();
    Ok(LejaState {
        domain,
        insertion_order: points,
        sorted_points,
        candidates,
        candidate_logs,
        tie_break: TieBreak::Smallest,
    })
}

impl LejaState {
    pub fn with_tie_break(mut self, tie_break: TieBreak) -> Self {
        self.tie_break = tie_break;
        self
    }

    pub fn domain(&self) -> &DomainSpec {
        &self.domain
    }

    pub fn insertion_order(&self) -> &[f64] {
        &self.insertion_order
    }

    pub fn sorted_points(&self) -> &[f64] {
        &self.sorted_points
    }

    pub fn candidates(&self) -> &[f64] {
        &self.candidates
    }

    /// Cached `log_abs_poly` of each candidate against the current points.
    pub fn candidate_logs(&self) -> &[f64] {
        &self.candidate_logs
    }

    pub fn len(&self) -> usize {
        self.insertion_order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.insertion_order.is_empty()
    }

    fn pick(&self) -> Option<usize> {
        match self.tie_break {
            TieBreak::Smallest => argmax_first(&self.candidate_logs),
            TieBreak::Largest => {
                let mut best: Option<usize> = None;
                for (i, &v) in self.candidate_logs.iter().enumerate().rev() {
                    match best {
                        None => best = Some(i),
                        Some(b) if beats(v, self.candidate_logs[b]) => best = Some(i),
                        _ => {}
                    }
                }
                best
            }
        }
    }

    /// Adds the best candidate to the point set and returns it.
    pub fn step(&mut self) -> Result<f64> {
        let k = self.pick().ok_or(Error::NoCandidates)?;
        let chosen = self.candidates[k];
        let closed = self.domain.closed();

        let pos = self.sorted_points.partition_point(|&p| p < chosen);
        let n = self.sorted_points.len();
        let (left, right) = if closed {
            let left = if pos > 0 { self.sorted_points[pos - 1] } else { self.sorted_points[n - 1] - 1.0 };
            let right = if pos < n { self.sorted_points[pos] } else { self.sorted_points[0] + 1.0 };
            (left, right)
        } else {
            if pos == 0 || pos == n {
                return Err(Error::DegenerateGap(chosen));
            }
            (self.sorted_points[pos - 1], self.sorted_points[pos])
        };
        let mut lo_mid = 0.5 * (left + chosen);
        let mut hi_mid = 0.5 * (chosen + right);
        if !(left < lo_mid && lo_mid < chosen && chosen < hi_mid && hi_mid < right) {
            return Err(Error::DegenerateGap(chosen));
        }
        if closed {
            lo_mid = lo_mid.rem_euclid(1.0);
            hi_mid = hi_mid.rem_euclid(1.0);
        }

        self.candidates.remove(k);
        self.candidate_logs.remove(k);
        for (c, v) in self.candidates.iter().zip(self.candidate_logs.iter_mut()) {
            *v += self.domain.distance(*c, chosen).ln();
        }
        self.sorted_points.insert(pos, chosen);
        self.insertion_order.push(chosen);

        for m in [lo_mid, hi_mid] {
            let v = log_abs_poly(&self.insertion_order, &self.domain, m);
            let at = self.candidates.partition_point(|&c| c < m);
            self.candidates.insert(at, m);
            self.candidate_logs.insert(at, v);
        }
        Ok(chosen)
    }

    /// Checks every structural invariant of the state.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        let pts = &self.sorted_points;
        let cands = &self.candidates;
        if !pts.windows(2).all(|w| w[0] < w[1]) {
            return Err("points not strictly increasing".into());
        }
        if !cands.windows(2).all(|w| w[0] < w[1]) {
            return Err("candidates not strictly increasing".into());
        }
        let mut ins = self.insertion_order.clone();
        ins.sort_by(f64::total_cmp);
        if &ins != pts {
            return Err("insertion order and sorted points differ".into());
        }
        if cands.iter().any(|c| pts.binary_search_by(|p| p.total_cmp(c)).is_ok()) {
            return Err("a candidate coincides with a point".into());
        }
        if self.candidate_logs.len() != cands.len() {
            return Err("candidate cache length mismatch".into());
        }

        // Gaps that must hold exactly one candidate.
        let mut gaps: Vec<(f64, f64)> = Vec::new();
        match &self.domain {
            DomainSpec::IntervalUnion { parts } => {
                for w in pts.windows(2) {
                    let inside = parts.iter().any(|p| p.contains(w[0]) && p.contains(w[1]));
                    if inside {
                        gaps.push((w[0], w[1]));
                    }
                }
                if cands.iter().any(|&c| !parts.iter().any(|p| p.contains(c))) {
                    return Err("candidate outside the union".into());
                }
            }
            d if d.closed() => {
                for w in pts.windows(2) {
                    gaps.push((w[0], w[1]));
                }
                gaps.push((pts[pts.len() - 1], pts[0] + 1.0));
                if cands.iter().any(|&c| !(0.0..1.0).contains(&c)) {
                    return Err("candidate parameter outside [0, 1)".into());
                }
            }
            _ => {
                for w in pts.windows(2) {
                    gaps.push((w[0], w[1]));
                }
            }
        }
        let inside = |lo: f64, hi: f64| {
            cands.partition_point(|&c| c < hi) - cands.partition_point(|&c| c <= lo)
        };
        let mut covered = 0;
        for &(lo, hi) in &gaps {
            let count = if hi > 1.0 && self.domain.closed() {
                inside(lo, 1.0) + inside(-1.0, hi - 1.0)
            } else {
                inside(lo, hi)
            };
            if count != 1 {
                return Err(format!("gap ({lo}, {hi}) holds {count} candidates"));
            }
            covered += count;
        }
        if covered != cands.len() {
            return Err("candidate outside every admissible gap".into());
        }
        let parts = match &self.domain {
            DomainSpec::IntervalUnion { parts } => parts.len(),
            d if d.closed() => 0,
            _ => 1,
        };
        if cands.len() + parts != pts.len() {
            return Err(format!("{} candidates for {} points", cands.len(), pts.len()));
        }
        Ok(())
    }
}

/// Runs the state machine until it holds `n` points.
pub fn generate_state(domain: &DomainSpec, n: usize, s1: f64) -> Result<LejaState> {
    generate_state_with(domain, n, s1, TieBreak::Smallest)
}

pub fn generate_state_with(
    domain: &DomainSpec,
    n: usize,
    s1: f64,
    tie_break: TieBreak,
) -> Result<LejaState> {
    let need = if domain.closed() { 1 } else { 2 };
    if n < need {
        return Err(Error::TooFewPoints { need, got: n });
    }
    let mut state = init_state(domain.clone(), s1)?.with_tie_break(tie_break);
    while state.len() < n {
        state.step()?;
    }
    Ok(state)
}

/// The first `n` fast Leja points in insertion order.
pub fn generate(domain: &DomainSpec, n: usize, s1: f64) -> Result<Vec<f64>> {
    let state = generate_state(domain, n, s1)?;
    let mut pts = state.insertion_order;
    pts.truncate(n);
    Ok(pts)
}

/// Greedy continuum Leja points: maximizes `log_abs_poly` over an equispaced
/// parameter grid and polishes every grid-local maximum.
///
/// On curves the polish is a ternary search on the values. On real domains
/// `ln|p|` is concave between consecutive zeros, so the peak is located by
/// bisecting the sign of its derivative instead; a value comparison cannot
/// resolve a smooth peak much below `sqrt(eps)`, which would break mirror
/// ties.
pub fn true_leja(domain: &DomainSpec, n: usize, grid: usize) -> Result<Vec<f64>> {
    if grid < 10 * n || grid < 3 {
        return Err(Error::InvalidConfig(format!("grid {grid} < 10·n for n = {n}")));
    }
    const TOL: f64 = 1e-12;
    let params = linspace(0.0, 1.0, grid);
    let coords: Vec<f64> = params.iter().map(|&t| domain.coord_of_param(t)).collect();
    let value = |pts: &[f64], t: f64| log_abs_poly(pts, domain, domain.coord_of_param(t));

    let mut chosen = vec![domain.coord_of_param(0.0)];
    while chosen.len() < n {
        let vals: Vec<f64> = coords.iter().map(|&x| log_abs_poly(&chosen, domain, x)).collect();
        let mut best: Option<(f64, f64)> = None;
        for i in 0..grid {
            let v = vals[i];
            if !v.is_finite() {
                continue;
            }
            let left = if i > 0 { vals[i - 1] } else { f64::NEG_INFINITY };
            let right = if i + 1 < grid { vals[i + 1] } else { f64::NEG_INFINITY };
            if v < left || v < right {
                continue;
            }
            let lo = params[i.saturating_sub(1)];
            let hi = params[(i + 1).min(grid - 1)];
            let (t, fv) = if domain.is_real() {
                let (mut xl, mut xh) = (domain.coord_of_param(lo), domain.coord_of_param(hi));
                if let Some(p) = domain.parts().into_iter().find(|p| p.contains(coords[i])) {
                    xl = xl.max(p.a);
                    xh = xh.min(p.b);
                }
                if xl < xh {
                    let x = concave_peak(|x| log_derivative(x, &chosen), xl, xh, TOL * (xh - xl).max(1.0));
                    let t = domain.param_of_coord(x);
                    (t, log_abs_poly(&chosen, domain, x))
                } else {
                    (params[i], v)
                }
            } else {
                ternary_max(|t| value(&chosen, t), lo, hi, TOL)
            };
            let (t, fv) = if v > fv { (params[i], v) } else { (t, fv) };
            best = match best {
                None => Some((t, fv)),
                Some((bt, bv)) => {
                    if beats(fv, bv) || (is_tie(fv, bv) && t < bt) {
                        Some((t, fv))
                    } else {
                        Some((bt, bv))
                    }
                }
            };
        }
        let (t, _) = best.ok_or(Error::NoCandidates)?;
        chosen.push(domain.coord_of_param(t));
    }
    Ok(chosen)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{parse_domain, Curve};
    use approx::assert_relative_eq;

    fn unit() -> DomainSpec {
        DomainSpec::unit_interval()
    }

    #[test]
    fn init_on_unit_interval() {
        let s = init_state(unit(), 0.5).unwrap();
        assert_eq!(s.sorted_points(), &[0.0, 1.0]);
        assert_eq!(s.candidates(), &[0.5]);
        assert_eq!(s.insertion_order(), &[0.0, 1.0]);
        s.check_invariants().unwrap();
    }

    #[test]
    fn init_on_union() {
        let s = init_state(parse_domain("0,0.3;0.5,1").unwrap(), DEFAULT_S1).unwrap();
        assert_eq!(s.sorted_points(), &[0.0, 0.3, 0.5, 1.0]);
        assert_eq!(s.candidates(), &[0.15, 0.75]);
        s.check_invariants().unwrap();
    }

    #[test]
    fn init_rejects_bad_s1() {
        for s1 in [1.5, 0.0, 1.0, -0.2, f64::NAN] {
            assert!(matches!(init_state(unit(), s1), Err(Error::InitialCandidate(_))));
        }
    }

    #[test]
    fn log_abs_poly_examples() {
        let d = unit();
        assert_relative_eq!(log_abs_poly(&[0.0, 1.0], &d, 0.5), 2.0 * 0.5f64.ln());
        assert_eq!(log_abs_poly(&[0.0, 1.0], &d, 0.0), f64::NEG_INFINITY);
        let v = log_abs_poly(&[0.0, 0.5, 1.0], &d, 0.25);
        let naive = (0.25f64 * 0.25 * 0.75).ln();
        assert_relative_eq!(v, naive, max_relative = 1e-15);
        assert_relative_eq!(v, -3.060270794, epsilon = 1e-9);
    }

    #[test]
    fn first_steps_on_unit_interval() {
        let mut s = init_state(unit(), 0.5).unwrap();
        assert_eq!(s.step().unwrap(), 0.5);
        assert_eq!(s.candidates(), &[0.25, 0.75]);

        // |p_3(0.25)| = |p_3(0.75)| = 3/64 exactly; the tie goes left.
        assert_eq!(s.candidate_logs()[0], s.candidate_logs()[1]);
        assert_relative_eq!(s.candidate_logs()[0].exp(), 0.046875, max_relative = 1e-14);
        assert_eq!(s.step().unwrap(), 0.25);
        assert_eq!(s.candidates(), &[0.125, 0.375, 0.75]);

        // p_4 = x(x-1)(x-1/2)(x-1/4): 3/128 at 3/4, 21/4096 at 1/8, 15/4096 at 3/8
        let vals: Vec<f64> = s.candidate_logs().iter().map(|v| v.exp()).collect();
        assert_relative_eq!(vals[0], 21.0 / 4096.0, max_relative = 1e-14);
        assert_relative_eq!(vals[1], 15.0 / 4096.0, max_relative = 1e-14);
        assert_relative_eq!(vals[2], 3.0 / 128.0, max_relative = 1e-14);
        assert_eq!(s.step().unwrap(), 0.75);
        s.check_invariants().unwrap();
    }

    #[test]
    fn generate_examples() {
        assert_eq!(generate(&unit(), 5, 0.5).unwrap(), vec![0.0, 1.0, 0.5, 0.25, 0.75]);
        assert_eq!(generate(&unit(), 2, 0.5).unwrap(), vec![0.0, 1.0]);
        let d = DomainSpec::interval(2.0, 4.0).unwrap();
        assert_eq!(generate(&d, 3, 0.5).unwrap(), vec![2.0, 4.0, 3.0]);
        assert!(matches!(generate(&unit(), 1, 0.5), Err(Error::TooFewPoints { .. })));
    }

    #[test]
    fn union_run_keeps_invariants() {
        let d = parse_domain("-1,-0.2;0.1,0.4;0.7,2").unwrap();
        let mut s = init_state(d, DEFAULT_S1).unwrap();
        for _ in 0..300 {
            s.step().unwrap();
            s.check_invariants().unwrap();
        }
        assert_eq!(s.len(), 306);
    }

    #[test]
    fn closed_curve_bookkeeping() {
        let d = DomainSpec::curve(Curve::UnitCircle);
        let mut s = init_state(d, 0.5).unwrap();
        assert_eq!(s.sorted_points(), &[0.0]);
        assert_eq!(s.candidates(), &[0.5]);
        assert_eq!(s.step().unwrap(), 0.5);
        assert_eq!(s.candidates(), &[0.25, 0.75]);
        for _ in 0..200 {
            s.step().unwrap();
            s.check_invariants().unwrap();
            assert_eq!(s.candidates().len(), s.sorted_points().len());
        }
    }

    #[test]
    fn off_center_s1_on_circle_wraps() {
        let d = DomainSpec::curve(Curve::UnitCircle);
        let mut s = init_state(d, 0.8).unwrap();
        s.step().unwrap();
        assert_relative_eq!(s.candidates()[0], 0.4);
        assert_relative_eq!(s.candidates()[1], 0.9);
        s.check_invariants().unwrap();
    }

    #[test]
    fn semicircle_run() {
        let d = DomainSpec::curve(Curve::UpperSemicircle);
        let pts = generate(&d, 40, 0.5).unwrap();
        assert_eq!(&pts[..3], &[0.0, 1.0, 0.5]);
    }

    #[test]
    fn true_leja_examples() {
        let d = unit();
        let two = true_leja(&d, 2, 1000).unwrap();
        assert_eq!(two, vec![0.0, 1.0]);
        let three = true_leja(&d, 3, 1000).unwrap();
        assert!((three[2] - 0.5).abs() < 1e-12);
        let four = true_leja(&d, 4, 1000).unwrap();
        let m = (3.0 - 3f64.sqrt()) / 6.0;
        assert!((four[3] - m).abs() < 1e-12, "{}", four[3]);
        assert!(true_leja(&d, 10, 50).is_err());
    }
}
