//! Small numerical kernels shared by the generators and the diagnostics.

/// Relative tolerance under which two log-magnitudes count as tied.
///
/// Exact ties (mirror-image candidates, symmetric Lebesgue peaks) come out of
/// floating point a few ulps apart; anything within this band is resolved
/// toward the smaller abscissa.
pub const TIE_REL_TOL: f64 = 1e-12;

/// `true` when `a` and `b` agree to [`TIE_REL_TOL`] relative to their size.
pub fn is_tie(a: f64, b: f64) -> bool {
    if a == b {
        return true;
    }
    if !a.is_finite() || !b.is_finite() {
        return false;
    }
    let scale = 1f64.max(a.abs()).max(b.abs());
    (a - b).abs() <= TIE_REL_TOL * scale
}

/// `true` when `candidate` beats `incumbent` strictly, outside the tie band.
pub fn beats(candidate: f64, incumbent: f64) -> bool {
    candidate > incumbent && !is_tie(candidate, incumbent)
}

/// Index of the largest value; within the tie band the first index wins.
///
/// Callers order their inputs by abscissa, so "first" means "smallest".
pub fn argmax_first(values: &[f64]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, &v) in values.iter().enumerate() {
        if v.is_nan() {
            continue;
        }
        match best {
            None => best = Some(i),
            Some(b) if beats(v, values[b]) => best = Some(i),
            _ => {}
        }
    }
    best
}

/// `Σ ln|x − z|`, or `−∞` when `x` hits a zero.
///
/// Factors are multiplied in blocks of eight before taking a logarithm; a
/// block that leaves the normal range is redone term by term.
pub fn log_abs_prod(x: f64, zeros: &[f64]) -> f64 {
    const BLOCK: usize = 8;
    let mut acc = 0.0;
    for chunk in zeros.chunks(BLOCK) {
        let mut prod = 1.0;
        for &z in chunk {
            prod *= (x - z).abs();
        }
        if prod.is_normal() {
            acc += prod.ln();
        } else {
            for &z in chunk {
                let d = (x - z).abs();
                if d == 0.0 {
                    return f64::NEG_INFINITY;
                }
                acc += d.ln();
            }
        }
    }
    acc
}

/// `Σ ln|x − z|` summed term by term in slice order.
pub fn log_abs_sum(x: f64, zeros: &[f64]) -> f64 {
    let mut acc = 0.0;
    for &z in zeros {
        let d = (x - z).abs();
        if d == 0.0 {
            return f64::NEG_INFINITY;
        }
        acc += d.ln();
    }
    acc
}

/// `count` Chebyshev–Lobatto abscissae on `[a, b]`, ascending, endpoints exact.
///
/// Uses the half-angle form `a + (b − a)·sin²(θ/2)` from whichever end is
/// nearer, so the clustering near both endpoints keeps full relative accuracy.
pub fn chebyshev_grid(a: f64, b: f64, count: usize) -> Vec<f64> {
    assert!(count >= 2, "grid needs at least two points");
    let last = (count - 1) as f64;
    let width = b - a;
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let x = if 2 * i <= count - 1 {
            let s = (std::f64::consts::PI * i as f64 / (2.0 * last)).sin();
            a + width * s * s
        } else {
            let s = (std::f64::consts::PI * (count - 1 - i) as f64 / (2.0 * last)).sin();
            b - width * s * s
        };
        out.push(x);
    }
    out[0] = a;
    out[count - 1] = b;
    out
}

/// `count` equispaced abscissae on `[a, b]` with exact endpoints.
pub fn linspace(a: f64, b: f64, count: usize) -> Vec<f64> {
    assert!(count >= 2, "grid needs at least two points");
    let last = (count - 1) as f64;
    let mut out: Vec<f64> = (0..count)
        .map(|i| a + (b - a) * (i as f64 / last))
        .collect();
    out[count - 1] = b;
    out
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a maximum of a unimodal `f` on `[lo, hi]`.
///
/// Stops once the bracket is narrower than `tol`; returns the best abscissa
/// evaluated together with its value. Among equal values the smaller abscissa
/// is kept.
pub fn golden_max<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut best = if f2 > f1 { (x2, f2) } else { (x1, f1) };
    let mut iters = 0;
    while hi - lo > tol && iters < 200 {
        iters += 1;
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
            if f1 > best.1 || (f1 == best.1 && x1 < best.0) {
                best = (x1, f1);
            }
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
            if f2 > best.1 || (f2 == best.1 && x2 < best.0) {
                best = (x2, f2);
            }
        }
    }
    best
}

/// Ternary search for a maximum of a unimodal `f` on `[lo, hi]` to width `tol`.
pub fn ternary_max<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let mut iters = 0;
    while hi - lo > tol && iters < 300 {
        iters += 1;
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if f(m1) < f(m2) {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    let x = 0.5 * (lo + hi);
    let candidates = [lo, x, hi];
    let mut best = (lo, f(lo));
    for &c in &candidates[1..] {
        let v = f(c);
        if v > best.1 {
            best = (c, v);
        }
    }
    best
}

/// Peak of a function that is concave on `[lo, hi]`, located by bisecting the
/// sign of its derivative `slope` to width `tol`. Returns an endpoint when the
/// derivative does not change sign.
pub fn concave_peak<F: Fn(f64) -> f64>(slope: F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    if slope(lo) <= 0.0 {
        return lo;
    }
    if slope(hi) >= 0.0 {
        return hi;
    }
    let mut iters = 0;
    while hi - lo > tol && iters < 200 {
        iters += 1;
        let mid = 0.5 * (lo + hi);
        let d = slope(mid);
        if d == 0.0 {
            return mid;
        }
        if d > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `Σ 1/(x − z)`, the derivative of `Σ ln|x − z|`.
pub fn log_derivative(x: f64, zeros: &[f64]) -> f64 {
    zeros.iter().map(|&z| 1.0 / (x - z)).sum()
}

/// Least-squares slope of `ys` against `xs`.
pub fn ls_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn chebyshev_grid_endpoints_and_order() {
        let g = chebyshev_grid(-1.0, 2.0, 33);
        assert_eq!(g[0], -1.0);
        assert_eq!(g[32], 2.0);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert_relative_eq!(g[16], 0.5, epsilon = 1e-15);
    }

    #[test]
    fn blocked_product_matches_termwise() {
        let zeros: Vec<f64> = (0..37).map(|i| i as f64 / 36.0).collect();
        for &x in &[0.013, 0.5001, 0.98, 1.7, -3.0] {
            assert_relative_eq!(
                log_abs_prod(x, &zeros),
                log_abs_sum(x, &zeros),
                max_relative = 1e-13
            );
        }
        assert_eq!(log_abs_prod(0.5, &zeros), f64::NEG_INFINITY);
    }

    #[test]
    fn blocked_product_survives_underflow() {
        let zeros = vec![1e-300; 8];
        let v = log_abs_prod(0.0, &zeros);
        assert_relative_eq!(v, 8.0 * 1e-300f64.ln(), max_relative = 1e-14);
    }

    #[test]
    fn golden_finds_parabola_peak() {
        let (x, v) = golden_max(|x| -(x - 0.3) * (x - 0.3), 0.0, 1.0, 1e-10);
        assert!((x - 0.3).abs() < 1e-8);
        assert!(v <= 0.0 && v > -1e-16);
    }

    #[test]
    fn ties_resolve_to_first() {
        assert_eq!(argmax_first(&[1.0, 2.0, 2.0 + 1e-15, 1.5]), Some(1));
        assert_eq!(argmax_first(&[1.0, 2.0, 2.1]), Some(2));
        assert_eq!(argmax_first(&[f64::NEG_INFINITY, -5.0]), Some(1));
        assert_eq!(argmax_first(&[]), None);
    }

    #[test]
    fn slope_of_line() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys = [3.0, 1.0, -1.0, -3.0];
        assert_relative_eq!(ls_slope(&xs, &ys), -2.0);
    }
}
