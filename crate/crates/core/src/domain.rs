//! The compact set the points live on: an interval, a finite union of
//! disjoint intervals, or a registered parametrized arc or closed curve.
//!
//! Every domain carries two coordinate systems:
//!
//! * the **parameter** `t ∈ [0, 1]` of the continuous parametrization
//!   `z : [0, 1] → ℂ` ([`DomainSpec::map_param`]);
//! * the **natural coordinate** in which the point generators do their
//!   bookkeeping. For real domains this is the real abscissa itself (so gap
//!   midpoints are geometric midpoints, and the gaps between the parts of a
//!   union are simply never split); for curves it is the parameter.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, ParseError, Result};

/// Built-in parametrized curves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Curve {
    /// `z(t) = e^{iπt}`, from 1 to −1 through i.
    UpperSemicircle,
    /// `z(t) = e^{2πit}`, closed.
    UnitCircle,
    /// `z(t) = −1 + 2t`, the segment [−1, 1] traversed as an arc.
    Segment,
}

impl Curve {
    pub const ALL: [Curve; 3] = [Curve::UpperSemicircle, Curve::UnitCircle, Curve::Segment];

    pub fn id(self) -> &'static str {
        match self {
            Curve::UpperSemicircle => "semicircle",
            Curve::UnitCircle => "circle",
            Curve::Segment => "segment",
        }
    }

    pub fn from_id(id: &str) -> Option<Curve> {
        Curve::ALL.into_iter().find(|c| c.id() == id)
    }

    pub fn closed(self) -> bool {
        matches!(self, Curve::UnitCircle)
    }

    /// Evaluates the parametrization. Closed curves take `t` modulo 1.
    pub fn eval(self, t: f64) -> Complex64 {
        match self {
            Curve::UpperSemicircle => Complex64::from_polar(1.0, PI * t),
            Curve::UnitCircle => Complex64::from_polar(1.0, 2.0 * PI * t.rem_euclid(1.0)),
            Curve::Segment => Complex64::new(-1.0 + 2.0 * t, 0.0),
        }
    }
}

/// A closed real interval `[a, b]` with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Part {
    pub a: f64,
    pub b: f64,
}

impl Part {
    pub fn len(&self) -> f64 {
        self.b - self.a
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.a + self.b)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.a <= x && x <= self.b
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DomainSpec {
    Interval { a: f64, b: f64 },
    /// Two or more disjoint parts sorted by left endpoint.
    IntervalUnion { parts: Vec<Part> },
    ParamCurve { curve: Curve },
}

impl DomainSpec {
    pub fn interval(a: f64, b: f64) -> Result<Self> {
        check_part(a, b)?;
        Ok(DomainSpec::Interval { a, b })
    }

    /// Builds a union; a single part collapses to [`DomainSpec::Interval`].
    pub fn union(parts: Vec<(f64, f64)>) -> Result<Self> {
        if parts.is_empty() {
            return Err(ParseError::Malformed(String::new()).into());
        }
        for &(a, b) in &parts {
            check_part(a, b)?;
        }
        for w in parts.windows(2) {
            let ((a0, b0), (a1, b1)) = (w[0], w[1]);
            if b0 >= a1 {
                return Err(ParseError::Overlap(a0, b0, a1, b1).into());
            }
        }
        if parts.len() == 1 {
            return Ok(DomainSpec::Interval { a: parts[0].0, b: parts[0].1 });
        }
        Ok(DomainSpec::IntervalUnion {
            parts: parts.into_iter().map(|(a, b)| Part { a, b }).collect(),
        })
    }

    pub fn curve(curve: Curve) -> Self {
        DomainSpec::ParamCurve { curve }
    }

    pub fn unit_interval() -> Self {
        DomainSpec::Interval { a: 0.0, b: 1.0 }
    }

    /// `true` for closed curves (`z(0) = z(1)`).
    pub fn closed(&self) -> bool {
        matches!(self, DomainSpec::ParamCurve { curve } if curve.closed())
    }

    /// `true` for subsets of the real line.
    pub fn is_real(&self) -> bool {
        !matches!(self, DomainSpec::ParamCurve { .. })
    }

    /// The real parts of the domain; empty for curves.
    pub fn parts(&self) -> Vec<Part> {
        match self {
            DomainSpec::Interval { a, b } => vec![Part { a: *a, b: *b }],
            DomainSpec::IntervalUnion { parts } => parts.clone(),
            DomainSpec::ParamCurve { .. } => Vec::new(),
        }
    }

    /// The point of ℂ at natural coordinate `x`.
    pub fn point(&self, x: f64) -> Complex64 {
        match self {
            DomainSpec::ParamCurve { curve } => curve.eval(x),
            _ => Complex64::new(x, 0.0),
        }
    }

    /// `|point(x) − point(y)|`.
    pub fn distance(&self, x: f64, y: f64) -> f64 {
        match self {
            DomainSpec::ParamCurve { curve } => (curve.eval(x) - curve.eval(y)).norm(),
            _ => (x - y).abs(),
        }
    }

    /// Natural coordinate of parameter `t` (no range check).
    pub fn coord_of_param(&self, t: f64) -> f64 {
        match self {
            DomainSpec::Interval { a, b } => affine(*a, *b, t),
            DomainSpec::IntervalUnion { parts } => {
                let total: f64 = parts.iter().map(Part::len).sum();
                let mut start = 0.0;
                for (i, p) in parts.iter().enumerate() {
                    let share = p.len() / total;
                    let end = start + share;
                    if t <= end || i + 1 == parts.len() {
                        let local = ((t - start) / share).clamp(0.0, 1.0);
                        return affine(p.a, p.b, local);
                    }
                    start = end;
                }
                unreachable!("union has at least one part")
            }
            DomainSpec::ParamCurve { .. } => t,
        }
    }

    /// Parameter of natural coordinate `x`; inverse of [`Self::coord_of_param`]
    /// inside each part.
    pub fn param_of_coord(&self, x: f64) -> f64 {
        match self {
            DomainSpec::Interval { a, b } => (x - a) / (b - a),
            DomainSpec::IntervalUnion { parts } => {
                let total: f64 = parts.iter().map(Part::len).sum();
                let mut start = 0.0;
                for p in parts {
                    if x <= p.b {
                        return start + (x - p.a).max(0.0) / total;
                    }
                    start += p.len() / total;
                }
                1.0
            }
            DomainSpec::ParamCurve { .. } => x,
        }
    }

    /// Evaluates the parametrization `z(t)` for `t ∈ [0, 1]`.
    ///
    /// Unions are traversed part by part with each part receiving a share of
    /// `[0, 1]` proportional to its length; a shared boundary parameter maps
    /// to the right end of the left part.
    pub fn map_param(&self, t: f64) -> Result<Complex64> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::ParamOutOfRange(t));
        }
        Ok(self.point(self.coord_of_param(t)))
    }
}

fn affine(a: f64, b: f64, t: f64) -> f64 {
    if t == 1.0 {
        b
    } else {
        a + (b - a) * t
    }
}

fn check_part(a: f64, b: f64) -> Result<()> {
    if !a.is_finite() || !b.is_finite() {
        return Err(ParseError::Malformed(format!("{a},{b}")).into());
    }
    if a >= b {
        return Err(ParseError::EmptyInterval { a, b }.into());
    }
    Ok(())
}

fn parse_real(s: &str, whole: &str) -> std::result::Result<f64, ParseError> {
    let s = s.trim();
    let ok_chars = !s.is_empty()
        && s
            .chars()
            .all(|c| c.is_ascii_digit() || matches!(c, '.' | '-' | '+' | 'e' | 'E'));
    match s.parse::<f64>() {
        Ok(v) if ok_chars && v.is_finite() => Ok(v),
        _ => Err(ParseError::Malformed(whole.to_string())),
    }
}

/// Reads `a,b`, `a,b;c,d;...` or `curve:<id>`.
pub fn parse_domain(text: &str) -> std::result::Result<DomainSpec, ParseError> {
    let text = text.trim();
    if let Some(id) = text.strip_prefix("curve:") {
        let id = id.trim();
        return Curve::from_id(id)
            .map(DomainSpec::curve)
            .ok_or_else(|| ParseError::UnknownCurve(id.to_string()));
    }
    if text.is_empty() {
        return Err(ParseError::Malformed(text.to_string()));
    }
    let mut parts = Vec::new();
    for piece in text.split(';') {
        let fields: Vec<&str> = piece.split(',').collect();
        if fields.len() != 2 {
            return Err(ParseError::Malformed(text.to_string()));
        }
        let a = parse_real(fields[0], text)?;
        let b = parse_real(fields[1], text)?;
        if a >= b {
            return Err(ParseError::EmptyInterval { a, b });
        }
        parts.push((a, b));
    }
    match DomainSpec::union(parts) {
        Ok(d) => Ok(d),
        Err(Error::Parse(e)) => Err(e),
        Err(other) => Err(ParseError::Malformed(other.to_string())),
    }
}

impl FromStr for DomainSpec {
    type Err = ParseError;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        parse_domain(s)
    }
}

impl fmt::Display for DomainSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DomainSpec::Interval { a, b } => write!(f, "{a},{b}"),
            DomainSpec::IntervalUnion { parts } => {
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(";")?;
                    }
                    write!(f, "{},{}", p.a, p.b)?;
                }
                Ok(())
            }
            DomainSpec::ParamCurve { curve } => write!(f, "curve:{}", curve.id()),
        }
    }
}
