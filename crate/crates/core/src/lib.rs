//! Fast Leja points on real intervals, finite unions of intervals and
//! parametrized arcs or closed curves, together with the diagnostics used to
//! study them as interpolation nodes.
//!
//! * [`domain`]: the compact set and its parametrization.
//! * [`leja`]: the fast Leja state machine and a continuum Leja reference.
//! * [`star`]: midpoint half-gap versus harmonic-distance ratios of sorted
//!   point rows, separation witnesses and empirical-CDF distances.
//! * [`potential`]: Vandermonde growth, transfinite-diameter estimates,
//!   Chebyshev constants and the ratio `‖p_n‖ / |p_n(a_n)|`.
//! * [`interp`]: barycentric Lagrange interpolation and Lebesgue constants.
//! * [`bounds`]: sup-norm estimation and randomized checks of the midpoint
//!   sup-norm inequalities.
//!
//! All products of distances are handled as sums of logarithms.

pub mod bounds;
pub mod domain;
pub mod error;
pub mod interp;
pub mod leja;
pub mod numeric;
pub mod potential;
pub mod report;
pub mod star;

pub use domain::{parse_domain, Curve, DomainSpec, Part};
pub use error::{Error, ParseError, Result};
pub use leja::{generate, init_state, log_abs_poly, true_leja, LejaState, TieBreak, DEFAULT_S1};
pub use star::{sorted_prefix, star_metrics, ArrayRow, StarReport};
pub use potential::{growth_report, GrowthRow};
pub use interp::{build_interpolant, lebesgue_constant, FnId, Interpolant, LebesgueReport, NodeSource};
pub use bounds::{BoundCheck, BoundConfig};
pub use report::{Format, Report};
