//! Exact-arithmetic toolkit for minimizing the fraction of monochromatic
//! 3-term arithmetic progressions over two-colorings of `[0,1]` and `[N]`.
//!
//! The crate is organized around a proof pipeline:
//!
//! * [`rational`], [`linear`], [`quadratic`], [`linsolve`] — the exact
//!   numeric substrate (rationals, linear expressions, quadratic forms,
//!   linear-system solving).
//! * [`lp`] — an exact rational simplex for strict-inequality feasibility
//!   and optimization, with no floating-point thresholds.
//! * [`diagram`] — the block-coloring diagram engine: region
//!   classification, exact polygon areas, and the monochromatic fraction
//!   `f` both symbolically (per configuration) and numerically.
//! * [`enumerator`] — enumeration of all feasible configurations for a
//!   given block count under antisymmetry, with checkpoint/resume.
//! * [`optimizer`] — per-configuration critical-point solving and the
//!   global minimization over all configurations.
//! * [`discrete`] — exact counting over discrete colorings of `[N]`,
//!   bead/block conversions, and circle colorings.

pub mod diagram;
pub mod discrete;
pub mod enumerator;
pub mod linear;
pub mod linsolve;
pub mod lp;
pub mod optimizer;
pub mod quadratic;
pub mod rational;

pub use diagram::{
    classify_region, derive_configuration, evaluate_f, mono_fraction_form, total_area_check,
    twelve_block_minimizer, Configuration, DiagramError, Endpoints, RegionCase,
};
pub use discrete::{
    bead_fraction, circle_mono_fraction, circle_monte_carlo, count_ap3, count_mono_ap3,
    count_mono_offby1, discretize, fraction_mono, offby1_relation_check, CircleColoring, Color,
    DiscreteColoring,
};
pub use enumerator::{
    enumerate_configurations, pair_processing_order, resume, EnumerateOptions, EnumerationResult,
};
pub use linear::LinearExpr;
pub use linsolve::{solve_linear, LinearSolveResult};
pub use lp::{check_feasible_strict, maximize, Constraint, LpOutcome, LpProblem, Relation};
pub use optimizer::{certify_point, critical_points, global_minimize, MinimizeOptions};
pub use quadratic::QuadraticForm;
pub use rational::{parse_rational, Rational, RationalError};
