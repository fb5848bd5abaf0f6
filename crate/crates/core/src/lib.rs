//! Flexible linguistic values and the reasoning built on them.
//!
//! The crate is organised bottom-up:
//!
//! - [`values`]: universes, flexible values with piecewise-linear consistency
//!   functions, and complementary triangular partitions.
//! - [`truth`]: scalar truth degrees, min/max/complement connectives and the
//!   near-true / rough-true / degree-true / not-true classification.
//! - [`rules`]: single- and multi-condition flexible rules, rigid envelopes
//!   and the two-piece adjoint affine maps.
//! - [`inference`]: natural inference, degree-level modus ponens with L-N
//!   conversion, the AT method, parallel reasoning with degrees and peak
//!   interpolation.
//! - [`baseline`]: the classical fuzzy pipeline (Zadeh implication, sup-min
//!   composition, Mamdani clip/aggregate/centroid).
//! - [`approx`]: rulebases built from target functions, error studies under
//!   granule refinement, containment and space diagnostics.

pub mod approx;
pub mod baseline;
mod error;
pub mod inference;
pub mod rules;
pub mod truth;
pub mod values;

pub use error::{Error, Result};

/// Absolute tolerance used by containment and complementarity checks.
pub const TOLERANCE: f64 = 1e-9;
