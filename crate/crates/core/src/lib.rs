//! Linear advection on the periodic unit interval: a nonlinear piecewise
//! linear jet scheme that is exact at return times, classical reference
//! schemes, and tooling to compare their long-time errors.

pub mod classic;
pub mod csvfmt;
pub mod error;
pub mod grid;
pub mod jet;
pub mod plf;
pub mod profiles;
pub mod study;

pub use error::{Error, Result};
pub use grid::{make_cfl, make_grid, return_step_count, GridSpec, RationalCfl};
pub use jet::{Branch, BranchPattern, Classification, JetState};
pub use plf::{l1_plf, PiecewiseLinearFn, Shift};
pub use profiles::{NamedProfile, Profile};
