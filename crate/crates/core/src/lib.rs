//! Lévy processes on the dual of a nuclear sequence space: Lévy measures,
//! Lévy–Khintchine exponents, path simulation and statistical verification.

pub mod char_func;
pub mod error;
pub mod levy_measure;
pub mod quadrature;
pub mod rng;
pub mod sequence_space;
pub mod simulate;
pub mod stats;
pub mod verify;

pub use char_func::{cf_levy, lk_exponent, CharTriplet, CovarianceForm, TripletSpec};
pub use error::{Error, Result};
pub use levy_measure::{LevyMeasure, LevyMeasureSpec, Region, ValidationReport};
pub use sequence_space::{DualPoint, SeminormIndex, TestFunction};
pub use simulate::{LevySimulator, PathSkeleton, SimConfig};
pub use verify::{Outcome, TestReport};
