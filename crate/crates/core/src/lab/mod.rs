//! Executable checks of the functional inequalities, with randomized sweeps.

pub mod lemmas;
pub mod product;
pub mod smoothing;
pub mod sweep;
pub mod verdict;

pub use lemmas::*;
pub use product::{exact_product, ProductMethod, ORACLE_MAX_N};
pub use smoothing::{calibrate_smoothing_constant, check_bilinear_smoothing, heat_dominated_fixture, log_log_slope, smoothing_exponents, smoothing_norms};
pub use sweep::{run_suite, run_trial, Suite, SuiteReport, SweepConfig};
pub use verdict::{InequalityVerdict, RATIO_TOL};
