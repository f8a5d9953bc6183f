//! Mild formulation `u = e^{νtΔ}u⁰ + B(u,u)` and the solvers built on it.

pub mod certificate;
pub mod continuation;
pub mod duhamel;
pub mod picard;
pub mod timestep;
pub mod trajectory;

pub use certificate::{c0, largest_certified_window, smallness_certificate, smallness_certificate_with, SmallnessCertificate, SMOOTHING_CONSTANT_K};
pub use continuation::{continue_until, ContinuationReport, ContinuationStatus, Stop, WindowPolicy, WindowRecord};
pub use duhamel::{duhamel_at, duhamel_bilinear, duhamel_bilinear_nodes, duhamel_cumulative, nonlinear_integrand, phi1, phi2};
pub use picard::{heat_trajectory, picard_solve, PicardOptions, PicardTrace};
pub use timestep::{step_count, timestep_integrate, timestep_integrate_with, timestep_samples};
pub use trajectory::{samples_from_csv, samples_to_csv, uniform_nodes, Trajectory, TrajectorySample};
