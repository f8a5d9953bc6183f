//! Regularity diagnostics built from the blow-up lower bounds, for use on smooth runs.

pub mod constants;
pub mod energy;
pub mod envelope;
pub mod fit;
pub mod horizon;

pub use constants::{c_a_sigma, h_function, h_limit_at_zero, infimum_b, CASigma, CLOSED_FORM_TOL};
pub use energy::{energy_ledger, EnergyLedger};
pub use envelope::{envelope, envelope_constants, k_bound, log_envelope, summed_bound, EnvelopeParams};
pub use fit::{fit_profile, ProfileFit, MIN_FIT_SAMPLES};
pub use horizon::{horizon, horizon_consistency, horizon_series, HorizonConsistency, HorizonReport, GRONWALL_C};
