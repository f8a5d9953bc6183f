//! Periodic-box Navier-Stokes toolkit built around Sobolev-Gevrey norms.
//!
//! Fields live on a truncated integer frequency lattice with the convention
//! `u(x) = Σ_ξ û(ξ) e^{iξ·x}`, so `‖u‖²_{L²} = Σ |û(ξ)|²`.

pub mod blowup;
pub mod error;
pub mod lab;
pub mod mild;
pub mod norms;
pub mod params;
pub mod spectral;

pub use error::{Error, Result};
pub use params::GevreyParams;
pub use spectral::{FrequencyGrid, SpectralField, SpectralVectorField};
