//! Discrete Fourier representation of real fields on the periodic box `[0, 2π)^3`.

pub mod fft;
pub mod field;
pub mod fixtures;
pub mod grid;
pub mod operators;
pub mod random;
pub mod snapshot;

pub use fft::{to_physical, to_spectral};
pub use field::{Coefficients, SpectralField, SpectralVectorField, DIVERGENCE_TOL};
pub use fixtures::{shear_mode, taylor_green, taylor_green_3d};
pub use grid::FrequencyGrid;
pub use operators::{
    bilinear_term, convolve_oracle, differential, divergence, gradient, heat_propagate,
    heat_propagate_vector, laplacian, leray_project, nonlinear_term, transform_product,
    DifferentialInput, DifferentialKind, DifferentialOutput,
};
pub use random::{random_divergence_free_field, random_scalar_field};
pub use snapshot::{read_snapshot, read_vector_snapshot, write_snapshot, write_vector_snapshot, SnapshotFormat};

/// Builds the frequency lattice for `n` modes per axis.
pub fn make_grid(n: usize) -> crate::Result<FrequencyGrid> {
    FrequencyGrid::new(n)
}
