//! Discrete Schrödinger operators `u(n+1) + u(n-1) + v(n) u(n)` with
//! potentials drawn from the subshift.

mod bands;
mod gordon;
mod transfer;
mod tridiag;

pub use bands::{band_spectrum, default_window, periodic_bands, Band, BandSpectrum, EDGE_TOLERANCE, MAX_PERIOD, MERGE_GAP};
pub use gordon::{
    cube_frequencies, cube_frequency, gordon_check, CubeLevel, GordonOptions, GordonOutcome, GordonReport,
    FREQUENCY_SLACK,
};
pub use transfer::{lower_left, trace, transfer_matrix, Potential, TransferMatrix};
pub use tridiag::{count_below, finite_section_eigenvalues, kth_eigenvalue, tridiagonal_eigenvalues, MAX_SECTION};
