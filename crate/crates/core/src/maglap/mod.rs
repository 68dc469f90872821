//! Eigenvalues of the shifted magnetic Dirichlet Laplacian `−(∇ − iA)² − B`.

mod bounds;
mod form;
mod landau;
mod radial;
mod torsion_gauge;

pub use bounds::{hs_lower_bound, hs_lower_bound_value, trial_upper_bound, trial_upper_bounds};
pub use form::{eigenvalues, Gauge, MagneticForm, Spectrum, SpectrumMethod};
pub use landau::{assemble_landau, link_phase};
pub use radial::{disk_eigs_default, disk_eigs_radial, MIN_RADIAL_NODES};
pub use torsion_gauge::{assemble_torsion_gauge, WEIGHT_ADVISORY, WEIGHT_OVERFLOW};
