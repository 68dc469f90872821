//! Planar domains, their grid realization, and geometric functionals.

mod asymmetry;
mod domain;
mod perimeter;
mod raster;

pub use asymmetry::{fraenkel_asymmetry, mask_asymmetry, symmetric_difference_area, Asymmetry};
pub use domain::{DomainKind, DomainSpec, Geometry, Point};
pub use perimeter::{mask_perimeter, perimeter};
pub use raster::{
    boundary_distance, rasterize, Mask, RasterDomain, ScalarField, MIN_CROSSING, MIN_RESOLUTION,
};
