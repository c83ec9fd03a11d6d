//! Carleson boxes, measures with densities on the disc, and s-Carleson
//! constants by the box supremum and by the Zhao kernel integral.

pub mod boxes;
pub mod constant;
pub mod measure;

pub use boxes::{box_mass, BoxSpec};
pub use constant::{box_value_at, carleson_constant, log_factor, zhao_value_at, zhao_values_at, CarlesonMethod};
pub use measure::{density_from, DensityMeasure, DensitySource};
