pub mod circle;
pub mod engine;
pub mod gauss;
pub mod radial;
pub mod scheme;

pub use circle::{integral_mean, integral_mean_derivative, integral_mean_of, CircleGrid};
pub use engine::{KernelEngine, KernelKind, RadiusSpectrum};
pub use gauss::{gauss_legendre, gauss_on};
pub use radial::{m2_squared, radial_energy, weighted_radial_energy, RadialSchedule};
pub use scheme::{disc_integral, gap_safe_prime, Density, DiscScheme, Ring, SchemeConfig};
