pub mod grid;
pub mod report;
pub mod seminorm;
pub mod space;
pub mod sup;

pub use grid::{GridConfig, MobiusGrid};
pub use report::{ls_slope, ConstantReport};
pub use seminorm::{
    derivative_engine, growth_margin, log_q_constant, norm, qs_integral_at, seminorm, LogVariant, NormContext,
};
pub use space::SpaceSpec;
pub use sup::{kernel_sup, pointwise_sup};
