pub mod atoms;
pub mod expr;
pub mod lacunary;
pub mod parse;
pub mod series;

pub use atoms::{dyadic_radius, make_atom, AtomKind};
pub use expr::{mobius, FunctionExpr, Jet};
pub use lacunary::LacunaryCoefficients;
pub use parse::{parse_coefficients, parse_complex, parse_function, parse_kv};
pub use series::{series_antiderivative, series_multiply, CoefficientSeries, SparseSeries};
