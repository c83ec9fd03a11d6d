//! Integration and multiplication operators on Taylor series, Toeplitz
//! operators with conjugate-analytic symbols, division by inner functions,
//! and numerical boundedness probes.

pub mod ops;
pub mod probe;
pub mod toeplitz;

pub use ops::{apply_operator, apply_sparse, operator_expr, OperatorKind, OperatorSpec, SparseOutput, SPARSE_DEGREE_BUDGET};
pub use probe::{probe_boundedness, probe_members, Family, ProbeMember, ProbeReport, ProbeThresholds, ProbeVerdict};
pub use toeplitz::{backward_shift, divide_inner, sup_profile, toeplitz_conj, DIVISION_TOL};
