//! Hadamard gap series `sum a_k z^{2^k}`: coefficient criteria, exact
//! integral means of derivatives, arc comparability, radial divergence
//! scans and gap series with prescribed derivative growth.

pub mod criteria;
pub mod scan;

pub use criteria::{
    agw_construct, agw_verify, arc_energy_ratio, gap_m2_derivative_squared, lacunary_membership, m2_gap_bound, AgwCheck,
    ArcSpec, Classification, M2Report, M2Row, SeriesThresholds, SeriesVerdict, MIN_DEPTH,
};
pub use scan::{divergence_scan, DivergenceReport, ScanThresholds, SCAN_SAMPLES};
