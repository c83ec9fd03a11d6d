use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::func::FunctionExpr;
use crate::gapseries::criteria::Classification;
use crate::quad::{weighted_radial_energy, RadialSchedule};

/// Circle samples for `M_2` when the integrand has no sparse expansion.
pub const SCAN_SAMPLES: usize = 1 << 14;

/// Increment-decay rule for divergence scans.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScanThresholds {
    /// Geometric decay: consecutive increment ratios below this.
    pub decay_ratio: f64,
    /// Number of trailing increment ratios examined.
    pub window: usize,
}

impl Default for ScanThresholds {
    fn default() -> Self {
        ScanThresholds { decay_ratio: 0.9, window: 6 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DivergenceReport {
    pub radii: RadialSchedule,
    /// `int_0^{r_n} (1-r)^s M_2(r, f' g)^2 dr`.
    pub partials: Vec<f64>,
    /// `partials[n] - partials[n-1]`, the first entry is `partials[0]`.
    pub increments_per_doubling: Vec<f64>,
    pub verdict: Classification,
}

/// Partial integrals of `(1-r)^s M_2(r, f' g)^2` out to each scheduled radius.
pub fn divergence_scan(
    g: &FunctionExpr,
    f: &FunctionExpr,
    s: f64,
    schedule: &RadialSchedule,
    th: &ScanThresholds,
) -> Result<DivergenceReport> {
    if !(s >= 0.0) {
        return Err(Error::domain(format!("weight exponent must be >= 0, got {s}")));
    }
    let integrand = FunctionExpr::product(vec![g.clone(), FunctionExpr::derivative_of(f.clone())]);
    let partials = weighted_radial_energy(&integrand, s, schedule, SCAN_SAMPLES)?;
    let mut increments = Vec::with_capacity(partials.len());
    let mut prev = 0.0;
    for &p in &partials {
        increments.push(p - prev);
        prev = p;
    }
    let verdict = classify(&increments, th);
    Ok(DivergenceReport { radii: schedule.clone(), partials, increments_per_doubling: increments, verdict })
}

fn classify(inc: &[f64], th: &ScanThresholds) -> Classification {
    if inc.len() < th.window + 1 {
        return Classification::Inconclusive;
    }
    let tail = &inc[inc.len() - th.window - 1..];
    if tail.iter().all(|&x| x == 0.0) {
        return Classification::Convergent;
    }
    let ratios: Vec<f64> = tail.windows(2).map(|w| if w[0] > 0.0 { w[1] / w[0] } else { f64::INFINITY }).collect();
    if ratios.iter().all(|&q| q < th.decay_ratio) {
        Classification::Convergent
    } else if ratios.iter().all(|&q| q >= th.decay_ratio) && tail.iter().all(|&x| x > 0.0) {
        Classification::Divergent
    } else {
        Classification::Inconclusive
    }
}
