use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::func::{FunctionExpr, SparseSeries};
use crate::quad::circle::integral_mean_of;
use crate::quad::gauss::gauss_on;

/// Increasing radii in (0, 1).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialSchedule {
    pub radii: Vec<f64>,
}

impl RadialSchedule {
    pub fn new(radii: Vec<f64>) -> Result<Self> {
        if radii.is_empty() {
            return Err(Error::EmptyInput("radial schedule".into()));
        }
        if radii.windows(2).any(|w| w[1] <= w[0]) || radii[0] <= 0.0 || *radii.last().unwrap() >= 1.0 {
            return Err(Error::domain("radial schedule must be increasing inside (0, 1)"));
        }
        Ok(RadialSchedule { radii })
    }

    /// `r_n = 1 - 2^{-n}` for `n` in `ns`.
    pub fn dyadic(ns: impl IntoIterator<Item = u32>) -> Result<Self> {
        Self::new(ns.into_iter().map(crate::func::dyadic_radius).collect())
    }
}

/// Sparse coefficient budget for exact Parseval sums.
pub const SPARSE_BUDGET: u64 = 1 << 62;

/// `M_2(r, g)^2`: Parseval when `g` has a sparse expansion, else `m` samples.
pub fn m2_squared(g: &FunctionExpr, sparse: Option<&SparseSeries>, r: f64, m: usize) -> Result<f64> {
    match sparse {
        Some(s) => Ok(s.m2_squared(r)),
        None => Ok(integral_mean_of(|z| Ok(g.eval(z)?.norm()), 2.0, r, m)?.powi(2)),
    }
}

/// `int_0^{r_j} (1 - r)^s M_2(r, f')^2 dr` for each radius of the schedule.
pub fn radial_energy(f: &FunctionExpr, s: f64, schedule: &RadialSchedule, m: usize) -> Result<Vec<f64>> {
    weighted_radial_energy(&FunctionExpr::derivative_of(f.clone()), s, schedule, m)
}

/// `int_0^{r_j} (1 - r)^s M_2(r, g)^2 dr` for each radius of the schedule.
pub fn weighted_radial_energy(g: &FunctionExpr, s: f64, schedule: &RadialSchedule, m: usize) -> Result<Vec<f64>> {
    if !(s > -1.0) {
        return Err(Error::domain(format!("weight exponent {s} must exceed -1")));
    }
    g.validate()?;
    let sparse = g.to_sparse(SPARSE_BUDGET);
    let mut out = Vec::with_capacity(schedule.radii.len());
    let mut acc = 0.0;
    let mut lo = 0.0;
    for &hi in &schedule.radii {
        // Split each band geometrically toward its outer edge.
        let mut edges = vec![lo];
        let mut t = lo;
        while (hi - t) > 0.25 * (1.0 - hi) && edges.len() < 40 {
            t = t + 0.5 * (hi - t);
            edges.push(t);
        }
        edges.push(hi);
        for w in edges.windows(2) {
            for (r, wt) in gauss_on(12, w[0], w[1]) {
                acc += wt * (1.0 - r).powf(s) * m2_squared(g, sparse.as_ref(), r, m)?;
            }
        }
        out.push(acc);
        lo = hi;
    }
    Ok(out)
}
