use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

/// Estimate of a supremum or integral with its refinement history.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantReport {
    pub value: f64,
    /// `[re, im]` of the point attaining `value`, for suprema.
    pub witness: Option<[f64; 2]>,
    pub converged: bool,
    /// `(level, value)`: grid depth or radial octave; the last entry is the
    /// reported value.
    pub refinement_trace: Vec<(f64, f64)>,
    /// Least-squares slope of `ln value` against level.
    pub growth_slope: f64,
}

/// Relative change allowed between the last two levels.
pub const CONVERGENCE_TOL: f64 = 0.02;

pub fn ls_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    if xs.len() < 2 {
        return 0.0;
    }
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

impl ConstantReport {
    /// Builds a report from per-level values (nondecreasing) and an
    /// optional refined final value.
    pub fn from_levels(levels: &[(f64, f64)], refined: Option<(f64, Option<C64>)>, witness: Option<C64>) -> Self {
        let mut trace: Vec<(f64, f64)> = levels.to_vec();
        let last = trace.last().map(|t| t.1).unwrap_or(0.0);
        let converged = match trace.len() {
            0 => false,
            1 => true,
            k => {
                let prev = trace[k - 2].1;
                (last - prev).abs() <= CONVERGENCE_TOL * last.abs().max(1e-300) || last == 0.0
            }
        };
        let pos: Vec<(f64, f64)> = trace.iter().filter(|t| t.1 > 0.0).map(|t| (t.0, t.1.ln())).collect();
        let xs: Vec<f64> = pos.iter().map(|t| t.0).collect();
        let ys: Vec<f64> = pos.iter().map(|t| t.1).collect();
        let growth_slope = ls_slope(&xs, &ys);
        let mut value = last;
        let mut wit = witness;
        if let Some((v, w)) = refined {
            if v > value {
                value = v;
                if w.is_some() {
                    wit = w;
                }
            }
            let lvl = trace.last().map(|t| t.0 + 0.5).unwrap_or(0.0);
            trace.push((lvl, value));
        }
        ConstantReport {
            value,
            witness: wit.map(|w| [w.re, w.im]),
            converged,
            refinement_trace: trace,
            growth_slope,
        }
    }

    pub fn witness_point(&self) -> Option<C64> {
        self.witness.map(|w| C64::new(w[0], w[1]))
    }

    /// Every value multiplied by `c >= 0`; slopes are unchanged.
    pub fn scaled(mut self, c: f64) -> Self {
        self.value *= c;
        for t in self.refinement_trace.iter_mut() {
            t.1 *= c;
        }
        if c == 0.0 {
            self.growth_slope = 0.0;
            self.converged = true;
        }
        self
    }

    /// Square root of every value; slopes halve.
    pub fn sqrt(mut self) -> Self {
        self.value = self.value.max(0.0).sqrt();
        for t in self.refinement_trace.iter_mut() {
            t.1 = t.1.max(0.0).sqrt();
        }
        self.growth_slope *= 0.5;
        self
    }
}
