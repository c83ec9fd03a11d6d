use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::func::series::{CoefficientSeries, SparseSeries};

/// Hadamard gap series `sum_{k=1}^K a_k z^(2^k)`; `coeffs[k-1] = a_k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LacunaryCoefficients {
    pub coeffs: Vec<C64>,
}

/// Exponents beyond this overflow u64 and are only usable coefficient-wise.
pub const MAX_EVAL_DEPTH: usize = 62;

impl LacunaryCoefficients {
    pub fn new(coeffs: Vec<C64>) -> Self {
        LacunaryCoefficients { coeffs }
    }

    pub fn depth(&self) -> usize {
        self.coeffs.len()
    }

    /// `a_k = k^{-1/2} 2^{-k/p}`.
    pub fn fp(p: f64, depth: usize) -> Result<Self> {
        if !(p > 1.0) {
            return Err(Error::domain(format!("F_p needs p > 1, got {p}")));
        }
        Ok(Self::new(
            (1..=depth)
                .map(|k| C64::new((k as f64).powf(-0.5) * 2f64.powf(-(k as f64) / p), 0.0))
                .collect(),
        ))
    }

    pub fn truncated(&self, depth: usize) -> Self {
        Self::new(self.coeffs.iter().take(depth).copied().collect())
    }

    pub fn exponent(k: usize) -> u64 {
        1u64 << k
    }

    fn check_eval(&self) -> Result<()> {
        if self.depth() > MAX_EVAL_DEPTH {
            return Err(Error::domain(format!(
                "gap depth {} exceeds evaluable depth {MAX_EVAL_DEPTH}",
                self.depth()
            )));
        }
        Ok(())
    }

    pub fn to_sparse(&self) -> Result<SparseSeries> {
        self.check_eval()?;
        Ok(SparseSeries::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| (Self::exponent(i + 1), c))
                .collect(),
        ))
    }

    pub fn densify(&self, n: usize) -> Result<CoefficientSeries> {
        Ok(self.to_sparse()?.densify(n))
    }

    /// Value and derivatives up to order 4.
    pub fn jet(&self, z: C64) -> [C64; 5] {
        let mut out = [C64::default(); 5];
        let zp = [C64::new(1.0, 0.0), z, z * z, z * z * z, z * z * z * z];
        // q = z^(2^j - 4), starting at j = 2.
        let mut q = C64::new(1.0, 0.0);
        for (i, &c) in self.coeffs.iter().enumerate() {
            let j = i + 1;
            let n = Self::exponent(j);
            if j == 1 {
                // z^2
                out[0] += c * zp[2];
                out[1] += c * 2.0 * z;
                out[2] += c * 2.0;
                continue;
            }
            if j > 2 {
                let t = q * zp[2];
                q = t * t;
            }
            let nf = n as f64;
            let mut fall = 1.0;
            for k in 0..5 {
                out[k] += c * fall * q * zp[4 - k];
                fall *= nf - k as f64;
            }
        }
        out
    }
}
