//! Dense and sparse Taylor coefficient arrays.

use num_complex::Complex64 as C64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

const FFT_CUTOVER: usize = 96;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoefficientSeries {
    pub coeffs: Vec<C64>,
}

impl CoefficientSeries {
    pub fn new(coeffs: Vec<C64>) -> Self {
        CoefficientSeries { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| C64::new(c, 0.0)).collect())
    }

    pub fn zeros(len: usize) -> Self {
        Self::new(vec![C64::new(0.0, 0.0); len])
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Index of the last nonzero coefficient, 0 for the zero series.
    pub fn degree(&self) -> usize {
        self.coeffs.iter().rposition(|c| c.norm_sqr() > 0.0).unwrap_or(0)
    }

    pub fn coeff(&self, n: usize) -> C64 {
        self.coeffs.get(n).copied().unwrap_or_default()
    }

    pub fn truncated(&self, n: usize) -> Self {
        let mut c = self.coeffs.clone();
        c.resize(n + 1, C64::default());
        Self::new(c)
    }

    /// Horner evaluation of value and first two derivatives.
    pub fn eval3(&self, z: C64) -> [C64; 4] {
        let mut v = C64::default();
        let mut d1 = C64::default();
        let mut d2 = C64::default();
        let mut d3 = C64::default();
        for &c in self.coeffs.iter().rev() {
            d3 = d3 * z + d2 * 3.0;
            d2 = d2 * z + d1 * 2.0;
            d1 = d1 * z + v;
            v = v * z + c;
        }
        [v, d1, d2, d3]
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.coeffs.iter().rev().fold(C64::default(), |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zeros(1);
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(n, &c)| c * n as f64)
                .collect(),
        )
    }

    pub fn h2_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.len().max(other.len());
        Self::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// Backward shift: coefficients (c_1, c_2, ...).
    pub fn backward_shift(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zeros(1);
        }
        Self::new(self.coeffs[1..].to_vec())
    }
}

/// Cauchy product truncated to degree `n`.
pub fn series_multiply(u: &CoefficientSeries, v: &CoefficientSeries, n: usize) -> CoefficientSeries {
    let du = u.len().min(n + 1);
    let dv = v.len().min(n + 1);
    if du == 0 || dv == 0 {
        return CoefficientSeries::zeros(n + 1);
    }
    if du.min(dv) <= FFT_CUTOVER {
        let mut out = vec![C64::default(); n + 1];
        for i in 0..du {
            let a = u.coeffs[i];
            if a.norm_sqr() == 0.0 {
                continue;
            }
            for j in 0..dv.min(n + 1 - i) {
                out[i + j] += a * v.coeffs[j];
            }
        }
        return CoefficientSeries::new(out);
    }
    let len = (du + dv - 1).next_power_of_two();
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(len);
    let inv = planner.plan_fft_inverse(len);
    let mut a = vec![C64::default(); len];
    let mut b = vec![C64::default(); len];
    a[..du].copy_from_slice(&u.coeffs[..du]);
    b[..dv].copy_from_slice(&v.coeffs[..dv]);
    fwd.process(&mut a);
    fwd.process(&mut b);
    for (x, y) in a.iter_mut().zip(&b) {
        *x *= *y;
    }
    inv.process(&mut a);
    let scale = 1.0 / len as f64;
    let mut out: Vec<C64> = a.into_iter().take(n + 1).map(|c| c * scale).collect();
    out.resize(n + 1, C64::default());
    CoefficientSeries::new(out)
}

/// Termwise antiderivative with constant term `c0`.
pub fn series_antiderivative(u: &CoefficientSeries, c0: C64) -> CoefficientSeries {
    let mut out = Vec::with_capacity(u.len() + 1);
    out.push(c0);
    out.extend(u.coeffs.iter().enumerate().map(|(n, &c)| c / (n as f64 + 1.0)));
    CoefficientSeries::new(out)
}

/// Sparse series: strictly increasing exponents.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SparseSeries {
    pub terms: Vec<(u64, C64)>,
}

impl SparseSeries {
    pub fn new(mut terms: Vec<(u64, C64)>) -> Self {
        terms.sort_by_key(|t| t.0);
        let mut merged: Vec<(u64, C64)> = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            match merged.last_mut() {
                Some(last) if last.0 == e => last.1 += c,
                _ => merged.push((e, c)),
            }
        }
        merged.retain(|t| t.1.norm_sqr() > 0.0);
        SparseSeries { terms: merged }
    }

    pub fn from_dense(s: &CoefficientSeries) -> Self {
        Self::new(
            s.coeffs
                .iter()
                .enumerate()
                .map(|(n, &c)| (n as u64, c))
                .collect(),
        )
    }

    pub fn degree(&self) -> u64 {
        self.terms.last().map(|t| t.0).unwrap_or(0)
    }

    pub fn densify(&self, n: usize) -> CoefficientSeries {
        let mut out = vec![C64::default(); n + 1];
        for &(e, c) in &self.terms {
            if (e as usize) <= n {
                out[e as usize] += c;
            }
        }
        CoefficientSeries::new(out)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.terms
                .iter()
                .filter(|t| t.0 > 0)
                .map(|&(e, c)| (e - 1, c * e as f64))
                .collect(),
        )
    }

    pub fn antiderivative(&self, c0: C64) -> Self {
        let mut t: Vec<(u64, C64)> = self
            .terms
            .iter()
            .map(|&(e, c)| (e + 1, c / (e as f64 + 1.0)))
            .collect();
        t.push((0, c0));
        Self::new(t)
    }

    /// Product, dropping terms of degree above `budget`.
    pub fn multiply(&self, other: &Self, budget: u64) -> Self {
        let mut t = Vec::with_capacity(self.terms.len() * other.terms.len());
        for &(e1, c1) in &self.terms {
            for &(e2, c2) in &other.terms {
                if e1 + e2 <= budget {
                    t.push((e1 + e2, c1 * c2));
                }
            }
        }
        Self::new(t)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut t = self.terms.clone();
        t.extend_from_slice(&other.terms);
        Self::new(t)
    }

    /// Value and derivatives up to order 3.
    pub fn eval3(&self, z: C64) -> [C64; 4] {
        let mut out = [C64::default(); 4];
        for &(e, c) in &self.terms {
            let e = e as i64;
            for (k, slot) in out.iter_mut().enumerate() {
                let k = k as i64;
                if e < k {
                    break;
                }
                let mut fall = 1.0;
                for j in 0..k {
                    fall *= (e - j) as f64;
                }
                *slot += c * fall * pow_u64(z, (e - k) as u64);
            }
        }
        out
    }

    /// Squared integral mean of |f|^2 on the circle of radius r (Parseval).
    pub fn m2_squared(&self, r: f64) -> f64 {
        let lr = r.ln();
        self.terms
            .iter()
            .map(|&(e, c)| c.norm_sqr() * if e == 0 { 1.0 } else { (2.0 * e as f64 * lr).exp() })
            .sum()
    }
}

pub fn pow_u64(z: C64, mut e: u64) -> C64 {
    let mut base = z;
    let mut acc = C64::new(1.0, 0.0);
    while e > 0 {
        if e & 1 == 1 {
            acc *= base;
        }
        base *= base;
        e >>= 1;
    }
    acc
}
