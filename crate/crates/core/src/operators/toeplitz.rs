use num_complex::Complex64 as C64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::func::{series_multiply, CoefficientSeries, FunctionExpr};
use crate::quad::integral_mean_of;

/// Coefficients of `psi` below this are dropped.
const SYMBOL_TAIL_TOL: f64 = 1e-17;
const MAX_SYMBOL_DEGREE: usize = 1 << 20;

/// Default residual tolerance for [`divide_inner`], relative to `max(1, |h|)`.
pub const DIVISION_TOL: f64 = 1e-6;

/// `P(conj(psi) f)` to degree `n`: samples of the Taylor truncations on
/// the unit circle, DFT, nonnegative frequencies. At least `m` samples are
/// used, more when the truncation degrees need them to avoid aliasing.
pub fn toeplitz_conj(psi: &FunctionExpr, f: &FunctionExpr, m: usize, n: usize) -> Result<CoefficientSeries> {
    if m < 4 * n || m == 0 {
        return Err(Error::Resolution(format!("{m} samples for degree {n}; need at least {}", (4 * n).max(1))));
    }
    psi.validate()?;
    f.validate()?;
    let l = psi.tail_degree(1.0, SYMBOL_TAIL_TOL).min(MAX_SYMBOL_DEGREE);
    let pc = psi.taylor(l)?;
    let fc = f.taylor(n + l)?;
    let m = m.max(n + 2 * l + 1);
    let mut planner = FftPlanner::<f64>::new();
    let inv = planner.plan_fft_inverse(m);
    let fwd = planner.plan_fft_forward(m);
    let samples = |c: &CoefficientSeries| {
        let mut buf = vec![C64::default(); m];
        buf[..c.len()].copy_from_slice(&c.coeffs);
        inv.process(&mut buf);
        buf
    };
    let ps = samples(&pc);
    let mut prod = samples(&fc);
    for (x, p) in prod.iter_mut().zip(&ps) {
        *x *= p.conj();
    }
    fwd.process(&mut prod);
    let scale = 1.0 / m as f64;
    Ok(CoefficientSeries::new(prod[..=n].iter().map(|c| c * scale).collect()))
}

/// `T_{conj z} f = (f - f(0)) / z`.
pub fn backward_shift(f: &FunctionExpr, n: usize) -> Result<CoefficientSeries> {
    f.validate()?;
    Ok(CoefficientSeries::new(f.taylor(n + 1)?.coeffs[1..].to_vec()))
}

fn is_finite_blaschke(b: &FunctionExpr) -> bool {
    match b {
        FunctionExpr::Blaschke(_) | FunctionExpr::Monomial(_) | FunctionExpr::Mobius(_) => true,
        FunctionExpr::Constant(c) => (c.norm() - 1.0).abs() < 1e-14,
        FunctionExpr::Product(parts) => parts.iter().all(is_finite_blaschke),
        _ => false,
    }
}

/// `h / B = T_{conj B} h` for a finite Blaschke product `B`, checked by
/// the residual `|| B q - h ||` over the first `n + 1` coefficients.
pub fn divide_inner(h: &FunctionExpr, b: &FunctionExpr, n: usize, tol: f64) -> Result<CoefficientSeries> {
    if !is_finite_blaschke(b) {
        return Err(Error::domain("divisor must be a finite Blaschke product"));
    }
    let q = toeplitz_conj(b, h, (4 * n).max(4), n)?;
    let back = series_multiply(&b.taylor(n)?, &q, n);
    let hc = h.taylor(n)?;
    let residual = back.add(&hc.scale(C64::new(-1.0, 0.0))).h2_norm();
    if residual > tol * hc.h2_norm().max(1.0) {
        return Err(Error::NotDivisible { residual });
    }
    Ok(q)
}

/// `max |g|` on the circles `|z| = 1 - 2^{-n}`, `n = 1..=n_max`, with the
/// least-squares slope of `ln max |g|` against `n`. Bounded symbols give
/// slopes near zero; this never certifies membership in `H^inf`.
pub fn sup_profile(g: &FunctionExpr, n_max: u32) -> Result<(Vec<(u32, f64)>, f64)> {
    g.validate()?;
    let mut out = Vec::new();
    for n in 1..=n_max {
        let r = 1.0 - 0.5f64.powi(n as i32);
        let m = (64usize << n.min(12)).max(256);
        out.push((n, integral_mean_of(|z| Ok(g.eval(z)?.norm()), f64::INFINITY, r, m)?));
    }
    let xs: Vec<f64> = out.iter().map(|t| t.0 as f64).collect();
    let ys: Vec<f64> = out.iter().map(|t| t.1.max(1e-300).ln()).collect();
    Ok((out, crate::norms::ls_slope(&xs, &ys)))
}
