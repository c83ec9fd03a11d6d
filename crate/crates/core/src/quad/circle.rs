use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::func::FunctionExpr;

/// Uniform angular grid on a circle of radius `r`.
#[derive(Clone, Debug)]
pub struct CircleGrid {
    pub r: f64,
    pub m: usize,
}

impl CircleGrid {
    pub fn new(r: f64, m: usize) -> Result<Self> {
        if !(0.0..1.0).contains(&r) {
            return Err(Error::domain(format!("circle radius {r} must lie in [0, 1)")));
        }
        if m < 16 || !m.is_power_of_two() {
            return Err(Error::Resolution(format!("sample count {m} must be a power of two >= 16")));
        }
        Ok(CircleGrid { r, m })
    }

    pub fn points(&self) -> impl Iterator<Item = C64> + '_ {
        (0..self.m).map(move |k| C64::from_polar(self.r, 2.0 * PI * k as f64 / self.m as f64))
    }
}

fn mean_of(values: &[f64], p: f64) -> f64 {
    if p.is_infinite() {
        values.iter().copied().fold(0.0, f64::max)
    } else {
        let s = values.iter().map(|v| v.powf(p)).sum::<f64>() / values.len() as f64;
        s.powf(1.0 / p)
    }
}

/// `M_p(r, g)` for pointwise moduli `g`, trapezoid on `m` points.
/// For `p = inf` the sample count doubles until the maximum stabilizes.
pub fn integral_mean_of<F>(g: F, p: f64, r: f64, m: usize) -> Result<f64>
where
    F: Fn(C64) -> Result<f64>,
{
    if !(p > 0.0) {
        return Err(Error::domain(format!("exponent p = {p} must be positive")));
    }
    let grid = CircleGrid::new(r, m)?;
    let sample = |grid: &CircleGrid| -> Result<Vec<f64>> { grid.points().map(&g).collect() };
    if p.is_infinite() {
        let mut m = grid.m;
        let mut prev = mean_of(&sample(&grid)?, p);
        loop {
            m *= 2;
            let cur = mean_of(&sample(&CircleGrid::new(r, m)?)?, p);
            if (cur - prev).abs() <= 1e-10 * cur.max(1e-300) || m >= 1 << 20 {
                return Ok(cur.max(prev));
            }
            prev = cur;
        }
    }
    Ok(mean_of(&sample(&grid)?, p))
}

/// `M_p(r, f)`.
pub fn integral_mean(f: &FunctionExpr, p: f64, r: f64, m: usize) -> Result<f64> {
    f.validate()?;
    integral_mean_of(|z| Ok(f.eval(z)?.norm()), p, r, m)
}

/// `M_p(r, f')`.
pub fn integral_mean_derivative(f: &FunctionExpr, p: f64, r: f64, m: usize) -> Result<f64> {
    f.validate()?;
    integral_mean_of(|z| Ok(f.derivative_at(z)?.norm()), p, r, m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_means() {
        let z = FunctionExpr::z();
        assert!((integral_mean(&z, 2.0, 0.5, 64).unwrap() - 0.5).abs() < 1e-15);
        let g = crate::func::parse_function("1 + z").unwrap();
        let m2 = integral_mean(&g, 2.0, 0.5, 64).unwrap();
        assert!((m2 - 1.25f64.sqrt()).abs() < 1e-14);
        assert!((integral_mean(&g, f64::INFINITY, 0.5, 16).unwrap() - 1.5).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        let z = FunctionExpr::z();
        assert!(integral_mean(&z, 2.0, 1.0, 64).is_err());
        assert!(integral_mean(&z, 0.0, 0.5, 64).is_err());
        assert!(integral_mean(&z, 2.0, 0.5, 100).is_err());
    }
}
