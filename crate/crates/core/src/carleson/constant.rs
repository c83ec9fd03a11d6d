use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::carleson::boxes::{raw_box_mass, BoxSpec};
use crate::carleson::measure::DensityMeasure;
use crate::error::{Error, Result};
use crate::norms::{kernel_sup, pointwise_sup, ConstantReport, MobiusGrid};
use crate::quad::{KernelEngine, KernelKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CarlesonMethod {
    /// `sup mu(S(a)) / (1 - |a|)^s`.
    Box,
    /// `sup int ((1 - |a|^2) / |1 - conj(a) z|^2)^s dmu(z)`.
    Zhao,
}

impl fmt::Display for CarlesonMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CarlesonMethod::Box => "box",
            CarlesonMethod::Zhao => "zhao",
        })
    }
}

impl FromStr for CarlesonMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "box" => Ok(CarlesonMethod::Box),
            "zhao" => Ok(CarlesonMethod::Zhao),
            other => Err(Error::Config(format!("unknown Carleson method {other:?}"))),
        }
    }
}

/// `(log 2/(1 - |a|^2))^alpha`.
pub fn log_factor(rho: f64, alpha: f64) -> f64 {
    if alpha == 0.0 {
        1.0
    } else {
        (2.0 / (1.0 - rho * rho)).ln().powf(alpha)
    }
}

fn check(s: f64, alpha: f64) -> Result<()> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::domain(format!("Carleson exponent must be > 0, got {s}")));
    }
    if !(alpha >= 0.0) || !alpha.is_finite() {
        return Err(Error::domain(format!("log exponent must be >= 0, got {alpha}")));
    }
    Ok(())
}

fn raw_box_value(mu: &DensityMeasure, s: f64, alpha: f64, a: C64) -> Result<f64> {
    let rho = a.norm();
    Ok(raw_box_mass(mu, &BoxSpec::new(a)?)? * log_factor(rho, alpha) / (1.0 - rho).powf(s))
}

/// Box functional `mu(S(a)) (log 2/(1-|a|^2))^alpha / (1-|a|)^s` at one point.
pub fn box_value_at(mu: &DensityMeasure, s: f64, alpha: f64, a: C64) -> Result<f64> {
    check(s, alpha)?;
    if mu.is_zero() {
        return Ok(0.0);
    }
    Ok(mu.scale * raw_box_value(mu, s, alpha, a)?)
}

/// Zhao functional `(log 2/(1-|a|^2))^alpha int k_a^s dmu` at one point.
pub fn zhao_value_at(mu: &DensityMeasure, s: f64, alpha: f64, a: C64) -> Result<f64> {
    Ok(zhao_values_at(mu, s, alpha, &[a])?[0])
}

/// Zhao functional at many points, sharing one kernel engine.
pub fn zhao_values_at(mu: &DensityMeasure, s: f64, alpha: f64, points: &[C64]) -> Result<Vec<f64>> {
    check(s, alpha)?;
    if let Some(a) = points.iter().find(|a| !(a.norm() < 1.0)) {
        return Err(Error::domain(format!("point {a} is not in the disc")));
    }
    if mu.is_zero() {
        return Ok(vec![0.0; points.len()]);
    }
    let engine = KernelEngine::new(&mu.scheme, mu.raw(), KernelKind::Zhao(s))?;
    let mut radii: Vec<f64> = points.iter().map(|a| a.norm()).collect();
    radii.sort_by(f64::total_cmp);
    radii.dedup();
    let spectra = engine.spectra(&radii)?;
    Ok(points
        .iter()
        .map(|a| {
            let k = radii.partition_point(|&r| r < a.norm());
            mu.scale * log_factor(a.norm(), alpha) * spectra[k].value_at(a.arg())
        })
        .collect())
}

fn zero_report(grid: &MobiusGrid) -> ConstantReport {
    let levels: Vec<(f64, f64)> = grid.levels().iter().map(|&l| (l as f64, 0.0)).collect();
    ConstantReport::from_levels(&levels, None, Some(C64::default()))
}

/// s-Carleson constant of `mu`, with logarithmic weight of order `alpha`.
pub fn carleson_constant(
    mu: &DensityMeasure,
    s: f64,
    alpha: f64,
    method: CarlesonMethod,
    grid: &MobiusGrid,
) -> Result<ConstantReport> {
    check(s, alpha)?;
    if mu.is_zero() {
        return Ok(zero_report(grid));
    }
    let rep = match method {
        CarlesonMethod::Box => pointwise_sup(|a| raw_box_value(mu, s, alpha, a), grid)?,
        CarlesonMethod::Zhao => {
            let engine = KernelEngine::new(&mu.scheme, mu.raw(), KernelKind::Zhao(s))?;
            kernel_sup(&engine, |rho| log_factor(rho, alpha), grid)?
        }
    };
    Ok(rep.scaled(mu.scale))
}
