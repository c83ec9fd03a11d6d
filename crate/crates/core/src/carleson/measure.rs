use std::fmt;
use std::sync::Arc;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::func::FunctionExpr;
use crate::quad::{Density, DiscScheme};

/// Source of a density on the disc.
#[derive(Clone)]
pub enum DensitySource {
    /// Zero density.
    Zero,
    /// Normalized area: density 1.
    Area,
    /// `(1 - |z|^2)^s |f'(z)|^2`.
    Derivative { f: FunctionExpr, s: f64 },
    /// Arbitrary nonnegative density, sampled with the base angles.
    Custom(Arc<dyn Fn(C64) -> f64 + Send + Sync>),
}

impl fmt::Debug for DensitySource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DensitySource::Zero => write!(f, "Zero"),
            DensitySource::Area => write!(f, "Area"),
            DensitySource::Derivative { s, .. } => write!(f, "Derivative {{ s: {s} }}"),
            DensitySource::Custom(_) => write!(f, "Custom"),
        }
    }
}

/// Measure `scale * density dA` with the scheme used to integrate it.
#[derive(Clone, Debug)]
pub struct DensityMeasure {
    pub source: DensitySource,
    /// Applied to final constants, so that scaling is exact.
    pub scale: f64,
    pub scheme: DiscScheme,
    pub label: String,
}

impl DensityMeasure {
    pub fn area(scheme: DiscScheme) -> Self {
        DensityMeasure { source: DensitySource::Area, scale: 1.0, scheme, label: "area".into() }
    }

    pub fn zero(scheme: DiscScheme) -> Self {
        DensityMeasure { source: DensitySource::Zero, scale: 1.0, scheme, label: "zero".into() }
    }

    pub fn custom(label: &str, density: impl Fn(C64) -> f64 + Send + Sync + 'static, scheme: DiscScheme) -> Self {
        DensityMeasure { source: DensitySource::Custom(Arc::new(density)), scale: 1.0, scheme, label: label.into() }
    }

    /// `c * mu` for `c >= 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c >= 0.0) || !c.is_finite() {
            return Err(Error::domain(format!("measure scale must be finite and nonnegative, got {c}")));
        }
        let mut m = self.clone();
        m.scale *= c;
        m.label = format!("{c}*{}", self.label);
        Ok(m)
    }

    /// Unscaled density at `z`.
    pub fn raw_density(&self, z: C64) -> Result<f64> {
        match &self.source {
            DensitySource::Zero => Ok(0.0),
            DensitySource::Area => Ok(1.0),
            DensitySource::Derivative { f, s } => Ok((1.0 - z.norm_sqr()).powf(*s) * f.djet(z)?[0].norm_sqr()),
            DensitySource::Custom(g) => {
                let v = g(z);
                if v.is_finite() && v >= 0.0 {
                    Ok(v)
                } else {
                    Err(Error::domain(format!("density value {v} at {z} is not finite and nonnegative")))
                }
            }
        }
    }

    pub fn density(&self, z: C64) -> Result<f64> {
        Ok(self.scale * self.raw_density(z)?)
    }

    /// Angles needed on the circle of radius `r`.
    pub fn resolution(&self, r: f64) -> usize {
        match &self.source {
            DensitySource::Derivative { f, .. } => self.scheme.resolution_for(f, r),
            _ => self.scheme.base_angles,
        }
    }

    /// Samples per turn needed on the circle of radius `r`. Derivative
    /// densities of non-lacunary functions get no base-angle floor; gap
    /// series keep the gap-safe base count.
    pub fn angular_need(&self, r: f64) -> f64 {
        match &self.source {
            DensitySource::Derivative { f, .. } if !f.is_gap_like() => self.scheme.angular_need(f, r),
            _ => self.scheme.base_angles as f64,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.scale == 0.0 || matches!(self.source, DensitySource::Zero)
    }

    /// Unscaled density in the form used by the quadrature routines.
    pub fn raw(&self) -> Density<'_> {
        Density::new(move |z| self.raw_density(z), move |r| self.resolution(r))
    }

    /// `int scale * density dA` over the truncated disc.
    pub fn total_mass(&self) -> Result<f64> {
        if self.is_zero() {
            return Ok(0.0);
        }
        Ok(self.scale * self.scheme.integrate(&self.raw())?)
    }
}

/// The measure `(1 - |z|^2)^s |f'(z)|^2 dA`.
pub fn density_from(f: &FunctionExpr, s: f64, scheme: DiscScheme) -> Result<DensityMeasure> {
    if !(s >= 0.0) {
        return Err(Error::domain(format!("density exponent must be >= 0, got {s}")));
    }
    f.validate()?;
    let source = match f {
        FunctionExpr::Constant(_) => DensitySource::Zero,
        _ => DensitySource::Derivative { f: f.clone(), s },
    };
    Ok(DensityMeasure { source, scale: 1.0, scheme, label: format!("(1-|z|^2)^{s}|f'|^2") })
}
