use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Parameter grid for suprema over the disc: radii `1 - 2^{-n}`,
/// `n = 0..=n_max`, with `min(base * 2^n, cap)` equally spaced angles
/// (a single point at `n = 0`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GridConfig {
    pub n_max: u32,
    pub angle_cap: usize,
    pub angle_base: usize,
    /// Local search around the best grid point.
    pub refine: bool,
    pub refine_iters: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig { n_max: 20, angle_cap: 512, angle_base: 4, refine: true, refine_iters: 3 }
    }
}

#[derive(Clone, Debug)]
pub struct MobiusGrid {
    pub config: GridConfig,
}

impl MobiusGrid {
    pub fn new(config: GridConfig) -> Result<Self> {
        if config.angle_cap == 0 || config.angle_base == 0 {
            return Err(Error::Config("grid needs positive angle counts".into()));
        }
        if config.n_max > 48 {
            return Err(Error::Config("grid depth above 48 is below double precision".into()));
        }
        Ok(MobiusGrid { config })
    }

    pub fn default_grid() -> Self {
        Self::new(GridConfig::default()).expect("default grid")
    }

    pub fn radius(n: u32) -> f64 {
        1.0 - 0.5f64.powi(n as i32)
    }

    pub fn angles(&self, n: u32) -> usize {
        if n == 0 {
            1
        } else {
            (self.config.angle_base << n.min(40)).min(self.config.angle_cap)
        }
    }

    pub fn points_at(&self, n: u32) -> Vec<C64> {
        let r = Self::radius(n);
        let m = self.angles(n);
        (0..m).map(|j| C64::from_polar(r, 2.0 * PI * j as f64 / m as f64)).collect()
    }

    /// `(n, point)` for every grid point.
    pub fn points(&self) -> Vec<(u32, C64)> {
        (0..=self.config.n_max).flat_map(|n| self.points_at(n).into_iter().map(move |z| (n, z))).collect()
    }

    /// Trace levels `n_max - 6, n_max - 4, n_max - 2, n_max` (clamped, distinct).
    pub fn levels(&self) -> Vec<u32> {
        let n = self.config.n_max as i64;
        let mut v: Vec<u32> = [n - 6, n - 4, n - 2, n].iter().map(|&k| k.max(0) as u32).collect();
        v.dedup();
        v
    }

    /// Coarser copy for expensive per-point objectives.
    pub fn capped(&self, n_max: u32, angle_cap: usize) -> Self {
        let mut c = self.config.clone();
        c.n_max = c.n_max.min(n_max);
        c.angle_cap = c.angle_cap.min(angle_cap);
        MobiusGrid { config: c }
    }
}
