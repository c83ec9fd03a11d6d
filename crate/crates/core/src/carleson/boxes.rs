use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::carleson::measure::DensityMeasure;
use crate::error::{Error, Result};
use crate::quad::gauss_on;

/// Carleson box `S(a)`: radii `[|a|, 1)`, angles within `pi (1 - |a|)` of
/// `arg a`. `a = 0` is the whole disc.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxSpec {
    pub a: C64,
}

/// Minimum number of angular nodes across a box arc.
const MIN_ARC_NODES: f64 = 24.0;

impl BoxSpec {
    pub fn new(a: C64) -> Result<Self> {
        if !(a.norm() < 1.0) {
            return Err(Error::domain(format!("box center {a} is not in the disc")));
        }
        Ok(BoxSpec { a })
    }

    pub fn is_full_disc(&self) -> bool {
        self.a.norm() == 0.0
    }

    /// Half the angular width of the arc.
    pub fn half_width(&self) -> f64 {
        if self.is_full_disc() {
            PI
        } else {
            PI * (1.0 - self.a.norm())
        }
    }

    pub fn contains(&self, z: C64) -> bool {
        if self.is_full_disc() {
            return z.norm() < 1.0;
        }
        let d = (z.arg() - self.a.arg() + PI).rem_euclid(2.0 * PI) - PI;
        z.norm() >= self.a.norm() && z.norm() < 1.0 && d.abs() <= self.half_width()
    }
}

/// Radial nodes `(r, w)` with `sum w g(r) ~ int_t^1 g(r) r dr`, on
/// geometric bands covering `octaves` halvings of `1 - t`.
fn radial_nodes(t: f64, octaves: u32, bands_per_octave: u32, nodes: usize) -> Vec<(f64, f64)> {
    let u0 = if t <= 0.0 { 0.0 } else { -(1.0 - t).log2() };
    let q = bands_per_octave as f64;
    let mut out = Vec::new();
    let mut lo = t.max(0.0);
    for j in 1..=octaves * bands_per_octave {
        let hi = 1.0 - 2f64.powf(-(u0 + j as f64 / q));
        for (r, w) in gauss_on(nodes, lo, hi) {
            out.push((r, w * r));
        }
        lo = hi;
    }
    out
}

/// `mu(S(a))`. Radially the box is integrated with geometric bands down to
/// `(1 - |a|) 2^{-octaves}` from the boundary; on each ring a uniform
/// angle grid is used whose cells are clipped against the arc exactly.
pub fn box_mass(mu: &DensityMeasure, b: &BoxSpec) -> Result<f64> {
    if mu.is_zero() {
        return Ok(0.0);
    }
    Ok(mu.scale * raw_box_mass(mu, b)?)
}

pub(crate) fn raw_box_mass(mu: &DensityMeasure, b: &BoxSpec) -> Result<f64> {
    let cfg = &mu.scheme.config;
    let t = b.a.norm();
    let h = b.half_width();
    let alpha = b.a.arg();
    let mut total = 0.0;
    for (r, w) in radial_nodes(t, cfg.octaves, cfg.bands_per_octave, cfg.nodes_per_band) {
        // At least MIN_ARC_NODES cells across the arc.
        let m = mu.angular_need(r).max(MIN_ARC_NODES * PI / h).ceil() as usize;
        let cell = 2.0 * PI / m as f64;
        let mut acc = 0.0;
        if b.is_full_disc() {
            for l in 0..m {
                acc += mu.raw_density(C64::from_polar(r, l as f64 * cell))?;
            }
            acc *= cell;
        } else {
            let (lo, hi) = (alpha - h, alpha + h);
            let l0 = ((lo / cell) - 0.5).floor() as i64;
            let l1 = ((hi / cell) + 0.5).ceil() as i64;
            for l in l0..=l1 {
                let c = l as f64 * cell;
                let len = (hi.min(c + 0.5 * cell) - lo.max(c - 0.5 * cell)).max(0.0);
                if len > 0.0 {
                    acc += len * mu.raw_density(C64::from_polar(r, c))?;
                }
            }
        }
        total += w * acc / PI;
    }
    Ok(total)
}
