//! Tensor quadrature on the disc: geometric radial bands toward the
//! boundary, Gauss-Legendre in `r`, uniform angles per ring.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::func::FunctionExpr;
use crate::quad::gauss::gauss_on;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SchemeConfig {
    pub bands_per_octave: u32,
    /// `r_max = 1 - 2^{-octaves}`.
    pub octaves: u32,
    pub nodes_per_band: usize,
    /// Base angle count, rounded up to a gap-safe prime.
    pub angles: usize,
    /// Extra geometric bands toward the origin, for weights singular at 0.
    pub inner_octaves: u32,
    /// Samples per feature width on a ring.
    pub oversample: f64,
    /// Samples per kernel width before switching to cell averages.
    pub kernel_oversample: f64,
    /// Maximum number of angle doublings per ring.
    pub max_doublings: u32,
}

impl Default for SchemeConfig {
    fn default() -> Self {
        SchemeConfig {
            bands_per_octave: 2,
            octaves: 20,
            nodes_per_band: 4,
            angles: 1024,
            inner_octaves: 0,
            oversample: 8.0,
            kernel_oversample: 24.0,
            max_doublings: 8,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Ring {
    pub r: f64,
    /// Area weight: `sum_i weight_i * mean_i` integrates against `dA`.
    pub weight: f64,
}

#[derive(Clone, Debug)]
pub struct DiscScheme {
    pub config: SchemeConfig,
    pub rings: Vec<Ring>,
    pub r_max: f64,
    /// Base angle count, a prime `P` with `ord_P(2) > 64`.
    pub base_angles: usize,
}

/// Density on the disc together with the number of angles it needs on a ring.
pub struct Density<'a> {
    pub eval: Box<dyn Fn(C64) -> Result<f64> + 'a>,
    pub resolution: Box<dyn Fn(f64) -> usize + 'a>,
}

impl<'a> Density<'a> {
    pub fn new(eval: impl Fn(C64) -> Result<f64> + 'a, resolution: impl Fn(f64) -> usize + 'a) -> Self {
        Density { eval: Box::new(eval), resolution: Box::new(resolution) }
    }
}

fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn order_of_two(p: usize) -> usize {
    let mut x = 2 % p;
    let mut k = 1;
    while x != 1 {
        x = x * 2 % p;
        k += 1;
        if k > p {
            return 0;
        }
    }
    k
}

/// Smallest prime `P >= n` with `ord_P(2) > 64`: then `P` divides no
/// difference `2^j - 2^k` with `j, k <= 64`, so uniform `P`-point rules
/// integrate `|gap series|^2` exactly.
pub fn gap_safe_prime(n: usize) -> usize {
    let mut p = n.max(67);
    loop {
        if is_prime(p) && order_of_two(p) > 64 {
            return p;
        }
        p += 1;
    }
}

impl DiscScheme {
    pub fn new(config: SchemeConfig) -> Result<Self> {
        if config.bands_per_octave == 0 || config.octaves == 0 || config.nodes_per_band == 0 {
            return Err(Error::Config("scheme needs positive band and node counts".into()));
        }
        if config.angles < 16 {
            return Err(Error::Config("scheme needs at least 16 angles".into()));
        }
        let q = config.bands_per_octave as f64;
        let nb = config.octaves * config.bands_per_octave;
        let mut edges: Vec<f64> = Vec::new();
        if config.inner_octaves > 0 {
            // [0, 2^-K], then geometric up to the first outer edge.
            edges.push(0.0);
            let first = 1.0 - 2f64.powf(-1.0 / q);
            for j in (0..config.inner_octaves * config.bands_per_octave).rev() {
                edges.push(first * 2f64.powf(-(j as f64 + 1.0) / q));
            }
        } else {
            edges.push(0.0);
        }
        for j in 1..=nb {
            edges.push(1.0 - 2f64.powf(-(j as f64) / q));
        }
        let mut rings = Vec::new();
        for w in edges.windows(2) {
            for (r, wt) in gauss_on(config.nodes_per_band, w[0], w[1]) {
                rings.push(Ring { r, weight: 2.0 * r * wt });
            }
        }
        let r_max = *edges.last().unwrap();
        let base_angles = gap_safe_prime(config.angles);
        Ok(DiscScheme { config, rings, r_max, base_angles })
    }

    pub fn default_scheme() -> Self {
        Self::new(SchemeConfig::default()).expect("default scheme")
    }

    /// Angle count `P * 2^e` on a ring, at least `need`.
    pub fn angles_for(&self, need: usize) -> usize {
        let p = self.base_angles;
        let mut m = p;
        let mut e = 0;
        while m < need && e < self.config.max_doublings {
            m *= 2;
            e += 1;
        }
        m
    }

    /// Samples per turn needed to resolve `f` (and its derivatives) on the
    /// circle of radius `r`, before rounding to the scheme's angle counts.
    pub fn angular_need(&self, f: &FunctionExpr, r: f64) -> f64 {
        let mut need: f64 = 1.0;
        for b in f.features() {
            need = need.max(self.config.oversample / (1.0 - b.norm() * r).max(1e-300));
        }
        if !f.is_gap_like() {
            if let Some(d) = f.poly_degree() {
                let d_eff = (d as f64).min(40.0 / (1.0 - r));
                need = need.max(3.0 * d_eff + 4.0);
            }
        }
        need.min(1e12)
    }

    /// Angle count of the scheme resolving `f` on the circle of radius `r`.
    pub fn resolution_for(&self, f: &FunctionExpr, r: f64) -> usize {
        self.angles_for(self.angular_need(f, r).max(self.base_angles as f64) as usize)
    }

    /// Density `g(f'(z), z)`-style closure with resolution taken from `f`.
    pub fn density_of<'a>(&'a self, f: &'a FunctionExpr, eval: impl Fn(C64) -> Result<f64> + 'a) -> Density<'a> {
        Density::new(eval, move |r| self.resolution_for(f, r))
    }

    pub fn ring_samples(&self, density: &Density, r: f64) -> Result<Vec<f64>> {
        let m = (density.resolution)(r);
        (0..m)
            .map(|l| (density.eval)(C64::from_polar(r, 2.0 * PI * l as f64 / m as f64)))
            .collect()
    }

    pub fn ring_means(&self, density: &Density) -> Result<Vec<f64>> {
        self.rings
            .iter()
            .map(|ring| {
                let s = self.ring_samples(density, ring.r)?;
                Ok(s.iter().sum::<f64>() / s.len() as f64)
            })
            .collect()
    }

    pub fn integrate(&self, density: &Density) -> Result<f64> {
        let means = self.ring_means(density)?;
        Ok(self.rings.iter().zip(&means).map(|(ring, m)| ring.weight * m).sum())
    }

    /// Partial sums `int_{|z| < 1 - 2^{-n}}` of ring contributions, for each `n` in `levels`.
    pub fn partial_sums(&self, contributions: &[f64], levels: &[u32]) -> Vec<f64> {
        levels
            .iter()
            .map(|&n| {
                let edge = 1.0 - 2f64.powi(-(n as i32));
                self.rings
                    .iter()
                    .zip(contributions)
                    .filter(|(ring, _)| ring.r < edge)
                    .map(|(_, c)| c)
                    .sum()
            })
            .collect()
    }

    /// Same scheme with every ring count and angle count doubled.
    pub fn refined(&self) -> Result<Self> {
        let mut c = self.config.clone();
        c.nodes_per_band *= 2;
        c.angles *= 2;
        Self::new(c)
    }
}

/// `int density dA` with uniform base angles on every ring.
pub fn disc_integral(density: impl Fn(C64) -> Result<f64>, scheme: &DiscScheme) -> Result<f64> {
    let p = scheme.base_angles;
    let d = Density::new(density, move |_| p);
    scheme.integrate(&d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_density_gives_r_max_squared() {
        let s = DiscScheme::default_scheme();
        let v = disc_integral(|_| Ok(1.0), &s).unwrap();
        assert!((v - s.r_max * s.r_max).abs() < 1e-13);
    }

    #[test]
    fn weighted_area_closed_form() {
        let s = DiscScheme::default_scheme();
        for t in [0.25, 1.0, 2.0] {
            let v = disc_integral(|z: C64| Ok((1.0 - z.norm_sqr()).powf(t)), &s).unwrap();
            assert!((v - 1.0 / (t + 1.0)).abs() < 1e-6, "s={t}: {v}");
        }
    }

    #[test]
    fn inner_bands_handle_singular_weight() {
        let s = DiscScheme::new(SchemeConfig { inner_octaves: 30, ..Default::default() }).unwrap();
        // int |z|^{-1} dA = 2
        let v = disc_integral(|z: C64| Ok(1.0 / z.norm()), &s).unwrap();
        assert!((v - 2.0 * s.r_max).abs() < 1e-8, "{v}");
    }

    #[test]
    fn prime_is_gap_safe() {
        let p = gap_safe_prime(1024);
        assert!(p >= 1024);
        for j in 1..=64u32 {
            let mut x = 1usize;
            for _ in 0..j {
                x = x * 2 % p;
            }
            assert_ne!(x, 1);
        }
    }
}
