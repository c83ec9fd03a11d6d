//! Rotation-invariant kernel integrals `int g(z) k(z, a) dA(z)` for many
//! `a` at once. On each ring the angular integral is a circular correlation
//! of density samples with kernel samples, done in the Fourier domain; the
//! contributions of all rings are summed per Fourier mode and evaluated at
//! the base angles with one inverse FFT per radius. Kernel samples are point
//! values when the kernel is resolved on the ring and cell averages
//! (product integration) otherwise.

use std::cell::RefCell;
use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use rustfft::{Fft, FftPlanner};

use crate::error::Result;
use crate::quad::gauss::gauss_on;
use crate::quad::scheme::{Density, DiscScheme};

/// Spectra are cached when the total sample count stays below this.
const CACHE_LIMIT: usize = 1 << 23;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum KernelKind {
    /// `(1 - |phi_a(z)|^2)^s`
    Conformal(f64),
    /// `((1 - |a|^2) / |1 - conj(a) z|^2)^s`
    Zhao(f64),
}

impl KernelKind {
    #[inline]
    pub fn value(&self, rho: f64, r: f64, theta: f64) -> f64 {
        let x = rho * r;
        let sh = (0.5 * theta).sin();
        let d = (1.0 - x) * (1.0 - x) + 4.0 * x * sh * sh;
        match *self {
            KernelKind::Conformal(s) => ((1.0 - rho * rho) * (1.0 - r * r) / d).powf(s),
            KernelKind::Zhao(s) => ((1.0 - rho * rho) / d).powf(s),
        }
    }

    /// Direct evaluation at a pair of points.
    pub fn at(&self, a: C64, z: C64) -> f64 {
        self.value(a.norm(), z.norm(), z.arg() - a.arg())
    }
}

/// Fourier modes `m = -half..=half` of the kernel integral as a function of
/// the angle of `a`, for one radius `rho`.
#[derive(Clone, Debug)]
pub struct RadiusSpectrum {
    pub rho: f64,
    pub half: usize,
    pub modes: Vec<C64>,
}

impl RadiusSpectrum {
    pub fn value_at(&self, alpha: f64) -> f64 {
        let h = self.half as i64;
        let step = C64::from_polar(1.0, alpha);
        let mut e = C64::from_polar(1.0, -(h as f64) * alpha);
        let mut acc = 0.0;
        for c in &self.modes {
            acc += (c * e).re;
            e *= step;
        }
        acc
    }
}

pub struct KernelEngine<'a> {
    scheme: &'a DiscScheme,
    density: Density<'a>,
    kind: KernelKind,
    ring_m: Vec<usize>,
    cache: Option<Vec<Vec<C64>>>,
    planner: RefCell<FftPlanner<f64>>,
}

fn fft(planner: &RefCell<FftPlanner<f64>>, n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    let mut p = planner.borrow_mut();
    if inverse {
        p.plan_fft_inverse(n)
    } else {
        p.plan_fft_forward(n)
    }
}

impl<'a> KernelEngine<'a> {
    pub fn new(scheme: &'a DiscScheme, density: Density<'a>, kind: KernelKind) -> Result<Self> {
        let ring_m: Vec<usize> = scheme.rings.iter().map(|ring| (density.resolution)(ring.r)).collect();
        let total: usize = ring_m.iter().sum();
        let mut engine = KernelEngine {
            scheme,
            density,
            kind,
            ring_m,
            cache: None,
            planner: RefCell::new(FftPlanner::new()),
        };
        if total <= CACHE_LIMIT {
            let spectra = (0..engine.scheme.rings.len())
                .map(|i| engine.ring_spectrum(i))
                .collect::<Result<Vec<_>>>()?;
            engine.cache = Some(spectra);
        }
        Ok(engine)
    }

    pub fn base_angles(&self) -> usize {
        self.scheme.base_angles
    }

    fn ring_spectrum(&self, i: usize) -> Result<Vec<C64>> {
        let ring = &self.scheme.rings[i];
        let m = self.ring_m[i];
        let mut buf: Vec<C64> = (0..m)
            .map(|l| Ok(C64::new((self.density.eval)(C64::from_polar(ring.r, 2.0 * PI * l as f64 / m as f64))?, 0.0)))
            .collect::<Result<_>>()?;
        fft(&self.planner, m, false).process(&mut buf);
        let inv = 1.0 / m as f64;
        for c in buf.iter_mut() {
            *c *= inv;
        }
        Ok(buf)
    }

    /// Angle count used for the kernel on ring `i` at radius `rho`.
    fn kernel_len(&self, i: usize, rho: f64) -> usize {
        let p = self.scheme.base_angles;
        if rho == 0.0 {
            return p;
        }
        let x = rho * self.scheme.rings[i].r;
        let need = self.scheme.config.kernel_oversample / (1.0 - x);
        let mut m = p;
        while (m as f64) < need && m < self.ring_m[i] {
            m *= 2;
        }
        m.min(self.ring_m[i])
    }

    fn kernel_samples(&self, rho: f64, r: f64, m: usize) -> Vec<f64> {
        let x = rho * r;
        let h = 2.0 * PI / m as f64;
        let mut out = vec![0.0; m];
        let resolved = (m as f64) * (1.0 - x) >= self.scheme.config.kernel_oversample;
        for l in 0..=m / 2 {
            let theta = h * l as f64;
            let v = if resolved {
                self.kind.value(rho, r, theta)
            } else {
                self.cell_average(rho, r, theta, h)
            };
            out[l] = v;
            if l > 0 {
                out[m - l] = v;
            }
        }
        out
    }

    fn cell_average(&self, rho: f64, r: f64, center: f64, h: f64) -> f64 {
        let k = |t: f64| self.kind.value(rho, r, t);
        let lo = center - 0.5 * h;
        let hi = center + 0.5 * h;
        if center > 2.5 * h {
            return gauss_on(2, lo, hi).iter().map(|&(t, w)| w * k(t)).sum::<f64>() / h;
        }
        let width = (1.0 - rho * r).max(1e-300);
        let mut total = 0.0;
        // Integrate |t| over [a, b] with panels graded away from 0.
        let mut graded = |a: f64, b: f64| {
            let mut edges = vec![a];
            let mut t = if a == 0.0 { (0.5 * width).min(b) } else { a + (0.5 * a).min(b - a) };
            while t < b {
                edges.push(t);
                t = (2.0 * t).max(t + 0.5 * width);
            }
            edges.push(b);
            for w in edges.windows(2) {
                if w[1] > w[0] {
                    total += gauss_on(4, w[0], w[1]).iter().map(|&(t, wt)| wt * k(t)).sum::<f64>();
                }
            }
        };
        if lo < 0.0 {
            graded(0.0, -lo);
            graded(0.0, hi);
        } else {
            graded(lo, hi);
        }
        total / h
    }

    /// Fourier modes of the kernel integral at each radius.
    pub fn spectra(&self, radii: &[f64]) -> Result<Vec<RadiusSpectrum>> {
        let lens: Vec<Vec<usize>> = radii
            .iter()
            .map(|&rho| (0..self.scheme.rings.len()).map(|i| self.kernel_len(i, rho)).collect())
            .collect();
        let mut out: Vec<RadiusSpectrum> = radii
            .iter()
            .zip(&lens)
            .map(|(&rho, ls)| {
                let half = ls.iter().map(|m| (m - 1) / 2).max().unwrap_or(0);
                RadiusSpectrum { rho, half, modes: vec![C64::default(); 2 * half + 1] }
            })
            .collect();
        for (i, ring) in self.scheme.rings.iter().enumerate() {
            let owned;
            let dens: &Vec<C64> = match &self.cache {
                Some(c) => &c[i],
                None => {
                    owned = self.ring_spectrum(i)?;
                    &owned
                }
            };
            let mi = self.ring_m[i];
            for (spec, ls) in out.iter_mut().zip(&lens) {
                let m = ls[i];
                let mut ks: Vec<C64> = self
                    .kernel_samples(spec.rho, ring.r, m)
                    .into_iter()
                    .map(|v| C64::new(v, 0.0))
                    .collect();
                fft(&self.planner, m, false).process(&mut ks);
                let scale = ring.weight / m as f64;
                let hk = ((m - 1) / 2) as i64;
                let h = spec.half as i64;
                for mm in -hk..=hk {
                    let kappa = ks[mm.rem_euclid(m as i64) as usize].re * scale;
                    let d = dens[mm.rem_euclid(mi as i64) as usize];
                    spec.modes[(mm + h) as usize] += d * kappa;
                }
            }
        }
        Ok(out)
    }

    /// Values at the base angles `2 pi k / P` for one radius spectrum.
    pub fn bins(&self, spec: &RadiusSpectrum) -> Vec<f64> {
        let p = self.scheme.base_angles;
        let mut folded = vec![C64::default(); p];
        let h = spec.half as i64;
        for (j, c) in spec.modes.iter().enumerate() {
            let m = j as i64 - h;
            folded[m.rem_euclid(p as i64) as usize] += c;
        }
        fft(&self.planner, p, true).process(&mut folded);
        folded.into_iter().map(|c| c.re).collect()
    }

    /// Direct evaluation at arbitrary points, for checks.
    pub fn direct(&self, a: C64) -> Result<f64> {
        let rho = a.norm();
        let alpha = a.arg();
        let mut acc = 0.0;
        for (i, ring) in self.scheme.rings.iter().enumerate() {
            let m = self.ring_m[i];
            let mut s = 0.0;
            for l in 0..m {
                let t = 2.0 * PI * l as f64 / m as f64;
                s += (self.density.eval)(C64::from_polar(ring.r, t))? * self.kind.value(rho, ring.r, t - alpha);
            }
            acc += ring.weight * s / m as f64;
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::scheme::SchemeConfig;

    fn small_scheme() -> DiscScheme {
        DiscScheme::new(SchemeConfig { octaves: 10, angles: 128, ..Default::default() }).unwrap()
    }

    #[test]
    fn matches_direct_evaluation() {
        let s = small_scheme();
        let p = s.base_angles;
        let dens = Density::new(|z: C64| Ok((z - C64::new(0.3, 0.2)).norm_sqr() + z.re), move |_| p);
        let e = KernelEngine::new(&s, dens, KernelKind::Conformal(0.5)).unwrap();
        let spec = e.spectra(&[0.0, 0.6]).unwrap();
        for sp in &spec {
            let bins = e.bins(sp);
            for k in [0usize, 7, 50] {
                let alpha = 2.0 * PI * k as f64 / p as f64;
                let d = e.direct(C64::from_polar(sp.rho, alpha)).unwrap();
                assert!((bins[k] - d).abs() < 1e-10 * d.abs().max(1.0), "{} {}", bins[k], d);
                assert!((sp.value_at(alpha) - d).abs() < 1e-10 * d.abs().max(1.0));
            }
        }
    }

    #[test]
    fn conformal_kernel_of_constant_density() {
        // int (1 - |phi_a|^2) dA = (1 - t^2) sum_n t^{2n} / ((n+1)(n+2)), t = |a|.
        let s = DiscScheme::default_scheme();
        let p = s.base_angles;
        let e = KernelEngine::new(&s, Density::new(|_| Ok(1.0), move |_| p), KernelKind::Conformal(1.0)).unwrap();
        let spec = e.spectra(&[0.0, 0.5, 0.99]).unwrap();
        for sp in &spec {
            let t2 = sp.rho * sp.rho;
            let exact: f64 = (1.0 - t2) * (0..20000).map(|n| t2.powi(n) / ((n + 1) as f64 * (n + 2) as f64)).sum::<f64>();
            let v = e.bins(sp)[3];
            assert!((v - exact).abs() < 1e-6, "rho={} v={v} exact={exact}", sp.rho);
        }
    }
}
