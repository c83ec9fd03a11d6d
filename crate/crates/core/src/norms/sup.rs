//! Suprema over the Möbius grid with local refinement. Every reported value
//! is attained at an evaluated point, so it is a lower bound for the true
//! supremum.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::error::Result;
use crate::norms::grid::MobiusGrid;
use crate::norms::report::ConstantReport;
use crate::quad::engine::KernelEngine;

fn radius_of(u: f64) -> f64 {
    if u <= 0.0 {
        0.0
    } else {
        1.0 - 2f64.powf(-u)
    }
}

fn level_values(per_radius: &[(u32, f64, C64)], grid: &MobiusGrid) -> (Vec<(f64, f64)>, f64, C64, u32) {
    let mut best = (f64::NEG_INFINITY, C64::default(), 0u32);
    let mut cum = Vec::new();
    for &(n, v, z) in per_radius {
        if v > best.0 {
            best = (v, z, n);
        }
        cum.push((n, best.0));
    }
    let levels = grid
        .levels()
        .iter()
        .map(|&l| {
            let v = cum.iter().filter(|c| c.0 <= l).map(|c| c.1).fold(f64::NEG_INFINITY, f64::max);
            (l as f64, v)
        })
        .collect();
    (levels, best.0, best.1, best.2)
}

/// Local searches started from the best grid points.
const SEARCH_STARTS: usize = 8;

/// Supremum of a pointwise objective.
pub fn pointwise_sup<F>(obj: F, grid: &MobiusGrid) -> Result<ConstantReport>
where
    F: Fn(C64) -> Result<f64>,
{
    let mut per_radius = Vec::new();
    let mut all = Vec::new();
    for n in 0..=grid.config.n_max {
        let mut best = (f64::NEG_INFINITY, C64::default());
        for z in grid.points_at(n) {
            let v = obj(z)?;
            all.push((v, z, n));
            if v > best.0 {
                best = (v, z);
            }
        }
        per_radius.push((n, best.0, best.1));
    }
    let (levels, _, w0, _) = level_values(&per_radius, grid);
    let refined = if grid.config.refine {
        // Stable sort keeps grid order among ties, so the result is deterministic.
        all.sort_by(|a, b| b.0.total_cmp(&a.0));
        let mut best: Option<(f64, C64)> = None;
        for &(v, z, n) in all.iter().take(SEARCH_STARTS) {
            let (bv, bz) = pattern_search(&obj, v, z, n, grid)?;
            if best.map_or(true, |(b, _)| bv > b) {
                best = Some((bv, bz));
            }
        }
        best.map(|(v, w)| (v, Some(w)))
    } else {
        None
    };
    Ok(ConstantReport::from_levels(&levels, refined, Some(w0)))
}

fn pattern_search<F>(obj: &F, v0: f64, w0: C64, n0: u32, grid: &MobiusGrid) -> Result<(f64, C64)>
where
    F: Fn(C64) -> Result<f64>,
{
    let to_u = |z: C64| if z.norm() == 0.0 { 0.0 } else { -(1.0 - z.norm()).log2() };
    let mut u = to_u(w0);
    let mut alpha = w0.arg();
    let mut best = v0;
    let mut du = 0.5;
    let mut da = PI / grid.angles(n0.max(1)) as f64;
    let u_max = grid.config.n_max as f64 + 1.0;
    let iters = 80;
    for _ in 0..iters {
        let mut improved = false;
        for (su, sa) in [(du, 0.0), (-du, 0.0), (0.0, da), (0.0, -da)] {
            let nu = (u + su).clamp(0.0, u_max);
            let na = alpha + sa;
            let z = C64::from_polar(radius_of(nu), na);
            let v = obj(z)?;
            if v > best {
                best = v;
                u = nu;
                alpha = na;
                improved = true;
            }
        }
        if !improved {
            du *= 0.5;
            da *= 0.5;
            if du < 1e-7 {
                break;
            }
        }
    }
    Ok((best, C64::from_polar(radius_of(u), alpha)))
}

/// Supremum of `factor(|a|) * int density * kernel(., a)` over the grid,
/// evaluated by the kernel engine. Grid angles snap to the nearest base
/// angle of the engine; the witness is the snapped point.
pub fn kernel_sup<W>(engine: &KernelEngine, factor: W, grid: &MobiusGrid) -> Result<ConstantReport>
where
    W: Fn(f64) -> f64,
{
    let p = engine.base_angles();
    let ns: Vec<u32> = (0..=grid.config.n_max).collect();
    let radii: Vec<f64> = ns.iter().map(|&n| MobiusGrid::radius(n)).collect();
    let spectra = engine.spectra(&radii)?;
    let mut per_radius = Vec::new();
    for (&n, spec) in ns.iter().zip(&spectra) {
        let bins = engine.bins(spec);
        let w = factor(spec.rho);
        let mut best = (f64::NEG_INFINITY, C64::default());
        for z in grid.points_at(n) {
            let k = ((z.arg().rem_euclid(2.0 * PI)) * p as f64 / (2.0 * PI)).round() as usize % p;
            let v = w * bins[k];
            if v > best.0 {
                best = (v, C64::from_polar(spec.rho, 2.0 * PI * k as f64 / p as f64));
            }
        }
        per_radius.push((n, best.0, best.1));
    }
    let (levels, v0, w0, _) = level_values(&per_radius, grid);
    let refined = if grid.config.refine {
        Some(refine_kernel(engine, &factor, v0, w0, grid).map(|(v, w)| (v, Some(w)))?)
    } else {
        None
    };
    Ok(ConstantReport::from_levels(&levels, refined, Some(w0)))
}

fn refine_kernel<W>(engine: &KernelEngine, factor: &W, v0: f64, w0: C64, grid: &MobiusGrid) -> Result<(f64, C64)>
where
    W: Fn(f64) -> f64,
{
    let p = engine.base_angles();
    let mut best = (v0, w0);
    let mut best_u = if w0.norm() == 0.0 { 0.0 } else { -(1.0 - w0.norm()).log2() };
    let u_max = grid.config.n_max as f64 + 1.0;
    let mut best_spec = None;
    // Radial search in batches of offsets that shrink by a factor 4 per round.
    let mut step = 0.25;
    for _ in 0..grid.config.refine_iters.min(6) {
        let mut us: Vec<f64> = [-3.0, -2.0, -1.0, 1.0, 2.0, 3.0]
            .iter()
            .map(|k| (best_u + k * step).clamp(0.0, u_max))
            .collect();
        us.push(best_u);
        us.dedup();
        let radii: Vec<f64> = us.iter().map(|&u| radius_of(u)).collect();
        let spectra = engine.spectra(&radii)?;
        for (u, spec) in us.iter().zip(spectra) {
            let bins = engine.bins(&spec);
            let w = factor(spec.rho);
            let (k, v) = bins
                .iter()
                .enumerate()
                .map(|(k, &b)| (k, w * b))
                .fold((0, f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc });
            if v > best.0 {
                best = (v, C64::from_polar(spec.rho, 2.0 * PI * k as f64 / p as f64));
                best_u = *u;
                best_spec = Some(spec);
            } else if best_spec.is_none() && spec.rho == best.1.norm() {
                best_spec = Some(spec);
            }
        }
        step *= 0.25;
    }
    let g = 0.5 * (5f64.sqrt() - 1.0);
    // Angular golden-section search at the best radius, off the base angles.
    let rho = best.1.norm();
    if rho > 0.0 {
        let spec = match best_spec {
            Some(sp) if sp.rho == rho => sp,
            _ => engine.spectra(&[rho])?.pop().unwrap(),
        };
        let w = factor(rho);
        let a0 = best.1.arg();
        let h = 2.0 * PI / p as f64;
        let (mut lo, mut hi) = (a0 - h, a0 + h);
        let mut x1 = hi - g * (hi - lo);
        let mut x2 = lo + g * (hi - lo);
        let mut f1 = w * spec.value_at(x1);
        let mut f2 = w * spec.value_at(x2);
        for _ in 0..40 {
            if f1 >= f2 {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - g * (hi - lo);
                f1 = w * spec.value_at(x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + g * (hi - lo);
                f2 = w * spec.value_at(x2);
            }
        }
        for (x, f) in [(x1, f1), (x2, f2)] {
            if f > best.0 {
                best = (f, C64::from_polar(rho, x));
            }
        }
    }
    Ok(best)
}
