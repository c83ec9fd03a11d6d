use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::func::FunctionExpr;
use crate::norms::grid::{GridConfig, MobiusGrid};
use crate::norms::report::ConstantReport;
use crate::norms::space::SpaceSpec;
use crate::norms::sup::{kernel_sup, pointwise_sup};
use crate::quad::engine::{KernelEngine, KernelKind};
use crate::quad::scheme::{Density, DiscScheme, SchemeConfig};

/// Quadrature scheme and parameter grid shared by all estimates.
#[derive(Clone, Debug)]
pub struct NormContext {
    pub scheme: DiscScheme,
    /// Same scheme refined toward the origin, for kernels singular at `a`.
    pub wscheme: DiscScheme,
    pub grid: MobiusGrid,
}

/// Grid depth and angle cap used for objectives evaluated point by point
/// with a full disc integral (Green, pseudo-hyperbolic, BMOA).
pub const POINTWISE_GRID_DEPTH: u32 = 10;
pub const POINTWISE_GRID_ANGLES: usize = 32;

impl NormContext {
    pub fn new(scheme: SchemeConfig, grid: GridConfig) -> Result<Self> {
        let mut w = scheme.clone();
        w.inner_octaves = 16;
        w.angles = w.angles.min(128);
        Ok(NormContext { scheme: DiscScheme::new(scheme)?, wscheme: DiscScheme::new(w)?, grid: MobiusGrid::new(grid)? })
    }

    pub fn default_context() -> Self {
        Self::new(SchemeConfig::default(), GridConfig::default()).expect("default context")
    }

    fn pointwise_grid(&self) -> MobiusGrid {
        self.grid.capped(POINTWISE_GRID_DEPTH, POINTWISE_GRID_ANGLES)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LogVariant {
    Standard,
    PseudoII,
}

fn log_weight(rho: f64, alpha: f64) -> f64 {
    if alpha == 0.0 {
        1.0
    } else {
        (2.0 / (1.0 - rho)).ln().powf(2.0 * alpha)
    }
}

/// Radial integral `int w(|z|) g(z) dA` with a tail estimate beyond `r_max`
/// from the outermost ring, reported by octave.
fn radial_integral(
    scheme: &DiscScheme,
    f: &FunctionExpr,
    g: impl Fn(C64) -> Result<f64>,
    weight: impl Fn(f64) -> f64,
    tail_weight: f64,
) -> Result<ConstantReport> {
    let dens = scheme.density_of(f, g);
    let means = scheme.ring_means(&dens)?;
    let contrib: Vec<f64> = scheme.rings.iter().zip(&means).map(|(ring, m)| ring.weight * weight(ring.r) * m).collect();
    let n = scheme.config.octaves;
    let mut levels: Vec<u32> = [n as i64 - 6, n as i64 - 4, n as i64 - 2].iter().filter(|&&k| k > 0).map(|&k| k as u32).collect();
    levels.push(n + 1);
    let sums = scheme.partial_sums(&contrib, &levels);
    let mut lv: Vec<(f64, f64)> = levels.iter().zip(&sums).map(|(&l, &s)| (l.min(n) as f64, s)).collect();
    lv.dedup_by(|a, b| a.0 == b.0);
    let total = *sums.last().unwrap();
    let tail = means.last().copied().unwrap_or(0.0) * tail_weight;
    Ok(ConstantReport::from_levels(&lv, Some((total + tail, None)), None))
}

/// `int |F'(w)|^2 omega(|w|) dA(w)` with `F = f o phi_a`.
fn wdomain_integral(ctx: &NormContext, f: &FunctionExpr, a: C64, omega: &dyn Fn(f64) -> f64) -> Result<f64> {
    let comp = FunctionExpr::compose(f.clone(), a);
    let dens = Density::new(
        |w: C64| Ok(comp.djet(w)?[0].norm_sqr() * omega(w.norm())),
        |r| ctx.wscheme.resolution_for(&comp, r),
    );
    ctx.wscheme.integrate(&dens)
}

fn qs_engine<'a>(ctx: &'a NormContext, f: &'a FunctionExpr, kind: KernelKind) -> Result<KernelEngine<'a>> {
    let dens = ctx.scheme.density_of(f, move |z| Ok(f.djet(z)?[0].norm_sqr()));
    KernelEngine::new(&ctx.scheme, dens, kind)
}

/// `int |f'|^2 (1 - |phi_a|^2)^s dA` at one point.
pub fn qs_integral_at(f: &FunctionExpr, s: f64, a: C64, ctx: &NormContext) -> Result<f64> {
    let e = qs_engine(ctx, f, KernelKind::Conformal(s))?;
    let spec = e.spectra(&[a.norm()])?.pop().unwrap();
    Ok(spec.value_at(a.arg()))
}

pub fn seminorm(space: SpaceSpec, f: &FunctionExpr, ctx: &NormContext) -> Result<ConstantReport> {
    space.validate()?;
    f.validate()?;
    let rt = 1.0 - ctx.scheme.r_max;
    match space {
        SpaceSpec::Bloch => pointwise_sup(|z| Ok((1.0 - z.norm_sqr()) * f.djet(z)?[0].norm()), &ctx.grid),
        SpaceSpec::BlochLog { alpha } => pointwise_sup(
            |z| {
                let t = 1.0 - z.norm_sqr();
                Ok(t * (2.0 / t).ln().powf(alpha) * f.djet(z)?[0].norm())
            },
            &ctx.grid,
        ),
        SpaceSpec::Besov { p } if p == 1.0 => {
            Ok(radial_integral(&ctx.scheme, f, |z| Ok(f.djet(z)?[1].norm()), |_| 1.0, 2.0 * rt)?)
        }
        SpaceSpec::Besov { p } => {
            let rep = radial_integral(
                &ctx.scheme,
                f,
                |z| Ok(f.djet(z)?[0].norm().powf(p)),
                |r| (p - 1.0) * (1.0 - r).powf(p - 2.0),
                2.0 * rt.powf(p - 1.0),
            )?;
            Ok(root(rep, p))
        }
        SpaceSpec::DirichletType { s } => {
            let rep = radial_integral(
                &ctx.scheme,
                f,
                |z| Ok(f.djet(z)?[0].norm_sqr()),
                |r| (1.0 - r * r).powf(s),
                2.0 * 2f64.powf(s) * rt.powf(s + 1.0) / (s + 1.0),
            )?;
            Ok(rep.sqrt())
        }
        SpaceSpec::Qs { s } => {
            let e = qs_engine(ctx, f, KernelKind::Conformal(s))?;
            Ok(kernel_sup(&e, |_| 1.0, &ctx.grid)?.sqrt())
        }
        SpaceSpec::QsLog { s, alpha } => {
            let e = qs_engine(ctx, f, KernelKind::Conformal(s))?;
            Ok(kernel_sup(&e, |rho| log_weight(rho, alpha), &ctx.grid)?.sqrt())
        }
        SpaceSpec::QsGreen { s } => {
            let omega = move |r: f64| (1.0 / r).ln().powf(s);
            Ok(pointwise_sup(|a| wdomain_integral(ctx, f, a, &omega), &ctx.pointwise_grid())?.sqrt())
        }
        SpaceSpec::QsLogAlt { s, alpha } => Ok(pseudo_constant(f, s, alpha, ctx)?.sqrt()),
        SpaceSpec::BmoaStar => pointwise_sup(|a| bmoa_at(f, a, ctx), &ctx.pointwise_grid()),
    }
}

fn root(mut rep: ConstantReport, p: f64) -> ConstantReport {
    rep.value = rep.value.max(0.0).powf(1.0 / p);
    for t in rep.refinement_trace.iter_mut() {
        t.1 = t.1.max(0.0).powf(1.0 / p);
    }
    rep.growth_slope /= p;
    rep
}

fn pseudo_constant(f: &FunctionExpr, s: f64, alpha: f64, ctx: &NormContext) -> Result<ConstantReport> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::domain(format!("pseudo-hyperbolic kernel needs 0 < s < 1, got {s}")));
    }
    let omega = move |r: f64| (1.0 / (r * r) - 1.0).powf(s);
    pointwise_sup(|a| Ok(log_weight(a.norm(), alpha) * wdomain_integral(ctx, f, a, &omega)?), &ctx.pointwise_grid())
}

/// `||f o phi_a - f(a)||_{H^2}`, sampled on the circle of radius `r_max`.
fn bmoa_at(f: &FunctionExpr, a: C64, ctx: &NormContext) -> Result<f64> {
    let comp = FunctionExpr::compose(f.clone(), a);
    let r = ctx.scheme.r_max;
    let m = ctx.scheme.resolution_for(&comp, r);
    let fa = f.eval(a)?;
    let mut acc = 0.0;
    for l in 0..m {
        let w = C64::from_polar(r, 2.0 * std::f64::consts::PI * l as f64 / m as f64);
        acc += (comp.eval(w)? - fa).norm_sqr();
    }
    Ok((acc / m as f64).sqrt())
}

/// `|f(0)| + rho_X(f)`; the `B^1` norm also adds `|f'(0)|`.
pub fn norm(space: SpaceSpec, f: &FunctionExpr, ctx: &NormContext) -> Result<f64> {
    let j = f.jet(C64::default())?;
    let extra = if space == (SpaceSpec::Besov { p: 1.0 }) { j[1].norm() } else { 0.0 };
    Ok(j[0].norm() + extra + seminorm(space, f, ctx)?.value)
}

/// `max_a |f(a) - f(0)| / (||f||_{B^p} (log 2/(1-|a|^2))^{1/p'})`.
pub fn growth_margin(f: &FunctionExpr, p: f64, points: &[C64], ctx: &NormContext) -> Result<f64> {
    if !(p > 1.0) {
        return Err(Error::domain("growth margin needs p > 1"));
    }
    if points.is_empty() {
        return Err(Error::EmptyInput("growth margin points".into()));
    }
    let nb = norm(SpaceSpec::Besov { p }, f, ctx)?;
    let f0 = f.eval(C64::default())?;
    let q = 1.0 - 1.0 / p;
    let mut best: f64 = 0.0;
    for &a in points {
        let g = (2.0 / (1.0 - a.norm_sqr())).ln().powf(q);
        best = best.max((f.eval(a)? - f0).norm() / (nb * g));
    }
    Ok(best)
}

/// `sup_a (log 2/(1-|a|))^{2 alpha} int |g'|^2 k_s(z, a) dA` with the
/// conformal kernel or the pseudo-hyperbolic one.
pub fn log_q_constant(g: &FunctionExpr, s: f64, alpha: f64, variant: LogVariant, ctx: &NormContext) -> Result<ConstantReport> {
    if !(s > 0.0) || !(alpha >= 0.0) {
        return Err(Error::domain("log Q constant needs s > 0 and alpha >= 0"));
    }
    g.validate()?;
    match variant {
        LogVariant::Standard => {
            let e = qs_engine(ctx, g, KernelKind::Conformal(s))?;
            kernel_sup(&e, |rho| log_weight(rho, alpha), &ctx.grid)
        }
        LogVariant::PseudoII => pseudo_constant(g, s, alpha, ctx),
    }
}

/// Engine for `int |f'|^2 k dA`, exposed for scans.
pub fn derivative_engine<'a>(ctx: &'a NormContext, f: &'a FunctionExpr, kind: KernelKind) -> Result<KernelEngine<'a>> {
    qs_engine(ctx, f, kind)
}
