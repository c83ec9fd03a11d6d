//! One pass/fail line per acceptance criterion. Tolerances are fixed here
//! and never loosened to make a line pass.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use cisl::carleson::{box_value_at, carleson_constant, density_from, zhao_values_at, CarlesonMethod, DensityMeasure};
use cisl::func::{dyadic_radius, make_atom, parse_function, series_antiderivative, AtomKind, CoefficientSeries, FunctionExpr, LacunaryCoefficients};
use cisl::gapseries::{divergence_scan, lacunary_membership, m2_gap_bound, Classification, ScanThresholds, SeriesThresholds};
use cisl::harness::{run_suite, Status, SuiteConfig, TheoremId};
use cisl::norms::{ls_slope, norm, seminorm, GridConfig, MobiusGrid, NormContext, SpaceSpec};
use cisl::operators::{apply_operator, backward_shift, divide_inner, toeplitz_conj, OperatorSpec, DIVISION_TOL};
use cisl::quad::{disc_integral, DiscScheme, RadialSchedule};
use cisl::C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Quadrature `Q_s` growth from depth 12 to 24 of `F_p` truncations.
const FP_DIVERGENT_RATIO: f64 = 1.05;
const FP_CONVERGENT_RATIO: f64 = 1.04;

type Outcome = Result<String, String>;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn rand_coeffs(rng: &mut ChaCha8Rng, deg: usize) -> Vec<C64> {
    (0..=deg).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
}

fn poly(v: Vec<C64>) -> FunctionExpr {
    FunctionExpr::Polynomial(CoefficientSeries::new(v))
}

fn max_diff(a: &CoefficientSeries, b: &CoefficientSeries) -> f64 {
    (0..a.len().max(b.len())).map(|k| (a.coeff(k) - b.coeff(k)).norm()).fold(0.0, f64::max)
}

fn require(ok: bool, msg: String) -> Outcome {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn ac1() -> Outcome {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let n = 40;
    let (mut ijm, mut t1, mut rt) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..100 {
        let g = poly(rand_coeffs(&mut rng, 16));
        let f = poly(rand_coeffs(&mut rng, 16));
        let t = apply_operator(&OperatorSpec::volterra(g.clone()), &f, n).map_err(|e| e.to_string())?;
        let i = apply_operator(&OperatorSpec::companion(g.clone()), &f, n).map_err(|e| e.to_string())?;
        let m = apply_operator(&OperatorSpec::multiplier(g.clone()), &f, n).map_err(|e| e.to_string())?;
        let mut lhs = t.add(&i).add(&m.scale(c(-1.0, 0.0)));
        lhs.coeffs[0] += g.eval(C64::default()).unwrap() * f.eval(C64::default()).unwrap();
        ijm = ijm.max(lhs.coeffs.iter().map(|x| x.norm()).fold(0.0, f64::max));
        let one = apply_operator(&OperatorSpec::volterra(g.clone()), &FunctionExpr::constant(1.0), 16).unwrap();
        let mut want = g.taylor(16).unwrap();
        want.coeffs[0] = C64::default();
        t1 = t1.max(max_diff(&one, &want));
        let u = f.taylor(16).unwrap();
        rt = rt.max(max_diff(&series_antiderivative(&u, C64::default()).derivative(), &u));
    }
    let secs = t0.elapsed().as_secs_f64();
    require(
        ijm <= 1e-12 && t1 == 0.0 && rt <= 1e-15 && secs < 1.0,
        format!("identity residual {ijm:.2e} (<= 1e-12), T_g(1) error {t1:.1e} (exact), round trip {rt:.2e} (<= 1e-15), {secs:.3}s (< 1s)"),
    )
}

fn ac2() -> Outcome {
    let ctx = NormContext::default_context();
    let z = FunctionExpr::z();
    let mut errs = vec![];
    let b = seminorm(SpaceSpec::Bloch, &z, &ctx).unwrap().value;
    errs.push(("bloch", (b - 1.0).abs(), 1e-6));
    for p in [1.5f64, 2.0, 3.0] {
        let v = seminorm(SpaceSpec::Besov { p }, &z, &ctx).unwrap().value;
        errs.push(("besov", (v - (2.0 / p).powf(1.0 / p)).abs(), 1e-4));
    }
    let scheme = DiscScheme::default_scheme();
    for s in [0.25f64, 1.0, 2.0] {
        let v = disc_integral(|w| Ok((1.0 - w.norm_sqr()).powf(s)), &scheme).unwrap();
        errs.push(("weighted area", (v - 1.0 / (s + 1.0)).abs(), 1e-6));
    }
    let l = seminorm(SpaceSpec::BlochLog { alpha: 1.0 }, &z, &ctx).unwrap().value;
    errs.push(("log-bloch", (l - 2.0 / std::f64::consts::E).abs(), 1e-4));
    let bad: Vec<_> = errs.iter().filter(|e| !(e.1 <= e.2)).collect();
    let worst = errs.iter().map(|e| format!("{} {:.1e}", e.0, e.1)).collect::<Vec<_>>().join(", ");
    require(bad.is_empty(), format!("errors: {worst}"))
}

fn ac3() -> Outcome {
    let ctx = NormContext::default_context();
    let a = c(0.5, 0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut b_lo, mut b_hi, mut q_lo, mut q_hi) = (f64::MAX, 0.0f64, f64::MAX, 0.0f64);
    for i in 0..10 {
        let f = poly(rand_coeffs(&mut rng, 2 + i));
        let g = FunctionExpr::compose(f.clone(), a);
        let b = seminorm(SpaceSpec::Bloch, &g, &ctx).unwrap().value / seminorm(SpaceSpec::Bloch, &f, &ctx).unwrap().value;
        let q = seminorm(SpaceSpec::Qs { s: 0.5 }, &g, &ctx).unwrap().value
            / seminorm(SpaceSpec::Qs { s: 0.5 }, &f, &ctx).unwrap().value;
        (b_lo, b_hi, q_lo, q_hi) = (b_lo.min(b), b_hi.max(b), q_lo.min(q), q_hi.max(q));
    }
    require(
        b_lo >= 0.99 && b_hi <= 1.01 && q_lo >= 0.95 && q_hi <= 1.05,
        format!("bloch ratios [{b_lo:.5}, {b_hi:.5}] in [0.99, 1.01], Q_0.5 ratios [{q_lo:.5}, {q_hi:.5}] in [0.95, 1.05]"),
    )
}

fn ac4() -> Outcome {
    let scheme = DiscScheme::default_scheme();
    let area = DensityMeasure::area(scheme.clone());
    let coarse = MobiusGrid::new(GridConfig { n_max: 12, ..GridConfig::default() }).unwrap();
    let c_coarse = carleson_constant(&area, 2.0, 0.0, CarlesonMethod::Box, &coarse).unwrap().value;
    let c_def = carleson_constant(&area, 2.0, 0.0, CarlesonMethod::Box, &MobiusGrid::default_grid()).unwrap().value;
    let refines = c_def >= c_coarse && c_def <= 2.0 + 1e-12;

    let corpus = ["z", "z^5 - 0.3*z^2", "poly:[0, 1, 0.5i, -0.25, 0, 0, 0, 0, 0.1]", "ha:a=0.9", "log:a=0.5+0.5i", "mobius:a=0.7i", "fp:p=2,depth=12"];
    let grid = MobiusGrid::new(GridConfig { n_max: 10, angle_cap: 8, angle_base: 2, refine: false, refine_iters: 0 }).unwrap();
    let pts: Vec<C64> = grid.points().into_iter().map(|p| p.1).collect();
    let mut worst = f64::MAX;
    for f in corpus {
        let f = parse_function(f).unwrap();
        for s in [0.5, 1.0] {
            let mu = density_from(&f, s, scheme.clone()).unwrap();
            let k = (2.0 + std::f64::consts::PI).powf(-2.0 * s);
            let zs = zhao_values_at(&mu, s, 0.0, &pts).unwrap();
            for (&a, &zv) in pts.iter().zip(&zs) {
                let b = box_value_at(&mu, s, 0.0, a).unwrap();
                if b > 0.0 {
                    worst = worst.min(zv / (k * b));
                }
            }
        }
    }

    let small = MobiusGrid::new(GridConfig { n_max: 6, angle_cap: 8, angle_base: 4, refine: true, refine_iters: 2 }).unwrap();
    let mu = density_from(&parse_function("z^3 + 0.5*z").unwrap(), 0.7, scheme.clone()).unwrap();
    let lo = DensityMeasure::custom("lo", |z| 0.5 * (1.0 + z.re).abs(), scheme.clone());
    let hi = DensityMeasure::custom("hi", |z| (1.0 + z.re).abs() + z.im * z.im, scheme.clone());
    let mut lin: f64 = 0.0;
    let mut mono = true;
    for m in [CarlesonMethod::Box, CarlesonMethod::Zhao] {
        let v = carleson_constant(&mu, 0.7, 0.5, m, &small).unwrap().value;
        let w = carleson_constant(&mu.scaled(3.5).unwrap(), 0.7, 0.5, m, &small).unwrap().value;
        lin = lin.max((w - 3.5 * v).abs() / (3.5 * v));
        mono &= carleson_constant(&lo, 0.7, 0.5, m, &small).unwrap().value <= carleson_constant(&hi, 0.7, 0.5, m, &small).unwrap().value;
    }
    require(
        c_def >= 1.99 && refines && worst >= 1.0 && lin <= 1e-12 && mono,
        format!(
            "area box constant {c_def:.6} (>= 1.99; n_max 12 gives {c_coarse:.6}), min zhao/((2+pi)^-2s box) {worst:.3} (>= 1), linearity {lin:.1e}, monotone {mono}"
        ),
    )
}

fn ac5() -> Outcome {
    let t0 = Instant::now();
    let ctx = NormContext::default_context();
    let th = SeriesThresholds::default();
    let mut ok = true;
    let mut parts = vec![];
    for p in [3.0f64, 4.0, 6.0] {
        let s0 = 1.0 - 2.0 / p;
        let a = LacunaryCoefficients::fp(p, 64).unwrap();
        let div = lacunary_membership(&a, SpaceSpec::Qs { s: s0 }, &th).unwrap().classification;
        let conv = lacunary_membership(&a, SpaceSpec::Qs { s: s0 + 0.1 }, &th).unwrap().classification;
        ok &= div == Classification::Divergent && conv == Classification::Convergent;
        let ratio = |s: f64| {
            let q = |d: usize| seminorm(SpaceSpec::Qs { s }, &make_atom(AtomKind::Fp { p, depth: d }).unwrap(), &ctx).unwrap().value;
            q(24) / q(12)
        };
        let (rd, rc) = (ratio(s0), ratio(s0 + 0.1));
        ok &= rd > FP_DIVERGENT_RATIO && rc < FP_CONVERGENT_RATIO;
        parts.push(format!("p={p}: {div:?}/{conv:?}, ratios {rd:.4}/{rc:.4}"));
    }
    let secs = t0.elapsed().as_secs_f64();
    ok &= secs < 120.0;
    require(ok, format!("{} (thresholds > {FP_DIVERGENT_RATIO} / < {FP_CONVERGENT_RATIO}), {secs:.1}s (< 120s)", parts.join("; ")))
}

fn ac6() -> Outcome {
    let sch = RadialSchedule::dyadic(6..=18).unwrap();
    let mut ok = true;
    let mut parts = vec![];
    for p in [3.0, 4.0] {
        let m = |d| m2_gap_bound(&LacunaryCoefficients::fp(p, d).unwrap(), &sch, Some(p)).unwrap().min_ratio().unwrap();
        let (c20, c40) = (m(20), m(40));
        ok &= c20 > 0.0 && (c40 / c20 - 1.0).abs() <= 0.2;
        parts.push(format!("p={p}: {c20:.5} -> {c40:.5}"));
    }
    require(ok, format!("{} (within 20%)", parts.join(", ")))
}

fn ac7() -> Outcome {
    let f = make_atom(AtomKind::Fp { p: 3.0, depth: 40 }).unwrap();
    let one = FunctionExpr::constant(1.0);
    let sch = RadialSchedule::dyadic(1..=18).unwrap();
    let d = divergence_scan(&one, &f, 1.0 / 3.0, &sch, &ScanThresholds::default()).unwrap();
    let prods: Vec<f64> = (8..=18).map(|n| d.increments_per_doubling[n - 1] * n as f64).collect();
    let (lo, hi) = (prods.iter().copied().fold(f64::MAX, f64::min), prods.iter().copied().fold(0.0, f64::max));
    let increasing = d.partials.windows(2).all(|w| w[1] > w[0]);
    let cv = divergence_scan(&one, &f, 0.5, &sch, &ScanThresholds::default()).unwrap();
    let inc = &cv.increments_per_doubling;
    let worst = inc[11..].windows(2).map(|w| w[1] / w[0]).fold(0.0, f64::max);
    require(
        increasing && lo >= 0.3 && hi <= 3.0 && worst < 0.9 && d.verdict == Classification::Divergent && cv.verdict == Classification::Convergent,
        format!("s=1/3 increment*n in [{lo:.3}, {hi:.3}] (within [0.3, 3]), {:?}; s=1/2 max increment ratio {worst:.3} (< 0.9), {:?}", d.verdict, cv.verdict),
    )
}

fn ac8() -> Outcome {
    let ctx = SuiteConfig::default().context().unwrap();
    let (mut xs, mut ys, mut ys_semi) = (vec![], vec![], vec![]);
    for n in 4..=14u32 {
        let h = make_atom(AtomKind::Ha { a: c(dyadic_radius(n), 0.0) }).unwrap();
        let h0 = h.eval(C64::default()).unwrap().norm();
        let b = norm(SpaceSpec::Besov { p: 2.0 }, &h, &ctx).unwrap();
        let q = norm(SpaceSpec::Qs { s: 0.5 }, &h, &ctx).unwrap();
        xs.push((n as f64).ln());
        ys.push((b / q).ln());
        ys_semi.push(((b - h0) / (q - h0)).ln());
    }
    let slope = ls_slope(&xs, &ys);
    let rel = (slope - 0.5).abs() / 0.5;
    require(
        rel <= 0.25,
        format!("log-log slope of norm ratio {slope:.4} vs 1/2 (relative error {rel:.3}, allowed 0.25); seminorm ratio slope {:.4}", ls_slope(&xs, &ys_semi)),
    )
}

fn ac9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let fc = rand_coeffs(&mut rng, 20);
    let f = poly(fc.clone());
    let bs = backward_shift(&f, 24).unwrap();
    let shift = max_diff(&bs, &CoefficientSeries::new(fc[1..].to_vec()));
    let via_toeplitz = max_diff(&bs, &toeplitz_conj(&FunctionExpr::z(), &f, 128, 24).unwrap());
    let n = 256;
    let (mut div, mut contr) = (0.0f64, f64::MIN);
    for t in 0..20 {
        let zeros: Vec<C64> = (0..1 + t % 4).map(|_| C64::from_polar(rng.gen_range(0.0..0.9), rng.gen_range(0.0..6.28))).collect();
        let b = FunctionExpr::Blaschke(zeros);
        let q = poly(rand_coeffs(&mut rng, 32));
        let h = FunctionExpr::Polynomial(cisl::func::series_multiply(&b.taylor(n + 600).unwrap(), &q.taylor(n + 600).unwrap(), n + 600));
        div = div.max(max_diff(&divide_inner(&h, &b, n, DIVISION_TOL).unwrap(), &q.taylor(n).unwrap()));
        let psi = poly(rand_coeffs(&mut rng, 8));
        let g = poly(rand_coeffs(&mut rng, 24));
        let out = toeplitz_conj(&psi, &g, 4 * 32, 32).unwrap();
        let sup = (0..4096).map(|k| psi.eval(C64::from_polar(1.0 - 1e-15, k as f64 * std::f64::consts::TAU / 4096.0)).unwrap().norm()).fold(0.0, f64::max);
        contr = contr.max(out.h2_norm() - sup * g.taylor(64).unwrap().h2_norm());
    }
    require(
        shift == 0.0 && via_toeplitz <= 1e-14 && div <= 1e-8 && contr <= 1e-8,
        format!("backward shift error {shift:.1e} (exact), T_conj(z) vs shift {via_toeplitz:.1e} (<= 1e-14), division error {div:.2e} (<= 1e-8), contraction excess {contr:.2e} (<= 1e-8)"),
    )
}

fn ac10() -> Outcome {
    let cfg = SuiteConfig::default();
    let t0 = Instant::now();
    let a = run_suite(&TheoremId::ALL, &cfg).map_err(|e| e.to_string())?;
    let secs = t0.elapsed().as_secs_f64();
    let b = run_suite(&TheoremId::ALL, &cfg).map_err(|e| e.to_string())?;
    let same = a.verdicts.iter().zip(&b.verdicts).all(|(x, y)| x.status == y.status && x.evidence == y.evidence && x.config_hash == y.config_hash);
    let by = |st: Status| a.verdicts.iter().filter(|v| v.status == st).map(|v| v.id.to_string()).collect::<Vec<_>>();
    let (fails, inconc) = (by(Status::Fail), by(Status::Inconclusive));
    let threads = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    require(
        fails.is_empty() && same,
        format!("fail {fails:?}, inconclusive {inconc:?}, reproducible {same}, {secs:.0}s on {threads} thread(s), config {}", &a.config_hash[..12]),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] =
        [("AC1", ac1), ("AC2", ac2), ("AC3", ac3), ("AC4", ac4), ("AC5", ac5), ("AC6", ac6), ("AC7", ac7), ("AC8", ac8), ("AC9", ac9), ("AC10", ac10)];
    let only = std::env::var("ACCEPTANCE_ONLY").ok();
    let mut failed = 0;
    for (name, f) in criteria {
        if only.as_deref().is_some_and(|o| !o.split(',').any(|x| x == name)) {
            continue;
        }
        let t0 = Instant::now();
        let out = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or(e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = t0.elapsed().as_secs_f64();
        match out {
            Ok(m) => println!("{name} PASS ({secs:.1}s): {m}"),
            Err(m) => {
                failed += 1;
                println!("{name} FAIL ({secs:.1}s): {m}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
