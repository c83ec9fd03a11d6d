use std::time::Instant;

use cisl::carleson::*;
use cisl::func::{make_atom, parse_function, AtomKind, FunctionExpr};
use cisl::norms::{seminorm, GridConfig, MobiusGrid, NormContext, SpaceSpec};
use cisl::quad::DiscScheme;
use cisl::C64;
use proptest::prelude::*;

fn small_grid(refine: bool) -> MobiusGrid {
    MobiusGrid::new(GridConfig { n_max: 10, angle_cap: 32, angle_base: 4, refine, refine_iters: 3 }).unwrap()
}

/// Composite Simpson on `[lo, hi]` after the substitution `r = 1 - e^{-u}`.
fn simpson_band(g: impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    let (u0, u1) = (-(1.0 - lo).ln(), -(1.0 - hi).ln());
    let n = 20000;
    let h = (u1 - u0) / n as f64;
    let f = |u: f64| {
        let r = 1.0 - (-u).exp();
        g(r) * (-u).exp()
    };
    let mut acc = f(u0) + f(u1);
    for k in 1..n {
        acc += f(u0 + k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * h / 3.0
}

#[test]
fn area_box_mass_closed_form() {
    let mu = DensityMeasure::area(DiscScheme::default_scheme());
    let full = box_mass(&mu, &BoxSpec::new(C64::default()).unwrap()).unwrap();
    assert!((full - 1.0).abs() < 1e-5, "{full}");
    for t in [0.1, 0.5, 0.9, 0.999, 1.0 - 2f64.powi(-16)] {
        let m = box_mass(&mu, &BoxSpec::new(C64::from_polar(t, 2.3)).unwrap()).unwrap();
        let exact = (1.0 - t).powi(2) * (1.0 + t);
        assert!((m / exact - 1.0).abs() < 1e-5, "t={t}: {m} vs {exact}");
    }
}

#[test]
fn zero_density_gives_zero() {
    let mu = DensityMeasure::zero(DiscScheme::default_scheme());
    assert_eq!(box_mass(&mu, &BoxSpec::new(C64::new(0.3, 0.2)).unwrap()).unwrap(), 0.0);
    let g = small_grid(true);
    for m in [CarlesonMethod::Box, CarlesonMethod::Zhao] {
        assert_eq!(carleson_constant(&mu, 1.0, 0.0, m, &g).unwrap().value, 0.0);
    }
    let c = density_from(&FunctionExpr::constant(3.0), 1.0, DiscScheme::default_scheme()).unwrap();
    assert!(c.is_zero());
    assert_eq!(c.density(C64::new(0.5, 0.1)).unwrap(), 0.0);
}

#[test]
fn monomial_density_mass() {
    let mu = density_from(&FunctionExpr::z(), 1.0, DiscScheme::default_scheme()).unwrap();
    let z = C64::new(0.3, -0.4);
    assert!((mu.density(z).unwrap() - (1.0 - z.norm_sqr())).abs() < 1e-15);
    assert!((mu.total_mass().unwrap() - 0.5).abs() < 1e-9);
}

#[test]
fn monomial_box_mass_matches_radial_oracle() {
    let scheme = DiscScheme::default_scheme();
    for (n, s) in [(3u32, 1.0), (7, 0.5), (1, 2.0)] {
        let mu = density_from(&FunctionExpr::Monomial(n), s, scheme.clone()).unwrap();
        for t in [0.25, 0.75, 0.99] {
            let m = box_mass(&mu, &BoxSpec::new(C64::from_polar(t, -1.0)).unwrap()).unwrap();
            let nf = n as f64;
            let radial = simpson_band(|r| (1.0 - r * r).powf(s) * nf * nf * r.powf(2.0 * nf - 1.0), t, 1.0 - 1e-12);
            let oracle = 2.0 * (1.0 - t) * radial;
            assert!((m / oracle - 1.0).abs() < 1e-5, "n={n} s={s} t={t}: {m} vs {oracle}");
        }
    }
}

#[test]
fn gap_density_is_fast() {
    let f = make_atom(AtomKind::Fp { p: 3.0, depth: 20 }).unwrap();
    let mu = density_from(&f, 1.0 / 3.0, DiscScheme::default_scheme()).unwrap();
    let t = Instant::now();
    let mut acc = 0.0;
    for k in 0..100_000 {
        let z = C64::from_polar(0.999 * k as f64 / 1e5, 0.37 * k as f64);
        acc += mu.density(z).unwrap();
    }
    assert!(acc.is_finite());
    assert!(t.elapsed().as_secs_f64() < 1.0, "{:?}", t.elapsed());
}

#[test]
fn area_box_constant_approaches_two() {
    let mu = DensityMeasure::area(DiscScheme::default_scheme());
    let r = carleson_constant(&mu, 2.0, 0.0, CarlesonMethod::Box, &MobiusGrid::default_grid()).unwrap();
    assert!(r.value >= 1.99 && r.value <= 2.0, "{}", r.value);
    let vals: Vec<f64> = r.refinement_trace.iter().map(|t| t.1).collect();
    assert!(vals.windows(2).all(|w| w[1] >= w[0]));
}

#[test]
fn area_zhao_constant_is_one_at_origin() {
    let mu = DensityMeasure::area(DiscScheme::default_scheme());
    let at0 = zhao_value_at(&mu, 2.0, 0.0, C64::default()).unwrap();
    assert!((at0 - 1.0).abs() < 1e-5, "{at0}");
    let r = carleson_constant(&mu, 2.0, 0.0, CarlesonMethod::Zhao, &small_grid(true)).unwrap();
    assert!(r.converged);
    assert!(r.value >= at0 && r.value < 1.0 + 1e-6, "{}", r.value);
}

#[test]
fn rejects_bad_exponents() {
    let mu = DensityMeasure::area(DiscScheme::default_scheme());
    let g = small_grid(false);
    assert!(carleson_constant(&mu, 0.0, 0.0, CarlesonMethod::Box, &g).is_err());
    assert!(carleson_constant(&mu, 1.0, -1.0, CarlesonMethod::Zhao, &g).is_err());
    assert!(density_from(&FunctionExpr::z(), -0.5, DiscScheme::default_scheme()).is_err());
    assert!(BoxSpec::new(C64::new(1.0, 0.0)).is_err());
}

fn corpus() -> Vec<FunctionExpr> {
    [
        "z",
        "z^5 - 0.3*z^2",
        "poly:[0, 1, 0.5i, -0.25, 0, 0, 0, 0, 0.1]",
        "ha:a=0.9",
        "log:a=0.5+0.5i",
        "mobius:a=0.7i",
        "fp:p=2,depth=12",
    ]
    .iter()
    .map(|s| parse_function(s).unwrap())
    .collect()
}

#[test]
fn zhao_dominates_box_pointwise() {
    let scheme = DiscScheme::default_scheme();
    let grid = MobiusGrid::new(GridConfig { n_max: 10, angle_cap: 8, angle_base: 2, refine: false, refine_iters: 0 }).unwrap();
    for f in corpus() {
        for s in [0.5, 1.0] {
            let mu = density_from(&f, s, scheme.clone()).unwrap();
            let c = (2.0 + std::f64::consts::PI).powf(-2.0 * s);
            let pts: Vec<C64> = grid.points().into_iter().map(|p| p.1).collect();
            let zs = zhao_values_at(&mu, s, 0.0, &pts).unwrap();
            for (&a, &z) in pts.iter().zip(&zs) {
                let b = box_value_at(&mu, s, 0.0, a).unwrap();
                assert!(z >= c * b, "{f:?} s={s} a={a}: zhao {z} box {b}");
            }
        }
    }
}

#[test]
fn box_constant_bridges_qs_for_polynomials() {
    let scheme = DiscScheme::default_scheme();
    let ctx = NormContext::new(scheme.config.clone(), small_grid(true).config).unwrap();
    let polys = [
        "poly:[0,1,0,0,0,0,0,0,0,0,0,0,0,0,0,0,1]",
        "poly:[1,2,0,-1,0,0,0.5,0,0,0,0,0,0,0,0,0,1]",
        "z^16",
        "poly:[0,0.3,-0.2i,0.1,0.7,0,0,0,0,0,0,0.2,0,0,0,0,-0.5]",
    ];
    for s in [0.5, 1.0] {
        for p in polys {
            let f = parse_function(p).unwrap();
            let mu = density_from(&f, s, scheme.clone()).unwrap();
            let b = carleson_constant(&mu, s, 0.0, CarlesonMethod::Box, &ctx.grid).unwrap().value;
            let q = seminorm(SpaceSpec::Qs { s }, &f, &ctx).unwrap().value.powi(2);
            let ratio = b / q;
            assert!((1.0 / 16.0..=16.0).contains(&ratio), "{p} s={s}: box {b} qs^2 {q}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn constants_scale_linearly(c in 0.0f64..50.0, s in 0.3f64..2.0, alpha in 0.0f64..2.0) {
        let grid = MobiusGrid::new(GridConfig { n_max: 6, angle_cap: 8, angle_base: 4, refine: true, refine_iters: 2 }).unwrap();
        let mu = density_from(&parse_function("z^3 + 0.5*z").unwrap(), s, DiscScheme::default_scheme()).unwrap();
        let cm = mu.scaled(c).unwrap();
        for m in [CarlesonMethod::Box, CarlesonMethod::Zhao] {
            let v = carleson_constant(&mu, s, alpha, m, &grid).unwrap().value;
            let w = carleson_constant(&cm, s, alpha, m, &grid).unwrap().value;
            prop_assert!((w - c * v).abs() <= 1e-12 * (c * v).abs().max(1e-300));
        }
    }

    #[test]
    fn constants_are_monotone(k in 0.0f64..3.0, w in 0.0f64..1.0, s in 0.3f64..2.0) {
        let grid = MobiusGrid::new(GridConfig { n_max: 6, angle_cap: 16, angle_base: 4, refine: false, refine_iters: 0 }).unwrap();
        let scheme = DiscScheme::default_scheme();
        let lo = DensityMeasure::custom("lo", move |z| w * (1.0 + k * z.re).abs(), scheme.clone());
        let hi = DensityMeasure::custom("hi", move |z| (1.0 + k * z.re).abs() + z.im * z.im, scheme);
        for m in [CarlesonMethod::Box, CarlesonMethod::Zhao] {
            let a = carleson_constant(&lo, s, 0.5, m, &grid).unwrap().value;
            let b = carleson_constant(&hi, s, 0.5, m, &grid).unwrap().value;
            prop_assert!(a <= b, "{m}: {a} > {b}");
        }
    }
}
