use std::f64::consts::PI;

use cisl::func::{make_atom, AtomKind, FunctionExpr, LacunaryCoefficients};
use cisl::gapseries::*;
use cisl::norms::{seminorm, NormContext, SpaceSpec};
use cisl::quad::{integral_mean_derivative, RadialSchedule};
use num_complex::Complex64 as C64;
use proptest::prelude::*;

fn th() -> SeriesThresholds {
    SeriesThresholds::default()
}

fn profiles(depth: usize) -> Vec<(f64, LacunaryCoefficients)> {
    vec![
        (3.0, LacunaryCoefficients::fp(3.0, depth).unwrap()),
        (2.0, LacunaryCoefficients::new((1..=depth).map(|k| C64::new((-(k as f64) / 3.0).exp2(), 0.0)).collect())),
        (
            1.5,
            LacunaryCoefficients::new(
                (1..=depth)
                    .map(|k| {
                        let sign = if k % 2 == 0 { C64::new(0.0, 1.0) } else { C64::new(0.0, -0.5) };
                        sign * (-(k as f64) / 1.5).exp2() / k as f64
                    })
                    .collect(),
            ),
        ),
    ]
}

#[test]
fn fp3_coefficient_criteria() {
    let a = LacunaryCoefficients::fp(3.0, 64).unwrap();
    let d = lacunary_membership(&a, SpaceSpec::Qs { s: 1.0 / 3.0 }, &th()).unwrap();
    assert_eq!(d.classification, Classification::Divergent);
    // harmonic partial sums
    let h: f64 = (1..=64).map(|k| 1.0 / k as f64).sum();
    assert!((d.partial_sums[63] - h).abs() < 1e-9 * h);
    let c = lacunary_membership(&a, SpaceSpec::Qs { s: 0.5 }, &th()).unwrap();
    assert_eq!(c.classification, Classification::Convergent);
    // k^{-3/2} converges slowly: S_{2K}/S_K < 1.02 needs K in the hundreds
    let deep = LacunaryCoefficients::fp(3.0, 512).unwrap();
    let b = lacunary_membership(&deep, SpaceSpec::Besov { p: 3.0 }, &th()).unwrap();
    assert_eq!(b.classification, Classification::Convergent);
    for v in [&d, &c, &b] {
        assert!(v.partial_sums.windows(2).all(|w| w[1] >= w[0]));
    }
}

#[test]
fn shallow_series_is_inconclusive() {
    let a = LacunaryCoefficients::fp(3.0, 3).unwrap();
    let v = lacunary_membership(&a, SpaceSpec::Qs { s: 0.5 }, &th()).unwrap();
    assert_eq!(v.classification, Classification::Inconclusive);
    assert!(lacunary_membership(&a, SpaceSpec::Bloch, &th()).is_err());
}

#[test]
fn besov_term_matches_quadrature() {
    let ctx = NormContext::default_context();
    for (p, a) in profiles(16) {
        let mut ratios = vec![];
        for k in 6..=16 {
            let tr = a.truncated(k);
            let rho = seminorm(SpaceSpec::Besov { p }, &FunctionExpr::Gap(tr.clone()), &ctx).unwrap().value;
            let sk = lacunary_membership(&tr, SpaceSpec::Besov { p }, &th()).unwrap().partial_sums[k - 1];
            ratios.push(rho / sk.powf(1.0 / p));
        }
        let hi = ratios.iter().copied().fold(0.0, f64::max);
        let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
        assert!(lo > 0.0 && hi / lo < 4.0, "p={p}: {ratios:?}");
    }
}

#[test]
fn m2_trivial_cases() {
    let one = LacunaryCoefficients::new(vec![C64::new(1.0, 0.0)]);
    let sch = RadialSchedule::new(vec![0.25, 0.5, 0.9]).unwrap();
    let rep = m2_gap_bound(&one, &sch, None).unwrap();
    for row in &rep.rows {
        assert!((row.m2 - 2.0 * row.r).abs() < 1e-15);
    }
    let zero = LacunaryCoefficients::new(vec![C64::new(0.0, 0.0); 8]);
    assert!(m2_gap_bound(&zero, &sch, Some(3.0)).unwrap().rows.iter().all(|r| r.m2 == 0.0 && r.ratio == Some(0.0)));
}

#[test]
fn m2_warns_beyond_depth() {
    let a = LacunaryCoefficients::fp(3.0, 10).unwrap();
    let rep = m2_gap_bound(&a, &RadialSchedule::dyadic(6..=9).unwrap(), Some(3.0)).unwrap();
    assert_eq!(rep.warnings.len(), 1);
    let rep = m2_gap_bound(&a, &RadialSchedule::dyadic(6..=8).unwrap(), Some(3.0)).unwrap();
    assert!(rep.warnings.is_empty());
}

#[test]
fn sparse_m2_matches_circle_quadrature() {
    for depth in [4usize, 7, 10] {
        for (_, a) in profiles(depth) {
            let f = FunctionExpr::Gap(a.clone());
            let sch = RadialSchedule::new(vec![0.3, 0.7, 0.95, 0.999]).unwrap();
            let rep = m2_gap_bound(&a, &sch, None).unwrap();
            for row in &rep.rows {
                let q = integral_mean_derivative(&f, 2.0, row.r, 4 << depth).unwrap();
                assert!((q - row.m2).abs() <= 1e-10 * row.m2.max(1.0), "depth {depth} r {}: {q} vs {}", row.r, row.m2);
            }
        }
    }
}

#[test]
fn fp_m2_lower_bound_is_stable() {
    let sch = RadialSchedule::dyadic(6..=18).unwrap();
    for p in [3.0, 4.0] {
        let c20 = m2_gap_bound(&LacunaryCoefficients::fp(p, 20).unwrap(), &sch, Some(p)).unwrap().min_ratio().unwrap();
        let c40 = m2_gap_bound(&LacunaryCoefficients::fp(p, 40).unwrap(), &sch, Some(p)).unwrap().min_ratio().unwrap();
        assert!(c20 > 0.0 && (c40 / c20 - 1.0).abs() < 0.2, "p={p}: {c20} {c40}");
    }
}

#[test]
fn arc_ratios() {
    let a = LacunaryCoefficients::fp(3.0, 30).unwrap();
    let full = ArcSpec::new(1.0, 2.0 * PI).unwrap();
    assert_eq!(arc_energy_ratio(&a, &full, 0.9).unwrap(), 1.0);
    let zero = LacunaryCoefficients::new(vec![C64::new(0.0, 0.0); 5]);
    assert_eq!(arc_energy_ratio(&zero, &ArcSpec::new(0.0, 1.0).unwrap(), 0.5).unwrap(), 1.0);
    assert!(ArcSpec::new(0.0, 0.0).is_err());
    assert!(arc_energy_ratio(&a, &full, 1.0).is_err());
    for center in [0.0, 0.3, 2.0, 4.5] {
        let arc = ArcSpec::new(center, PI).unwrap();
        for n in 4..=14 {
            let r = arc_energy_ratio(&a, &arc, 1.0 - 0.5f64.powi(n)).unwrap();
            assert!((0.5..=2.0).contains(&r), "center {center} n {n}: {r}");
        }
    }
}

#[test]
fn arc_ratio_matches_direct_average() {
    let a = LacunaryCoefficients::fp(4.0, 6).unwrap();
    let f = FunctionExpr::Gap(a.clone());
    let arc = ArcSpec::new(0.7, 1.3).unwrap();
    let r = 0.8;
    let m = 20000;
    let mut acc = 0.0;
    for j in 0..m {
        let t = arc.center - arc.width / 2.0 + arc.width * (j as f64 + 0.5) / m as f64;
        acc += f.derivative_at(C64::from_polar(r, t)).unwrap().norm_sqr();
    }
    let direct = acc / m as f64 / gap_m2_derivative_squared(&a, r);
    assert!((direct - arc_energy_ratio(&a, &arc, r).unwrap()).abs() < 1e-6);
}

#[test]
fn divergence_scan_fp3() {
    let f = make_atom(AtomKind::Fp { p: 3.0, depth: 40 }).unwrap();
    let one = FunctionExpr::constant(1.0);
    let sch = RadialSchedule::dyadic(1..=18).unwrap();
    let d = divergence_scan(&one, &f, 1.0 / 3.0, &sch, &ScanThresholds::default()).unwrap();
    assert_eq!(d.verdict, Classification::Divergent);
    assert!(d.partials.windows(2).all(|w| w[1] >= w[0]));
    for n in 8..=18 {
        let v = d.increments_per_doubling[n - 1] * n as f64;
        assert!((0.3..=3.0).contains(&v), "n {n}: {v}");
    }
    let c = divergence_scan(&one, &f, 0.5, &sch, &ScanThresholds::default()).unwrap();
    assert_eq!(c.verdict, Classification::Convergent);
    let inc = &c.increments_per_doubling;
    assert!(inc[11..].windows(2).all(|w| w[1] < 0.9 * w[0]));
}

#[test]
fn divergence_scan_constant_f() {
    let sch = RadialSchedule::dyadic(1..=10).unwrap();
    let d = divergence_scan(&FunctionExpr::z(), &FunctionExpr::constant(3.0), 0.3, &sch, &ScanThresholds::default()).unwrap();
    assert!(d.partials.iter().all(|&p| p == 0.0));
    assert!(divergence_scan(&FunctionExpr::z(), &FunctionExpr::z(), -0.1, &sch, &ScanThresholds::default()).is_err());
}

#[test]
fn agw_sharpness() {
    let (s1, s2) = (0.3, 0.7);
    let gamma = (1.0 + s1) / 2.0;
    let a = agw_construct(gamma, s2, 48).unwrap();
    let v = lacunary_membership(&a, SpaceSpec::Qs { s: s2 }, &th()).unwrap();
    assert_eq!(v.classification, Classification::Convergent);
    let v = lacunary_membership(&a, SpaceSpec::Qs { s: s1 }, &th()).unwrap();
    assert_eq!(v.classification, Classification::Divergent);
    let a = agw_construct(0.1, 0.5, 24).unwrap();
    assert!(agw_verify(&a, 0.1, 0.5, &RadialSchedule::dyadic(4..=22).unwrap(), 0.3, &th()).unwrap().passed);
    assert!(agw_construct(0.8, 0.5, 10).is_err());
    assert!(agw_construct(-0.1, 0.5, 10).is_err());
}

#[test]
fn agw_postconditions_sweep() {
    let sch = RadialSchedule::dyadic(4..=22).unwrap();
    for gamma in [0.1, 0.4, 0.55] {
        for s in [0.3, 0.6, 1.0] {
            if s - 2.0 * gamma <= -1.0 {
                continue;
            }
            let a = agw_construct(gamma, s, 64).unwrap();
            let chk = agw_verify(&a, gamma, s, &sch, 0.3, &th()).unwrap();
            assert!(chk.passed, "gamma {gamma} s {s}: {:?} {}", chk.membership.classification, chk.min_growth_ratio);
        }
    }
}

proptest! {
    #[test]
    fn partial_sums_nondecreasing(c in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 4..40), s in 0.05f64..1.0) {
        let a = LacunaryCoefficients::new(c.into_iter().map(|(x, y)| C64::new(x, y)).collect());
        let v = lacunary_membership(&a, SpaceSpec::Qs { s }, &th()).unwrap();
        prop_assert!(v.partial_sums.windows(2).all(|w| w[1] >= w[0]));
        prop_assert_eq!(v.doubling_ratios.len(), a.depth() / 2);
    }

    #[test]
    fn arc_ratio_bounded_by_inverse_width(c in prop::collection::vec(-1.0f64..1.0, 1..20), center in -4.0f64..4.0, width in 0.1f64..6.2, r in 0.05f64..0.999) {
        let a = LacunaryCoefficients::new(c.into_iter().map(|x| C64::new(x, 0.0)).collect());
        let v = arc_energy_ratio(&a, &ArcSpec::new(center, width).unwrap(), r).unwrap();
        prop_assert!(v >= -1e-9 && v <= 2.0 * PI / width + 1e-9);
    }
}
