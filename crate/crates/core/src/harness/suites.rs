//! One checklist per registry id. Every quantity comes from the module
//! APIs; thresholds come from the suite configuration.

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::func::{dyadic_radius, make_atom, AtomKind, CoefficientSeries, FunctionExpr, LacunaryCoefficients};
use crate::gapseries::{agw_construct, agw_verify, divergence_scan, lacunary_membership, Classification};
use crate::harness::config::SuiteConfig;
use crate::harness::registry::TheoremId;
use crate::harness::verdict::{Evidence, Status, Table};
use crate::norms::{growth_margin, log_q_constant, ls_slope, seminorm, LogVariant, NormContext, SpaceSpec};
use crate::operators::{
    apply_operator, backward_shift, divide_inner, operator_expr, probe_members, toeplitz_conj, Family, OperatorSpec,
    ProbeMember, ProbeReport, ProbeVerdict,
};
use crate::quad::RadialSchedule;

/// Evidence and tables collected by one checklist.
pub(crate) struct Suite<'a> {
    pub cfg: &'a SuiteConfig,
    pub ctx: NormContext,
    pub evidence: Vec<Evidence>,
    pub notes: Vec<String>,
    pub tables: Vec<Table>,
    pub scans: Vec<Table>,
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn a_n(n: u32) -> C64 {
    c(dyadic_radius(n), 0.0)
}

fn fa(n: u32, p: f64) -> Result<FunctionExpr> {
    make_atom(AtomKind::Fa { a: a_n(n), p })
}

fn ha(n: u32) -> Result<FunctionExpr> {
    make_atom(AtomKind::Ha { a: a_n(n) })
}

fn random_poly(rng: &mut ChaCha8Rng, degree: usize) -> CoefficientSeries {
    CoefficientSeries::new((0..=degree).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect())
}

fn max_diff(a: &CoefficientSeries, b: &CoefficientSeries) -> f64 {
    (0..a.len().max(b.len())).map(|k| (a.coeff(k) - b.coeff(k)).norm()).fold(0.0, f64::max)
}

/// Symbols used by the exact checks.
fn symbol_corpus() -> Vec<FunctionExpr> {
    vec![
        FunctionExpr::z(),
        FunctionExpr::Polynomial(CoefficientSeries::new(vec![c(0.5, 0.0), c(-1.0, 0.0), c(0.0, 0.25), c(2.0, 0.0)])),
        FunctionExpr::LogKernel { a: c(0.3, -0.5), scale: c(1.0, 0.0), offset: c(1.0, 0.0) },
        FunctionExpr::Mobius(c(0.4, 0.2)),
        FunctionExpr::Blaschke(vec![c(0.5, 0.0), c(-0.2, 0.6)]),
    ]
}

impl<'a> Suite<'a> {
    pub fn new(cfg: &'a SuiteConfig) -> Result<Self> {
        Ok(Suite { cfg, ctx: cfg.context()?, evidence: vec![], notes: vec![], tables: vec![], scans: vec![] })
    }

    fn record(&mut self, check: &str, observed: f64, threshold: f64, status: Status) {
        self.evidence.push(Evidence { check: check.to_string(), observed, threshold, status });
    }

    fn check_le(&mut self, check: &str, observed: f64, threshold: f64) {
        let st = if observed <= threshold { Status::Pass } else { Status::Fail };
        self.record(check, observed, threshold, st);
    }

    fn check_ge(&mut self, check: &str, observed: f64, threshold: f64) {
        let st = if observed >= threshold { Status::Pass } else { Status::Fail };
        self.record(check, observed, threshold, st);
    }

    fn boundary_members(
        &self,
        op: impl Fn(u32) -> Result<OperatorSpec>,
        f: impl Fn(u32) -> Result<FunctionExpr>,
    ) -> Result<Vec<ProbeMember>> {
        self.cfg
            .schedules
            .boundary
            .iter()
            .map(|&n| Ok(ProbeMember { param: n as f64, index: n as f64, op: op(n)?, f: f(n)? }))
            .collect()
    }

    fn family_members(&self, op: &OperatorSpec, family: &Family, schedule: &[u32]) -> Result<Vec<ProbeMember>> {
        schedule
            .iter()
            .map(|&k| Ok(ProbeMember { param: k as f64, index: family.dyadic_index(k), op: op.clone(), f: family.member(k)? }))
            .collect()
    }

    /// Runs a probe and records whether its verdict is the expected one.
    fn probe(
        &mut self,
        check: &str,
        members: &[ProbeMember],
        x: SpaceSpec,
        y: SpaceSpec,
        expected: ProbeVerdict,
    ) -> Result<ProbeReport> {
        let rep = probe_members(check, members, x, y, &self.ctx, &self.cfg.probe)?;
        let threshold = match expected {
            ProbeVerdict::DivergenceDetected => self.cfg.probe.divergence_slope,
            _ => self.cfg.probe.bounded_slope,
        };
        let status = if rep.verdict == expected {
            Status::Pass
        } else if rep.verdict == ProbeVerdict::Inconclusive {
            Status::Inconclusive
        } else {
            Status::Fail
        };
        self.record(&format!("{check} [{x} -> {y}] {expected}"), rep.trend_slope, threshold, status);
        for w in &rep.warnings {
            self.notes.push(format!("{check}: {w}"));
        }
        let mut t = Table::new(slug(check), &["param", "x_norm", "y_seminorm", "ratio"]);
        for i in 0..rep.params.len() {
            t.rows.push(vec![rep.params[i], rep.x_norms[i], rep.y_norms[i], rep.ratios[i]]);
        }
        self.tables.push(t);
        Ok(rep)
    }

    /// `T_{h_{a_n}}`-type witnesses: symbols whose membership constant blows up.
    fn boundary_probe(
        &mut self,
        check: &str,
        op: impl Fn(FunctionExpr) -> OperatorSpec,
        f: impl Fn(u32) -> Result<FunctionExpr>,
        x: SpaceSpec,
        y: SpaceSpec,
        expected: ProbeVerdict,
    ) -> Result<ProbeReport> {
        let members = self.boundary_members(|n| Ok(op(ha(n)?)), f)?;
        self.probe(check, &members, x, y, expected)
    }

    fn classification(&mut self, check: &str, got: Classification, observed: f64, threshold: f64, expected: Classification) {
        let status = if got == expected {
            Status::Pass
        } else if got == Classification::Inconclusive {
            Status::Inconclusive
        } else {
            Status::Fail
        };
        self.record(check, observed, threshold, status);
    }

    fn series(&mut self, check: &str, a: &LacunaryCoefficients, space: SpaceSpec, expected: Classification) -> Result<()> {
        let v = lacunary_membership(a, space, &self.cfg.series)?;
        let last = *v.doubling_ratios.last().unwrap_or(&1.0);
        let threshold = match expected {
            Classification::Divergent => self.cfg.series.divergent_ratio,
            _ => self.cfg.series.convergent_ratio,
        };
        self.classification(&format!("{check} [{space}] {expected:?}"), v.classification, last, threshold, expected);
        Ok(())
    }

    fn scan(&mut self, check: &str, g: &FunctionExpr, f: &FunctionExpr, s: f64, expected: Classification) -> Result<()> {
        let sch = RadialSchedule::dyadic(self.cfg.schedules.scan.iter().copied())?;
        let rep = divergence_scan(g, f, s, &sch, &self.cfg.scan)?;
        let inc = &rep.increments_per_doubling;
        let w = self.cfg.scan.window.min(inc.len().saturating_sub(1)).max(1);
        let tail = &inc[inc.len() - w - 1..];
        let min_ratio = tail.windows(2).map(|p| if p[0] > 0.0 { p[1] / p[0] } else { 0.0 }).fold(f64::INFINITY, f64::min);
        let observed = if min_ratio.is_finite() { min_ratio } else { 0.0 };
        self.classification(&format!("{check} s={s} {expected:?}"), rep.verdict, observed, self.cfg.scan.decay_ratio, expected);
        let mut t = Table::new(slug(check), &["r", "partial", "increment"]);
        for i in 0..rep.partials.len() {
            t.rows.push(vec![rep.radii.radii[i], rep.partials[i], inc[i]]);
        }
        self.scans.push(t);
        Ok(())
    }

    /// Growth of a membership constant along the boundary family: the
    /// least-squares slope of its logarithm per dyadic step.
    fn growth(&mut self, check: &str, params: &[f64], values: &[f64], expect_growth: bool) {
        let logs: Vec<f64> = values.iter().map(|v| v.max(1e-300).ln()).collect();
        let slope = ls_slope(params, &logs);
        let (thr, ok) = if expect_growth {
            (self.cfg.probe.divergence_slope, slope > self.cfg.probe.divergence_slope)
        } else {
            (self.cfg.probe.bounded_slope, slope < self.cfg.probe.bounded_slope)
        };
        let status = if ok {
            Status::Pass
        } else if slope >= self.cfg.probe.bounded_slope && slope <= self.cfg.probe.divergence_slope {
            Status::Inconclusive
        } else {
            Status::Fail
        };
        self.record(check, slope, thr, status);
        let mut t = Table::new(slug(check), &["param", "value"]);
        t.rows = params.iter().zip(values).map(|(&p, &v)| vec![p, v]).collect();
        self.tables.push(t);
    }

    fn exact_volterra_of_one(&mut self) -> Result<()> {
        let mut worst: f64 = 0.0;
        for g in symbol_corpus() {
            let n = 24;
            let t = apply_operator(&OperatorSpec::volterra(g.clone()), &FunctionExpr::constant(1.0), n)?;
            let mut want = g.taylor(n)?;
            want.coeffs[0] = c(0.0, 0.0);
            worst = worst.max(max_diff(&t, &want));
        }
        self.check_le("T_g(1) = g - g(0) coefficientwise", worst, self.cfg.tolerances.exact);
        Ok(())
    }
}

fn slug(s: &str) -> String {
    let mut out = String::new();
    for ch in s.chars() {
        if ch.is_ascii_alphanumeric() {
            out.push(ch.to_ascii_lowercase());
        } else if !out.ends_with('_') {
            out.push('_');
        }
    }
    out.trim_matches('_').to_string()
}

use ProbeVerdict::{BoundedConsistent as Bounded, DivergenceDetected as Diverges};

pub(crate) fn run(id: TheoremId, s: &mut Suite) -> Result<()> {
    match id {
        TheoremId::P1_2 => p1_2(s),
        TheoremId::T2_1 => t2_1(s),
        TheoremId::T2_2 => t2_2(s),
        TheoremId::T2_3 => t2_3(s),
        TheoremId::T2_4i => t2_4i(s),
        TheoremId::T2_4iii => t2_4iii(s),
        TheoremId::T2_4iv => t2_4iv(s),
        TheoremId::T2_6 => t2_6(s),
        TheoremId::TIgMg1 => igmg_1(s),
        TheoremId::TIgMg2 => igmg_2(s),
        TheoremId::TIgMg3 => igmg_3(s),
        TheoremId::T2_7 => t2_7(s),
        TheoremId::T3_3 => t3_3(s),
        TheoremId::T3_4 => t3_4(s),
        TheoremId::L4_3 => l4_3(s),
        TheoremId::KPropInstances => k_prop(s),
        TheoremId::PseudoIiEquiv => pseudo_equiv(s),
    }
}

fn p1_2(s: &mut Suite) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut worst: f64 = 0.0;
    for g in symbol_corpus() {
        for _ in 0..50 {
            let a = C64::from_polar(rng.gen_range(0.0..0.98), rng.gen_range(0.0..std::f64::consts::TAU));
            let out = operator_expr(&OperatorSpec::companion(g.clone()), &FunctionExpr::Mobius(a));
            let lhs = (1.0 - a.norm_sqr()) * out.derivative_at(a)?.norm();
            let rhs = g.eval(a)?.norm();
            worst = worst.max((lhs - rhs).abs() / rhs.max(1.0));
        }
    }
    s.check_le("witness |g(a)| = (1-|a|^2)|(I_g phi_a)'(a)|", worst, s.cfg.tolerances.pointwise);
    let mobius = |n: u32| Ok(FunctionExpr::Mobius(a_n(n)));
    let members = s.boundary_members(|_| Ok(OperatorSpec::companion(FunctionExpr::z())), mobius)?;
    s.probe("I_z on phi_a", &members, SpaceSpec::Bloch, SpaceSpec::Bloch, Bounded)?;
    s.boundary_probe("I_{h_a} on phi_a", OperatorSpec::companion, mobius, SpaceSpec::Bloch, SpaceSpec::Bloch, Diverges)?;
    s.boundary_probe("M_{h_a} on phi_a", OperatorSpec::multiplier, mobius, SpaceSpec::Bloch, SpaceSpec::Bloch, Diverges)?;
    Ok(())
}

fn t2_1(s: &mut Suite) -> Result<()> {
    s.exact_volterra_of_one()?;
    let b1 = SpaceSpec::Besov { p: 1.0 };
    let degrees = s.cfg.schedules.monomial_degrees.clone();
    for (name, op) in [
        ("T_z on z^n", OperatorSpec::volterra(FunctionExpr::z())),
        ("I_z on z^n", OperatorSpec::companion(FunctionExpr::z())),
        ("M_z on z^n", OperatorSpec::multiplier(FunctionExpr::z())),
    ] {
        let m = s.family_members(&op, &Family::Monomials, &degrees)?;
        s.probe(name, &m, b1, SpaceSpec::Bloch, Bounded)?;
    }
    // T_g(1) = g - g(0): the Bloch seminorm of g itself.
    let members = s.boundary_members(
        |n| Ok(OperatorSpec::volterra(FunctionExpr::product(vec![ha(n)?, ha(n)?]))),
        |_| Ok(FunctionExpr::constant(1.0)),
    )?;
    s.probe("T_{h_a^2} on 1", &members, b1, SpaceSpec::Bloch, Diverges)?;
    s.boundary_probe("I_{h_a} on phi_a", OperatorSpec::companion, |n| Ok(FunctionExpr::Mobius(a_n(n))), b1, SpaceSpec::Bloch, Diverges)?;
    Ok(())
}

fn t2_2(s: &mut Suite) -> Result<()> {
    let p = 2.0;
    let x = SpaceSpec::Besov { p };
    let z = FunctionExpr::z();
    for (name, op) in [("I_z on f_a", OperatorSpec::companion(z.clone())), ("T_z on f_a", OperatorSpec::volterra(z.clone()))] {
        let m = s.boundary_members(|_| Ok(op.clone()), |n| fa(n, p))?;
        s.probe(name, &m, x, SpaceSpec::Bloch, Bounded)?;
    }
    s.boundary_probe("T_{h_a} on f_a", OperatorSpec::volterra, |n| fa(n, p), x, SpaceSpec::Bloch, Diverges)?;
    s.boundary_probe("I_{h_a} on f_a", OperatorSpec::companion, |n| fa(n, p), x, SpaceSpec::Bloch, Diverges)?;
    let ns = s.cfg.schedules.boundary.clone();
    let params: Vec<f64> = ns.iter().map(|&n| n as f64).collect();
    let mut log_bloch = vec![];
    let mut bloch = vec![];
    for &n in &ns {
        let h = ha(n)?;
        log_bloch.push(seminorm(SpaceSpec::BlochLog { alpha: 1.0 - 1.0 / p }, &h, &s.ctx)?.value);
        bloch.push(seminorm(SpaceSpec::Bloch, &h, &s.ctx)?.value);
    }
    s.growth("Bloch_{log,1/p'} seminorm of h_a", &params, &log_bloch, true);
    // (1 - |z|^2) |h_a'(z)| <= |a| (1 + |z|) < 2 uniformly in a
    let top = bloch.iter().copied().fold(0.0, f64::max);
    s.check_le("max Bloch seminorm of h_a", top, 2.0);
    Ok(())
}

fn t2_3(s: &mut Suite) -> Result<()> {
    let p = 3.0;
    let x = SpaceSpec::Besov { p };
    let m = s.boundary_members(|_| Ok(OperatorSpec::volterra(FunctionExpr::z())), |n| fa(n, p))?;
    s.probe("T_z on f_a", &m, x, SpaceSpec::Bloch, Bounded)?;
    s.boundary_probe("T_{h_a} on f_a", OperatorSpec::volterra, |n| fa(n, p), x, SpaceSpec::Bloch, Diverges)?;
    // |f(a) - f(0)| <~ ||f||_{B^p} (log 2/(1-|a|^2))^{1/p'}
    let mut worst: f64 = 0.0;
    for &n in &s.cfg.schedules.boundary.clone() {
        let f = fa(n, p)?;
        let pts: Vec<C64> = (1..=n + 4).map(|k| C64::from_polar(dyadic_radius(k), 0.0)).collect();
        worst = worst.max(growth_margin(&f, p, &pts, &s.ctx)?);
    }
    s.check_le("B^p growth margin over f_a", worst, s.cfg.tolerances.growth_margin);
    Ok(())
}

fn t2_4i(s: &mut Suite) -> Result<()> {
    let q = 1.0 / 3.0;
    let y = SpaceSpec::Qs { s: q };
    s.exact_volterra_of_one()?;
    let degrees = s.cfg.schedules.monomial_degrees.clone();
    let m = s.family_members(&OperatorSpec::volterra(FunctionExpr::z()), &Family::Monomials, &degrees)?;
    s.probe("T_z on z^n", &m, SpaceSpec::Besov { p: 1.0 }, y, Bounded)?;
    // g = F_3 is not in Q_{1/3}; T_g(1) = g - g(0) grows with the truncation depth.
    let depths = s.cfg.schedules.fp_depths.clone();
    let members: Vec<ProbeMember> = depths
        .iter()
        .map(|&k| {
            let g = make_atom(AtomKind::Fp { p: 3.0, depth: k as usize })?;
            Ok(ProbeMember { param: k as f64, index: (k as f64).log2(), op: OperatorSpec::volterra(g), f: FunctionExpr::constant(1.0) })
        })
        .collect::<Result<_>>()?;
    s.probe("T_{F_3} on 1", &members, SpaceSpec::Besov { p: 1.0 }, y, Diverges)?;
    s.series("F_3 coefficients", &LacunaryCoefficients::fp(3.0, s.cfg.depths.gap)?, y, Classification::Divergent)?;
    Ok(())
}

fn t2_4iii(s: &mut Suite) -> Result<()> {
    let p = 2.0;
    let (x, y) = (SpaceSpec::Besov { p }, SpaceSpec::Qs { s: 1.0 });
    let m = s.boundary_members(|_| Ok(OperatorSpec::volterra(FunctionExpr::z())), |n| fa(n, p))?;
    s.probe("T_z on f_a", &m, x, y, Bounded)?;
    s.boundary_probe("T_{h_a} on f_a", OperatorSpec::volterra, |n| fa(n, p), x, y, Diverges)?;
    Ok(())
}

fn t2_4iv(s: &mut Suite) -> Result<()> {
    let (p, q) = (3.0, 0.5);
    let (x, y) = (SpaceSpec::Besov { p }, SpaceSpec::Qs { s: q });
    let tz = OperatorSpec::volterra(FunctionExpr::z());
    let m = s.boundary_members(|_| Ok(tz.clone()), |n| fa(n, p))?;
    s.probe("T_z on f_a", &m, x, y, Bounded)?;
    let depths = s.cfg.schedules.fp_depths.clone();
    let m = s.family_members(&tz, &Family::FpTruncations { p }, &depths)?;
    s.probe("T_z on F_p truncations", &m, x, y, Bounded)?;
    s.boundary_probe("T_{h_a} on f_a", OperatorSpec::volterra, |n| fa(n, p), x, y, Diverges)?;
    let ns = s.cfg.schedules.boundary.clone();
    let params: Vec<f64> = ns.iter().map(|&n| n as f64).collect();
    let k = ns
        .iter()
        .map(|&n| Ok(log_q_constant(&ha(n)?, q, 1.0 - 1.0 / p, LogVariant::Standard, &s.ctx)?.value))
        .collect::<Result<Vec<f64>>>()?;
    s.growth("Q_{s,log,1/p'} constant of h_a", &params, &k, true);
    Ok(())
}

fn t2_6(s: &mut Suite) -> Result<()> {
    let (p, q) = (1.5, 0.5);
    let (x, y) = (SpaceSpec::Besov { p }, SpaceSpec::Qs { s: q });
    s.boundary_probe("T_{h_a} on f_a", OperatorSpec::volterra, |n| fa(n, p), x, y, Diverges)?;
    let m = s.boundary_members(|_| Ok(OperatorSpec::volterra(FunctionExpr::z())), |n| fa(n, p))?;
    s.probe("T_z on f_a", &m, x, y, Bounded)?;
    s.notes.push(format!(
        "open region: g in Q_{{s,log,alpha}} with {:.4} < alpha <= 0.5 is neither necessary nor known sufficient",
        1.0 - 1.0 / p
    ));
    Ok(())
}

fn igmg_bounded_and_witness(s: &mut Suite, p: f64, q: f64) -> Result<()> {
    let (x, y) = (SpaceSpec::Besov { p }, SpaceSpec::Qs { s: q });
    let z = FunctionExpr::z();
    for (name, op) in [("I_z on f_a", OperatorSpec::companion(z.clone())), ("M_z on f_a", OperatorSpec::multiplier(z.clone()))] {
        let m = s.boundary_members(|_| Ok(op.clone()), |n| fa(n, p))?;
        s.probe(name, &m, x, y, Bounded)?;
    }
    s.boundary_probe("I_{h_a} on f_a", OperatorSpec::companion, |n| fa(n, p), x, y, Diverges)?;
    s.boundary_probe("M_{h_a} on f_a", OperatorSpec::multiplier, |n| fa(n, p), x, y, Diverges)?;
    Ok(())
}

fn igmg_1(s: &mut Suite) -> Result<()> {
    igmg_bounded_and_witness(s, 2.0, 0.5)
}

fn igmg_2(s: &mut Suite) -> Result<()> {
    igmg_bounded_and_witness(s, 3.0, 0.5)
}

fn igmg_3(s: &mut Suite) -> Result<()> {
    let p = 3.0;
    let q = 1.0 - 2.0 / p;
    let f = make_atom(AtomKind::Fp { p, depth: s.cfg.depths.scan })?;
    s.scan("int (1-r)^s M_2(r, F_p' g)^2 dr, g = z", &FunctionExpr::Monomial(1), &f, q, Classification::Divergent)?;
    let depths = s.cfg.schedules.fp_depths.clone();
    for (name, op) in [
        ("I_z on F_p truncations", OperatorSpec::companion(FunctionExpr::z())),
        ("M_z on F_p truncations", OperatorSpec::multiplier(FunctionExpr::z())),
    ] {
        let m = s.family_members(&op, &Family::FpTruncations { p }, &depths)?;
        s.probe(name, &m, SpaceSpec::Besov { p }, SpaceSpec::Qs { s: q }, Diverges)?;
    }
    let a = LacunaryCoefficients::fp(p, s.cfg.depths.gap)?;
    s.series("F_p coefficients", &a, SpaceSpec::Besov { p }, Classification::Convergent)?;
    s.series("F_p coefficients", &a, SpaceSpec::Qs { s: q }, Classification::Divergent)?;
    Ok(())
}

fn t2_7(s: &mut Suite) -> Result<()> {
    let (q, p) = (0.5, 2.0);
    let ns = s.cfg.schedules.qs_to_besov.clone();
    let members: Vec<ProbeMember> = ns
        .iter()
        .map(|&n| Ok(ProbeMember { param: n as f64, index: n as f64, op: OperatorSpec::multiplier(FunctionExpr::constant(1.0)), f: ha(n)? }))
        .collect::<Result<_>>()?;
    let rep = s.probe("M_1 on h_a", &members, SpaceSpec::Qs { s: q }, SpaceSpec::Besov { p }, Diverges)?;
    // rho_{B^p}(h_a) / rho_{Q_s}(h_a) ~ (log 1/(1-a))^{1/p'}
    let mut xs = vec![];
    let mut ys = vec![];
    for (i, m) in members.iter().enumerate() {
        if let Some(j) = rep.params.iter().position(|&v| v == m.param) {
            let rho_x = rep.x_norms[j] - m.f.eval(C64::default())?.norm();
            xs.push((m.param).ln());
            ys.push((rep.y_norms[j] / rho_x).ln());
        } else {
            s.notes.push(format!("member {i} missing from the probe"));
        }
    }
    let slope = ls_slope(&xs, &ys);
    let want = 1.0 - 1.0 / p;
    s.check_le("log-log slope of rho_{B^p}/rho_{Q_s} vs 1/p' (relative error)", (slope - want).abs() / want, s.cfg.tolerances.slope_rel);
    Ok(())
}

fn t3_3(s: &mut Suite) -> Result<()> {
    let (s1, s2) = (0.3, 0.6);
    let (x, y) = (SpaceSpec::Qs { s: s1 }, SpaceSpec::Qs { s: s2 });
    for (name, op) in [
        ("T_z on h_a", OperatorSpec::volterra(FunctionExpr::z())),
        ("I_z on h_a", OperatorSpec::companion(FunctionExpr::z())),
    ] {
        let m = s.boundary_members(|_| Ok(op.clone()), ha)?;
        s.probe(name, &m, x, y, Bounded)?;
    }
    s.boundary_probe("T_{h_a} on h_a", OperatorSpec::volterra, ha, x, y, Diverges)?;
    Ok(())
}

fn t3_4(s: &mut Suite) -> Result<()> {
    let (s1, s2) = (0.3, 0.7);
    let eps = (s2 - s1) / 2.0;
    let sch = RadialSchedule::dyadic(s.cfg.schedules.m2.iter().copied())?;
    let depth = s.cfg.depths.agw;
    let g = FunctionExpr::z();
    for (label, gamma, weight) in [("F", (1.0 + s1) / 2.0, s1), ("H", (1.0 + s1 + eps) / 2.0, s1 + eps)] {
        let a = agw_construct(gamma, s2, depth)?;
        let chk = agw_verify(&a, gamma, s2, &sch, s.cfg.tolerances.agw_min_ratio, &s.cfg.series)?;
        // Membership converges slowly; classify it on the deep coefficient sequence.
        let deep = agw_construct(gamma, s2, s.cfg.depths.gap.max(depth))?;
        let member = lacunary_membership(&deep, SpaceSpec::Qs { s: s2 }, &s.cfg.series)?;
        s.classification(
            &format!("{label} in Q_s2 (coefficient criterion)"),
            member.classification,
            *member.doubling_ratios.last().unwrap_or(&1.0),
            s.cfg.series.convergent_ratio,
            Classification::Convergent,
        );
        s.check_ge(&format!("{label}: min M_2(r, f')(1-r)^gamma"), chk.min_growth_ratio, s.cfg.tolerances.agw_min_ratio);
        s.scan(&format!("int (1-r)^s M_2(r, {label}' g)^2 dr"), &g, &FunctionExpr::Gap(a.clone()), weight, Classification::Divergent)?;
        if label == "F" {
            s.series("F sharpness", &a, SpaceSpec::Qs { s: s1 }, Classification::Divergent)?;
        } else {
            s.scan("int (1-r)^s M_2(r, H g')^2 dr", &FunctionExpr::Gap(a), &g, weight, Classification::Convergent)?;
        }
    }
    Ok(())
}

fn l4_3(s: &mut Suite) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    let b = FunctionExpr::Blaschke(vec![c(0.5, 0.0), c(-0.3, 0.4), c(0.0, -0.7)]);
    let n = 256;
    let tol = s.cfg.tolerances.division;
    let mut worst: f64 = 0.0;
    let mut worst_mult: f64 = 0.0;
    for _ in 0..8 {
        let q = random_poly(&mut rng, 16);
        let big_f = FunctionExpr::product(vec![b.clone(), FunctionExpr::Polynomial(q.clone())]);
        worst = worst.max(max_diff(&divide_inner(&big_f, &b, n, tol)?, &q));
        // f F / I = f (F / I) for f in X
        let f = FunctionExpr::Polynomial(random_poly(&mut rng, 8));
        let lhs = divide_inner(&FunctionExpr::product(vec![f.clone(), big_f]), &b, n, tol)?;
        let rhs = crate::func::series_multiply(&f.taylor(n)?, &q, n);
        worst_mult = worst_mult.max(max_diff(&lhs, &rhs));
    }
    s.check_le("F/I recovered for F = I q", worst, tol);
    s.check_le("f F / I = f (F / I)", worst_mult, tol);
    let q = FunctionExpr::Polynomial(random_poly(&mut rng, 6));
    let rejected = match divide_inner(&q, &b, n, tol) {
        Err(Error::NotDivisible { residual }) => residual,
        Err(e) => return Err(e),
        Ok(_) => 0.0,
    };
    s.check_ge("non-divisible input rejected (residual)", rejected, tol);
    Ok(())
}

fn k_prop(s: &mut Suite) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    let n = 64;
    let m = 4096;
    let mut shift_err: f64 = 0.0;
    let mut contraction: f64 = f64::NEG_INFINITY;
    let mut division: f64 = 0.0;
    let symbols = [
        FunctionExpr::z(),
        FunctionExpr::Monomial(3),
        FunctionExpr::Mobius(c(0.3, -0.6)),
        FunctionExpr::Blaschke(vec![c(0.5, 0.1), c(-0.7, 0.0)]),
        FunctionExpr::Polynomial(CoefficientSeries::from_real(&[0.5, 0.5])),
    ];
    for _ in 0..6 {
        let fs = random_poly(&mut rng, 40);
        let f = FunctionExpr::Polynomial(fs.clone());
        shift_err = shift_err.max(max_diff(&toeplitz_conj(&FunctionExpr::z(), &f, m, n)?, &backward_shift(&f, n)?));
        for psi in &symbols {
            // every symbol has sup norm 1 on the circle
            let t = toeplitz_conj(psi, &f, m, n)?;
            contraction = contraction.max(t.h2_norm() - fs.h2_norm());
        }
        let b = FunctionExpr::Blaschke(vec![c(0.4, 0.4), c(-0.1, 0.8)]);
        let h = FunctionExpr::product(vec![b.clone(), f.clone()]);
        let t = toeplitz_conj(&b, &h, m, n)?;
        let d = divide_inner(&h, &b, n, s.cfg.tolerances.division)?;
        division = division.max(max_diff(&t, &d)).max(max_diff(&t, &fs.truncated(n + 1)));
    }
    s.check_le("T_{conj z} = backward shift", shift_err, s.cfg.tolerances.exact);
    s.check_le("||T_{conj psi} f|| - ||psi||_inf ||f||", contraction, s.cfg.tolerances.contraction_slack);
    s.check_le("T_{conj I} h = h / I", division, s.cfg.tolerances.division);
    Ok(())
}

fn pseudo_equiv(s: &mut Suite) -> Result<()> {
    let (q, alpha) = (0.5, 0.5);
    let corpus = vec![
        FunctionExpr::z(),
        FunctionExpr::Monomial(2),
        FunctionExpr::Mobius(c(0.5, 0.0)),
        FunctionExpr::LogKernel { a: c(0.0, 0.5), scale: c(1.0, 0.0), offset: c(2.0, 0.0) },
        FunctionExpr::Polynomial(CoefficientSeries::from_real(&[0.2, -0.4, 0.1, 0.3, -0.2, 0.05])),
        FunctionExpr::Blaschke(vec![c(0.3, 0.0), c(0.0, -0.5)]),
    ];
    let mut t = Table::new("log_q_variants", &["index", "standard", "pseudo_ii", "ratio"]);
    let mut ratios = vec![];
    let mut agree = 0.0;
    for (i, f) in corpus.iter().enumerate() {
        let a = log_q_constant(f, q, alpha, LogVariant::Standard, &s.ctx)?;
        let b = log_q_constant(f, q, alpha, LogVariant::PseudoII, &s.ctx)?;
        if a.converged != b.converged {
            agree += 1.0;
        }
        ratios.push(a.value / b.value);
        t.rows.push(vec![i as f64, a.value, b.value, a.value / b.value]);
    }
    s.tables.push(t);
    let hi = ratios.iter().copied().fold(0.0, f64::max);
    let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    s.check_le("corpus spread of standard / pseudo_ii", hi / lo, s.cfg.tolerances.variant_factor);
    s.check_le("convergence flags disagreeing", agree, 0.0);
    Ok(())
}
