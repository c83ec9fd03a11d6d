use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::func::{dyadic_radius, make_atom, parse_kv, AtomKind, CoefficientSeries, FunctionExpr};
use crate::norms::{ls_slope, norm, seminorm, NormContext, SpaceSpec};
use crate::operators::ops::{operator_expr, OperatorSpec};

/// Test-function families indexed by an integer parameter.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum Family {
    /// `f_a`, `a = 1 - 2^{-n}`.
    Fa { p: f64 },
    /// `h_a`, `a = 1 - 2^{-n}`.
    Ha,
    /// `F_p` truncated at depth `K`.
    FpTruncations { p: f64 },
    /// `z^n`.
    Monomials,
    /// Degree-`n` polynomials with seeded uniform coefficients.
    RandomPolys { seed: u64 },
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Fa { p } => write!(f, "fa:p={p}"),
            Family::Ha => write!(f, "ha"),
            Family::FpTruncations { p } => write!(f, "fp:p={p}"),
            Family::Monomials => write!(f, "monomials"),
            Family::RandomPolys { seed } => write!(f, "random:seed={seed}"),
        }
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (name, rest) = s.split_once(':').unwrap_or((s, ""));
        let kv = parse_kv(rest)?;
        let num = |k: &str| -> Result<f64> {
            kv.get(k)
                .ok_or_else(|| Error::Config(format!("family {name} needs {k}=")))?
                .parse::<f64>()
                .map_err(|e| Error::Config(format!("family {name}: {k}: {e}")))
        };
        match name.trim() {
            "fa" => Ok(Family::Fa { p: num("p")? }),
            "ha" => Ok(Family::Ha),
            "fp" => Ok(Family::FpTruncations { p: num("p")? }),
            "monomials" => Ok(Family::Monomials),
            "random" => Ok(Family::RandomPolys { seed: if kv.contains_key("seed") { num("seed")? as u64 } else { 0 } }),
            other => Err(Error::Config(format!("unknown family {other:?}"))),
        }
    }
}

impl Family {
    pub fn member(&self, param: u32) -> Result<FunctionExpr> {
        let a = C64::new(dyadic_radius(param), 0.0);
        match self {
            Family::Fa { p } => make_atom(AtomKind::Fa { a, p: *p }),
            Family::Ha => make_atom(AtomKind::Ha { a }),
            Family::FpTruncations { p } => make_atom(AtomKind::Fp { p: *p, depth: param as usize }),
            Family::Monomials => Ok(FunctionExpr::Monomial(param)),
            Family::RandomPolys { seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(1_000_003).wrapping_add(param as u64));
                let c = (0..=param).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
                Ok(FunctionExpr::Polynomial(CoefficientSeries::new(c)))
            }
        }
    }

    /// Position of a parameter on the dyadic scale.
    pub fn dyadic_index(&self, param: u32) -> f64 {
        match self {
            Family::Monomials | Family::RandomPolys { .. } | Family::FpTruncations { .. } => (param.max(1) as f64).log2(),
            _ => param as f64,
        }
    }
}

/// Verdict thresholds for boundedness probes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ProbeThresholds {
    /// Divergence needs a log-ratio slope per dyadic step above this.
    pub divergence_slope: f64,
    /// ... and this many trailing increments of the log-ratio all positive.
    pub sustained_steps: usize,
    /// Boundedness needs a log-ratio slope below this ...
    pub bounded_slope: f64,
    /// ... or the trailing log-ratio increments shrinking by at least this
    /// factor per step.
    pub saturation_ratio: f64,
}

impl Default for ProbeThresholds {
    fn default() -> Self {
        ProbeThresholds { divergence_slope: 0.02, sustained_steps: 6, bounded_slope: 0.01, saturation_ratio: 0.8 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProbeVerdict {
    BoundedConsistent,
    DivergenceDetected,
    Inconclusive,
}

impl fmt::Display for ProbeVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProbeVerdict::BoundedConsistent => "bounded-consistent",
            ProbeVerdict::DivergenceDetected => "divergence-detected",
            ProbeVerdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub family: String,
    pub params: Vec<f64>,
    pub x_norms: Vec<f64>,
    pub y_norms: Vec<f64>,
    pub ratios: Vec<f64>,
    /// Convergence flag of each `Y` seminorm.
    pub y_converged: Vec<bool>,
    pub sup_ratio: f64,
    /// Least-squares slope of `ln ratio` per dyadic step.
    pub trend_slope: f64,
    pub verdict: ProbeVerdict,
    pub warnings: Vec<String>,
}

/// One probe input: an operator applied to a function, at a parameter
/// value with its dyadic index.
#[derive(Clone, Debug)]
pub struct ProbeMember {
    pub param: f64,
    pub index: f64,
    pub op: OperatorSpec,
    pub f: FunctionExpr,
}

/// `||f||_X` and `rho_Y(op f)` over the members, with a verdict.
pub fn probe_members(
    label: &str,
    members: &[ProbeMember],
    x: SpaceSpec,
    y: SpaceSpec,
    ctx: &NormContext,
    th: &ProbeThresholds,
) -> Result<ProbeReport> {
    if members.is_empty() {
        return Err(Error::EmptyInput("probe schedule".into()));
    }
    let mut rep = ProbeReport {
        family: label.to_string(),
        params: vec![],
        x_norms: vec![],
        y_norms: vec![],
        ratios: vec![],
        y_converged: vec![],
        sup_ratio: 0.0,
        trend_slope: 0.0,
        verdict: ProbeVerdict::Inconclusive,
        warnings: vec![],
    };
    let mut idx = Vec::new();
    for m in members {
        let xn = norm(x, &m.f, ctx)?;
        if !(xn > 0.0) {
            rep.warnings.push(format!("member {} skipped: zero {x} norm", m.param));
            continue;
        }
        let yr = seminorm(y, &operator_expr(&m.op, &m.f), ctx)?;
        rep.params.push(m.param);
        rep.x_norms.push(xn);
        rep.y_norms.push(yr.value);
        rep.ratios.push(yr.value / xn);
        rep.y_converged.push(yr.converged);
        idx.push(m.index);
    }
    rep.sup_ratio = rep.ratios.iter().copied().fold(0.0, f64::max);
    let logs: Vec<f64> = rep.ratios.iter().map(|r| r.max(1e-300).ln()).collect();
    rep.trend_slope = ls_slope(&idx, &logs);
    rep.verdict = verdict(&logs, rep.trend_slope, &rep.y_converged, th);
    Ok(rep)
}

fn verdict(logs: &[f64], slope: f64, converged: &[bool], th: &ProbeThresholds) -> ProbeVerdict {
    if logs.len() < 2 {
        return ProbeVerdict::Inconclusive;
    }
    let k = th.sustained_steps;
    let sustained = logs.len() > k && logs[logs.len() - k - 1..].windows(2).all(|w| w[1] > w[0]);
    let converged = converged.iter().all(|&c| c);
    let saturating = logs.len() > k + 1 && {
        let inc: Vec<f64> = logs[logs.len() - k - 2..].windows(2).map(|w| (w[1] - w[0]).abs()).collect();
        inc.windows(2).all(|w| w[1] < th.saturation_ratio * w[0])
    };
    let diverging = slope > th.divergence_slope && sustained;
    if diverging && !saturating {
        ProbeVerdict::DivergenceDetected
    } else if !diverging && converged && (slope < th.bounded_slope || saturating) {
        ProbeVerdict::BoundedConsistent
    } else {
        ProbeVerdict::Inconclusive
    }
}

/// Probe `op` from `X` to `Y` on a family at the given parameters.
pub fn probe_boundedness(
    op: &OperatorSpec,
    x: SpaceSpec,
    y: SpaceSpec,
    family: &Family,
    schedule: &[u32],
    ctx: &NormContext,
    th: &ProbeThresholds,
) -> Result<ProbeReport> {
    x.validate()?;
    y.validate()?;
    let members = schedule
        .iter()
        .map(|&k| {
            Ok(ProbeMember { param: k as f64, index: family.dyadic_index(k), op: op.clone(), f: family.member(k)? })
        })
        .collect::<Result<Vec<_>>>()?;
    probe_members(&family.to_string(), &members, x, y, ctx, th)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn logs(f: impl Fn(f64) -> f64) -> Vec<f64> {
        (6..=14).map(|n| f(n as f64).ln()).collect()
    }

    fn slope(l: &[f64]) -> f64 {
        ls_slope(&(0..l.len()).map(|i| i as f64).collect::<Vec<_>>(), l)
    }

    #[test]
    fn geometric_saturation_is_bounded() {
        // I_z on h_a, Q_0.3 -> Q_0.6, n = 6..14
        let r = [0.53060, 0.55602, 0.57559, 0.59042, 0.60146, 0.60950, 0.61513, 0.61894, 0.62136];
        let l: Vec<f64> = r.iter().map(|x: &f64| x.ln()).collect();
        assert!(slope(&l) > 0.01);
        assert_eq!(verdict(&l, slope(&l), &[true; 9], &ProbeThresholds::default()), ProbeVerdict::BoundedConsistent);
        assert_eq!(verdict(&l, slope(&l), &[false; 9], &ProbeThresholds::default()), ProbeVerdict::Inconclusive);
    }

    #[test]
    fn root_log_growth_is_divergent() {
        let l = logs(|n| n.sqrt());
        assert_eq!(verdict(&l, slope(&l), &[true; 9], &ProbeThresholds::default()), ProbeVerdict::DivergenceDetected);
    }
}
