use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::func::LacunaryCoefficients;
use crate::norms::SpaceSpec;
use crate::quad::RadialSchedule;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Convergent,
    Divergent,
    Inconclusive,
}

/// Doubling-ratio rules for partial sums of nonnegative terms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SeriesThresholds {
    /// Convergent when the last ratio `S_{2K}/S_K` is below this.
    pub convergent_ratio: f64,
    /// Divergent when the last `divergent_count` ratios all exceed this.
    pub divergent_ratio: f64,
    pub divergent_count: usize,
}

impl Default for SeriesThresholds {
    fn default() -> Self {
        SeriesThresholds { convergent_ratio: 1.02, divergent_ratio: 1.1, divergent_count: 3 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesVerdict {
    /// `S_K`, `K = 1..=depth`.
    pub partial_sums: Vec<f64>,
    /// `S_{2K} / S_K`, `K = 1..=depth/2`.
    pub doubling_ratios: Vec<f64>,
    pub classification: Classification,
}

/// Minimum depth for a classification.
pub const MIN_DEPTH: usize = 4;

fn classify_sums(partial_sums: Vec<f64>, th: &SeriesThresholds) -> SeriesVerdict {
    let d = partial_sums.len();
    let doubling_ratios: Vec<f64> = (1..=d / 2)
        .map(|k| {
            let (a, b) = (partial_sums[k - 1], partial_sums[2 * k - 1]);
            if a > 0.0 {
                b / a
            } else if b > 0.0 {
                f64::INFINITY
            } else {
                1.0
            }
        })
        .collect();
    let classification = if d < MIN_DEPTH {
        Classification::Inconclusive
    } else {
        let n = doubling_ratios.len();
        let k = th.divergent_count.min(n).max(1);
        if doubling_ratios[n - 1] < th.convergent_ratio {
            Classification::Convergent
        } else if doubling_ratios[n - k..].iter().all(|&r| r > th.divergent_ratio) {
            Classification::Divergent
        } else {
            Classification::Inconclusive
        }
    };
    SeriesVerdict { partial_sums, doubling_ratios, classification }
}

/// Coefficient criterion for gap series: `sum 2^{k(1-s)} |a_k|^2` for
/// `Q_s`, `sum 2^k |a_k|^p` for `B^p`.
pub fn lacunary_membership(a: &LacunaryCoefficients, space: SpaceSpec, th: &SeriesThresholds) -> Result<SeriesVerdict> {
    space.validate()?;
    let term: Box<dyn Fn(usize, C64) -> f64> = match space {
        SpaceSpec::Qs { s } => Box::new(move |k, c| (k as f64 * (1.0 - s)).exp2() * c.norm_sqr()),
        SpaceSpec::Besov { p } => Box::new(move |k, c| (k as f64).exp2() * c.norm().powf(p)),
        other => return Err(Error::domain(format!("no coefficient criterion for {other}"))),
    };
    let mut acc = 0.0;
    let sums = a
        .coeffs
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            acc += term(i + 1, c);
            acc
        })
        .collect();
    Ok(classify_sums(sums, th))
}

/// `M_2(r, f')^2 = sum |a_k|^2 4^k r^{2(2^k - 1)}`.
pub fn gap_m2_derivative_squared(a: &LacunaryCoefficients, r: f64) -> f64 {
    let lr = r.ln();
    a.coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let k = (i + 1) as f64;
            let e = k.exp2();
            c.norm_sqr() * (2.0 * k).exp2() * (2.0 * (e - 1.0) * lr).exp()
        })
        .sum()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct M2Row {
    pub r: f64,
    pub m2: f64,
    /// `M_2^2 (1-r)^{2/p'} log(2/(1-r))` when a `p` is given.
    pub ratio: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct M2Report {
    pub rows: Vec<M2Row>,
    pub warnings: Vec<String>,
}

impl M2Report {
    pub fn min_ratio(&self) -> Option<f64> {
        self.rows.iter().filter_map(|r| r.ratio).reduce(f64::min)
    }
}

/// Exact `M_2(r_n, f')` on a schedule, with the normalized ratio for `F_p`.
pub fn m2_gap_bound(a: &LacunaryCoefficients, schedule: &RadialSchedule, p: Option<f64>) -> Result<M2Report> {
    if let Some(p) = p {
        if !(p > 1.0) {
            return Err(Error::domain(format!("exponent p must exceed 1, got {p}")));
        }
    }
    let mut warnings = Vec::new();
    let limit = 1.0 - (-(a.depth() as f64 - 2.0)).exp2();
    if let Some(&r) = schedule.radii.iter().find(|&&r| r > limit + 1e-15) {
        warnings.push(format!("radius {r} beyond depth {} - 2: tail of the series missing", a.depth()));
    }
    let rows = schedule
        .radii
        .iter()
        .map(|&r| {
            let sq = gap_m2_derivative_squared(a, r);
            let ratio = p.map(|p| sq * (1.0 - r).powf(2.0 * (1.0 - 1.0 / p)) * (2.0 / (1.0 - r)).ln());
            M2Row { r, m2: sq.sqrt(), ratio }
        })
        .collect();
    Ok(M2Report { rows, warnings })
}

/// Arc of the unit circle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArcSpec {
    pub center: f64,
    pub width: f64,
}

impl ArcSpec {
    pub fn new(center: f64, width: f64) -> Result<Self> {
        if !(width > 0.0 && width <= 2.0 * PI) {
            return Err(Error::domain(format!("arc width must lie in (0, 2pi], got {width}")));
        }
        Ok(ArcSpec { center, width })
    }
}

/// Mean of `|f'(r e^{it})|^2` over the arc divided by its mean over the
/// circle, summed in closed form over pairs of gap terms.
pub fn arc_energy_ratio(a: &LacunaryCoefficients, arc: &ArcSpec, r: f64) -> Result<f64> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::domain(format!("radius must lie in (0, 1), got {r}")));
    }
    let full = gap_m2_derivative_squared(a, r);
    if full == 0.0 {
        return Ok(1.0);
    }
    if arc.width >= 2.0 * PI {
        return Ok(1.0);
    }
    // f'(r e^{it}) = sum_k c_k e^{i n_k t} with n_k = 2^k - 1.
    let lr = r.ln();
    let terms: Vec<(f64, C64)> = a
        .coeffs
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            let k = (i + 1) as f64;
            let n = k.exp2() - 1.0;
            (n, c * k.exp2() * (n * lr).exp())
        })
        .filter(|t| t.1.norm_sqr() > 0.0)
        .collect();
    let half = 0.5 * arc.width;
    let mut acc = 0.0;
    for (j, &(nj, cj)) in terms.iter().enumerate() {
        acc += cj.norm_sqr();
        for &(nk, ck) in &terms[j + 1..] {
            let m = nj - nk;
            let sinc = (m * half).sin() / (m * half);
            acc += 2.0 * (cj * ck.conj() * C64::from_polar(1.0, m * arc.center)).re * sinc;
        }
    }
    Ok(acc / full)
}

/// `a_k = 2^{k(gamma - 1)}`: a gap series with `M_2(r, f') >~ (1-r)^{-gamma}`
/// that lies in `Q_s` whenever `s - 2 gamma > -1`.
pub fn agw_construct(gamma: f64, s: f64, depth: usize) -> Result<LacunaryCoefficients> {
    if !(gamma > 0.0) {
        return Err(Error::domain(format!("growth exponent must be positive, got {gamma}")));
    }
    if !(s > 0.0 && s <= 1.0) {
        return Err(Error::domain(format!("s must lie in (0, 1], got {s}")));
    }
    if !(s - 2.0 * gamma > -1.0) {
        return Err(Error::domain(format!("(1-r)^{s} (1-r)^(-2*{gamma}) is not integrable")));
    }
    Ok(LacunaryCoefficients::new((1..=depth).map(|k| C64::new((k as f64 * (gamma - 1.0)).exp2(), 0.0)).collect()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AgwCheck {
    pub membership: SeriesVerdict,
    /// `min_n M_2(r_n, f') (1 - r_n)^gamma` over the schedule.
    pub min_growth_ratio: f64,
    pub passed: bool,
}

/// Postconditions of [`agw_construct`]: convergent `Q_s` criterion and
/// `M_2(r_n, f') >= c (1 - r_n)^{-gamma}` with `c >= min_ratio`.
pub fn agw_verify(
    a: &LacunaryCoefficients,
    gamma: f64,
    s: f64,
    schedule: &RadialSchedule,
    min_ratio: f64,
    th: &SeriesThresholds,
) -> Result<AgwCheck> {
    let membership = lacunary_membership(a, SpaceSpec::Qs { s }, th)?;
    let rep = m2_gap_bound(a, schedule, None)?;
    let min_growth_ratio = rep.rows.iter().map(|row| row.m2 * (1.0 - row.r).powf(gamma)).fold(f64::INFINITY, f64::min);
    let passed = membership.classification == Classification::Convergent && min_growth_ratio >= min_ratio;
    Ok(AgwCheck { membership, min_growth_ratio, passed })
}
