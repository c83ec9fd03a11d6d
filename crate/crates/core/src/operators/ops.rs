use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::func::{series_antiderivative, series_multiply, CoefficientSeries, FunctionExpr, SparseSeries};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorKind {
    /// `T_g f = int_0^z f g'`
    Volterra,
    /// `I_g f = int_0^z f' g`
    Companion,
    /// `M_g f = g f`
    Multiplier,
}

impl fmt::Display for OperatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OperatorKind::Volterra => "T",
            OperatorKind::Companion => "I",
            OperatorKind::Multiplier => "M",
        })
    }
}

impl FromStr for OperatorKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "T" | "t" | "volterra" => Ok(OperatorKind::Volterra),
            "I" | "i" | "companion" => Ok(OperatorKind::Companion),
            "M" | "m" | "multiplier" => Ok(OperatorKind::Multiplier),
            other => Err(Error::Config(format!("unknown operator {other:?}, expected T, I or M"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OperatorSpec {
    pub kind: OperatorKind,
    pub symbol: FunctionExpr,
}

impl OperatorSpec {
    pub fn new(kind: OperatorKind, symbol: FunctionExpr) -> Result<Self> {
        symbol.validate()?;
        Ok(OperatorSpec { kind, symbol })
    }

    pub fn volterra(g: FunctionExpr) -> Self {
        OperatorSpec { kind: OperatorKind::Volterra, symbol: g }
    }

    pub fn companion(g: FunctionExpr) -> Self {
        OperatorSpec { kind: OperatorKind::Companion, symbol: g }
    }

    pub fn multiplier(g: FunctionExpr) -> Self {
        OperatorSpec { kind: OperatorKind::Multiplier, symbol: g }
    }
}

/// Degree cap for the sparse path used with gap-series inputs.
pub const SPARSE_DEGREE_BUDGET: u64 = 1 << 24;

/// Above this output length, gap inputs go through sparse convolution.
const DENSE_LIMIT: usize = 1 << 16;

/// Taylor coefficients `0..=n` of `op f`.
pub fn apply_operator(op: &OperatorSpec, f: &FunctionExpr, n: usize) -> Result<CoefficientSeries> {
    op.symbol.validate()?;
    f.validate()?;
    if n > DENSE_LIMIT && f.is_gap_like() {
        let out = apply_sparse(op, f, (n as u64).min(SPARSE_DEGREE_BUDGET))?;
        return Ok(out.series.densify(n));
    }
    let g = &op.symbol;
    Ok(match op.kind {
        OperatorKind::Multiplier => series_multiply(&g.taylor(n)?, &f.taylor(n)?, n),
        _ if n == 0 => CoefficientSeries::new(vec![C64::default()]),
        // T_g(c) = c (g - g(0)) and I_g(c) = 0, without rounding.
        OperatorKind::Volterra if matches!(f, FunctionExpr::Constant(_)) => {
            let FunctionExpr::Constant(c) = f else { unreachable!() };
            let mut out = g.taylor(n)?;
            out.coeffs[0] = C64::default();
            if *c != C64::new(1.0, 0.0) {
                out = out.scale(*c);
            }
            out
        }
        OperatorKind::Companion if matches!(f, FunctionExpr::Constant(_)) => CoefficientSeries::new(vec![C64::default(); n + 1]),
        OperatorKind::Volterra => {
            let gd = g.taylor(n)?.derivative();
            series_antiderivative(&series_multiply(&gd, &f.taylor(n - 1)?, n - 1), C64::default())
        }
        OperatorKind::Companion => {
            let fd = f.taylor(n)?.derivative();
            series_antiderivative(&series_multiply(&g.taylor(n - 1)?, &fd, n - 1), C64::default())
        }
    })
}

/// Sparse result with the gap depth actually used.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseOutput {
    pub series: SparseSeries,
    /// Depth of a top-level gap input after truncation to the budget.
    pub truncation_depth: Option<usize>,
}

/// `op f` by sparse convolution, keeping degrees up to `budget`. A gap
/// input whose top exponent exceeds the budget is truncated first.
pub fn apply_sparse(op: &OperatorSpec, f: &FunctionExpr, budget: u64) -> Result<SparseOutput> {
    let budget = budget.min(SPARSE_DEGREE_BUDGET);
    let (f, depth) = match f {
        FunctionExpr::Gap(g) => {
            let d = (0..=g.depth()).rev().find(|&d| d == 0 || (1u64 << d) <= budget).unwrap_or(0);
            (FunctionExpr::Gap(g.truncated(d)), Some(d))
        }
        other => (other.clone(), None),
    };
    let g = &op.symbol;
    let no_sparse = |what: &str| Error::domain(format!("{what} has no sparse expansion"));
    let gs = g.to_sparse(budget).ok_or_else(|| no_sparse("symbol"))?;
    let fs = f.to_sparse(budget).ok_or_else(|| no_sparse("input"))?;
    let series = match op.kind {
        OperatorKind::Multiplier => gs.multiply(&fs, budget),
        OperatorKind::Volterra => gs.derivative().multiply(&fs, budget.saturating_sub(1)).antiderivative(C64::default()),
        OperatorKind::Companion => gs.multiply(&fs.derivative(), budget.saturating_sub(1)).antiderivative(C64::default()),
    };
    Ok(SparseOutput { series, truncation_depth: depth })
}

/// `op f` as an expression, for pointwise evaluation by the norms.
pub fn operator_expr(op: &OperatorSpec, f: &FunctionExpr) -> FunctionExpr {
    let g = op.symbol.clone();
    let zero = C64::default();
    match op.kind {
        OperatorKind::Multiplier => FunctionExpr::product(vec![g, f.clone()]),
        OperatorKind::Volterra => {
            FunctionExpr::primitive(FunctionExpr::product(vec![FunctionExpr::derivative_of(g), f.clone()]), zero)
        }
        OperatorKind::Companion => {
            FunctionExpr::primitive(FunctionExpr::product(vec![g, FunctionExpr::derivative_of(f.clone())]), zero)
        }
    }
}
