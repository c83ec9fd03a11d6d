use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::func::expr::FunctionExpr;
use crate::func::lacunary::LacunaryCoefficients;

/// Standard test functions.
#[derive(Clone, Debug, PartialEq)]
pub enum AtomKind {
    /// `(log 1/(1-|a|^2))^{-1/p} log 1/(1 - conj(a) z)`
    Fa { a: C64, p: f64 },
    /// `log 2/(1 - conj(a) z)`
    Ha { a: C64 },
    /// `sum_k k^{-1/2} 2^{-k/p} z^{2^k}`, `k = 1..depth`
    Fp { p: f64, depth: usize },
    Log { a: C64, scale: C64, offset: C64 },
    Mobius { a: C64 },
    Blaschke { zeros: Vec<C64> },
    Monomial { n: u32 },
}

pub fn make_atom(kind: AtomKind) -> Result<FunctionExpr> {
    let f = match kind {
        AtomKind::Fa { a, p } => {
            if !(p > 1.0) {
                return Err(Error::domain(format!("f_a needs p > 1, got {p}")));
            }
            if a.norm() == 0.0 {
                return Err(Error::domain("f_a needs a != 0"));
            }
            let l = (1.0 / (1.0 - a.norm_sqr())).ln();
            FunctionExpr::LogKernel { a, scale: C64::new(l.powf(-1.0 / p), 0.0), offset: C64::new(1.0, 0.0) }
        }
        AtomKind::Ha { a } => FunctionExpr::LogKernel { a, scale: C64::new(1.0, 0.0), offset: C64::new(2.0, 0.0) },
        AtomKind::Fp { p, depth } => FunctionExpr::Gap(LacunaryCoefficients::fp(p, depth)?),
        AtomKind::Log { a, scale, offset } => FunctionExpr::LogKernel { a, scale, offset },
        AtomKind::Mobius { a } => FunctionExpr::Mobius(a),
        AtomKind::Blaschke { zeros } => FunctionExpr::Blaschke(zeros),
        AtomKind::Monomial { n } => FunctionExpr::Monomial(n),
    };
    // Gap depth is checked where the series is evaluated, not here.
    if !matches!(f, FunctionExpr::Gap(_)) {
        f.validate()?;
    }
    Ok(f)
}

/// `1 - 2^{-n}`, the dyadic radius used by parameter families.
pub fn dyadic_radius(n: u32) -> f64 {
    1.0 - 0.5f64.powi(n as i32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fa_value_at_parameter() {
        let a = C64::new(0.9, 0.0);
        let f = make_atom(AtomKind::Fa { a, p: 2.0 }).unwrap();
        let want = (1.0f64 / 0.19).ln().sqrt();
        assert!((f.eval(a).unwrap().re - want).abs() < 1e-12);
    }

    #[test]
    fn rejects_boundary_parameter() {
        assert!(make_atom(AtomKind::Ha { a: C64::new(1.0, 0.0) }).is_err());
        assert!(make_atom(AtomKind::Fa { a: C64::new(0.5, 0.0), p: 1.0 }).is_err());
    }
}
