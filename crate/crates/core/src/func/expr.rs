use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::func::lacunary::LacunaryCoefficients;
use crate::func::series::{series_antiderivative, series_multiply, CoefficientSeries, SparseSeries};

/// Value and derivatives up to order 4.
pub type Jet = [C64; 5];

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// Closed-form analytic function on the disc.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum FunctionExpr {
    Constant(C64),
    Monomial(u32),
    Polynomial(CoefficientSeries),
    Sparse(SparseSeries),
    /// `scale * log(offset / (1 - conj(a) z))`
    LogKernel { a: C64, scale: C64, offset: C64 },
    /// `phi_a(z) = (a - z) / (1 - conj(a) z)`
    Mobius(C64),
    /// Finite Blaschke product with factors `(|a|/a) phi_a`, or `z` when `a = 0`.
    Blaschke(Vec<C64>),
    Gap(LacunaryCoefficients),
    Sum(Vec<FunctionExpr>),
    Product(Vec<FunctionExpr>),
    /// `outer(phi_a(z))`
    Compose { outer: Box<FunctionExpr>, a: C64 },
    /// `c0 + int_0^z integrand`
    Primitive { integrand: Box<FunctionExpr>, c0: C64 },
    Derivative(Box<FunctionExpr>),
}

fn check_param(a: C64, what: &str) -> Result<()> {
    if !(a.norm() < 1.0) || !a.re.is_finite() || !a.im.is_finite() {
        return Err(Error::domain(format!("{what} parameter {a} must lie in the open disc")));
    }
    Ok(())
}

pub fn mobius(a: C64, z: C64) -> C64 {
    (a - z) / (ONE - a.conj() * z)
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

fn mobius_jet(a: C64, z: C64) -> Jet {
    let den = ONE - a.conj() * z;
    let s = 1.0 - a.norm_sqr();
    let mut out = [ZERO; 5];
    out[0] = (a - z) / den;
    let mut ak = ONE; // conj(a)^(k-1)
    let mut dk = den * den; // den^(k+1)
    for k in 1..5 {
        out[k] = -(ak * s * factorial(k)) / dk;
        ak *= a.conj();
        dk *= den;
    }
    out
}

fn mul_jets(u: &Jet, v: &Jet) -> Jet {
    const BINOM: [[f64; 5]; 5] = [
        [1.0, 0.0, 0.0, 0.0, 0.0],
        [1.0, 1.0, 0.0, 0.0, 0.0],
        [1.0, 2.0, 1.0, 0.0, 0.0],
        [1.0, 3.0, 3.0, 1.0, 0.0],
        [1.0, 4.0, 6.0, 4.0, 1.0],
    ];
    let mut out = [ZERO; 5];
    for n in 0..5 {
        for k in 0..=n {
            out[n] += u[k] * v[n - k] * BINOM[n][k];
        }
    }
    out
}

fn compose_jets(o: &Jet, w: &Jet) -> Jet {
    let (w1, w2, w3, w4) = (w[1], w[2], w[3], w[4]);
    [
        o[0],
        o[1] * w1,
        o[2] * w1 * w1 + o[1] * w2,
        o[3] * w1 * w1 * w1 + o[2] * w1 * w2 * 3.0 + o[1] * w3,
        o[4] * w1 * w1 * w1 * w1
            + o[3] * w1 * w1 * w2 * 6.0
            + o[2] * (w2 * w2 * 3.0 + w1 * w3 * 4.0)
            + o[1] * w4,
    ]
}

// 8-point Gauss-Legendre on [0, 1].
const GL8_X: [f64; 8] = [
    0.019855071751231856,
    0.10166676129318664,
    0.2372337950418355,
    0.4082826787521751,
    0.5917173212478249,
    0.7627662049581645,
    0.8983332387068134,
    0.9801449282487681,
];
const GL8_W: [f64; 8] = [
    0.05061426814518813,
    0.11119051722668724,
    0.15685332293894363,
    0.18134189168918100,
    0.18134189168918100,
    0.15685332293894363,
    0.11119051722668724,
    0.05061426814518813,
];

impl FunctionExpr {
    pub fn constant(c: f64) -> Self {
        FunctionExpr::Constant(C64::new(c, 0.0))
    }

    pub fn z() -> Self {
        FunctionExpr::Monomial(1)
    }

    pub fn sum(parts: Vec<FunctionExpr>) -> Self {
        FunctionExpr::Sum(parts)
    }

    pub fn product(parts: Vec<FunctionExpr>) -> Self {
        FunctionExpr::Product(parts)
    }

    pub fn compose(outer: FunctionExpr, a: C64) -> Self {
        FunctionExpr::Compose { outer: Box::new(outer), a }
    }

    pub fn primitive(integrand: FunctionExpr, c0: C64) -> Self {
        FunctionExpr::Primitive { integrand: Box::new(integrand), c0 }
    }

    pub fn derivative_of(f: FunctionExpr) -> Self {
        FunctionExpr::Derivative(Box::new(f))
    }

    /// Checks that every parameter lies in the open disc.
    pub fn validate(&self) -> Result<()> {
        use FunctionExpr::*;
        match self {
            LogKernel { a, offset, .. } => {
                check_param(*a, "log kernel")?;
                if offset.norm() == 0.0 {
                    return Err(Error::domain("log kernel offset must be nonzero"));
                }
                Ok(())
            }
            Mobius(a) => check_param(*a, "mobius"),
            Blaschke(zs) => zs.iter().try_for_each(|a| check_param(*a, "blaschke zero")),
            Gap(g) => {
                if g.depth() > crate::func::lacunary::MAX_EVAL_DEPTH {
                    Err(Error::domain("gap series too deep to evaluate"))
                } else {
                    Ok(())
                }
            }
            Sum(p) | Product(p) => p.iter().try_for_each(|f| f.validate()),
            Compose { outer, a } => {
                check_param(*a, "composition")?;
                outer.validate()
            }
            Primitive { integrand, .. } => integrand.validate(),
            Derivative(f) => f.validate(),
            _ => Ok(()),
        }
    }

    /// Value and derivatives up to order 4 at `z`, `|z| < 1`.
    pub fn jet(&self, z: C64) -> Result<Jet> {
        if !(z.norm() < 1.0) {
            return Err(Error::domain(format!("evaluation point {z} outside the open disc")));
        }
        self.jet_unchecked(z)
    }

    fn jet_unchecked(&self, z: C64) -> Result<Jet> {
        use FunctionExpr::*;
        Ok(match self {
            Constant(c) => [*c, ZERO, ZERO, ZERO, ZERO],
            Monomial(n) => {
                let n = *n as i64;
                let mut out = [ZERO; 5];
                let mut fall = 1.0;
                for (k, slot) in out.iter_mut().enumerate() {
                    let k = k as i64;
                    if n < k {
                        break;
                    }
                    *slot = z.powu((n - k) as u32) * fall;
                    fall *= (n - k) as f64;
                }
                out
            }
            Polynomial(p) => {
                let [v, d1, d2, d3] = p.eval3(z);
                let d4 = if p.len() > 4 { p.derivative().eval3(z)[3] } else { ZERO };
                [v, d1, d2, d3, d4]
            }
            Sparse(s) => {
                let [v, d1, d2, d3] = s.eval3(z);
                let d4 = s.derivative().eval3(z)[3];
                [v, d1, d2, d3, d4]
            }
            LogKernel { a, scale, offset } => {
                let ac = a.conj();
                let den = ONE - ac * z;
                if den.norm() == 0.0 {
                    return Err(Error::Singularity(format!("log kernel at {z}")));
                }
                let mut out = [ZERO; 5];
                out[0] = *scale * (offset.ln() - den.ln());
                let mut r = ONE;
                for k in 1..5 {
                    r *= ac / den;
                    out[k] = *scale * r * factorial(k - 1);
                }
                out
            }
            Mobius(a) => mobius_jet(*a, z),
            Blaschke(zs) => {
                let mut acc = [ONE, ZERO, ZERO, ZERO, ZERO];
                for &a in zs {
                    let f = if a.norm() == 0.0 {
                        [z, ONE, ZERO, ZERO, ZERO]
                    } else {
                        let u = a.norm() / a;
                        let m = mobius_jet(a, z);
                        [m[0] * u, m[1] * u, m[2] * u, m[3] * u, m[4] * u]
                    };
                    acc = mul_jets(&acc, &f);
                }
                acc
            }
            Gap(g) => g.jet(z),
            Sum(parts) => {
                let mut acc = [ZERO; 5];
                for p in parts {
                    let j = p.jet_unchecked(z)?;
                    for k in 0..5 {
                        acc[k] += j[k];
                    }
                }
                acc
            }
            Product(parts) => {
                let mut acc = [ONE, ZERO, ZERO, ZERO, ZERO];
                for p in parts {
                    acc = mul_jets(&acc, &p.jet_unchecked(z)?);
                }
                acc
            }
            Compose { outer, a } => {
                let w = mobius_jet(*a, z);
                let o = outer.jet_unchecked(w[0])?;
                compose_jets(&o, &w)
            }
            Primitive { integrand, c0 } => {
                let g = integrand.jet_unchecked(z)?;
                let v = *c0 + integrand.ray_integral(z)?;
                [v, g[0], g[1], g[2], g[3]]
            }
            Derivative(f) => {
                let j = f.jet_unchecked(z)?;
                [j[1], j[2], j[3], j[4], C64::new(f64::NAN, f64::NAN)]
            }
        })
    }

    /// Derivatives of orders 1..=4 at `z`. Unlike [`Self::jet`] this never
    /// evaluates a primitive, so it is cheap for operator outputs.
    pub fn djet(&self, z: C64) -> Result<[C64; 4]> {
        if !(z.norm() < 1.0) {
            return Err(Error::domain(format!("evaluation point {z} outside the open disc")));
        }
        self.djet_unchecked(z)
    }

    fn djet_unchecked(&self, z: C64) -> Result<[C64; 4]> {
        use FunctionExpr::*;
        Ok(match self {
            Primitive { integrand, .. } => {
                let g = integrand.jet_unchecked(z)?;
                [g[0], g[1], g[2], g[3]]
            }
            Sum(parts) => {
                let mut acc = [ZERO; 4];
                for p in parts {
                    let j = p.djet_unchecked(z)?;
                    for k in 0..4 {
                        acc[k] += j[k];
                    }
                }
                acc
            }
            Compose { outer, a } => {
                let w = mobius_jet(*a, z);
                let o = outer.djet_unchecked(w[0])?;
                let j = compose_jets(&[ZERO, o[0], o[1], o[2], o[3]], &w);
                [j[1], j[2], j[3], j[4]]
            }
            _ => {
                let j = self.jet_unchecked(z)?;
                [j[1], j[2], j[3], j[4]]
            }
        })
    }

    /// `int_0^z self`, along the segment, graded toward the endpoint.
    fn ray_integral(&self, z: C64) -> Result<C64> {
        let rz = z.norm();
        if rz == 0.0 {
            return Ok(ZERO);
        }
        let mut breaks = vec![0.0f64];
        let mut t = 0.5;
        // Geometric panels until they are finer than the distance to the boundary.
        while 1.0 - t > (1.0 - rz).max(1e-14) * 0.25 && breaks.len() < 64 {
            breaks.push(t);
            t = 1.0 - (1.0 - t) * 0.5;
        }
        breaks.push(1.0);
        let mut acc = ZERO;
        for w in breaks.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            for (x, wt) in GL8_X.iter().zip(GL8_W.iter()) {
                let t = lo + (hi - lo) * x;
                acc += self.jet_unchecked(z * t)?[0] * (wt * (hi - lo));
            }
        }
        Ok(acc * z)
    }

    pub fn eval(&self, z: C64) -> Result<C64> {
        Ok(self.jet(z)?[0])
    }

    /// `(f(z), f'(z))`.
    pub fn eval_with_derivative(&self, z: C64) -> Result<(C64, C64)> {
        let j = self.jet(z)?;
        Ok((j[0], j[1]))
    }

    pub fn derivative_at(&self, z: C64) -> Result<C64> {
        Ok(self.djet(z)?[0])
    }

    /// Interior parameters near which `f` concentrates.
    pub fn features(&self) -> Vec<C64> {
        use FunctionExpr::*;
        match self {
            LogKernel { a, .. } | Mobius(a) => vec![*a],
            Blaschke(zs) => zs.clone(),
            Sum(p) | Product(p) => p.iter().flat_map(|f| f.features()).collect(),
            Compose { outer, a } => {
                let mut v = vec![*a];
                v.extend(outer.features().into_iter().map(|b| mobius(*a, b)));
                v
            }
            Primitive { integrand: f, .. } | Derivative(f) => f.features(),
            _ => vec![],
        }
    }

    /// Polynomial degree when `f` is a polynomial, else `None`.
    pub fn poly_degree(&self) -> Option<u64> {
        use FunctionExpr::*;
        match self {
            Constant(_) => Some(0),
            Monomial(n) => Some(*n as u64),
            Polynomial(p) => Some(p.degree() as u64),
            Sparse(s) => Some(s.degree()),
            Gap(g) => Some(if g.depth() == 0 { 0 } else { 1u64 << g.depth().min(63) }),
            Sum(p) => p.iter().map(|f| f.poly_degree()).try_fold(0, |m, d| d.map(|d| m.max(d))),
            Product(p) => p.iter().map(|f| f.poly_degree()).try_fold(0, |m, d| d.map(|d| m + d)),
            Primitive { integrand, .. } => integrand.poly_degree().map(|d| d + 1),
            Derivative(f) => f.poly_degree().map(|d| d.saturating_sub(1)),
            _ => None,
        }
    }

    /// True when every summand's nonzero Taylor coefficients are sparse
    /// (gap-type), so that dense degree bounds are meaningless for sampling.
    pub fn is_gap_like(&self) -> bool {
        use FunctionExpr::*;
        match self {
            Gap(_) | Sparse(_) => true,
            Sum(p) | Product(p) => p.iter().any(|f| f.is_gap_like()),
            Primitive { integrand: f, .. } | Derivative(f) => f.is_gap_like(),
            _ => false,
        }
    }

    /// Sparse Taylor expansion when `f` is built from polynomial-type pieces.
    pub fn to_sparse(&self, budget: u64) -> Option<SparseSeries> {
        use FunctionExpr::*;
        match self {
            Constant(c) => Some(SparseSeries::new(vec![(0, *c)])),
            Monomial(n) => Some(SparseSeries::new(vec![(*n as u64, ONE)])),
            Polynomial(p) => Some(SparseSeries::from_dense(p)),
            Sparse(s) => Some(s.clone()),
            Gap(g) => g.to_sparse().ok(),
            Sum(parts) => {
                let mut acc = SparseSeries::new(vec![]);
                for p in parts {
                    acc = acc.add(&p.to_sparse(budget)?);
                }
                Some(acc)
            }
            Product(parts) => {
                let mut acc = SparseSeries::new(vec![(0, ONE)]);
                for p in parts {
                    acc = acc.multiply(&p.to_sparse(budget)?, budget);
                }
                Some(acc)
            }
            Primitive { integrand, c0 } => Some(integrand.to_sparse(budget)?.antiderivative(*c0)),
            Derivative(f) => Some(f.to_sparse(budget)?.derivative()),
            _ => None,
        }
    }

    /// Taylor coefficients `c_0..c_N`.
    pub fn taylor(&self, n: usize) -> Result<CoefficientSeries> {
        use FunctionExpr::*;
        self.validate()?;
        Ok(match self {
            Constant(c) => CoefficientSeries::new(vec![*c]).truncated(n),
            Monomial(k) => {
                let mut c = vec![ZERO; n + 1];
                if (*k as usize) <= n {
                    c[*k as usize] = ONE;
                }
                CoefficientSeries::new(c)
            }
            Polynomial(p) => p.truncated(n),
            Sparse(s) => s.densify(n),
            Gap(g) => g.densify(n)?,
            LogKernel { a, scale, offset } => {
                let ac = a.conj();
                let mut c = vec![ZERO; n + 1];
                c[0] = *scale * offset.ln();
                let mut p = ONE;
                for (k, slot) in c.iter_mut().enumerate().skip(1) {
                    p *= ac;
                    *slot = *scale * p / k as f64;
                }
                CoefficientSeries::new(c)
            }
            Mobius(a) => CoefficientSeries::new(mobius_taylor(*a, n)),
            Blaschke(zs) => {
                let mut acc = CoefficientSeries::new(vec![ONE]).truncated(n);
                for &a in zs {
                    let f = if a.norm() == 0.0 {
                        FunctionExpr::Monomial(1).taylor(n)?
                    } else {
                        CoefficientSeries::new(mobius_taylor(a, n)).scale(a.norm() / a)
                    };
                    acc = series_multiply(&acc, &f, n);
                }
                acc
            }
            Sum(parts) => {
                let mut acc = CoefficientSeries::zeros(n + 1);
                for p in parts {
                    acc = acc.add(&p.taylor(n)?);
                }
                acc
            }
            Product(parts) => {
                let mut acc = CoefficientSeries::new(vec![ONE]).truncated(n);
                for p in parts {
                    acc = series_multiply(&acc, &p.taylor(n)?, n);
                }
                acc
            }
            Primitive { integrand, c0 } => {
                if n == 0 {
                    CoefficientSeries::new(vec![*c0])
                } else {
                    series_antiderivative(&integrand.taylor(n - 1)?, *c0)
                }
            }
            Derivative(f) => f.taylor(n + 1)?.derivative().truncated(n),
            Compose { outer, a } => match outer.poly_degree() {
                Some(d) if d <= 4096 && !outer.is_gap_like() => {
                    let oc = outer.taylor(d as usize)?;
                    let phi = CoefficientSeries::new(mobius_taylor(*a, n));
                    let mut acc = CoefficientSeries::zeros(n + 1);
                    for &c in oc.coeffs.iter().rev() {
                        acc = series_multiply(&acc, &phi, n);
                        acc.coeffs[0] += c;
                    }
                    acc
                }
                _ => self.taylor_by_sampling(n)?,
            },
        })
    }

    /// Coefficients via FFT of samples on a circle close to the boundary.
    fn taylor_by_sampling(&self, n: usize) -> Result<CoefficientSeries> {
        let rho = (1.0 - 1.0 / (n as f64 + 1.0)).max(0.5);
        let mut radius_bound = 0.0f64;
        for b in self.features() {
            radius_bound = radius_bound.max(b.norm());
        }
        let need = ((40.0 / (1.0 - radius_bound * rho).max(1e-9)) as usize).max(4 * (n + 1));
        let m = need.next_power_of_two().min(1 << 22);
        let mut buf: Vec<C64> = (0..m)
            .map(|k| {
                let t = 2.0 * std::f64::consts::PI * k as f64 / m as f64;
                self.eval(C64::from_polar(rho, t))
            })
            .collect::<Result<_>>()?;
        let mut planner = rustfft::FftPlanner::<f64>::new();
        planner.plan_fft_forward(m).process(&mut buf);
        Ok(CoefficientSeries::new(
            (0..=n)
                .map(|k| buf[k] / (m as f64 * rho.powi(k as i32)))
                .collect(),
        ))
    }

    /// Degree `N` at which the Taylor tail on `|z| = r` is below `tol`.
    pub fn tail_degree(&self, r: f64, tol: f64) -> usize {
        if let Some(d) = self.poly_degree() {
            return d as usize;
        }
        let rate = self.features().iter().map(|b| b.norm()).fold(0.0, f64::max) * r;
        let mult = self.features().len().max(1) as i32;
        let scale = self.coefficient_scale();
        let mut n = 1usize;
        loop {
            let bound = scale * (n as f64 + 1.0).powi(mult) * rate.powi(n as i32 + 1) / (1.0 - rate);
            if bound < tol || n > 50_000_000 {
                return n;
            }
            n += (n / 8).max(1);
        }
    }

    fn coefficient_scale(&self) -> f64 {
        use FunctionExpr::*;
        match self {
            Constant(c) => c.norm(),
            LogKernel { scale, .. } => scale.norm().max(1.0),
            Sum(p) => p.iter().map(|f| f.coefficient_scale()).sum(),
            Product(p) => p.iter().map(|f| f.coefficient_scale().max(1.0)).product(),
            Compose { outer, .. } => outer.coefficient_scale().max(1.0) * 4.0,
            Primitive { integrand, .. } => integrand.coefficient_scale().max(1.0),
            Derivative(f) => f.coefficient_scale().max(1.0) * 64.0,
            Polynomial(p) => p.coeffs.iter().map(|c| c.norm()).sum(),
            _ => 2.0,
        }
    }
}

fn mobius_taylor(a: C64, n: usize) -> Vec<C64> {
    let ac = a.conj();
    let s = a.norm_sqr() - 1.0;
    let mut c = vec![ZERO; n + 1];
    c[0] = a;
    let mut p = ONE;
    for slot in c.iter_mut().skip(1) {
        *slot = p * s;
        p *= ac;
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn mobius_at_its_parameter() {
        let a = c(0.3, 0.4);
        let (v, d) = FunctionExpr::Mobius(a).eval_with_derivative(a).unwrap();
        assert!(v.norm() < 1e-15);
        assert!((d + 1.0 / (1.0 - a.norm_sqr())).norm() < 1e-13);
    }

    #[test]
    fn log_kernel_taylor_example() {
        let f = FunctionExpr::LogKernel { a: c(0.5, 0.0), scale: ONE, offset: ONE };
        let t = f.taylor(3).unwrap();
        let want = [0.0, 0.5, 0.125, 0.5f64.powi(3) / 3.0];
        for k in 0..4 {
            assert!((t.coeffs[k] - want[k]).norm() < 1e-15);
        }
    }

    #[test]
    fn jets_match_finite_differences() {
        let f = FunctionExpr::sum(vec![
            FunctionExpr::compose(FunctionExpr::Polynomial(CoefficientSeries::from_real(&[0.0, 1.0, 0.5, -0.25])), c(0.5, 0.1)),
            FunctionExpr::product(vec![FunctionExpr::Mobius(c(-0.2, 0.3)), FunctionExpr::LogKernel { a: c(0.7, 0.0), scale: c(0.3, 0.0), offset: c(2.0, 0.0) }]),
            FunctionExpr::Blaschke(vec![c(0.0, 0.0), c(0.4, -0.4)]),
        ]);
        let z = c(0.21, -0.33);
        let h = 1e-5;
        let j = f.jet(z).unwrap();
        for k in 0..3 {
            let jp = f.jet(z + h).unwrap();
            let jm = f.jet(z - h).unwrap();
            let fd = (jp[k] - jm[k]) / (2.0 * h);
            assert!((fd - j[k + 1]).norm() < 1e-6 * (1.0 + j[k + 1].norm()), "order {k}");
        }
    }

    #[test]
    fn primitive_matches_antiderivative() {
        let g = FunctionExpr::LogKernel { a: c(0.6, 0.2), scale: ONE, offset: c(2.0, 0.0) };
        let p = FunctionExpr::primitive(g.clone(), c(1.0, 0.0));
        let z = c(0.5, 0.6);
        let t = g.taylor(400).unwrap();
        let exact = series_antiderivative(&t, c(1.0, 0.0)).eval(z);
        assert!((p.eval(z).unwrap() - exact).norm() < 1e-12);
    }

    #[test]
    fn compose_taylor_matches_sampling() {
        let f = FunctionExpr::compose(FunctionExpr::Polynomial(CoefficientSeries::from_real(&[1.0, 2.0, 0.0, 1.0])), c(0.5, 0.0));
        let a = f.taylor(40).unwrap();
        let b = f.taylor_by_sampling(40).unwrap();
        for k in 0..=40 {
            assert!((a.coeffs[k] - b.coeffs[k]).norm() < 1e-9);
        }
    }

    #[test]
    fn gap_jet_matches_sparse() {
        let g = LacunaryCoefficients::fp(3.0, 10).unwrap();
        let s = g.to_sparse().unwrap();
        let z = c(0.7, 0.5);
        let a = g.jet(z);
        let b = s.eval3(z);
        for k in 0..4 {
            assert!((a[k] - b[k]).norm() < 1e-9 * (1.0 + b[k].norm()));
        }
    }

    #[test]
    fn djet_agrees_with_jet() {
        let g = FunctionExpr::LogKernel { a: c(0.6, 0.2), scale: ONE, offset: c(2.0, 0.0) };
        let f = FunctionExpr::sum(vec![
            FunctionExpr::primitive(FunctionExpr::product(vec![g.clone(), FunctionExpr::Monomial(2)]), ONE),
            FunctionExpr::compose(FunctionExpr::primitive(g, ZERO), c(0.3, -0.1)),
        ]);
        let z = c(-0.4, 0.35);
        let j = f.jet(z).unwrap();
        let d = f.djet(z).unwrap();
        for k in 0..4 {
            assert!((j[k + 1] - d[k]).norm() < 1e-12 * (1.0 + d[k].norm()), "order {}", k + 1);
        }
    }
}
