//! Truncated Taylor-series arithmetic in one holomorphic parameter.
//!
//! A `Jet` stores Taylor-normalized coefficients `a_k = f^(k)(s0)/k!` up to a
//! fixed truncation order, so products are plain Cauchy convolutions and the
//! k-th derivative is recovered as `k! a_k`. Jets are the differentiation
//! substrate for every curve in the crate: polynomial curves are evaluated
//! into jets exactly, and all downstream formulas are rational, so no finite
//! differencing ever enters the library itself (it appears only as an
//! independent oracle in tests).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spinor::{C64, SpacetimePoint};

/// Absolute floor below which a jet value cannot be divided by.
const DIV_TOL: f64 = 1e-14;

/// Truncated Taylor expansion of a holomorphic function of one parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    coeffs: Vec<C64>,
}

impl Jet {
    pub fn new(coeffs: Vec<C64>) -> Self {
        assert!(!coeffs.is_empty(), "a jet needs at least its value coefficient");
        Self { coeffs }
    }

    pub fn constant(v: C64, order: usize) -> Self {
        let mut coeffs = vec![C64::new(0.0, 0.0); order + 1];
        coeffs[0] = v;
        Self { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self::constant(C64::new(0.0, 0.0), order)
    }

    /// The expansion of the identity map `s` around `value`.
    pub fn variable(value: C64, order: usize) -> Self {
        let mut j = Self::constant(value, order);
        if order >= 1 {
            j.coeffs[1] = C64::new(1.0, 0.0);
        }
        j
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn value(&self) -> C64 {
        self.coeffs[0]
    }

    pub fn coeff(&self, k: usize) -> C64 {
        self.coeffs.get(k).copied().unwrap_or_else(|| C64::new(0.0, 0.0))
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    /// The k-th derivative, `k! a_k`.
    pub fn derivative(&self, k: usize) -> C64 {
        let mut fact = 1.0;
        for i in 2..=k {
            fact *= i as f64;
        }
        self.coeff(k) * fact
    }

    /// Jet of the derivative function, one order lower.
    pub fn derivative_jet(&self) -> Jet {
        if self.coeffs.len() == 1 {
            return Jet::zero(0);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, a)| a * (k as f64))
            .collect();
        Jet::new(coeffs)
    }

    pub fn truncated(&self, order: usize) -> Jet {
        assert!(order <= self.order(), "cannot extend a jet by truncation");
        Jet::new(self.coeffs[..=order].to_vec())
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    fn assert_same_order(&self, other: &Jet) {
        assert_eq!(self.order(), other.order(), "jet orders must agree");
    }

    pub fn add(&self, other: &Jet) -> Jet {
        self.assert_same_order(other);
        Jet::new(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Jet) -> Jet {
        self.assert_same_order(other);
        Jet::new(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Jet {
        Jet::new(self.coeffs.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, c: C64) -> Jet {
        Jet::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Cauchy product truncated at the common order.
    pub fn mul(&self, other: &Jet) -> Jet {
        self.assert_same_order(other);
        let n = self.coeffs.len();
        let mut out = vec![C64::new(0.0, 0.0); n];
        for k in 0..n {
            let mut acc = C64::new(0.0, 0.0);
            for j in 0..=k {
                acc += self.coeffs[j] * other.coeffs[k - j];
            }
            out[k] = acc;
        }
        Jet::new(out)
    }

    /// Quotient jet; requires the divisor's value to stay clear of zero.
    pub fn div(&self, other: &Jet) -> Result<Jet> {
        self.assert_same_order(other);
        let b0 = other.value();
        if b0.norm() <= DIV_TOL * other.max_abs().max(1.0) {
            return Err(Error::DivisionBySingularJet);
        }
        let n = self.coeffs.len();
        let mut out = vec![C64::new(0.0, 0.0); n];
        for k in 0..n {
            let mut acc = self.coeffs[k];
            for j in 1..=k {
                acc -= other.coeffs[j] * out[k - j];
            }
            out[k] = acc / b0;
        }
        Ok(Jet::new(out))
    }
}

/// Exact jet of a polynomial `sum_k coeffs[k] s^k` at the point `s0`,
/// computed by Horner evaluation on the jet variable.
pub fn eval_poly_jet(coeffs: &[C64], s0: C64, order: usize) -> Jet {
    let var = Jet::variable(s0, order);
    let mut acc = Jet::zero(order);
    for c in coeffs.iter().rev() {
        acc = acc.mul(&var).add(&Jet::constant(*c, order));
    }
    acc
}

/// Plain polynomial evaluation at a point.
pub fn eval_poly(coeffs: &[C64], s0: C64) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        acc = acc * s0 + c;
    }
    acc
}

/// A two-component spinor curve jet (components share one order).
#[derive(Debug, Clone, PartialEq)]
pub struct JetVec2(pub [Jet; 2]);

impl JetVec2 {
    pub fn constant(v: [C64; 2], order: usize) -> Self {
        Self([Jet::constant(v[0], order), Jet::constant(v[1], order)])
    }

    pub fn order(&self) -> usize {
        self.0[0].order()
    }

    pub fn value(&self) -> [C64; 2] {
        [self.0[0].value(), self.0[1].value()]
    }

    pub fn deriv1(&self) -> [C64; 2] {
        [self.0[0].derivative(1), self.0[1].derivative(1)]
    }

    pub fn derivative(&self) -> JetVec2 {
        JetVec2([self.0[0].derivative_jet(), self.0[1].derivative_jet()])
    }

    pub fn truncated(&self, order: usize) -> JetVec2 {
        JetVec2([self.0[0].truncated(order), self.0[1].truncated(order)])
    }

    pub fn add(&self, other: &JetVec2) -> JetVec2 {
        JetVec2([self.0[0].add(&other.0[0]), self.0[1].add(&other.0[1])])
    }

    pub fn sub(&self, other: &JetVec2) -> JetVec2 {
        JetVec2([self.0[0].sub(&other.0[0]), self.0[1].sub(&other.0[1])])
    }

    pub fn scale(&self, c: C64) -> JetVec2 {
        JetVec2([self.0[0].scale(c), self.0[1].scale(c)])
    }

    pub fn scale_jet(&self, j: &Jet) -> JetVec2 {
        JetVec2([self.0[0].mul(j), self.0[1].mul(j)])
    }

    pub fn div_jet(&self, j: &Jet) -> Result<JetVec2> {
        Ok(JetVec2([self.0[0].div(j)?, self.0[1].div(j)?]))
    }

    /// Index raising, componentwise on the jet coefficients.
    pub fn raise(&self) -> JetVec2 {
        JetVec2([self.0[1].clone(), self.0[0].neg()])
    }

    pub fn lower(&self) -> JetVec2 {
        JetVec2([self.0[1].neg(), self.0[0].clone()])
    }

    /// Plain component pairing `a_0 b_0 + a_1 b_1`.
    pub fn dot(&self, other: &JetVec2) -> Jet {
        self.0[0].mul(&other.0[0]).add(&self.0[1].mul(&other.0[1]))
    }

    /// Outer product producing a matrix jet `a[A] b[A']`.
    pub fn outer(&self, other: &JetVec2) -> JetMat2 {
        JetMat2([
            [self.0[0].mul(&other.0[0]), self.0[0].mul(&other.0[1])],
            [self.0[1].mul(&other.0[0]), self.0[1].mul(&other.0[1])],
        ])
    }
}

/// A 2x2 matrix curve jet, the jet counterpart of [`SpacetimePoint`].
#[derive(Debug, Clone, PartialEq)]
pub struct JetMat2(pub [[Jet; 2]; 2]);

impl JetMat2 {
    pub fn constant(p: &SpacetimePoint, order: usize) -> Self {
        Self([
            [Jet::constant(p.m[0][0], order), Jet::constant(p.m[0][1], order)],
            [Jet::constant(p.m[1][0], order), Jet::constant(p.m[1][1], order)],
        ])
    }

    pub fn identity(order: usize) -> Self {
        Self::constant(&SpacetimePoint::identity(), order)
    }

    pub fn order(&self) -> usize {
        self.0[0][0].order()
    }

    pub fn at(&self, a: usize, b: usize) -> &Jet {
        &self.0[a][b]
    }

    pub fn value(&self) -> SpacetimePoint {
        SpacetimePoint::new([
            [self.0[0][0].value(), self.0[0][1].value()],
            [self.0[1][0].value(), self.0[1][1].value()],
        ])
    }

    /// First derivative matrix.
    pub fn deriv1(&self) -> SpacetimePoint {
        SpacetimePoint::new([
            [self.0[0][0].derivative(1), self.0[0][1].derivative(1)],
            [self.0[1][0].derivative(1), self.0[1][1].derivative(1)],
        ])
    }

    pub fn derivative(&self) -> JetMat2 {
        self.map(|j| j.derivative_jet())
    }

    pub fn truncated(&self, order: usize) -> JetMat2 {
        self.map(|j| j.truncated(order))
    }

    fn map(&self, f: impl Fn(&Jet) -> Jet) -> JetMat2 {
        JetMat2([
            [f(&self.0[0][0]), f(&self.0[0][1])],
            [f(&self.0[1][0]), f(&self.0[1][1])],
        ])
    }

    pub fn add(&self, other: &JetMat2) -> JetMat2 {
        JetMat2([
            [self.0[0][0].add(&other.0[0][0]), self.0[0][1].add(&other.0[0][1])],
            [self.0[1][0].add(&other.0[1][0]), self.0[1][1].add(&other.0[1][1])],
        ])
    }

    pub fn sub(&self, other: &JetMat2) -> JetMat2 {
        JetMat2([
            [self.0[0][0].sub(&other.0[0][0]), self.0[0][1].sub(&other.0[0][1])],
            [self.0[1][0].sub(&other.0[1][0]), self.0[1][1].sub(&other.0[1][1])],
        ])
    }

    pub fn scale(&self, c: C64) -> JetMat2 {
        self.map(|j| j.scale(c))
    }

    pub fn transpose(&self) -> JetMat2 {
        JetMat2([
            [self.0[0][0].clone(), self.0[1][0].clone()],
            [self.0[0][1].clone(), self.0[1][1].clone()],
        ])
    }

    pub fn mul(&self, other: &JetMat2) -> JetMat2 {
        let mut out = Vec::with_capacity(4);
        for a in 0..2 {
            for b in 0..2 {
                out.push(
                    self.0[a][0].mul(&other.0[0][b]).add(&self.0[a][1].mul(&other.0[1][b])),
                );
            }
        }
        let m11 = out.pop().unwrap();
        let m10 = out.pop().unwrap();
        let m01 = out.pop().unwrap();
        let m00 = out.pop().unwrap();
        JetMat2([[m00, m01], [m10, m11]])
    }

    pub fn mul_vec(&self, v: &JetVec2) -> JetVec2 {
        JetVec2([
            self.0[0][0].mul(&v.0[0]).add(&self.0[0][1].mul(&v.0[1])),
            self.0[1][0].mul(&v.0[0]).add(&self.0[1][1].mul(&v.0[1])),
        ])
    }

    pub fn det(&self) -> Jet {
        self.0[0][0].mul(&self.0[1][1]).sub(&self.0[0][1].mul(&self.0[1][0]))
    }

    pub fn div_jet(&self, j: &Jet) -> Result<JetMat2> {
        Ok(JetMat2([
            [self.0[0][0].div(j)?, self.0[0][1].div(j)?],
            [self.0[1][0].div(j)?, self.0[1][1].div(j)?],
        ]))
    }

    /// Jet-valued matrix inverse via the adjugate; the value matrix must be
    /// invertible.
    pub fn inverse(&self) -> Result<JetMat2> {
        let det = self.det();
        if det.value().norm() <= crate::spinor::SINGULAR_TOL * self.value().norm_sq().max(1.0) {
            return Err(Error::SingularMatrix);
        }
        let adj = JetMat2([
            [self.0[1][1].clone(), self.0[0][1].neg()],
            [self.0[1][0].neg(), self.0[0][0].clone()],
        ]);
        adj.div_jet(&det)
    }

    pub fn frob_norm_value(&self) -> f64 {
        self.value().norm()
    }
}

/// Residual of the inverse-differential identity
/// `d(b^{-1}) = -b^{-1} db b^{-1}` checked on the first derivative of a
/// matrix jet with invertible value.
pub fn inverse_differential_residual(b: &JetMat2) -> Result<f64> {
    if b.order() < 1 {
        return Err(Error::InsufficientJetOrder { need: 1, got: b.order() });
    }
    let lhs = b.inverse()?.deriv1();
    let b0_inv = b.value().inverse()?;
    let rhs = b0_inv.mul(&b.deriv1()).mul(&b0_inv).scale(Complex64::new(-1.0, 0.0));
    Ok(lhs.sub(&rhs).norm() / lhs.norm().max(1.0))
}
