//! Two-spinor algebra over complexified Minkowski space.
//!
//! A point or vector of C^4 is a 2x2 complex matrix `m[A][A']` with an
//! unprimed row index `A` and a primed column index `A'`. The Minkowski
//! pairing is `<v,v> = 2 det(v)`, so a vector is null exactly when its
//! determinant vanishes, in which case it has rank one and factors as an
//! outer product `v^{AA'} = lam^A pi^{A'}`.
//!
//! The Levi-Civita convention is fixed once for the whole crate, for primed
//! and unprimed indices alike:
//!
//! ```text
//! eps_{01} = eps^{01} = +1,
//! raising   k^A = eps^{AB} k_B   =>  (k_0, k_1) -> (k_1, -k_0),
//! lowering  k_B = k^A eps_{AB}   =>  (k^0, k^1) -> (-k^1, k^0).
//! ```
//!
//! Everything downstream (incidence relations, inversion formulas, the
//! closed-form morphisms) is expressed in this one convention and certified
//! by the identity suite in the harness rather than by matching any
//! particular textbook's signs.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Double-precision complex scalar used throughout.
pub type C64 = Complex64;

/// Relative tolerance deciding when a matrix counts as null:
/// `|det v| <= NULL_TOL * max(1, |v|_F^2)`.
pub const NULL_TOL: f64 = 1e-10;

/// Relative tolerance below which a 2x2 matrix is treated as singular.
pub const SINGULAR_TOL: f64 = 1e-12;

/// Index position of a spinor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variance {
    Upper,
    Lower,
}

/// Whether a spinor index is primed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Priming {
    Unprimed,
    Primed,
}

/// Raise a lower-index component pair: `k^A = eps^{AB} k_B`.
#[inline]
pub fn raise2(v: [C64; 2]) -> [C64; 2] {
    [v[1], -v[0]]
}

/// Lower an upper-index component pair: `k_B = k^A eps_{AB}`.
#[inline]
pub fn lower2(v: [C64; 2]) -> [C64; 2] {
    [-v[1], v[0]]
}

/// Plain component sum `a_0 b_0 + a_1 b_1` (an upper-lower pairing).
#[inline]
pub fn dot2(a: [C64; 2], b: [C64; 2]) -> C64 {
    a[0] * b[0] + a[1] * b[1]
}

/// Epsilon pairing of two same-variance spinors: `a_1 b_0 - a_0 b_1`.
#[inline]
pub fn eps_pair(a: [C64; 2], b: [C64; 2]) -> C64 {
    a[1] * b[0] - a[0] * b[1]
}

#[inline]
pub fn vec2_norm_sq(v: [C64; 2]) -> f64 {
    v[0].norm_sqr() + v[1].norm_sqr()
}

#[inline]
pub fn vec2_finite(v: [C64; 2]) -> bool {
    v.iter().all(|c| c.re.is_finite() && c.im.is_finite())
}

/// A rank-1 complex two-spinor with explicit index tags.
///
/// The tags exist so that contractions can detect transcription mistakes in
/// index-heavy formulas; the raw component pairs used internally carry the
/// same conventions implicitly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spinor {
    pub c0: C64,
    pub c1: C64,
    pub variance: Variance,
    pub priming: Priming,
}

impl Spinor {
    pub fn new(c0: C64, c1: C64, variance: Variance, priming: Priming) -> Self {
        Self { c0, c1, variance, priming }
    }

    pub fn from_components(c: [C64; 2], variance: Variance, priming: Priming) -> Self {
        Self::new(c[0], c[1], variance, priming)
    }

    pub fn components(&self) -> [C64; 2] {
        [self.c0, self.c1]
    }

    pub fn is_zero(&self) -> bool {
        vec2_norm_sq(self.components()) == 0.0
    }

    pub fn is_finite(&self) -> bool {
        vec2_finite(self.components())
    }

    pub fn norm(&self) -> f64 {
        vec2_norm_sq(self.components()).sqrt()
    }

    pub fn scale(&self, c: C64) -> Self {
        Self { c0: self.c0 * c, c1: self.c1 * c, ..*self }
    }

    /// Raise the index. The argument must be a lower-index spinor.
    pub fn raised(&self) -> Spinor {
        assert_eq!(self.variance, Variance::Lower, "raised() expects a lower index");
        let c = raise2(self.components());
        Spinor::from_components(c, Variance::Upper, self.priming)
    }

    /// Lower the index. The argument must be an upper-index spinor.
    pub fn lowered(&self) -> Spinor {
        assert_eq!(self.variance, Variance::Upper, "lowered() expects an upper index");
        let c = lower2(self.components());
        Spinor::from_components(c, Variance::Lower, self.priming)
    }

    /// Contract two spinors of matching priming.
    ///
    /// Opposite variances pair directly; equal variances are paired through
    /// the epsilon, raising the first argument (or lowering the second),
    /// which makes the equal-variance contraction antisymmetric.
    pub fn contract(&self, other: &Spinor) -> Result<C64> {
        if self.priming != other.priming {
            return Err(Error::ContractionError);
        }
        if !self.is_finite() || !other.is_finite() {
            return Err(Error::NonFinite("spinor contraction"));
        }
        let a = self.components();
        let b = other.components();
        Ok(match (self.variance, other.variance) {
            (Variance::Upper, Variance::Lower) | (Variance::Lower, Variance::Upper) => dot2(a, b),
            (Variance::Lower, Variance::Lower) | (Variance::Upper, Variance::Upper) => {
                eps_pair(a, b)
            }
        })
    }
}

/// A point (or tangent vector) of complexified Minkowski space as the
/// 2x2 complex matrix `m[A][A']`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpacetimePoint {
    pub m: [[C64; 2]; 2],
}

/// General 2x2 complex matrices share the representation of spacetime
/// points; block matrices of the closed forms reuse the same type.
pub type Mat2 = SpacetimePoint;

impl SpacetimePoint {
    pub fn new(m: [[C64; 2]; 2]) -> Self {
        Self { m }
    }

    pub fn zero() -> Self {
        Self::new([[C64::new(0.0, 0.0); 2]; 2])
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        m.m[0][0] = C64::new(1.0, 0.0);
        m.m[1][1] = C64::new(1.0, 0.0);
        m
    }

    pub fn from_real(r: [[f64; 2]; 2]) -> Self {
        let mut m = Self::zero();
        for a in 0..2 {
            for b in 0..2 {
                m.m[a][b] = C64::new(r[a][b], 0.0);
            }
        }
        m
    }

    /// Outer product `lam^A pi^{A'}` of two upper-index component pairs.
    pub fn from_outer(lam: [C64; 2], pi: [C64; 2]) -> Self {
        Self::new([[lam[0] * pi[0], lam[0] * pi[1]], [lam[1] * pi[0], lam[1] * pi[1]]])
    }

    pub fn det(&self) -> C64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    /// Squared Frobenius norm.
    pub fn norm_sq(&self) -> f64 {
        self.m.iter().flatten().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.m.iter().flatten().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    pub fn is_zero(&self) -> bool {
        self.norm_sq() == 0.0
    }

    /// Scale-invariant nullness test: `|det| <= NULL_TOL * max(1, |m|_F^2)`.
    pub fn is_null(&self) -> bool {
        self.det().norm() <= NULL_TOL * self.norm_sq().max(1.0)
    }

    pub fn transpose(&self) -> Self {
        Self::new([[self.m[0][0], self.m[1][0]], [self.m[0][1], self.m[1][1]]])
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut r = *self;
        for a in 0..2 {
            for b in 0..2 {
                r.m[a][b] += other.m[a][b];
            }
        }
        r
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut r = *self;
        for a in 0..2 {
            for b in 0..2 {
                r.m[a][b] -= other.m[a][b];
            }
        }
        r
    }

    pub fn scale(&self, c: C64) -> Self {
        let mut r = *self;
        for a in 0..2 {
            for b in 0..2 {
                r.m[a][b] *= c;
            }
        }
        r
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut r = Self::zero();
        for a in 0..2 {
            for b in 0..2 {
                r.m[a][b] = self.m[a][0] * other.m[0][b] + self.m[a][1] * other.m[1][b];
            }
        }
        r
    }

    /// Matrix times column vector.
    pub fn mul_vec(&self, v: [C64; 2]) -> [C64; 2] {
        [
            self.m[0][0] * v[0] + self.m[0][1] * v[1],
            self.m[1][0] * v[0] + self.m[1][1] * v[1],
        ]
    }

    /// Row vector times matrix.
    pub fn row_mul(v: [C64; 2], m: &Self) -> [C64; 2] {
        [
            v[0] * m.m[0][0] + v[1] * m.m[1][0],
            v[0] * m.m[0][1] + v[1] * m.m[1][1],
        ]
    }

    /// Plain 2x2 matrix inverse in the fixed coordinate frame.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_finite() {
            return Err(Error::NonFinite("matrix inverse"));
        }
        let d = self.det();
        if d.norm() <= SINGULAR_TOL * self.norm_sq().max(1.0) {
            return Err(Error::SingularMatrix);
        }
        let inv = C64::new(1.0, 0.0) / d;
        Ok(Self::new([
            [self.m[1][1] * inv, -self.m[0][1] * inv],
            [-self.m[1][0] * inv, self.m[0][0] * inv],
        ]))
    }

    pub fn flatten(&self) -> [C64; 4] {
        [self.m[0][0], self.m[0][1], self.m[1][0], self.m[1][1]]
    }

    pub fn max_abs(&self) -> f64 {
        self.m.iter().flatten().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// The Minkowski pairing `<v,v> = 2 det(v)`; zero exactly on null vectors.
pub fn minkowski_norm(v: &SpacetimePoint) -> C64 {
    v.det() * 2.0
}

/// A nonzero null vector, i.e. a rank-1 matrix, considered projectively.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NullDirection(SpacetimePoint);

impl NullDirection {
    pub fn new(v: SpacetimePoint) -> Result<Self> {
        if !v.is_finite() {
            return Err(Error::NonFinite("null direction"));
        }
        if v.norm_sq() <= 1e-120 {
            return Err(Error::ZeroVector);
        }
        if !v.is_null() {
            return Err(Error::NotNull { det_abs: v.det().norm() });
        }
        Ok(Self(v))
    }

    pub fn matrix(&self) -> &SpacetimePoint {
        &self.0
    }

    pub fn factorize(&self) -> Result<(Spinor, Spinor)> {
        null_factorize(&self.0)
    }
}

/// Factor a null matrix as `v^{AA'} = lam^A pi^{A'}`.
///
/// The pivot column (the larger one, ties broken toward index 0) supplies
/// the unprimed factor, and `pi` is normalized so its max-modulus component
/// is exactly 1; with that scaling the outer product reproduces `v` itself,
/// not just its projective class.
pub fn null_factorize(v: &SpacetimePoint) -> Result<(Spinor, Spinor)> {
    if !v.is_finite() {
        return Err(Error::NonFinite("null factorization"));
    }
    if v.norm_sq() <= 1e-120 {
        return Err(Error::ZeroVector);
    }
    if !v.is_null() {
        return Err(Error::NotNull { det_abs: v.det().norm() });
    }
    let col_norm = |j: usize| v.m[0][j].norm_sqr() + v.m[1][j].norm_sqr();
    let j = if col_norm(0) >= col_norm(1) { 0 } else { 1 };
    let lam_raw = [v.m[0][j], v.m[1][j]];
    let i = if lam_raw[0].norm() >= lam_raw[1].norm() { 0 } else { 1 };
    let pivot = lam_raw[i];
    // pivot is the largest entry of a matrix already known to be nonzero
    let pi = [v.m[i][0] / pivot, v.m[i][1] / pivot];
    Ok((
        Spinor::from_components(lam_raw, Variance::Upper, Priming::Unprimed),
        Spinor::from_components(pi, Variance::Upper, Priming::Primed),
    ))
}

/// Chordal distance between the projective classes of two nonzero complex
/// vectors: `sqrt(1 - |<u,w>|^2 / (|u|^2 |w|^2))`, in [0, 1], and zero
/// exactly when `u` and `w` are proportional.
///
/// Evaluated as the norm of the component of `w/|w|` orthogonal to `u/|u|`,
/// which is algebraically the same quantity but stays accurate for nearly
/// proportional vectors (the textbook `sqrt(1 - cos^2)` form cannot resolve
/// distances below about 1e-8 in double precision).
pub fn projective_distance(u: &[C64], w: &[C64]) -> Result<f64> {
    assert_eq!(u.len(), w.len(), "projective distance needs equal lengths");
    if !u.iter().chain(w.iter()).all(|c| c.re.is_finite() && c.im.is_finite()) {
        return Err(Error::NonFinite("projective distance"));
    }
    let nu: f64 = u.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let nw: f64 = w.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if nu == 0.0 || nw == 0.0 {
        return Err(Error::ZeroVector);
    }
    let inner: C64 = u
        .iter()
        .zip(w.iter())
        .map(|(a, b)| (a / nu).conj() * (b / nw))
        .sum();
    let resid_sq: f64 = u
        .iter()
        .zip(w.iter())
        .map(|(a, b)| (b / nw - inner * (a / nu)).norm_sqr())
        .sum();
    Ok(resid_sq.sqrt().min(1.0))
}

/// Residual of the spinor antisymmetrization identity
/// `pi_B psi_C - pi_C psi_B = (pi_D psi^D) eps_{BC}`,
/// maximized over components; exactly zero in real arithmetic.
pub fn antisym_identity_residual(pi: [C64; 2], psi: [C64; 2]) -> f64 {
    let pairing = dot2(pi, raise2(psi)); // pi_D psi^D
    let eps = [[C64::new(0.0, 0.0), C64::new(1.0, 0.0)], [C64::new(-1.0, 0.0), C64::new(0.0, 0.0)]];
    let mut max = 0.0f64;
    for b in 0..2 {
        for c in 0..2 {
            let lhs = pi[b] * psi[c] - pi[c] * psi[b];
            let rhs = pairing * eps[b][c];
            max = max.max((lhs - rhs).norm());
        }
    }
    max
}

/// Residual of the epsilon-contraction determinant identity. Under this
/// crate's convention (`eps_{01} = eps^{01} = +1`) the double contraction
/// `eps_{B'C'} eps^{D'E'} H^{B'}_{D'} H^{C'}_{E'}` equals `+2 det(H)`.
pub fn det_identity_residual(h: &Mat2) -> f64 {
    let eps = [[0.0, 1.0], [-1.0, 0.0]];
    let mut sum = C64::new(0.0, 0.0);
    for b in 0..2 {
        for c in 0..2 {
            for d in 0..2 {
                for e in 0..2 {
                    sum += eps[b][c] * eps[d][e] * h.m[b][d] * h.m[c][e];
                }
            }
        }
    }
    (sum - h.det() * 2.0).norm() / h.norm_sq().max(1.0)
}

/// See-saw both indices of a mixed tensor `H^{B'}_{A'}`: lower the upper
/// index and raise the lower one. In matrix form this is `E H^T E` with
/// `E = [[0,1],[-1,0]]`.
pub fn see_saw_swap(h: &Mat2) -> Mat2 {
    let e = Mat2::from_real([[0.0, 1.0], [-1.0, 0.0]]);
    e.mul(&h.transpose()).mul(&e)
}

/// Residual of the inverse identity `(H^{-1})_{A'}^{B'} = -H^{B'}_{A'} / det H`,
/// where the right-hand side moves both indices with the epsilon (see-saw).
pub fn inverse_identity_residual(h: &Mat2) -> Result<f64> {
    let hinv = h.inverse()?;
    let rhs = see_saw_swap(h).scale(-C64::new(1.0, 0.0) / h.det());
    Ok(hinv.sub(&rhs).norm() / hinv.norm().max(1.0))
}

/// Relative disagreement between two matrices, normalized by the larger norm
/// (with a floor at 1 so residuals of near-zero quantities stay absolute).
pub fn relative_diff(a: &Mat2, b: &Mat2) -> f64 {
    a.sub(b).norm() / a.norm().max(b.norm()).max(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn raising_convention_is_pinned() {
        // (0,1) lower -> (1,0) upper with eps^{01} = +1
        let s = Spinor::new(c(0.0, 0.0), c(1.0, 0.0), Variance::Lower, Priming::Primed);
        let up = s.raised();
        assert_eq!(up.components(), [c(1.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(up.variance, Variance::Upper);
    }

    #[test]
    fn see_saw_round_trips_exactly() {
        let s = Spinor::new(c(0.3, -1.2), c(2.5, 0.7), Variance::Lower, Priming::Unprimed);
        assert_eq!(s.raised().lowered(), s);
        let u = Spinor::new(c(-0.9, 0.1), c(0.4, 1.3), Variance::Upper, Priming::Primed);
        assert_eq!(u.lowered().raised(), u);
    }

    #[test]
    fn self_contraction_vanishes() {
        let s = Spinor::new(c(1.7, 0.2), c(-0.4, 2.2), Variance::Lower, Priming::Primed);
        assert_eq!(s.contract(&s).unwrap(), c(0.0, 0.0));
        // s_{A'} s^{A'} = 0
        assert_eq!(s.contract(&s.raised()).unwrap().norm(), 0.0);
    }

    #[test]
    fn basis_contraction_sign() {
        let a = Spinor::new(c(1.0, 0.0), c(0.0, 0.0), Variance::Lower, Priming::Unprimed);
        let b = Spinor::new(c(0.0, 0.0), c(1.0, 0.0), Variance::Lower, Priming::Unprimed);
        assert_eq!(a.contract(&b).unwrap(), c(-1.0, 0.0));
        assert_eq!(b.contract(&a).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn priming_mismatch_is_rejected() {
        let a = Spinor::new(c(1.0, 0.0), c(0.0, 0.0), Variance::Lower, Priming::Unprimed);
        let b = Spinor::new(c(0.0, 0.0), c(1.0, 0.0), Variance::Lower, Priming::Primed);
        assert_eq!(a.contract(&b), Err(Error::ContractionError));
    }

    #[test]
    fn factorize_unit_example() {
        let v = SpacetimePoint::from_real([[1.0, 0.0], [0.0, 0.0]]);
        let (lam, pi) = null_factorize(&v).unwrap();
        assert_eq!(lam.components(), [c(1.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(pi.components(), [c(1.0, 0.0), c(0.0, 0.0)]);
    }

    #[test]
    fn factorize_reconstructs_rank_one() {
        let v = SpacetimePoint::from_real([[1.0, 2.0], [3.0, 6.0]]);
        let (lam, pi) = null_factorize(&v).unwrap();
        let rebuilt = SpacetimePoint::from_outer(lam.components(), pi.components());
        assert!(relative_diff(&rebuilt, &v) < 1e-14);
        // projectively (1,3) and (1,2)
        assert!(projective_distance(&lam.components(), &[c(1.0, 0.0), c(3.0, 0.0)]).unwrap() < 1e-14);
        assert!(projective_distance(&pi.components(), &[c(1.0, 0.0), c(2.0, 0.0)]).unwrap() < 1e-14);
        // max-modulus component of pi is one
        let m = pi.components().iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!((m - 1.0).abs() < 1e-14);
    }

    #[test]
    fn factorize_rejects_non_null() {
        let v = SpacetimePoint::identity();
        assert!(matches!(null_factorize(&v), Err(Error::NotNull { .. })));
        assert!(matches!(null_factorize(&SpacetimePoint::zero()), Err(Error::ZeroVector)));
    }

    #[test]
    fn minkowski_norm_examples() {
        let null = SpacetimePoint::from_real([[1.0, 0.0], [0.0, 0.0]]);
        assert_eq!(minkowski_norm(&null), c(0.0, 0.0));
        assert_eq!(minkowski_norm(&SpacetimePoint::identity()), c(2.0, 0.0));
    }

    #[test]
    fn inverse_examples() {
        let id = SpacetimePoint::identity();
        assert!(relative_diff(&id.inverse().unwrap(), &id) == 0.0);
        let d = SpacetimePoint::new([[c(2.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, 1.0)]]);
        let di = d.inverse().unwrap();
        assert!((di.m[0][0] - c(0.5, 0.0)).norm() < 1e-15);
        assert!((di.m[1][1] - c(0.0, -1.0)).norm() < 1e-15);
        assert!(matches!(
            SpacetimePoint::from_real([[1.0, 2.0], [2.0, 4.0]]).inverse(),
            Err(Error::SingularMatrix)
        ));
    }

    #[test]
    fn projective_distance_examples() {
        let a = [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        let b = [c(0.0, 3.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        assert!(projective_distance(&a, &b).unwrap() < 1e-15);
        let u = [c(1.0, 0.0), c(0.0, 0.0)];
        let w = [c(0.0, 0.0), c(1.0, 0.0)];
        assert!((projective_distance(&u, &w).unwrap() - 1.0).abs() < 1e-15);
        assert!(projective_distance(&u, &[c(0.0, 0.0), c(0.0, 0.0)]).is_err());
    }

    #[test]
    fn identity_residuals_on_fixed_inputs() {
        let pi = [c(0.3, 1.1), c(-2.0, 0.4)];
        let psi = [c(1.5, -0.2), c(0.8, 0.9)];
        assert!(antisym_identity_residual(pi, psi) < 1e-13);
        let h = Mat2::new([[c(1.2, -0.3), c(0.5, 2.0)], [c(-1.1, 0.6), c(0.2, 0.9)]]);
        assert!(det_identity_residual(&h) < 1e-14);
        assert!(inverse_identity_residual(&h).unwrap() < 1e-13);
    }
}
