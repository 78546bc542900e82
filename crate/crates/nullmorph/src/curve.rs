//! Polynomial null curves in complexified Minkowski space.
//!
//! A curve is built from two polynomial spinor curves `lam(s)` and `pi(s)`
//! (both upper-index) and a base point. Its position polynomial is the exact
//! antiderivative of the outer product,
//!
//! ```text
//! chi(s) = base + int_0^s lam(t) pi(t) dt,
//! ```
//!
//! so the tangent `chi_dot = lam pi` has rank one, hence is null, at every
//! parameter value, identically in the coefficients. Polynomial curves are
//! closed under the exact integration and differentiation used everywhere
//! downstream, which removes truncation questions from the test surface.

use crate::error::{Error, Result};
use crate::jet::{eval_poly, eval_poly_jet, JetMat2, JetVec2};
use crate::rng::SeededRng;
use crate::spinor::{
    lower2, vec2_norm_sq, C64, NullDirection, Priming, SpacetimePoint, Spinor, Variance,
};

/// Default truncation order for curve jets; downstream formulas need second
/// derivatives of twistor curves, and one spare order guards further
/// differentiation.
pub const DEFAULT_JET_ORDER: usize = 3;

const MAX_RETRIES: usize = 64;
/// Resampling floor for tangent norms and spinor pairings at sample points.
const NONSING_TOL: f64 = 1e-6;

/// Maximum polynomial degrees for the two spinor factors of a random curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DegreeBounds {
    pub lambda: usize,
    pub pi: usize,
}

impl Default for DegreeBounds {
    fn default() -> Self {
        Self { lambda: 2, pi: 2 }
    }
}

/// Fixed set of sample parameters in the unit disc used by generators and
/// verification suites; drawn once from a documented ChaCha stream.
pub fn default_sample_points() -> Vec<C64> {
    let mut rng = SeededRng::for_trial(0x5A4D_504C, 0);
    (0..8).map(|_| rng.in_disc(0.75)).collect()
}

/// Polynomial curve of spinors, coefficients of `s^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinorPoly {
    pub coeffs: Vec<[C64; 2]>,
}

impl SpinorPoly {
    pub fn new(coeffs: Vec<[C64; 2]>) -> Self {
        assert!(!coeffs.is_empty());
        Self { coeffs }
    }

    pub fn constant(v: [C64; 2]) -> Self {
        Self::new(vec![v])
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| vec2_norm_sq(*c) == 0.0)
    }

    pub fn value(&self, s: C64) -> [C64; 2] {
        let comp =
            |i: usize| eval_poly(&self.coeffs.iter().map(|c| c[i]).collect::<Vec<_>>(), s);
        [comp(0), comp(1)]
    }

    pub fn jet(&self, s: C64, order: usize) -> JetVec2 {
        let comp = |i: usize| {
            eval_poly_jet(&self.coeffs.iter().map(|c| c[i]).collect::<Vec<_>>(), s, order)
        };
        JetVec2([comp(0), comp(1)])
    }

    /// Coefficientwise derivative polynomial.
    pub fn derivative(&self) -> SpinorPoly {
        if self.coeffs.len() == 1 {
            return SpinorPoly::constant([C64::new(0.0, 0.0); 2]);
        }
        SpinorPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| [c[0] * (k as f64), c[1] * (k as f64)])
                .collect(),
        )
    }
}

/// Polynomial curve of 2x2 matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixPoly {
    pub coeffs: Vec<SpacetimePoint>,
}

impl MatrixPoly {
    pub fn value(&self, s: C64) -> SpacetimePoint {
        let mut acc = SpacetimePoint::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.scale(s).add(c);
        }
        acc
    }

    pub fn jet(&self, s: C64, order: usize) -> JetMat2 {
        let comp = |a: usize, b: usize| {
            eval_poly_jet(&self.coeffs.iter().map(|c| c.m[a][b]).collect::<Vec<_>>(), s, order)
        };
        JetMat2([[comp(0, 0), comp(0, 1)], [comp(1, 0), comp(1, 1)]])
    }

    pub fn derivative(&self) -> MatrixPoly {
        if self.coeffs.len() == 1 {
            return MatrixPoly { coeffs: vec![SpacetimePoint::zero()] };
        }
        MatrixPoly {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.scale(C64::new(k as f64, 0.0)))
                .collect(),
        }
    }
}

/// Outer-product polynomial `lam(s) pi(s)` by coefficient convolution.
fn outer_product_poly(lam: &SpinorPoly, pi: &SpinorPoly) -> MatrixPoly {
    let n = lam.coeffs.len() + pi.coeffs.len() - 1;
    let mut coeffs = vec![SpacetimePoint::zero(); n];
    for (i, l) in lam.coeffs.iter().enumerate() {
        for (j, p) in pi.coeffs.iter().enumerate() {
            coeffs[i + j] = coeffs[i + j].add(&SpacetimePoint::from_outer(*l, *p));
        }
    }
    MatrixPoly { coeffs }
}

/// A point of the twistor correspondence space: a spacetime point together
/// with a projective primed spinor `pi_{A'}` selecting an alpha-plane
/// through it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FPoint {
    pub x: SpacetimePoint,
    pub pi: Spinor,
}

impl FPoint {
    pub fn new(x: SpacetimePoint, pi: Spinor) -> Result<Self> {
        if pi.priming != Priming::Primed || pi.variance != Variance::Lower {
            return Err(Error::ConfigInvalid(
                "alpha-plane spinor must be a lower primed spinor".into(),
            ));
        }
        if pi.is_zero() {
            return Err(Error::ZeroVector);
        }
        if !x.is_finite() || !pi.is_finite() {
            return Err(Error::NonFinite("FPoint"));
        }
        Ok(Self { x, pi })
    }

    pub fn pi_components(&self) -> [C64; 2] {
        self.pi.components()
    }
}

/// A point of the ambitwistor correspondence space: a spacetime point with a
/// projective null direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GPoint {
    pub x: SpacetimePoint,
    pub v: NullDirection,
}

impl GPoint {
    pub fn new(x: SpacetimePoint, v: SpacetimePoint) -> Result<Self> {
        if !x.is_finite() {
            return Err(Error::NonFinite("GPoint"));
        }
        Ok(Self { x, v: NullDirection::new(v)? })
    }
}

/// A nonsingular polynomial null curve.
#[derive(Debug, Clone, PartialEq)]
pub struct NullCurve {
    base: SpacetimePoint,
    lambda: SpinorPoly,
    pi: SpinorPoly,
    chi: MatrixPoly,
}

impl NullCurve {
    /// Build the curve with tangent `lam(s) pi(s)` through `base`, using the
    /// exact polynomial antiderivative.
    pub fn new(base: SpacetimePoint, lambda: SpinorPoly, pi: SpinorPoly) -> Result<Self> {
        if lambda.is_zero() || pi.is_zero() {
            return Err(Error::DegenerateCurve("a spinor factor is identically zero"));
        }
        if !base.is_finite() {
            return Err(Error::NonFinite("null curve base point"));
        }
        let tangent = outer_product_poly(&lambda, &pi);
        let mut coeffs = vec![base];
        for (k, c) in tangent.coeffs.iter().enumerate() {
            coeffs.push(c.scale(C64::new(1.0 / (k as f64 + 1.0), 0.0)));
        }
        Ok(Self { base, lambda, pi, chi: MatrixPoly { coeffs } })
    }

    pub fn base(&self) -> &SpacetimePoint {
        &self.base
    }

    pub fn lambda_poly(&self) -> &SpinorPoly {
        &self.lambda
    }

    pub fn pi_poly(&self) -> &SpinorPoly {
        &self.pi
    }

    pub fn chi_poly(&self) -> &MatrixPoly {
        &self.chi
    }

    pub fn chi_value(&self, s: C64) -> SpacetimePoint {
        self.chi.value(s)
    }

    pub fn chi_jet(&self, s: C64, order: usize) -> JetMat2 {
        self.chi.jet(s, order)
    }

    /// The tangent matrix `lam(s) pi(s)`; rank one by construction.
    pub fn tangent_value(&self, s: C64) -> SpacetimePoint {
        SpacetimePoint::from_outer(self.lambda.value(s), self.pi.value(s))
    }

    /// The exact tangent polynomial `lam(s) pi(s)`, the closed-form
    /// derivative of the position polynomial.
    pub fn tangent_poly(&self) -> MatrixPoly {
        outer_product_poly(&self.lambda, &self.pi)
    }

    pub fn lambda_value(&self, s: C64) -> [C64; 2] {
        self.lambda.value(s)
    }

    /// Upper-index alpha-tangent spinor at `s`.
    pub fn pi_value(&self, s: C64) -> [C64; 2] {
        self.pi.value(s)
    }

    /// The correspondence-space point `(chi(s), pi(s))` with `pi` lowered.
    pub fn f_point(&self, s: C64) -> Result<FPoint> {
        let pi_low = lower2(self.pi.value(s));
        FPoint::new(
            self.chi_value(s),
            Spinor::from_components(pi_low, Variance::Lower, Priming::Primed),
        )
    }

    /// The ambitwistor point `(chi(s), chi_dot(s))`.
    pub fn g_point(&self, s: C64) -> Result<GPoint> {
        GPoint::new(self.chi_value(s), self.tangent_value(s))
    }
}

fn random_spinor_poly(rng: &mut SeededRng, degree: usize) -> SpinorPoly {
    SpinorPoly::new((0..=degree).map(|_| rng.spinor()).collect())
}

/// Nonsingularity conditions a generated curve must satisfy at the given
/// sample points: the tangent stays clear of zero, and (when `pi` actually
/// varies) the pairing `pi . pi_dot` stays clear of zero so the inverse
/// correspondence is well conditioned.
fn curve_is_nonsingular(curve: &NullCurve, samples: &[C64]) -> bool {
    let pi_dot = curve.pi.derivative();
    let check_pairing = curve.pi.degree() >= 1;
    for &s in samples {
        if curve.tangent_value(s).norm() < NONSING_TOL {
            return false;
        }
        if check_pairing {
            let pairing = crate::spinor::dot2(
                lower2(curve.pi.value(s)),
                pi_dot.value(s),
            );
            if pairing.norm() < NONSING_TOL {
                return false;
            }
        }
    }
    true
}

/// Draw a random nonsingular null curve with seeded complex Gaussian
/// coefficients, resampling until the nonsingularity conditions hold on the
/// default sample set (plus the origin).
pub fn random_null_curve(seed: u64, bounds: DegreeBounds) -> Result<NullCurve> {
    let mut rng = SeededRng::new(seed);
    random_null_curve_from(&mut rng, bounds)
}

/// Same as [`random_null_curve`] but drawing from an existing stream.
pub fn random_null_curve_from(rng: &mut SeededRng, bounds: DegreeBounds) -> Result<NullCurve> {
    let mut samples = default_sample_points();
    samples.push(C64::new(0.0, 0.0));
    for _ in 0..MAX_RETRIES {
        let base = rng.matrix();
        let lambda = random_spinor_poly(rng, bounds.lambda);
        let pi = random_spinor_poly(rng, bounds.pi);
        let curve = NullCurve::new(base, lambda, pi)?;
        if curve_is_nonsingular(&curve, &samples) {
            return Ok(curve);
        }
    }
    Err(Error::GenerationExhausted(MAX_RETRIES))
}

/// Tangency relations between two curves at given parameter values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangencyReport {
    /// The two points coincide.
    pub coincident: bool,
    /// Points coincide and the tangent directions are projectively equal
    /// (first-order tangency of the embedded curves).
    pub first_order: bool,
    /// Points coincide and the alpha-tangent spinors are projectively equal.
    pub alpha_tangent: bool,
}

/// Compare two curves at `(s0, t0)` within the given projective tolerance.
pub fn tangent_pair_at(
    a: &NullCurve,
    b: &NullCurve,
    s0: C64,
    t0: C64,
    tol: f64,
) -> Result<TangencyReport> {
    let pa = a.chi_value(s0);
    let pb = b.chi_value(t0);
    let coincident = pa.sub(&pb).norm() <= tol * pa.norm().max(pb.norm()).max(1.0);
    let ta = a.tangent_value(s0);
    let tb = b.tangent_value(t0);
    let dir = crate::spinor::projective_distance(&ta.flatten(), &tb.flatten())?;
    let alpha = crate::spinor::projective_distance(&a.pi_value(s0), &b.pi_value(t0))?;
    Ok(TangencyReport {
        coincident,
        first_order: coincident && dir <= tol,
        alpha_tangent: coincident && alpha <= tol,
    })
}

/// Anchor data for a family of mutually tangent curves.
#[derive(Debug, Clone, Copy)]
pub enum TangentAnchor {
    /// Curves through `x` sharing the alpha-tangent `pi` while the unprimed
    /// factor of the tangent varies freely.
    Alpha(FPoint),
    /// Curves sharing the full first-order jet `(x, v)` and differing in
    /// higher derivatives.
    FirstOrder(GPoint),
}

/// Generate `n` curves through the anchor point with the prescribed tangent
/// data, differing in higher-order coefficients.
pub fn make_tangent_family(
    anchor: TangentAnchor,
    seed: u64,
    n: usize,
    bounds: DegreeBounds,
) -> Result<Vec<NullCurve>> {
    let mut rng = SeededRng::new(seed);
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let curve = match anchor {
            TangentAnchor::Alpha(fp) => {
                random_alpha_tangent_curve(&mut rng, &fp, bounds)?
            }
            TangentAnchor::FirstOrder(gp) => {
                random_first_order_curve(&mut rng, &gp, bounds)?
            }
        };
        out.push(curve);
    }
    Ok(out)
}

fn random_alpha_tangent_curve(
    rng: &mut SeededRng,
    fp: &FPoint,
    bounds: DegreeBounds,
) -> Result<NullCurve> {
    let pi0 = crate::spinor::raise2(fp.pi_components());
    for _ in 0..MAX_RETRIES {
        let mut lambda = random_spinor_poly(rng, bounds.lambda.max(1));
        lambda.coeffs[0] = rng.spinor_min_norm(0.3);
        let mut pi = random_spinor_poly(rng, bounds.pi.max(1));
        pi.coeffs[0] = pi0;
        let curve = NullCurve::new(fp.x, lambda, pi)?;
        if curve_is_nonsingular(&curve, &[C64::new(0.0, 0.0)]) {
            return Ok(curve);
        }
    }
    Err(Error::GenerationExhausted(MAX_RETRIES))
}

fn random_first_order_curve(
    rng: &mut SeededRng,
    gp: &GPoint,
    bounds: DegreeBounds,
) -> Result<NullCurve> {
    let (lam0, pi0) = gp.v.factorize()?;
    for _ in 0..MAX_RETRIES {
        let mut lambda = random_spinor_poly(rng, bounds.lambda.max(1));
        lambda.coeffs[0] = lam0.components();
        let mut pi = random_spinor_poly(rng, bounds.pi.max(1));
        pi.coeffs[0] = pi0.components();
        let curve = NullCurve::new(gp.x, lambda, pi)?;
        if curve_is_nonsingular(&curve, &[C64::new(0.0, 0.0)]) {
            return Ok(curve);
        }
    }
    Err(Error::GenerationExhausted(MAX_RETRIES))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn constant_factors_give_a_null_line() {
        let e = [c(1.0, 0.0), c(0.0, 0.0)];
        let curve = NullCurve::new(
            SpacetimePoint::zero(),
            SpinorPoly::constant(e),
            SpinorPoly::constant(e),
        )
        .unwrap();
        let s = c(0.7, 0.3);
        let p = curve.chi_value(s);
        assert!((p.m[0][0] - s).norm() < 1e-15);
        assert!(p.m[0][1].norm() + p.m[1][0].norm() + p.m[1][1].norm() < 1e-15);
    }

    #[test]
    fn linear_factors_integrate_exactly() {
        // lam(s) = (1, s), pi(s) = (1, s): chi = [[s, s^2/2], [s^2/2, s^3/3]]
        let lin = SpinorPoly::new(vec![[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]]);
        let curve = NullCurve::new(SpacetimePoint::zero(), lin.clone(), lin).unwrap();
        let s = c(0.5, -0.25);
        let p = curve.chi_value(s);
        assert!((p.m[0][0] - s).norm() < 1e-15);
        assert!((p.m[0][1] - s * s / 2.0).norm() < 1e-15);
        assert!((p.m[1][0] - s * s / 2.0).norm() < 1e-15);
        assert!((p.m[1][1] - s * s * s / 3.0).norm() < 1e-15);
        // tangent determinant vanishes identically
        for k in 0..10 {
            let sk = c(0.1 * k as f64 - 0.4, 0.05 * k as f64);
            assert!(curve.tangent_value(sk).det().norm() < 1e-14);
        }
    }

    #[test]
    fn zero_factor_is_rejected() {
        let z = SpinorPoly::constant([c(0.0, 0.0), c(0.0, 0.0)]);
        let e = SpinorPoly::constant([c(1.0, 0.0), c(0.0, 0.0)]);
        assert!(matches!(
            NullCurve::new(SpacetimePoint::zero(), z, e),
            Err(Error::DegenerateCurve(_))
        ));
    }

    #[test]
    fn chi_derivative_equals_tangent_coefficientwise() {
        let curve = random_null_curve(11, DegreeBounds::default()).unwrap();
        // the closed-form derivative polynomial is the outer product itself
        let t = curve.tangent_poly();
        assert_eq!(t.coeffs, outer_product_poly(curve.lambda_poly(), curve.pi_poly()).coeffs);
        // materialized antiderivative differentiates back to the last ulp
        // (integer divide/multiply pairs round for non-powers of two)
        let d = curve.chi_poly().derivative();
        assert_eq!(d.coeffs.len(), t.coeffs.len());
        for (a, b) in d.coeffs.iter().zip(&t.coeffs) {
            assert!(a.sub(b).norm() <= 1e-15 * b.norm().max(1.0));
        }
    }

    #[test]
    fn generation_is_deterministic_and_null() {
        let a = random_null_curve(99, DegreeBounds::default()).unwrap();
        let b = random_null_curve(99, DegreeBounds::default()).unwrap();
        assert_eq!(a, b);
        for &s in &default_sample_points() {
            let t = a.tangent_value(s);
            assert!(t.det().norm() <= 1e-12 * t.norm_sq().max(1.0));
        }
    }

    #[test]
    fn degree_zero_bounds_give_a_null_line() {
        let curve = random_null_curve(5, DegreeBounds { lambda: 0, pi: 0 }).unwrap();
        assert_eq!(curve.lambda_poly().degree(), 0);
        assert_eq!(curve.pi_poly().degree(), 0);
        // a line: chi has exactly the base and one linear coefficient
        assert_eq!(curve.chi_poly().coeffs.len(), 2);
    }

    #[test]
    fn curve_is_tangent_to_itself() {
        let curve = random_null_curve(7, DegreeBounds::default()).unwrap();
        let s = c(0.2, 0.1);
        let r = tangent_pair_at(&curve, &curve, s, s, 1e-12).unwrap();
        assert!(r.coincident && r.first_order && r.alpha_tangent);
    }

    #[test]
    fn translated_copy_is_not_tangent() {
        let curve = random_null_curve(7, DegreeBounds::default()).unwrap();
        let mut shifted = curve.clone();
        shifted.base = curve.base.add(&SpacetimePoint::identity());
        shifted.chi.coeffs[0] = shifted.base;
        let r = tangent_pair_at(&curve, &shifted, c(0.0, 0.0), c(0.0, 0.0), 1e-10).unwrap();
        assert!(!r.coincident);
    }

    #[test]
    fn first_order_family_shares_one_jet() {
        let x = SpacetimePoint::from_real([[0.3, -0.2], [1.0, 0.5]]);
        let v = SpacetimePoint::from_outer([c(1.0, 0.5), c(-0.3, 0.2)], [c(0.4, 0.0), c(1.0, -1.0)]);
        let gp = GPoint::new(x, v).unwrap();
        let fam = make_tangent_family(TangentAnchor::FirstOrder(gp), 13, 4, DegreeBounds::default())
            .unwrap();
        for pair in fam.windows(2) {
            let r = tangent_pair_at(&pair[0], &pair[1], c(0.0, 0.0), c(0.0, 0.0), 1e-10).unwrap();
            assert!(r.coincident && r.first_order);
            // second derivatives differ for independently drawn higher coefficients
            let d2a = pair[0].chi_jet(c(0.0, 0.0), 2).at(0, 0).coeff(2);
            let d2b = pair[1].chi_jet(c(0.0, 0.0), 2).at(0, 0).coeff(2);
            assert!((d2a - d2b).norm() > 1e-8);
        }
    }

    #[test]
    fn alpha_family_shares_pi_direction() {
        let x = SpacetimePoint::from_real([[0.3, -0.2], [1.0, 0.5]]);
        let pi = Spinor::new(c(0.8, 0.1), c(-0.5, 0.6), Variance::Lower, Priming::Primed);
        let fp = FPoint::new(x, pi).unwrap();
        let fam =
            make_tangent_family(TangentAnchor::Alpha(fp), 29, 5, DegreeBounds::default()).unwrap();
        let pi_up = crate::spinor::raise2(pi.components());
        for curve in &fam {
            let d = crate::spinor::projective_distance(&curve.pi_value(c(0.0, 0.0)), &pi_up)
                .unwrap();
            assert!(d <= 1e-12);
            assert!(curve.chi_value(c(0.0, 0.0)).sub(&x).norm() < 1e-14);
        }
        for pair in fam.windows(2) {
            let r = tangent_pair_at(&pair[0], &pair[1], c(0.0, 0.0), c(0.0, 0.0), 1e-10).unwrap();
            assert!(r.alpha_tangent);
        }
    }
}
