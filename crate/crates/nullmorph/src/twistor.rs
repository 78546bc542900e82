//! The correspondence between null curves and curves in twistor space.
//!
//! A twistor `z = (omega^A, pi_{A'})` encodes the alpha-plane
//! `omega = i x pi` of complexified Minkowski space. A nonsingular null
//! curve `chi(s)` lifts to the twistor curve through the unique alpha-plane
//! containing the point and its null tangent:
//!
//! ```text
//! omega(s) = i chi(s) pi(s),      chi_dot(s) pi(s) = 0,
//! ```
//!
//! where `pi(s)` is the primed factor of the rank-1 tangent. In a region
//! where `pi . pi_dot` stays away from zero the lift is inverted by the
//! rational formula
//!
//! ```text
//! i chi = (omega pi_dot - omega_dot pi) / (pi . pi_dot),
//! ```
//!
//! which recovers the curve (and its jets) from first-order twistor data
//! alone. The unprimed tangent factor, by contrast, needs second
//! derivatives:
//!
//! ```text
//! i lam = (i chi pi_ddot - omega_ddot) / (pi . pi_dot),
//! ```
//!
//! which is the precise reason the naive transport of a null direction
//! through twistor space fails to be local; see the `causal` module.
//!
//! Dual twistors `w = (lam_A, mu^{A'})` encode beta-planes through
//! `mu = -i lam b`, and the mirrored inversion recovers `b` from a
//! dual-twistor curve jet.

use crate::error::{Error, Result};
use crate::jet::{Jet, JetMat2, JetVec2};
use crate::spinor::{
    lower2, projective_distance, vec2_norm_sq, C64, Priming, SpacetimePoint, Spinor, Variance,
};

/// Relative tolerance on the pairing `pi . pi_dot` below which the inverse
/// correspondence is refused rather than evaluated.
pub const CORRESPONDENCE_TOL: f64 = 1e-10;

/// A projective twistor, stored as the coordinate 4-vector
/// `(omega^0, omega^1, pi_0, pi_1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Twistor {
    pub z: [C64; 4],
}

impl Twistor {
    pub fn new(z: [C64; 4]) -> Result<Self> {
        if !z.iter().all(|c| c.re.is_finite() && c.im.is_finite()) {
            return Err(Error::NonFinite("twistor"));
        }
        if z.iter().all(|c| c.norm_sqr() == 0.0) {
            return Err(Error::ZeroVector);
        }
        Ok(Self { z })
    }

    pub fn from_parts(omega: [C64; 2], pi_low: [C64; 2]) -> Result<Self> {
        Self::new([omega[0], omega[1], pi_low[0], pi_low[1]])
    }

    /// The twistor incident with `x` whose alpha-plane is `pi`:
    /// `omega = i x pi`.
    pub fn incident(x: &SpacetimePoint, pi_low: [C64; 2]) -> Result<Self> {
        let omega = x.mul_vec(pi_low);
        Self::from_parts([omega[0] * C64::i(), omega[1] * C64::i()], pi_low)
    }

    pub fn omega(&self) -> [C64; 2] {
        [self.z[0], self.z[1]]
    }

    pub fn pi_low(&self) -> [C64; 2] {
        [self.z[2], self.z[3]]
    }

    pub fn scale(&self, c: C64) -> Twistor {
        let mut z = self.z;
        for v in &mut z {
            *v *= c;
        }
        Twistor { z }
    }

    /// Residual of the incidence relation `omega - i x pi` at a point.
    pub fn incidence_residual(&self, x: &SpacetimePoint) -> f64 {
        let expect = x.mul_vec(self.pi_low());
        let d0 = self.z[0] - expect[0] * C64::i();
        let d1 = self.z[1] - expect[1] * C64::i();
        (d0.norm_sqr() + d1.norm_sqr()).sqrt()
            / (vec2_norm_sq(self.omega()).sqrt() + x.norm() * vec2_norm_sq(self.pi_low()).sqrt())
                .max(1.0)
    }
}

/// A projective dual twistor `(lam_0, lam_1, mu^0, mu^1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualTwistor {
    pub w: [C64; 4],
}

impl DualTwistor {
    pub fn new(w: [C64; 4]) -> Result<Self> {
        if !w.iter().all(|c| c.re.is_finite() && c.im.is_finite()) {
            return Err(Error::NonFinite("dual twistor"));
        }
        if w.iter().all(|c| c.norm_sqr() == 0.0) {
            return Err(Error::ZeroVector);
        }
        Ok(Self { w })
    }

    pub fn from_parts(lambda_low: [C64; 2], mu_up: [C64; 2]) -> Result<Self> {
        Self::new([lambda_low[0], lambda_low[1], mu_up[0], mu_up[1]])
    }

    pub fn lambda_low(&self) -> [C64; 2] {
        [self.w[0], self.w[1]]
    }

    pub fn mu_up(&self) -> [C64; 2] {
        [self.w[2], self.w[3]]
    }

    pub fn scale(&self, c: C64) -> DualTwistor {
        let mut w = self.w;
        for v in &mut w {
            *v *= c;
        }
        DualTwistor { w }
    }
}

/// The moment spinor making `(lambda, mu)` incident with `b`:
/// `mu^{A'} = -i lam_A b^{AA'}`.
pub fn dual_incidence(lambda: &Spinor, b: &SpacetimePoint) -> Result<Spinor> {
    if lambda.priming != Priming::Unprimed || lambda.variance != Variance::Lower {
        return Err(Error::ConfigInvalid(
            "beta-plane spinor must be a lower unprimed spinor".into(),
        ));
    }
    if !lambda.is_finite() || !b.is_finite() {
        return Err(Error::NonFinite("dual incidence"));
    }
    let mu = SpacetimePoint::row_mul(lambda.components(), b);
    Ok(Spinor::from_components(
        [-mu[0] * C64::i(), -mu[1] * C64::i()],
        Variance::Upper,
        Priming::Primed,
    ))
}

/// Jet of a twistor curve, components in the fixed order
/// `(omega^0, omega^1, pi_0, pi_1)` and a common truncation order.
#[derive(Debug, Clone, PartialEq)]
pub struct TwistorJet {
    pub z: [Jet; 4],
}

impl TwistorJet {
    pub fn from_parts(omega: JetVec2, pi_low: JetVec2) -> Self {
        let JetVec2([o0, o1]) = omega;
        let JetVec2([p0, p1]) = pi_low;
        Self { z: [o0, o1, p0, p1] }
    }

    pub fn constant(t: &Twistor, order: usize) -> Self {
        Self {
            z: [
                Jet::constant(t.z[0], order),
                Jet::constant(t.z[1], order),
                Jet::constant(t.z[2], order),
                Jet::constant(t.z[3], order),
            ],
        }
    }

    /// Jet with the given value and first derivative, zero beyond.
    pub fn line(value: [C64; 4], derivative: [C64; 4], order: usize) -> Self {
        assert!(order >= 1);
        let mk = |v: C64, d: C64| {
            let mut coeffs = vec![C64::new(0.0, 0.0); order + 1];
            coeffs[0] = v;
            coeffs[1] = d;
            Jet::new(coeffs)
        };
        Self {
            z: [
                mk(value[0], derivative[0]),
                mk(value[1], derivative[1]),
                mk(value[2], derivative[2]),
                mk(value[3], derivative[3]),
            ],
        }
    }

    pub fn order(&self) -> usize {
        self.z[0].order()
    }

    pub fn omega(&self) -> JetVec2 {
        JetVec2([self.z[0].clone(), self.z[1].clone()])
    }

    pub fn pi_low(&self) -> JetVec2 {
        JetVec2([self.z[2].clone(), self.z[3].clone()])
    }

    pub fn value(&self) -> Result<Twistor> {
        Twistor::new([
            self.z[0].value(),
            self.z[1].value(),
            self.z[2].value(),
            self.z[3].value(),
        ])
    }

    pub fn value_components(&self) -> [C64; 4] {
        [self.z[0].value(), self.z[1].value(), self.z[2].value(), self.z[3].value()]
    }

    pub fn deriv1(&self) -> [C64; 4] {
        [
            self.z[0].derivative(1),
            self.z[1].derivative(1),
            self.z[2].derivative(1),
            self.z[3].derivative(1),
        ]
    }

    pub fn truncated(&self, order: usize) -> TwistorJet {
        TwistorJet {
            z: [
                self.z[0].truncated(order),
                self.z[1].truncated(order),
                self.z[2].truncated(order),
                self.z[3].truncated(order),
            ],
        }
    }

    pub fn scale(&self, c: C64) -> TwistorJet {
        TwistorJet {
            z: [
                self.z[0].scale(c),
                self.z[1].scale(c),
                self.z[2].scale(c),
                self.z[3].scale(c),
            ],
        }
    }

    /// Projective normalization: divide by the jet of the component whose
    /// value has the largest modulus, making comparisons of twistor curve
    /// jets stable under holomorphic rescaling.
    pub fn normalized(&self) -> Result<TwistorJet> {
        let vals = self.value_components();
        let mut pivot = 0;
        for k in 1..4 {
            if vals[k].norm() > vals[pivot].norm() {
                pivot = k;
            }
        }
        if vals[pivot].norm_sqr() == 0.0 {
            return Err(Error::ZeroVector);
        }
        let p = self.z[pivot].clone();
        Ok(TwistorJet {
            z: [
                self.z[0].div(&p)?,
                self.z[1].div(&p)?,
                self.z[2].div(&p)?,
                self.z[3].div(&p)?,
            ],
        })
    }
}

/// Jet of a dual-twistor curve `(lam_0, lam_1, mu^0, mu^1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DualTwistorJet {
    pub w: [Jet; 4],
}

impl DualTwistorJet {
    pub fn from_parts(lambda_low: JetVec2, mu_up: JetVec2) -> Self {
        let JetVec2([l0, l1]) = lambda_low;
        let JetVec2([m0, m1]) = mu_up;
        Self { w: [l0, l1, m0, m1] }
    }

    pub fn constant(t: &DualTwistor, order: usize) -> Self {
        Self {
            w: [
                Jet::constant(t.w[0], order),
                Jet::constant(t.w[1], order),
                Jet::constant(t.w[2], order),
                Jet::constant(t.w[3], order),
            ],
        }
    }

    pub fn line(value: [C64; 4], derivative: [C64; 4], order: usize) -> Self {
        let z = TwistorJet::line(value, derivative, order);
        Self { w: z.z }
    }

    pub fn order(&self) -> usize {
        self.w[0].order()
    }

    pub fn lambda_low(&self) -> JetVec2 {
        JetVec2([self.w[0].clone(), self.w[1].clone()])
    }

    pub fn mu_up(&self) -> JetVec2 {
        JetVec2([self.w[2].clone(), self.w[3].clone()])
    }

    pub fn value_components(&self) -> [C64; 4] {
        [self.w[0].value(), self.w[1].value(), self.w[2].value(), self.w[3].value()]
    }
}

/// Lift a null-curve jet to the jet of its twistor curve.
///
/// The primed tangent factor is extracted with a pivot chosen once at the
/// expansion point and reused across all jet coefficients, so the factor
/// stays holomorphic through the truncation order. The returned jet is one
/// order lower than the input (differentiation costs one order).
pub fn twistor_lift(chi: &JetMat2) -> Result<TwistorJet> {
    let order = chi.order();
    if order < 1 {
        return Err(Error::InsufficientJetOrder { need: 1, got: order });
    }
    let chi_dot = chi.derivative();
    let v = chi_dot.value();
    if !v.is_finite() {
        return Err(Error::NonFinite("curve tangent"));
    }
    if v.norm_sq() <= 1e-120 {
        return Err(Error::SingularTangent);
    }
    if !v.is_null() {
        return Err(Error::NotNullTangent);
    }
    // pivot column of the base tangent supplies the unprimed factor
    let col_norm = |j: usize| v.m[0][j].norm_sqr() + v.m[1][j].norm_sqr();
    let j = if col_norm(0) >= col_norm(1) { 0 } else { 1 };
    let lam = JetVec2([chi_dot.at(0, j).clone(), chi_dot.at(1, j).clone()]);
    let i = if lam.0[0].value().norm() >= lam.0[1].value().norm() { 0 } else { 1 };
    if lam.0[i].value().norm_sqr() <= 1e-120 {
        return Err(Error::SingularTangent);
    }
    let pivot = lam.0[i].clone();
    let pi_up = JetVec2([
        chi_dot.at(i, 0).div(&pivot)?,
        chi_dot.at(i, 1).div(&pivot)?,
    ]);
    let pi_low = pi_up.lower();
    let omega = chi.truncated(order - 1).mul_vec(&pi_low).scale(C64::i());
    Ok(TwistorJet::from_parts(omega, pi_low))
}

/// Pairing jet `pi . pi_dot` plus a singularity verdict. The verdict
/// combines the relative angle test with a derivative-magnitude floor so
/// that spinor curves which are constant to machine precision (their
/// derivative coefficients are pure rounding noise) are still classified
/// as singular.
fn pairing_jet(pi_low: &JetVec2) -> (Jet, bool) {
    let ord = pi_low.order();
    let pi_dot = pi_low.derivative();
    let q = pi_low.truncated(ord - 1).dot(&pi_dot.raise());
    let pn = vec2_norm_sq(pi_low.value()).sqrt();
    let pdn = vec2_norm_sq(pi_dot.value()).sqrt();
    let scale = pi_low.0[0].max_abs().max(pi_low.0[1].max_abs());
    let singular = q.value().norm() <= CORRESPONDENCE_TOL * pn * pdn
        || pdn <= 1e-13 * scale
        || q.value().norm() <= 1e-300;
    (q, singular)
}

/// Invert the twistor lift: recover the spacetime point and its jet from a
/// twistor curve jet of order at least one.
///
/// Fails with `SingularCorrespondence` when `pi . pi_dot` falls below the
/// relative tolerance; this includes every curve with constant `pi`, such as
/// the lift of a null line.
pub fn invert_twistor_lift(z: &TwistorJet) -> Result<(SpacetimePoint, JetMat2)> {
    let ord = z.order();
    if ord < 1 {
        return Err(Error::InsufficientJetOrder { need: 1, got: ord });
    }
    let pi_low = z.pi_low();
    let (q, singular) = pairing_jet(&pi_low);
    if singular {
        return Err(Error::SingularCorrespondence);
    }
    let omega = z.omega().truncated(ord - 1);
    let omega_dot = z.omega().derivative();
    let pi_up = pi_low.truncated(ord - 1).raise();
    let pi_dot_up = pi_low.derivative().raise();
    let num = omega.outer(&pi_dot_up).sub(&omega_dot.outer(&pi_up));
    let chi = num.scale(-C64::i()).div_jet(&q)?;
    Ok((chi.value(), chi))
}

/// Recover the unprimed tangent factor of the underlying null curve from a
/// twistor curve jet of order at least two. Depends on second derivatives.
pub fn recover_tangent_spinor(z: &TwistorJet, chi: &SpacetimePoint) -> Result<Spinor> {
    let ord = z.order();
    if ord < 2 {
        return Err(Error::InsufficientJetOrder { need: 2, got: ord });
    }
    let pi_low = z.pi_low();
    let (q, singular) = pairing_jet(&pi_low);
    if singular {
        return Err(Error::SingularCorrespondence);
    }
    let qv = q.value();
    let pi_dd = [pi_low.0[0].derivative(2), pi_low.0[1].derivative(2)];
    let om_dd = [z.z[0].derivative(2), z.z[1].derivative(2)];
    let chi_pidd = chi.mul_vec(pi_dd);
    // i lam = (i chi pi_ddot - omega_ddot) / q
    let lam = [
        (chi_pidd[0] + C64::i() * om_dd[0]) / qv,
        (chi_pidd[1] + C64::i() * om_dd[1]) / qv,
    ];
    Ok(Spinor::from_components(lam, Variance::Upper, Priming::Unprimed))
}

/// Invert a dual-twistor curve jet to the beta-plane base point:
/// from `mu = -i lam b` and its derivative,
/// `b = -i (lam^ mu_dot - lam_dot^ mu) / (lam . lam_dot)`.
pub fn invert_dual_lift(w: &DualTwistorJet) -> Result<(SpacetimePoint, JetMat2)> {
    let ord = w.order();
    if ord < 1 {
        return Err(Error::InsufficientJetOrder { need: 1, got: ord });
    }
    let lam_low = w.lambda_low();
    let (q, singular) = pairing_jet(&lam_low);
    let lam_dot = lam_low.derivative();
    if singular {
        return Err(Error::SingularCorrespondence);
    }
    let mu = w.mu_up().truncated(ord - 1);
    let mu_dot = w.mu_up().derivative();
    let lam_up = lam_low.truncated(ord - 1).raise();
    let lam_dot_up = lam_dot.raise();
    let num = lam_up.outer(&mu_dot).sub(&lam_dot_up.outer(&mu));
    let b = num.scale(-C64::i()).div_jet(&q)?;
    Ok((b.value(), b))
}

/// Residual of the differentiated incidence relation
/// `omega_dot - i chi pi_dot = 0` for a twistor jet over the curve `chi`.
pub fn derivative_incidence_residual(z: &TwistorJet, chi: &JetMat2) -> f64 {
    let ord = z.order().min(chi.order()) - 1;
    let omega_dot = z.omega().derivative().truncated(ord);
    let pi_dot = z.pi_low().derivative().truncated(ord);
    let rhs = chi.truncated(ord).mul_vec(&pi_dot).scale(C64::i());
    let d = omega_dot.sub(&rhs);
    let scale = omega_dot.0[0].max_abs().max(omega_dot.0[1].max_abs()).max(1.0);
    d.0[0].max_abs().max(d.0[1].max_abs()) / scale
}

/// Projective distance between the values of two twistor jets.
pub fn twistor_distance(a: &TwistorJet, b: &TwistorJet) -> Result<f64> {
    projective_distance(&a.value_components(), &b.value_components())
}

/// Convenience: the twistor 4-vector of a curve point, `(i chi pi, pi)`
/// with `pi` the lowered alpha-tangent.
pub fn incident_twistor_of(x: &SpacetimePoint, pi_up: [C64; 2]) -> Result<Twistor> {
    Twistor::incident(x, lower2(pi_up))
}
