//! Causal morphisms over the biquaternion projective line.
//!
//! Points of the biquaternion projective line are pairs `[b0, b1]` of 2x2
//! complex matrices, at least one invertible, identified under simultaneous
//! right multiplication by GL2(C). In the patch where `b1` is invertible the
//! spacetime coordinate is `x = b0 b1^{-1}`.
//!
//! A point `(x, v)` of the null-direction bundle lifts to a pair of planes:
//! an alpha-plane through `b0` (a twistor `z = (i b0 pi, pi)`) and a
//! beta-plane through `b1` (a dual twistor `w = (lam, -i lam b1)`). In the
//! patch the alpha-plane stays flat while the beta-plane curves; to first
//! order its tangent at `x` has unprimed factor `x (eps lam)`, so the two
//! planes intersect along the null direction
//!
//! ```text
//! v = (x lam^) (b1^{-T} pi^),        lam^ = eps-raised lam.
//! ```
//!
//! Everything here is written in one fixed coordinate frame. The matrix
//! `b1^{-1}` carries mismatched index types which only the identity matrix
//! glues together, so these formulas are not left invariant by frame
//! changes; numerically the inverse is always the plain 2x2 inverse, and the
//! right-action invariance suites certify everything that is supposed to be
//! representative-independent.
//!
//! An invariant two-slot endomorphism induces a map of lifted pairs whose
//! two blocks are linear fractional: for fixed `w` the twistor slot is a
//! generalized Moebius transformation of `b0`, and for fixed `z` the dual
//! slot is its mirrored analogue on `b1`. Both blocks are evaluated along
//! two independent code paths (closed form and jet-based inversion) whose
//! agreement is part of the acceptance gate.
//!
//! The induced point map on the null-direction bundle is exactly
//! right-action invariant and depends only on `(x, v)`. Pushing a whole
//! curve through it, however, exposes a genuine obstruction of the
//! construction: the derivative of the image curve picks up cross terms
//! from the motion of the opposite slot's plane, so for generic coefficient
//! tensors it is neither null nor proportional to the image null direction
//! (the alignment would force the twistor-slot image point to ignore the
//! dual data, which contradicts a nondegenerate coupling). The
//! `tangent_residual` of each curve sample measures this defect. The
//! verification suites report the failure rather than hide it; genuinely
//! curve-compatible transport is what the conformal (degree-1) morphisms of
//! the `selfdual` module provide.

use crate::curve::{
    make_tangent_family, DegreeBounds, GPoint, NullCurve, TangentAnchor, DEFAULT_JET_ORDER,
};
use crate::endo::{Degree1Map, Degree2Map, InvariantCausalMap, ProjectiveMap, Tensor3};
use crate::error::{Error, Result};
use crate::jet::{Jet, JetMat2, JetVec2};
use crate::rng::SeededRng;
use crate::selfdual::{naive_image_tangent, orthogonal_complement};
use crate::spinor::{
    lower2, projective_distance, raise2, relative_diff, vec2_norm_sq, C64, Mat2, SpacetimePoint,
};
use crate::twistor::{
    invert_dual_lift, invert_twistor_lift, DualTwistor, DualTwistorJet, Twistor, TwistorJet,
};

/// Coordinate patch of the projective line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Patch {
    U0,
    U1,
}

/// Homogeneous coordinates `[b0, b1]`, at least one invertible.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BP1Point {
    pub b0: SpacetimePoint,
    pub b1: SpacetimePoint,
}

impl BP1Point {
    pub fn new(b0: SpacetimePoint, b1: SpacetimePoint) -> Result<Self> {
        if !b0.is_finite() || !b1.is_finite() {
            return Err(Error::NonFinite("BP1 point"));
        }
        if b0.inverse().is_err() && b1.inverse().is_err() {
            return Err(Error::SingularBasePoint);
        }
        Ok(Self { b0, b1 })
    }
}

/// The alpha/beta plane pair lifting a null-direction point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanePairLift {
    /// Alpha-plane through `b0`, stored pre-patch: `omega = i b0 pi`.
    pub z: Twistor,
    /// Beta-plane through `b1`: `mu = -i lam b1`.
    pub w: DualTwistor,
}

impl PlanePairLift {
    /// Largest relative residual of the two incidence relations at the given
    /// representative.
    pub fn incidence_residual(&self, p: &BP1Point) -> f64 {
        let alpha = self.z.incidence_residual(&p.b0);
        let mu_expect = Mat2::row_mul(self.w.lambda_low(), &p.b1);
        let mu = self.w.mu_up();
        let d0 = mu[0] + mu_expect[0] * C64::i();
        let d1 = mu[1] + mu_expect[1] * C64::i();
        let beta = (d0.norm_sqr() + d1.norm_sqr()).sqrt()
            / (vec2_norm_sq(mu).sqrt() + vec2_norm_sq(mu_expect).sqrt()).max(1.0);
        alpha.max(beta)
    }
}

/// Patch coordinate: `b0 b1^{-1}` on U1, `b1 b0^{-1}` on U0.
pub fn patch_coordinates(p: &BP1Point, patch: Patch) -> Result<SpacetimePoint> {
    match patch {
        Patch::U1 => {
            let b1_inv = p.b1.inverse().map_err(|_| Error::SingularPatch(1))?;
            Ok(p.b0.mul(&b1_inv))
        }
        Patch::U0 => {
            let b0_inv = p.b0.inverse().map_err(|_| Error::SingularPatch(0))?;
            Ok(p.b1.mul(&b0_inv))
        }
    }
}

/// Lift a null-direction point to the canonical representative
/// `(b0, b1) = (x, I)` with its plane pair.
///
/// The tangent factors come from the rank-1 factorization `v = mu_v pi_v`;
/// the beta-plane spinor is fixed by `lam^ = x^{-1} mu_v` so the patch image
/// of the beta-plane is tangent to `v` at `x`.
pub fn lift_g_point(g: &GPoint) -> Result<(BP1Point, PlanePairLift)> {
    let x = g.x;
    if x.det().norm() <= crate::spinor::NULL_TOL * x.norm_sq().max(1.0) {
        return Err(Error::SingularBasePoint);
    }
    let x_inv = x.inverse().map_err(|_| Error::SingularBasePoint)?;
    let (mu_v, pi_v) = g.v.factorize()?;
    let lam_up_raw = x_inv.mul_vec(mu_v.components());
    if vec2_norm_sq(lam_up_raw) <= 1e-120 {
        return Err(Error::DegenerateTangent);
    }
    // fix the scale by max-component normalization
    let pivot = if lam_up_raw[0].norm() >= lam_up_raw[1].norm() {
        lam_up_raw[0]
    } else {
        lam_up_raw[1]
    };
    let lam_up = [lam_up_raw[0] / pivot, lam_up_raw[1] / pivot];
    let lam_low = lower2(lam_up);
    let pi_low = lower2(pi_v.components());
    let b1 = SpacetimePoint::identity();
    let z = Twistor::incident(&x, pi_low)?;
    let mu = Mat2::row_mul(lam_low, &b1);
    let w = DualTwistor::from_parts(lam_low, [-mu[0] * C64::i(), -mu[1] * C64::i()])?;
    Ok((BP1Point { b0: x, b1 }, PlanePairLift { z, w }))
}

/// Recover the null-direction point determined by a plane pair in a patch.
pub fn extract_g_point(p: &BP1Point, l: &PlanePairLift, patch: Patch) -> Result<GPoint> {
    let lam_low = l.w.lambda_low();
    let pi_low = l.z.pi_low();
    let (x, unprimed, primed) = match patch {
        Patch::U1 => {
            let b1_inv = p.b1.inverse().map_err(|_| Error::SingularPatch(1))?;
            let x = p.b0.mul(&b1_inv);
            let unprimed = x.mul_vec(raise2(lam_low));
            let primed = b1_inv.transpose().mul_vec(raise2(pi_low));
            (x, unprimed, primed)
        }
        Patch::U0 => {
            let b0_inv = p.b0.inverse().map_err(|_| Error::SingularPatch(0))?;
            let x = p.b1.mul(&b0_inv);
            let unprimed = raise2(lam_low);
            let primed = b0_inv.transpose().mul_vec(raise2(pi_low));
            (x, unprimed, primed)
        }
    };
    let scale = vec2_norm_sq(lam_low).max(vec2_norm_sq(pi_low)).max(1.0);
    if vec2_norm_sq(unprimed) <= 1e-24 * scale || vec2_norm_sq(primed) <= 1e-24 * scale {
        return Err(Error::DegenerateTangent);
    }
    GPoint::new(x, SpacetimePoint::from_outer(unprimed, primed))
}

/// The simultaneous right action `(b0, b1) -> (b0 u, b1 u)` together with
/// the induced action on the plane pair:
/// `(omega, pi) -> (omega, u^{-1} pi)` and `(lam, mu) -> (lam, mu u)`.
pub fn right_action(
    p: &BP1Point,
    l: &PlanePairLift,
    u: &Mat2,
) -> Result<(BP1Point, PlanePairLift)> {
    let u_inv = u.inverse()?;
    let p2 = BP1Point::new(p.b0.mul(u), p.b1.mul(u))?;
    let z2 = Twistor::from_parts(l.z.omega(), u_inv.mul_vec(l.z.pi_low()))?;
    let w2 = DualTwistor::from_parts(l.w.lambda_low(), Mat2::row_mul(l.w.mu_up(), u))?;
    Ok((p2, PlanePairLift { z: z2, w: w2 }))
}

fn eps_jet(order: usize) -> JetMat2 {
    JetMat2::constant(&Mat2::from_real([[0.0, 1.0], [-1.0, 0.0]]), order)
}

fn contract_last(t: &Tensor3, v: &JetVec2) -> JetMat2 {
    let order = v.order();
    let mut rows = Vec::with_capacity(4);
    for ti in t.iter() {
        for tib in ti.iter() {
            let mut acc = Jet::zero(order);
            for (c, coeff) in tib.iter().enumerate() {
                if coeff.norm_sqr() != 0.0 {
                    acc = acc.add(&v.0[c].scale(*coeff));
                }
            }
            rows.push(acc);
        }
    }
    let m11 = rows.pop().unwrap();
    let m10 = rows.pop().unwrap();
    let m01 = rows.pop().unwrap();
    let m00 = rows.pop().unwrap();
    JetMat2([[m00, m01], [m10, m11]])
}

fn contract_mid(t: &Tensor3, v: &JetVec2) -> JetMat2 {
    let order = v.order();
    let mut out = JetMat2([
        [Jet::zero(order), Jet::zero(order)],
        [Jet::zero(order), Jet::zero(order)],
    ]);
    for (i, ti) in t.iter().enumerate() {
        for (b, tib) in ti.iter().enumerate() {
            for (c, coeff) in tib.iter().enumerate() {
                if coeff.norm_sqr() != 0.0 {
                    out.0[i][c] = out.0[i][c].add(&v.0[b].scale(*coeff));
                }
            }
        }
    }
    out
}

fn outer_const_jet(v: [C64; 2], j: &JetVec2) -> JetMat2 {
    JetMat2([
        [j.0[0].scale(v[0]), j.0[1].scale(v[0])],
        [j.0[0].scale(v[1]), j.0[1].scale(v[1])],
    ])
}

/// Image lift data produced by the closed-form evaluation.
struct CausalImageJets {
    b0: JetMat2,
    pi_low: JetVec2,
    lam_low: JetVec2,
    mu_up: JetVec2,
    b1: JetMat2,
}

/// Closed-form evaluation of the induced map on lifted data, valid for
/// plain values (order-0 jets) and for curve jets alike.
///
/// The twistor slot is the Moebius block
/// `b0~ = -i (i a_w b0 + B mu)(i c_w b0 + D mu)^{-1}` with
/// `a_w = A . lam^`, and the dual slot mirrors it:
/// `lam~ = M_lam lam`, `b1~ = i (M_lam^T)^{-1} M_mu^T` with
/// `M_lam = (E . omega) eps - i F (b1 pi)^T`.
fn causal_closed_form_jets(
    map: &InvariantCausalMap,
    b0: &JetMat2,
    pi_low: &JetVec2,
    lam_low: &JetVec2,
    b1: &JetMat2,
) -> Result<CausalImageJets> {
    let order = b0.order();
    let omega = b0.mul_vec(pi_low).scale(C64::i());
    let mu_up = b1.transpose().mul_vec(lam_low).scale(-C64::i());
    let lam_up = lam_low.raise();

    // twistor slot: linear fractional in b0
    let a_w = contract_last(&map.a, &lam_up);
    let c_w = contract_last(&map.c, &lam_up);
    let g_mat = a_w.mul(b0).scale(C64::i()).add(&outer_const_jet(map.b, &mu_up));
    let h_mat = c_w.mul(b0).scale(C64::i()).add(&outer_const_jet(map.d, &mu_up));
    let new_pi = h_mat.mul_vec(pi_low);
    let h_inv = h_mat.inverse().map_err(|_| Error::SingularImage)?;
    let new_b0 = g_mat.mul(&h_inv).scale(-C64::i());

    // dual slot: linear fractional in b1
    let e_w = contract_mid(&map.e, &omega);
    let g_w = contract_mid(&map.g, &omega);
    let b1_pi = b1.mul_vec(pi_low);
    let eps = eps_jet(order);
    let m_lam = e_w.mul(&eps).sub(&outer_const_jet(map.f, &b1_pi).scale(C64::i()));
    let m_mu = g_w.mul(&eps).sub(&outer_const_jet(map.h, &b1_pi).scale(C64::i()));
    let new_lam = m_lam.mul_vec(lam_low);
    let new_mu = m_mu.mul_vec(lam_low);
    let m_lam_t_inv = m_lam.transpose().inverse().map_err(|_| Error::SingularImage)?;
    let new_b1 = m_lam_t_inv.mul(&m_mu.transpose()).scale(C64::i());

    let in_scale = (vec2_norm_sq(pi_low.value()) * vec2_norm_sq(lam_low.value())).sqrt();
    if vec2_norm_sq(new_pi.value()) <= 1e-24 * in_scale.max(1e-30)
        || vec2_norm_sq(new_lam.value()) <= 1e-24 * in_scale.max(1e-30)
    {
        return Err(Error::DegenerateImage);
    }
    Ok(CausalImageJets { b0: new_b0, pi_low: new_pi, lam_low: new_lam, mu_up: new_mu, b1: new_b1 })
}

/// Image sample of a curve under a causal morphism.
#[derive(Debug, Clone, PartialEq)]
pub struct CausalImagePoint {
    pub x: SpacetimePoint,
    pub x_dot: SpacetimePoint,
    pub v: SpacetimePoint,
    /// Projective distance between `x_dot` and the image null direction.
    pub tangent_residual: f64,
    /// `|det x_dot|` relative to the squared tangent norm.
    pub null_residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CausalCurveSample {
    pub s: C64,
    pub result: Result<CausalImagePoint>,
}

/// Summary of the naive correspondence-route comparison for a pair of
/// curves sharing a first-order jet but not their second derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct NonlocalityReport {
    /// Projective distance between the two image tangents under the
    /// degree-2 endomorphism.
    pub degree2_tangent_distance: f64,
    /// The same distance under a degree-1 (conformal) control map.
    pub degree1_tangent_distance: f64,
    /// Distance between the two image points under the degree-2 map
    /// (expected to vanish: the image point is first-order data).
    pub degree2_point_distance: f64,
}

/// A causal morphism induced by an invariant two-slot endomorphism.
#[derive(Debug, Clone, PartialEq)]
pub struct CausalMorphism {
    pub map: InvariantCausalMap,
}

impl CausalMorphism {
    pub fn new(map: InvariantCausalMap) -> Self {
        Self { map }
    }

    /// Closed-form application to a null-direction point through the
    /// canonical lift.
    pub fn apply(&self, g: &GPoint) -> Result<GPoint> {
        let (p, l) = lift_g_point(g)?;
        let (p2, l2) = self.apply_lifted(&p, &l)?;
        extract_g_point(&p2, &l2, Patch::U1)
    }

    /// Closed-form application to an arbitrary representative of the lift.
    pub fn apply_lifted(
        &self,
        p: &BP1Point,
        l: &PlanePairLift,
    ) -> Result<(BP1Point, PlanePairLift)> {
        let b0 = JetMat2::constant(&p.b0, 0);
        let b1 = JetMat2::constant(&p.b1, 0);
        let pi = JetVec2::constant(l.z.pi_low(), 0);
        let lam = JetVec2::constant(l.w.lambda_low(), 0);
        let img = causal_closed_form_jets(&self.map, &b0, &pi, &lam, &b1)?;
        let p2 = BP1Point::new(img.b0.value(), img.b1.value())?;
        let z2 = Twistor::incident(&p2.b0, img.pi_low.value())?;
        let w2 = DualTwistor::from_parts(img.lam_low.value(), img.mu_up.value())?;
        Ok((p2, PlanePairLift { z: z2, w: w2 }))
    }

    /// Generic route: push jets of the lifted plane pair through the
    /// endomorphism slot by slot and invert each correspondence.
    pub fn apply_generic(&self, g: &GPoint) -> Result<GPoint> {
        let (p, l) = lift_g_point(g)?;
        // twistor slot: vary the alpha-plane, hold the dual data fixed
        let pi_low = l.z.pi_low();
        let psi = orthogonal_complement(pi_low)?;
        let om_dot = p.b0.mul_vec(psi);
        let z_jet = TwistorJet::line(
            l.z.z,
            [om_dot[0] * C64::i(), om_dot[1] * C64::i(), psi[0], psi[1]],
            1,
        );
        let w_const = DualTwistorJet::constant(&l.w, 1);
        let (zt, _) = self.map.eval_jets(&z_jet, &w_const);
        let (new_b0, _) = invert_twistor_lift(&zt).map_err(|e| match e {
            Error::SingularCorrespondence => Error::SingularImage,
            other => other,
        })?;
        let ztv = zt.value_components();
        let new_pi = [ztv[2], ztv[3]];

        // dual slot: vary the beta-plane, hold the twistor data fixed
        let lam_low = l.w.lambda_low();
        let phi = orthogonal_complement(lam_low)?;
        let mu_dot = p.b1.transpose().mul_vec(phi);
        let w_jet = DualTwistorJet::line(
            l.w.w,
            [phi[0], phi[1], -mu_dot[0] * C64::i(), -mu_dot[1] * C64::i()],
            1,
        );
        let z_const = TwistorJet::constant(&l.z, 1);
        let (_, wt) = self.map.eval_jets(&z_const, &w_jet);
        let (new_b1, _) = invert_dual_lift(&wt).map_err(|e| match e {
            Error::SingularCorrespondence => Error::SingularImage,
            other => other,
        })?;
        let wtv = wt.value_components();
        let new_lam = [wtv[0], wtv[1]];

        let p2 = BP1Point::new(new_b0, new_b1)?;
        let z2 = Twistor::from_parts([ztv[0], ztv[1]], new_pi)?;
        let w2 = DualTwistor::from_parts(new_lam, [wtv[2], wtv[3]])?;
        extract_g_point(&p2, &PlanePairLift { z: z2, w: w2 }, Patch::U1)
    }

    /// Push a null curve through the morphism sample by sample. The image
    /// point jet comes from the closed form evaluated on curve jets, so the
    /// image tangent is an exact derivative; the tangent-consistency
    /// residual compares it with the image null direction. For generic maps
    /// the residual is O(1) — see the module docs for why the alignment
    /// fails — and the per-sample report makes the obstruction measurable.
    pub fn apply_to_curve(&self, curve: &NullCurve, samples: &[C64]) -> Vec<CausalCurveSample> {
        samples
            .iter()
            .map(|&s| CausalCurveSample { s, result: self.curve_image_at(curve, s) })
            .collect()
    }

    fn curve_image_at(&self, curve: &NullCurve, s: C64) -> Result<CausalImagePoint> {
        let order = DEFAULT_JET_ORDER;
        let b0 = curve.chi_jet(s, order);
        let x_val = b0.value();
        if x_val.det().norm() <= crate::spinor::NULL_TOL * x_val.norm_sq().max(1.0) {
            return Err(Error::SingularBasePoint);
        }
        let x_inv = b0.inverse().map_err(|_| Error::SingularBasePoint)?;
        let mu_v = curve.lambda_poly().jet(s, order);
        let pi_up = curve.pi_poly().jet(s, order);
        let lam_low = x_inv.mul_vec(&mu_v).lower();
        let pi_low = pi_up.lower();
        let b1 = JetMat2::identity(order);
        let img = causal_closed_form_jets(&self.map, &b0, &pi_low, &lam_low, &b1)?;
        let b1_inv = img.b1.inverse().map_err(|_| Error::SingularPatch(1))?;
        let x_jet = img.b0.mul(&b1_inv);
        let x = x_jet.value();
        let x_dot = x_jet.deriv1();
        // image null direction at the sample
        let b1v_inv = img.b1.value().inverse().map_err(|_| Error::SingularPatch(1))?;
        let unprimed = x.mul_vec(raise2(img.lam_low.value()));
        let primed = b1v_inv.transpose().mul_vec(raise2(img.pi_low.value()));
        let v = SpacetimePoint::from_outer(unprimed, primed);
        if v.norm_sq() <= 1e-60 {
            return Err(Error::DegenerateTangent);
        }
        let tangent_residual = projective_distance(&x_dot.flatten(), &v.flatten())?;
        let null_residual = x_dot.det().norm() / x_dot.norm_sq().max(1e-30);
        Ok(CausalImagePoint { x, x_dot, v, tangent_residual, null_residual })
    }
}

/// Residual of the first-order beta-plane tangency in the patch: distance
/// between the true patch image of the displaced beta-plane point and its
/// first-order model
///
/// ```text
/// x_w(t) ~ x - t (x lam^) (delta b1^{-1}).
/// ```
///
/// The residual is O(t^2); halving `t` should shrink it about fourfold.
pub fn beta_first_order_residual(
    b0: &SpacetimePoint,
    b1: &SpacetimePoint,
    lam_low: [C64; 2],
    delta_up: [C64; 2],
    t: f64,
) -> Result<f64> {
    let b1_inv = b1.inverse().map_err(|_| Error::SingularPatch(1))?;
    let x = b0.mul(&b1_inv);
    let lam_up = raise2(lam_low);
    let displacement = SpacetimePoint::from_outer(lam_up, delta_up);
    let first_order = SpacetimePoint::from_outer(
        x.mul_vec(lam_up),
        Mat2::row_mul(delta_up, &b1_inv),
    )
    .scale(C64::new(-t, 0.0));
    let moved = b1.add(&displacement.scale(C64::new(t, 0.0)));
    let moved_inv = moved.inverse().map_err(|_| Error::SingularPatch(1))?;
    let x_w = b0.mul(&moved_inv);
    Ok(x_w.sub(&x).sub(&first_order).norm())
}

/// Compare the naive correspondence route on two curves sharing a
/// first-order jet but differing at second order: the degree-2 image
/// tangents separate while a degree-1 control map keeps them together.
pub fn nonlocality_demo(
    map2: &Degree2Map,
    control: &Degree1Map,
    seed: u64,
) -> Result<NonlocalityReport> {
    for attempt in 0..16u64 {
        let mut rng = SeededRng::for_trial(seed, attempt);
        let x = rng.invertible_matrix(0.3);
        let mu = rng.spinor_min_norm(0.3);
        let pi = rng.spinor_min_norm(0.3);
        let gp = match GPoint::new(x, SpacetimePoint::from_outer(mu, pi)) {
            Ok(g) => g,
            Err(_) => continue,
        };
        let curves = match make_tangent_family(
            TangentAnchor::FirstOrder(gp),
            seed.wrapping_add(attempt).wrapping_mul(0x9E37_79B9),
            2,
            DegreeBounds::default(),
        ) {
            Ok(c) => c,
            Err(_) => continue,
        };
        let s0 = C64::new(0.0, 0.0);
        let jets: Vec<JetMat2> =
            curves.iter().map(|c| c.chi_jet(s0, DEFAULT_JET_ORDER)).collect();
        let deg2 = ProjectiveMap::Degree2(map2.clone());
        let deg1 = ProjectiveMap::Degree1(control.clone());
        let run = |map: &ProjectiveMap| -> Result<Vec<(SpacetimePoint, SpacetimePoint)>> {
            jets.iter().map(|j| naive_image_tangent(map, j)).collect()
        };
        let img2 = match run(&deg2) {
            Ok(v) => v,
            Err(_) => continue,
        };
        let img1 = match run(&deg1) {
            Ok(v) => v,
            Err(_) => continue,
        };
        let d2 = projective_distance(&img2[0].1.flatten(), &img2[1].1.flatten())?;
        let d1 = projective_distance(&img1[0].1.flatten(), &img1[1].1.flatten())?;
        let p2 = relative_diff(&img2[0].0, &img2[1].0);
        return Ok(NonlocalityReport {
            degree2_tangent_distance: d2,
            degree1_tangent_distance: d1,
            degree2_point_distance: p2,
        });
    }
    Err(Error::GenerationExhausted(16))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::endo::{random_degree1, random_degree2, random_invariant};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn random_g_point(rng: &mut SeededRng) -> GPoint {
        loop {
            let x = rng.invertible_matrix(0.3);
            let mu = rng.spinor_min_norm(0.3);
            let pi = rng.spinor_min_norm(0.3);
            if let Ok(g) = GPoint::new(x, SpacetimePoint::from_outer(mu, pi)) {
                return g;
            }
        }
    }

    #[test]
    fn patch_coordinate_examples() {
        let b0 = SpacetimePoint::from_real([[1.0, 2.0], [0.3, -0.5]]);
        let p = BP1Point::new(b0, SpacetimePoint::identity()).unwrap();
        assert!(relative_diff(&patch_coordinates(&p, Patch::U1).unwrap(), &b0) < 1e-15);
        let singular = BP1Point::new(
            SpacetimePoint::identity(),
            SpacetimePoint::from_real([[1.0, 2.0], [2.0, 4.0]]),
        )
        .unwrap();
        assert_eq!(patch_coordinates(&singular, Patch::U1), Err(Error::SingularPatch(1)));
    }

    #[test]
    fn patch_coordinate_is_right_action_invariant() {
        let mut rng = SeededRng::new(41);
        for _ in 0..50 {
            let p = BP1Point::new(rng.matrix(), rng.invertible_matrix(0.2)).unwrap();
            let x = patch_coordinates(&p, Patch::U1).unwrap();
            let u = rng.invertible_matrix(0.2);
            let pu = BP1Point::new(p.b0.mul(&u), p.b1.mul(&u)).unwrap();
            let xu = patch_coordinates(&pu, Patch::U1).unwrap();
            assert!(relative_diff(&x, &xu) < 1e-12);
        }
    }

    #[test]
    fn lift_round_trips_through_extract() {
        let mut rng = SeededRng::new(42);
        for _ in 0..100 {
            let g = random_g_point(&mut rng);
            let (p, l) = lift_g_point(&g).unwrap();
            assert!(l.incidence_residual(&p) < 1e-12);
            let back = extract_g_point(&p, &l, Patch::U1).unwrap();
            assert!(relative_diff(&back.x, &g.x) < 1e-10);
            let d = projective_distance(&back.v.matrix().flatten(), &g.v.matrix().flatten())
                .unwrap();
            assert!(d < 1e-10);
        }
    }

    #[test]
    fn lift_at_identity_keeps_the_factors() {
        let mu = [c(1.0, 0.3), c(-0.4, 0.8)];
        let pi = [c(0.7, -0.1), c(0.2, 1.0)];
        let g = GPoint::new(SpacetimePoint::identity(), SpacetimePoint::from_outer(mu, pi))
            .unwrap();
        let (p, l) = lift_g_point(&g).unwrap();
        assert_eq!(p.b1, SpacetimePoint::identity());
        // the raised beta spinor is the unprimed factor of v
        let d = projective_distance(&raise2(l.w.lambda_low()), &mu).unwrap();
        assert!(d < 1e-13);
        let dpi = projective_distance(&raise2(l.z.pi_low()), &pi).unwrap();
        assert!(dpi < 1e-13);
    }

    #[test]
    fn singular_base_point_is_rejected() {
        let v = SpacetimePoint::from_outer([c(1.0, 0.0), c(0.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]);
        let x = SpacetimePoint::from_real([[1.0, 2.0], [2.0, 4.0]]);
        let g = GPoint::new(x, v).unwrap();
        assert_eq!(lift_g_point(&g).unwrap_err(), Error::SingularBasePoint);
    }

    #[test]
    fn extract_is_right_action_invariant() {
        let mut rng = SeededRng::new(43);
        for _ in 0..100 {
            let g = random_g_point(&mut rng);
            let (p, l) = lift_g_point(&g).unwrap();
            let u = rng.invertible_matrix(0.2);
            let (pu, lu) = right_action(&p, &l, &u).unwrap();
            let g1 = extract_g_point(&p, &l, Patch::U1).unwrap();
            let g2 = extract_g_point(&pu, &lu, Patch::U1).unwrap();
            assert!(relative_diff(&g1.x, &g2.x) < 1e-11);
            let d = projective_distance(&g1.v.matrix().flatten(), &g2.v.matrix().flatten())
                .unwrap();
            assert!(d < 1e-11);
        }
    }

    #[test]
    fn closed_form_agrees_with_generic_route() {
        let mut rng = SeededRng::new(44);
        let map = random_invariant(&mut rng);
        let morphism = CausalMorphism::new(map);
        let mut checked = 0;
        for trial in 0..40 {
            let mut r = SeededRng::for_trial(45, trial);
            let g = random_g_point(&mut r);
            let (a, b) = match (morphism.apply(&g), morphism.apply_generic(&g)) {
                (Ok(a), Ok(b)) => (a, b),
                _ => continue,
            };
            checked += 1;
            assert!(relative_diff(&a.x, &b.x) < 1e-9, "point mismatch");
            let d = projective_distance(&a.v.matrix().flatten(), &b.v.matrix().flatten())
                .unwrap();
            assert!(d < 1e-9, "direction mismatch {d}");
        }
        assert!(checked > 20, "too many singular trials: {checked}");
    }

    #[test]
    fn causal_output_is_right_action_invariant() {
        let mut rng = SeededRng::new(46);
        let map = random_invariant(&mut rng);
        let morphism = CausalMorphism::new(map);
        let mut checked = 0;
        for trial in 0..40 {
            let mut r = SeededRng::for_trial(47, trial);
            let g = random_g_point(&mut r);
            let u = r.invertible_matrix(0.2);
            let (p, l) = lift_g_point(&g).unwrap();
            let (pu, lu) = right_action(&p, &l, &u).unwrap();
            let direct = match morphism.apply(&g) {
                Ok(v) => v,
                Err(_) => continue,
            };
            let (p2, l2) = match morphism.apply_lifted(&pu, &lu) {
                Ok(v) => v,
                Err(_) => continue,
            };
            let via_u = extract_g_point(&p2, &l2, Patch::U1).unwrap();
            checked += 1;
            assert!(relative_diff(&direct.x, &via_u.x) < 1e-10);
            let d = projective_distance(
                &direct.v.matrix().flatten(),
                &via_u.v.matrix().flatten(),
            )
            .unwrap();
            assert!(d < 1e-10);
        }
        assert!(checked > 20);
    }

    #[test]
    fn causal_output_ignores_twistor_rescaling() {
        let mut rng = SeededRng::new(48);
        let map = random_invariant(&mut rng);
        let morphism = CausalMorphism::new(map);
        let g = random_g_point(&mut rng);
        let (p, l) = lift_g_point(&g).unwrap();
        let scaled = PlanePairLift { z: l.z.scale(c(1.3, -2.1)), w: l.w };
        let (p1, l1) = morphism.apply_lifted(&p, &l).unwrap();
        let (p2, l2) = morphism.apply_lifted(&p, &scaled).unwrap();
        let g1 = extract_g_point(&p1, &l1, Patch::U1).unwrap();
        let g2 = extract_g_point(&p2, &l2, Patch::U1).unwrap();
        assert!(relative_diff(&g1.x, &g2.x) < 1e-10);
        let d =
            projective_distance(&g1.v.matrix().flatten(), &g2.v.matrix().flatten()).unwrap();
        assert!(d < 1e-10);
    }

    #[test]
    fn beta_plane_first_order_scaling() {
        let mut rng = SeededRng::new(49);
        for _ in 0..20 {
            let b0 = rng.matrix();
            let b1 = rng.invertible_matrix(0.3);
            let lam = rng.spinor_min_norm(0.3);
            let delta = rng.spinor_min_norm(0.3);
            let t = 1e-3;
            let r1 = beta_first_order_residual(&b0, &b1, lam, delta, t).unwrap();
            let r2 = beta_first_order_residual(&b0, &b1, lam, delta, t / 2.0).unwrap();
            if r1 < 1e-12 {
                continue; // degenerate second-order coefficient
            }
            let ratio = r1 / r2;
            assert!((3.5..=4.5).contains(&ratio), "ratio {ratio}");
        }
    }

    #[test]
    fn curve_images_expose_the_tangent_obstruction() {
        // characterization: the image null direction stays exactly null and
        // well defined, while the image curve derivative misses it by O(1)
        // for a generic map (the documented defect of the construction)
        let mut rng = SeededRng::new(50);
        let map = random_invariant(&mut rng);
        let morphism = CausalMorphism::new(map);
        let curve = crate::curve::random_null_curve(51, DegreeBounds::default()).unwrap();
        let samples = crate::curve::default_sample_points();
        let mut ok = 0;
        let mut worst_defect = 0.0f64;
        for sample in morphism.apply_to_curve(&curve, &samples) {
            if let Ok(img) = sample.result {
                assert!(img.v.det().norm() <= 1e-12 * img.v.norm_sq());
                worst_defect = worst_defect.max(img.tangent_residual);
                ok += 1;
            }
        }
        assert!(ok >= 6, "too many singular samples");
        assert!(worst_defect > 1e-3, "tangent defect unexpectedly small: {worst_defect}");
    }

    #[test]
    fn one_jet_equal_curves_share_image_point_but_not_tangent() {
        // the pointwise map is local (same (x, v) in, same image out), but
        // the image curve tangents feel the second derivatives
        let mut rng = SeededRng::new(52);
        let map = random_invariant(&mut rng);
        let morphism = CausalMorphism::new(map);
        let g = random_g_point(&mut rng);
        let curves =
            make_tangent_family(TangentAnchor::FirstOrder(g), 53, 2, DegreeBounds::default())
                .unwrap();
        let s0 = c(0.0, 0.0);
        let a = morphism.curve_image_at(&curves[0], s0).unwrap();
        let b = morphism.curve_image_at(&curves[1], s0).unwrap();
        assert!(relative_diff(&a.x, &b.x) < 1e-12);
        let dv = projective_distance(&a.v.flatten(), &b.v.flatten()).unwrap();
        assert!(dv < 1e-12, "image direction must be first-order data, got {dv}");
        let d = projective_distance(&a.x_dot.flatten(), &b.x_dot.flatten()).unwrap();
        assert!(d > 1e-3, "image tangents should separate, got {d}");
    }

    #[test]
    fn nonlocality_demo_separates_degrees() {
        let mut rng = SeededRng::new(54);
        let map2 = random_degree2(&mut rng);
        let control = random_degree1(&mut rng);
        let report = nonlocality_demo(&map2, &control, 55).unwrap();
        assert!(report.degree2_tangent_distance > 1e-3);
        assert!(report.degree1_tangent_distance < 1e-10);
        assert!(report.degree2_point_distance < 1e-9);
    }

    #[test]
    fn identical_curves_give_identical_naive_images() {
        let mut rng = SeededRng::new(56);
        let map2 = ProjectiveMap::Degree2(random_degree2(&mut rng));
        let curve = crate::curve::random_null_curve(57, DegreeBounds::default()).unwrap();
        let jet = curve.chi_jet(c(0.1, 0.2), DEFAULT_JET_ORDER);
        let (x1, v1) = naive_image_tangent(&map2, &jet).unwrap();
        let (x2, v2) = naive_image_tangent(&map2, &jet).unwrap();
        assert_eq!(x1, x2);
        assert_eq!(v1, v2);
    }
}
