//! Morphisms of self-dual data built from projective endomorphisms.
//!
//! A projective endomorphism `f~` of twistor space induces a map on pairs
//! `(x, pi)` of a spacetime point and an alpha-plane through it: lift the
//! pair to the incident twistor `z`, pick any admissible first-order
//! variation `zdot = (i x psi, psi)` with `psi` independent of `pi`, push
//! the resulting jet through `f~`, and invert the correspondence. The image
//! point and image alpha-plane do not depend on the choice of `psi`, nor on
//! which null curve tangent to the alpha-plane realized the jet; that
//! independence is what makes the construction a morphism of self-dual data
//! and it is certified at runtime by the harness suites.
//!
//! Three evaluation paths are kept as first-class operations:
//!
//! 1. the generic pipeline (`apply` / `apply_with_psi`), which works for any
//!    endomorphism degree;
//! 2. closed forms: the generalized Moebius transformation
//!    `i xi = (iA chi + B)(iC chi + D)^{-1}` for degree one, and the
//!    quadratic analogue `i xi = M N^{-1}` with `pi`-contracted quadratic
//!    blocks for degree two;
//! 3. the pre-simplified fraction with an explicit `psi`, the intermediate
//!    expression from which the closed forms arise by epsilon identities.
//!
//! Agreement of the three paths on random inputs is an acceptance gate.

use crate::curve::{make_tangent_family, DegreeBounds, FPoint, NullCurve, TangentAnchor};
use crate::endo::{Degree1Map, Degree2Map, ProjectiveMap};
use crate::error::{Error, Result};
use crate::jet::JetMat2;
use crate::spinor::{
    dot2, eps_pair, lower2, projective_distance, raise2, relative_diff, vec2_norm_sq, C64, Mat2,
    Priming, SpacetimePoint, Spinor, Variance,
};
use crate::twistor::{invert_twistor_lift, twistor_lift, Twistor, TwistorJet};

/// Rule for selecting the auxiliary spinor `psi` in the pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PsiPolicy {
    /// The Hermitian-orthogonal complement of `pi`, normalized so its
    /// max-modulus component is 1. Always independent of `pi`; the result
    /// provably does not depend on the choice.
    #[default]
    OrthogonalComplement,
}

impl PsiPolicy {
    pub fn choose(&self, pi_low: [C64; 2]) -> Result<[C64; 2]> {
        match self {
            PsiPolicy::OrthogonalComplement => orthogonal_complement(pi_low),
        }
    }
}

/// Deterministic spinor independent of `pi`: the Hermitian-orthogonal
/// direction, scaled so its max-modulus component equals one.
pub fn orthogonal_complement(pi: [C64; 2]) -> Result<[C64; 2]> {
    if vec2_norm_sq(pi) == 0.0 {
        return Err(Error::ZeroVector);
    }
    let psi = [-pi[1].conj(), pi[0].conj()];
    let p = if psi[0].norm() >= psi[1].norm() { psi[0] } else { psi[1] };
    Ok([psi[0] / p, psi[1] / p])
}

/// A self-dual morphism: a projective endomorphism together with the psi
/// selection rule used by the generic pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct SelfDualMorphism {
    pub map: ProjectiveMap,
    pub psi_policy: PsiPolicy,
}

/// Image data of one curve sample under a morphism.
#[derive(Debug, Clone, PartialEq)]
pub struct ImagePoint {
    pub xi: SpacetimePoint,
    pub xi_dot: SpacetimePoint,
    pub pi_tilde: [C64; 2],
    /// `|det xi_dot|` relative to the squared tangent norm.
    pub null_residual: f64,
    /// Incidence of the image tangent with the image alpha-plane.
    pub tangent_residual: f64,
}

/// One sample of a curve pushed through a morphism; singular samples carry
/// the error they hit.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveSample {
    pub s: C64,
    pub result: Result<ImagePoint>,
}

/// Spread of image data over a family of tangent curves.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalityReport {
    pub point_spread: f64,
    pub pi_spread: f64,
    /// Images of the individual curves.
    pub images: Vec<(SpacetimePoint, [C64; 2])>,
    /// Image computed by the point pipeline, for comparison.
    pub f1_image: (SpacetimePoint, [C64; 2]),
}

impl SelfDualMorphism {
    pub fn new(map: ProjectiveMap) -> Self {
        Self { map, psi_policy: PsiPolicy::default() }
    }

    /// Apply the morphism to a correspondence-space point via the generic
    /// pipeline with the configured psi rule.
    pub fn apply(&self, p: &FPoint) -> Result<FPoint> {
        let psi = self.psi_policy.choose(p.pi_components())?;
        self.apply_with_psi(p, psi)
    }

    /// The pipeline with an explicit admissible variation spinor `psi`.
    pub fn apply_with_psi(&self, p: &FPoint, psi_low: [C64; 2]) -> Result<FPoint> {
        let pi_low = p.pi_components();
        let sep = eps_pair(pi_low, psi_low).norm();
        if sep <= 1e-12 * vec2_norm_sq(pi_low).sqrt() * vec2_norm_sq(psi_low).sqrt() {
            return Err(Error::ConfigInvalid("psi must be independent of pi".into()));
        }
        let z = Twistor::incident(&p.x, pi_low)?;
        let om_dot = p.x.mul_vec(psi_low);
        let zdot = [om_dot[0] * C64::i(), om_dot[1] * C64::i(), psi_low[0], psi_low[1]];
        let z_jet = TwistorJet::line(z.z, zdot, 1);
        let y = self.map.eval_jets(&z_jet);
        image_f_point(&y)
    }

    /// Push a curve through the morphism sample by sample: lift the curve
    /// jet, apply the endomorphism, invert. Singularities are reported per
    /// sample.
    pub fn apply_to_curve(&self, curve: &NullCurve, samples: &[C64]) -> Vec<CurveSample> {
        samples
            .iter()
            .map(|&s| CurveSample { s, result: self.image_at(curve, s) })
            .collect()
    }

    fn image_at(&self, curve: &NullCurve, s: C64) -> Result<ImagePoint> {
        let chi = curve.chi_jet(s, crate::curve::DEFAULT_JET_ORDER);
        let z = twistor_lift(&chi)?;
        let y = self.map.eval_jets(&z);
        image_point_from_jet(&y)
    }
}

/// Read the image correspondence point off an image twistor jet.
fn image_f_point(y: &TwistorJet) -> Result<FPoint> {
    let val = y.value_components();
    let scale: f64 = val.iter().map(|c| c.norm_sqr()).sum();
    if scale <= 1e-120 {
        return Err(Error::DegenerateImage);
    }
    let (xi, _) = invert_twistor_lift(y).map_err(|e| match e {
        Error::SingularCorrespondence => Error::SingularImage,
        other => other,
    })?;
    let pi_tilde = [val[2], val[3]];
    if vec2_norm_sq(pi_tilde) <= 1e-24 * scale {
        return Err(Error::DegenerateImage);
    }
    FPoint::new(xi, Spinor::from_components(pi_tilde, Variance::Lower, Priming::Primed))
}

/// Full image data (point, tangent, plane, residuals) from an image jet of
/// order at least two.
fn image_point_from_jet(y: &TwistorJet) -> Result<ImagePoint> {
    let (xi, xi_jet) = invert_twistor_lift(y).map_err(|e| match e {
        Error::SingularCorrespondence => Error::SingularImage,
        other => other,
    })?;
    let xi_dot = xi_jet.deriv1();
    let val = y.value_components();
    let scale: f64 = val.iter().map(|c| c.norm_sqr()).sum();
    let pi_tilde = [val[2], val[3]];
    if vec2_norm_sq(pi_tilde) <= 1e-24 * scale.max(1e-120) {
        return Err(Error::DegenerateImage);
    }
    let null_residual = xi_dot.det().norm() / xi_dot.norm_sq().max(1e-30);
    let incid = xi_dot.mul_vec(pi_tilde);
    let tangent_residual = vec2_norm_sq(incid).sqrt()
        / (xi_dot.norm() * vec2_norm_sq(pi_tilde).sqrt()).max(1e-30);
    Ok(ImagePoint { xi, xi_dot, pi_tilde, null_residual, tangent_residual })
}

/// Generalized Moebius transformation of a spacetime point:
/// `xi = -i (i a chi + b)(i c chi + d)^{-1}` for the degree-1 block matrix.
/// Independent of any alpha-plane choice.
pub fn mobius_closed_form(f: &Degree1Map, chi: &SpacetimePoint) -> Result<SpacetimePoint> {
    let (a, b, c, d) = f.blocks();
    let g = a.mul(chi).scale(C64::i()).add(&b);
    let h = c.mul(chi).scale(C64::i()).add(&d);
    let hinv = h.inverse().map_err(|_| Error::SingularDenominator)?;
    Ok(g.mul(&hinv).scale(-C64::i()))
}

/// The degree-1 numerator/denominator matrices `(g, h)` with
/// `omega_y = g pi` and `pi_y = h pi` for every plane through `chi`.
pub fn mobius_gh(f: &Degree1Map, chi: &SpacetimePoint) -> (Mat2, Mat2) {
    let (a, b, c, d) = f.blocks();
    let g = a.mul(chi).scale(C64::i()).add(&b);
    let h = c.mul(chi).scale(C64::i()).add(&d);
    (g, h)
}

/// The pi-contracted quadratic blocks `(m, n)` of a degree-2 endomorphism at
/// `(chi, pi)`: row `A` of `m` is `pi^T Mtilde^A`, where
/// `Mtilde = -chi^T A chi + i chi^T B + i B^T chi + C` collects the blocks
/// of the corresponding symmetric matrix, and likewise for `n` from the
/// primed matrices. Then `omega_y = m pi`, `pi_y = n pi`.
pub fn quadratic_mn(map: &Degree2Map, chi: &SpacetimePoint, pi_low: [C64; 2]) -> (Mat2, Mat2) {
    let build = |sym: &[[C64; 4]; 4]| -> [C64; 2] {
        let (a, b, c) = Degree2Map::quad_blocks(sym);
        let chit = chi.transpose();
        let mt = chit
            .mul(&a)
            .mul(chi)
            .scale(-C64::new(1.0, 0.0))
            .add(&chit.mul(&b).scale(C64::i()))
            .add(&b.transpose().mul(chi).scale(C64::i()))
            .add(&c);
        // row of the contracted matrix: (pi^T Mtilde)
        Mat2::row_mul(pi_low, &mt)
    };
    let m0 = build(&map.f[0]);
    let m1 = build(&map.f[1]);
    let n0 = build(&map.g[0]);
    let n1 = build(&map.g[1]);
    (Mat2::new([m0, m1]), Mat2::new([n0, n1]))
}

/// Closed-form degree-2 image `xi = -i m n^{-1}`, together with the image
/// plane `pi_y = n pi`. Depends explicitly on `pi`, unlike degree one.
pub fn quadratic_closed_form(map: &Degree2Map, p: &FPoint) -> Result<FPoint> {
    let pi_low = p.pi_components();
    let (m, n) = quadratic_mn(map, &p.x, pi_low);
    let ninv = n.inverse().map_err(|_| Error::SingularDenominator)?;
    let xi = m.mul(&ninv).scale(-C64::i());
    let pi_tilde = n.mul_vec(pi_low);
    FPoint::new(xi, Spinor::from_components(pi_tilde, Variance::Lower, Priming::Primed))
}

/// The pre-simplified fraction for the image point, with the auxiliary
/// `psi` still explicit:
///
/// ```text
/// xi = -i (g pi (h psi)^ - g psi (h pi)^) / (h pi . (h psi)^)
/// ```
///
/// where `^` raises the primed index. The epsilon identities collapse this
/// to `-i g h^{-1}`; evaluating the raw fraction exercises the identity
/// chain as an independent code path.
pub fn fractional_ratio_form(
    g: &Mat2,
    h: &Mat2,
    pi_low: [C64; 2],
    psi_low: [C64; 2],
) -> Result<SpacetimePoint> {
    let g_pi = g.mul_vec(pi_low);
    let g_psi = g.mul_vec(psi_low);
    let h_pi = h.mul_vec(pi_low);
    let h_psi = h.mul_vec(psi_low);
    let denom = dot2(h_pi, raise2(h_psi));
    let scale = vec2_norm_sq(h_pi).sqrt() * vec2_norm_sq(h_psi).sqrt();
    if denom.norm() <= 1e-12 * scale.max(1e-30) {
        return Err(Error::SingularDenominator);
    }
    let num = SpacetimePoint::from_outer(g_pi, raise2(h_psi))
        .sub(&SpacetimePoint::from_outer(g_psi, raise2(h_pi)));
    Ok(num.scale(-C64::i() / denom))
}

/// Image point via the pre-simplified fraction for either degree.
pub fn ratio_closed_form(
    map: &ProjectiveMap,
    p: &FPoint,
    psi_low: [C64; 2],
) -> Result<SpacetimePoint> {
    let pi_low = p.pi_components();
    let (g, h) = match map {
        ProjectiveMap::Degree1(f) => mobius_gh(f, &p.x),
        ProjectiveMap::Degree2(m) => quadratic_mn(m, &p.x, pi_low),
    };
    fractional_ratio_form(&g, &h, pi_low, psi_low)
}

/// Push a family of alpha-tangent curves through the morphism and measure
/// the spread of the image points and image planes.
pub fn verify_locality(
    morphism: &SelfDualMorphism,
    p: &FPoint,
    n_curves: usize,
    seed: u64,
) -> Result<LocalityReport> {
    let f1_image = morphism.apply(p)?;
    let mut attempt = 0u64;
    'outer: loop {
        if attempt >= 8 {
            return Err(Error::GenerationExhausted(8 * n_curves));
        }
        let family = make_tangent_family(
            TangentAnchor::Alpha(*p),
            seed.wrapping_add(attempt),
            n_curves,
            DegreeBounds::default(),
        )?;
        attempt += 1;
        let mut images = Vec::with_capacity(n_curves);
        for curve in &family {
            let chi = curve.chi_jet(C64::new(0.0, 0.0), crate::curve::DEFAULT_JET_ORDER);
            let z = match twistor_lift(&chi) {
                Ok(z) => z,
                Err(_) => continue 'outer,
            };
            let y = morphism.map.eval_jets(&z);
            match image_f_point(&y) {
                Ok(img) => images.push((img.x, img.pi_components())),
                Err(_) => continue 'outer,
            }
        }
        let mut point_spread = 0.0f64;
        let mut pi_spread = 0.0f64;
        let all: Vec<_> = images
            .iter()
            .cloned()
            .chain(std::iter::once((f1_image.x, f1_image.pi_components())))
            .collect();
        for i in 0..all.len() {
            for j in (i + 1)..all.len() {
                point_spread = point_spread.max(relative_diff(&all[i].0, &all[j].0));
                pi_spread = pi_spread.max(projective_distance(&all[i].1, &all[j].1)?);
            }
        }
        return Ok(LocalityReport {
            point_spread,
            pi_spread,
            images,
            f1_image: (f1_image.x, f1_image.pi_components()),
        });
    }
}

/// Image tangent data from the raw correspondence route with the
/// second-derivative tangent-spinor recovery; used by the nonlocality
/// demonstrations in the `causal` module.
pub fn naive_image_tangent(
    map: &ProjectiveMap,
    chi_jet: &JetMat2,
) -> Result<(SpacetimePoint, SpacetimePoint)> {
    let z = twistor_lift(chi_jet)?;
    let y = map.eval_jets(&z);
    let (xi, _) = invert_twistor_lift(&y).map_err(|e| match e {
        Error::SingularCorrespondence => Error::SingularImage,
        other => other,
    })?;
    let lam = crate::twistor::recover_tangent_spinor(&y, &xi)?;
    let pi_up = raise2([y.z[2].value(), y.z[3].value()]);
    let v = SpacetimePoint::from_outer(lam.components(), pi_up);
    Ok((xi, v))
}

/// Convenience constructor for the correspondence point of a plane through
/// `x` with upper-index direction spinor `pi_up`.
pub fn f_point_of(x: SpacetimePoint, pi_up: [C64; 2]) -> Result<FPoint> {
    FPoint::new(x, Spinor::from_components(lower2(pi_up), Variance::Lower, Priming::Primed))
}
