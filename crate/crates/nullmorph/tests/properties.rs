//! Property-based invariants for the algebra kernel and the file formats.

use nullmorph::io::{CurveJson, FPointJson, GPointJson, MapJson};
use nullmorph::jet::Jet;
use nullmorph::spinor::{
    antisym_identity_residual, det_identity_residual, eps_pair, null_factorize,
    projective_distance, Mat2, Priming, SpacetimePoint, Spinor, Variance,
};
use nullmorph::{C64, SeededRng};
use proptest::prelude::*;

fn finite() -> impl Strategy<Value = f64> {
    (-10.0f64..10.0).prop_filter("finite", |x| x.is_finite())
}

fn complex() -> impl Strategy<Value = C64> {
    (finite(), finite()).prop_map(|(re, im)| C64::new(re, im))
}

fn spinor_pair() -> impl Strategy<Value = [C64; 2]> {
    ([complex(), complex()]).prop_filter("nonzero", |v| {
        v[0].norm_sqr() + v[1].norm_sqr() > 1e-4
    })
}

fn matrix() -> impl Strategy<Value = SpacetimePoint> {
    ([complex(), complex(), complex(), complex()])
        .prop_map(|[a, b, c, d]| SpacetimePoint::new([[a, b], [c, d]]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn see_saw_round_trips(v in spinor_pair()) {
        let s = Spinor::from_components(v, Variance::Lower, Priming::Primed);
        prop_assert_eq!(s.raised().lowered(), s);
        let u = Spinor::from_components(v, Variance::Upper, Priming::Unprimed);
        prop_assert_eq!(u.lowered().raised(), u);
    }

    #[test]
    fn equal_variance_contraction_is_antisymmetric(a in spinor_pair(), b in spinor_pair()) {
        let sa = Spinor::from_components(a, Variance::Lower, Priming::Primed);
        let sb = Spinor::from_components(b, Variance::Lower, Priming::Primed);
        let ab = sa.contract(&sb).unwrap();
        let ba = sb.contract(&sa).unwrap();
        prop_assert!((ab + ba).norm() <= 1e-13 * ab.norm().max(1.0));
        prop_assert!(sa.contract(&sa).unwrap().norm() == 0.0);
    }

    #[test]
    fn epsilon_identities_hold(a in spinor_pair(), b in spinor_pair(), m in matrix()) {
        prop_assert!(antisym_identity_residual(a, b) <= 1e-12 );
        prop_assert!(det_identity_residual(&m) <= 1e-12);
    }

    #[test]
    fn rank_one_matrices_factor_back(a in spinor_pair(), b in spinor_pair()) {
        let v = SpacetimePoint::from_outer(a, b);
        if v.norm_sq() > 1e-6 {
            let (lam, pi) = null_factorize(&v).unwrap();
            let rebuilt = SpacetimePoint::from_outer(lam.components(), pi.components());
            let d = projective_distance(&rebuilt.flatten(), &v.flatten()).unwrap();
            prop_assert!(d <= 1e-12, "distance {}", d);
        }
    }

    #[test]
    fn projective_distance_is_symmetric_and_scale_free(
        a in spinor_pair(),
        b in spinor_pair(),
        c in complex(),
    ) {
        let d1 = projective_distance(&a, &b).unwrap();
        let d2 = projective_distance(&b, &a).unwrap();
        prop_assert!((d1 - d2).abs() <= 1e-12);
        if c.norm() > 0.1 {
            let scaled = [a[0] * c, a[1] * c];
            let d3 = projective_distance(&scaled, &b).unwrap();
            prop_assert!((d1 - d3).abs() <= 1e-10);
        }
    }

    #[test]
    fn jet_product_obeys_leibniz(
        a in prop::collection::vec(complex(), 4),
        b in prop::collection::vec(complex(), 4),
    ) {
        let ja = Jet::new(a);
        let jb = Jet::new(b);
        let product = ja.mul(&jb);
        // (ab)' = a'b + ab', compared one order lower
        let lhs = product.derivative_jet();
        let rhs = ja.derivative_jet().mul(&jb.truncated(2))
            .add(&ja.truncated(2).mul(&jb.derivative_jet()));
        for k in 0..=2 {
            let diff = (lhs.coeff(k) - rhs.coeff(k)).norm();
            prop_assert!(diff <= 1e-12 * rhs.coeff(k).norm().max(1.0));
        }
    }

    #[test]
    fn epsilon_pairing_detects_dependence(a in spinor_pair(), c in complex()) {
        let parallel = [a[0] * c, a[1] * c];
        prop_assert!(eps_pair(a, parallel).norm() <= 1e-10 * (1.0 + c.norm()) * 100.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn curve_and_point_files_round_trip(seed in 0u64..5000) {
        let curve = nullmorph::random_null_curve(seed, nullmorph::DegreeBounds::default())
            .unwrap();
        let text = serde_json::to_string(&CurveJson::from_curve(&curve)).unwrap();
        let parsed: CurveJson = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(parsed.to_curve().unwrap(), curve);

        let mut rng = SeededRng::new(seed);
        let fp = nullmorph::FPoint::new(
            rng.matrix(),
            Spinor::from_components(rng.spinor_min_norm(0.1), Variance::Lower, Priming::Primed),
        )
        .unwrap();
        let text = serde_json::to_string(&FPointJson::from_point(&fp)).unwrap();
        let back: FPointJson = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back.to_point().unwrap(), fp);

        let gp = nullmorph::GPoint::new(
            rng.matrix(),
            Mat2::from_outer(rng.spinor_min_norm(0.1), rng.spinor_min_norm(0.1)),
        )
        .unwrap();
        let text = serde_json::to_string(&GPointJson::from_point(&gp)).unwrap();
        let back: GPointJson = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back.to_point().unwrap(), gp);
    }

    #[test]
    fn map_files_round_trip(seed in 0u64..5000, degree2 in proptest::bool::ANY) {
        let kind = if degree2 { "degree2" } else { "degree1" };
        let map = nullmorph::random_map(kind, seed).unwrap();
        let text = serde_json::to_string(&MapJson::from_map(&map)).unwrap();
        let parsed: MapJson = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(parsed.to_map().unwrap(), map);
    }

    #[test]
    fn morphism_images_preserve_alpha_incidence(seed in 0u64..5000) {
        let mut rng = SeededRng::new(seed);
        let map = nullmorph::endo::random_degree2(&mut rng);
        let p = nullmorph::FPoint::new(
            rng.matrix(),
            Spinor::from_components(rng.spinor_min_norm(0.3), Variance::Lower, Priming::Primed),
        )
        .unwrap();
        let morphism = nullmorph::SelfDualMorphism::new(nullmorph::ProjectiveMap::Degree2(map));
        if let Ok(img) = morphism.apply(&p) {
            let z = nullmorph::Twistor::incident(&img.x, img.pi_components()).unwrap();
            prop_assert!(z.incidence_residual(&img.x) <= 1e-12);
        }
    }
}
