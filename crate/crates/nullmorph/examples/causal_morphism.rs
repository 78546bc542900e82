//! The two-slot morphism over the biquaternion projective line: lift a
//! point-with-null-direction to its alpha/beta plane pair, push the pair
//! through an invariant endomorphism along two independent code paths, and
//! check the invariances that make the map well defined. The final section
//! measures the genuine obstruction of the construction: image curves are
//! not tangent to the image null directions.

use nullmorph::endo::random_invariant;
use nullmorph::spinor::relative_diff;
use nullmorph::{
    extract_g_point, lift_g_point, projective_distance, random_null_curve, right_action,
    CausalMorphism, DegreeBounds, GPoint, Patch, SeededRng, SpacetimePoint, C64,
};

fn main() {
    let mut rng = SeededRng::new(31);
    let map = random_invariant(&mut rng);
    let morphism = CausalMorphism::new(map);

    let g = loop {
        let x = rng.invertible_matrix(0.3);
        let v = SpacetimePoint::from_outer(rng.spinor_min_norm(0.3), rng.spinor_min_norm(0.3));
        if let Ok(g) = GPoint::new(x, v) {
            break g;
        }
    };

    let (p, l) = lift_g_point(&g).expect("lift");
    println!("lift incidence residual: {:.3e}", l.incidence_residual(&p));
    let back = extract_g_point(&p, &l, Patch::U1).expect("extract");
    println!("lift/extract round trip: {:.3e}", relative_diff(&back.x, &g.x));

    let closed = morphism.apply(&g).expect("closed form");
    let generic = morphism.apply_generic(&g).expect("generic route");
    println!(
        "closed form vs lift-map-invert: point {:.3e}, direction {:.3e}",
        relative_diff(&closed.x, &generic.x),
        projective_distance(&closed.v.matrix().flatten(), &generic.v.matrix().flatten()).unwrap()
    );

    let u = rng.invertible_matrix(0.3);
    let (pu, lu) = right_action(&p, &l, &u).expect("action");
    let (p2, l2) = morphism.apply_lifted(&pu, &lu).expect("apply");
    let via_u = extract_g_point(&p2, &l2, Patch::U1).expect("extract");
    println!(
        "right-action invariance: point {:.3e}, direction {:.3e}",
        relative_diff(&closed.x, &via_u.x),
        projective_distance(&closed.v.matrix().flatten(), &via_u.v.matrix().flatten()).unwrap()
    );

    // the obstruction: push a whole curve through and compare the image
    // curve derivative with the image null direction at each sample
    let curve = random_null_curve(77, DegreeBounds::default()).expect("curve");
    let samples: Vec<C64> = nullmorph::default_sample_points().into_iter().take(4).collect();
    println!("image-curve tangent vs image direction (the construction's defect):");
    for sample in morphism.apply_to_curve(&curve, &samples) {
        match sample.result {
            Ok(img) => println!(
                "  s = {:+.2}{:+.2}i   misalignment {:.3e}, |det tangent| rel {:.3e}",
                sample.s.re, sample.s.im, img.tangent_residual, img.null_residual
            ),
            Err(e) => println!("  s = {:+.2}{:+.2}i   {e}", sample.s.re, sample.s.im),
        }
    }
    println!("(the image direction itself is exactly null and pointwise well defined)");
}
