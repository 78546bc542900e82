//! The quadratic self-dual morphism evaluated along its three independent
//! paths: the generic jet pipeline, the closed form with pi-contracted
//! quadratic blocks, and the pre-simplified fraction with an explicit
//! auxiliary spinor. Unlike the degree-1 case the image genuinely depends
//! on the alpha-plane.

use nullmorph::endo::random_degree2;
use nullmorph::selfdual::f_point_of;
use nullmorph::spinor::relative_diff;
use nullmorph::{
    orthogonal_complement, projective_distance, quadratic_closed_form, ratio_closed_form,
    ProjectiveMap, SeededRng, SelfDualMorphism,
};

fn main() {
    let mut rng = SeededRng::new(16);
    let map = random_degree2(&mut rng);
    let x = rng.matrix();
    let p = f_point_of(x, rng.spinor_min_norm(0.3)).expect("fpoint");

    let morphism = SelfDualMorphism::new(ProjectiveMap::Degree2(map.clone()));
    let pipeline = morphism.apply(&p).expect("pipeline");
    let closed = quadratic_closed_form(&map, &p).expect("closed form");
    let psi = orthogonal_complement(p.pi_components()).expect("psi");
    let ratio = ratio_closed_form(&ProjectiveMap::Degree2(map.clone()), &p, psi).expect("ratio");

    println!("three-path agreement:");
    println!("  pipeline vs closed form : {:.3e}", relative_diff(&pipeline.x, &closed.x));
    println!("  fraction vs closed form : {:.3e}", relative_diff(&ratio, &closed.x));
    println!(
        "  image plane agreement   : {:.3e}",
        projective_distance(&pipeline.pi_components(), &closed.pi_components()).unwrap()
    );

    // swap psi for an independent choice: nothing moves
    let psi2 = {
        let pi = p.pi_components();
        [psi[0] + pi[0] * 0.7, psi[1] + pi[1] * 0.7]
    };
    let shifted = morphism.apply_with_psi(&p, psi2).expect("shifted psi");
    println!("  psi shift along pi      : {:.3e}", relative_diff(&pipeline.x, &shifted.x));

    // but the image does depend on the plane through x
    let q = f_point_of(x, rng.spinor_min_norm(0.3)).expect("fpoint");
    let other = quadratic_closed_form(&map, &q).expect("closed form");
    println!(
        "distinct planes at the same point map apart: {:.3e}",
        projective_distance(&closed.x.flatten(), &other.x.flatten()).unwrap()
    );
}
