//! Degree-1 endomorphisms of twistor space induce generalized Moebius
//! transformations of spacetime: the image point ignores the alpha-plane
//! used to compute it, the closed form matches the pipeline, and morphisms
//! compose like their matrices.

use nullmorph::endo::random_degree1;
use nullmorph::selfdual::f_point_of;
use nullmorph::spinor::relative_diff;
use nullmorph::{
    mobius_closed_form, projective_distance, ProjectiveMap, SeededRng, SelfDualMorphism,
};

fn main() {
    let mut rng = SeededRng::new(8);
    let f = random_degree1(&mut rng);
    let g = random_degree1(&mut rng);
    let x = rng.matrix();

    let closed = mobius_closed_form(&f, &x).expect("moebius");
    let morphism = SelfDualMorphism::new(ProjectiveMap::Degree1(f.clone()));

    let mut worst = 0.0f64;
    for _ in 0..16 {
        let p = f_point_of(x, rng.spinor_min_norm(0.3)).expect("fpoint");
        let img = morphism.apply(&p).expect("apply");
        worst = worst.max(relative_diff(&img.x, &closed));
    }
    println!("pipeline vs closed form over 16 alpha-planes: {worst:.3e}");

    let p = f_point_of(x, rng.spinor_min_norm(0.3)).expect("fpoint");
    let mg = SelfDualMorphism::new(ProjectiveMap::Degree1(g.clone()));
    let mfg = SelfDualMorphism::new(ProjectiveMap::Degree1(f.compose(&g)));
    let chained = morphism.apply(&mg.apply(&p).expect("g")).expect("f");
    let direct = mfg.apply(&p).expect("fg");
    println!(
        "composition: point {:.3e}, plane {:.3e}",
        relative_diff(&chained.x, &direct.x),
        projective_distance(&chained.pi_components(), &direct.pi_components()).unwrap()
    );
}
