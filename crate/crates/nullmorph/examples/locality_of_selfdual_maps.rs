//! Locality of self-dual morphisms: a family of null curves sharing a point
//! and the alpha-plane direction through it — but nothing beyond first
//! order — maps to curves agreeing at the image point with the same image
//! plane, regardless of the higher jets.

use nullmorph::endo::random_degree2;
use nullmorph::selfdual::f_point_of;
use nullmorph::{verify_locality, ProjectiveMap, SeededRng, SelfDualMorphism};

fn main() {
    let mut rng = SeededRng::new(23);
    let map = random_degree2(&mut rng);
    let morphism = SelfDualMorphism::new(ProjectiveMap::Degree2(map));
    let p = f_point_of(rng.matrix(), rng.spinor_min_norm(0.3)).expect("fpoint");

    let report = verify_locality(&morphism, &p, 8, 99).expect("family");
    println!("8 alpha-tangent curves, independent higher coefficients:");
    println!("  image point spread : {:.3e}", report.point_spread);
    println!("  image plane spread : {:.3e}", report.pi_spread);
    println!("  (spread includes the point-pipeline image as reference)");
    for (k, (x, _)) in report.images.iter().enumerate() {
        println!("  curve {k}: image x[0][0] = {}", x.m[0][0]);
    }
}
