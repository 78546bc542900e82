//! Why null directions cannot be transported naively through twistor space:
//! recovering the unprimed tangent factor needs second derivatives of the
//! twistor curve, so two curves sharing a first-order jet but differing at
//! second order acquire different image tangents under a quadratic
//! endomorphism. A linear (conformal) endomorphism is the positive control:
//! its images stay tangent.

use nullmorph::endo::{random_degree1, random_degree2};
use nullmorph::{nonlocality_demo, SeededRng};

fn main() {
    let mut rng = SeededRng::new(64);
    let map2 = random_degree2(&mut rng);
    let control = random_degree1(&mut rng);

    for seed in [1u64, 2, 3, 4, 5] {
        let report = nonlocality_demo(&map2, &control, seed).expect("demo");
        println!("seed {seed}:");
        println!(
            "  quadratic image tangents separate by {:.3e}",
            report.degree2_tangent_distance
        );
        println!(
            "  conformal control stays at          {:.3e}",
            report.degree1_tangent_distance
        );
        println!(
            "  image points agree to               {:.3e}",
            report.degree2_point_distance
        );
    }
}
