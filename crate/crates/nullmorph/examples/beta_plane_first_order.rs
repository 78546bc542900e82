//! Beta-planes are flat in their own slot but curve in the opposite patch:
//! the first-order model of the patch image is accurate to O(t^2), verified
//! by halving the displacement and watching the residual drop fourfold.

use nullmorph::{beta_first_order_residual, SeededRng};

fn main() {
    let mut rng = SeededRng::new(12);
    let b0 = rng.matrix();
    let b1 = rng.invertible_matrix(0.3);
    let lam = rng.spinor_min_norm(0.3);
    let delta = rng.spinor_min_norm(0.3);

    println!("{:>10}  {:>12}  {:>8}", "t", "residual", "ratio");
    let mut prev: Option<f64> = None;
    let mut t = 4e-3;
    for _ in 0..6 {
        let r = beta_first_order_residual(&b0, &b1, lam, delta, t).expect("residual");
        match prev {
            Some(p) => println!("{t:>10.1e}  {r:>12.3e}  {:>8.3}", p / r),
            None => println!("{t:>10.1e}  {r:>12.3e}  {:>8}", "-"),
        }
        prev = Some(r);
        t /= 2.0;
    }
    println!("(ratios near 4 confirm the residual scales as t^2)");
}
