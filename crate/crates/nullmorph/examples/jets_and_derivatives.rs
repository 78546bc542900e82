//! Jets as the differentiation substrate: evaluate a polynomial null curve
//! into truncated Taylor jets and compare the first two derivatives against
//! a central-difference oracle.

use nullmorph::jet::{eval_poly, eval_poly_jet};
use nullmorph::{random_null_curve, C64, DegreeBounds, SeededRng};

fn main() {
    let mut rng = SeededRng::new(42);
    let coeffs: Vec<C64> = (0..4).map(|_| rng.c_gauss()).collect();
    let s0 = C64::new(0.3, -0.2);

    let jet = eval_poly_jet(&coeffs, s0, 3);
    println!("cubic polynomial at s0 = {s0}:");
    println!("  value        {}", jet.value());
    println!("  derivative   {}", jet.derivative(1));
    println!("  2nd deriv    {}", jet.derivative(2));

    let h = 1e-5;
    let fd1 = (eval_poly(&coeffs, s0 + h) - eval_poly(&coeffs, s0 - h)) / (2.0 * h);
    let h2 = 1e-4;
    let fd2 = (eval_poly(&coeffs, s0 + h2) - eval_poly(&coeffs, s0) * 2.0
        + eval_poly(&coeffs, s0 - h2))
        / (h2 * h2);
    println!("  |jet - fd| first  : {:.3e}", (jet.derivative(1) - fd1).norm());
    println!("  |jet - fd| second : {:.3e}", (jet.derivative(2) - fd2).norm());

    // the same cross-check on a matrix-valued curve component
    let curve = random_null_curve(7, DegreeBounds::default()).expect("curve");
    let cjet = curve.chi_jet(s0, 3);
    let f = |p: C64| curve.chi_value(p).m[0][1];
    let fd = (f(s0 + h) - f(s0 - h)) / (2.0 * h);
    println!("null-curve component (0,1):");
    println!("  |jet - fd| first  : {:.3e}", (cjet.at(0, 1).derivative(1) - fd).norm());

    // tangents of the curve are null identically
    let t = curve.tangent_value(s0);
    println!("  |det tangent|     : {:.3e}  (rank-1 by construction)", t.det().norm());
}
