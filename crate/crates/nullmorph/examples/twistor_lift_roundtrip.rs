//! Lift a random null curve into twistor space and invert the lift: the
//! spacetime point and tangent come back, and the rational inversion is
//! projectively scale invariant. Curves with constant primed factor (null
//! lines) sit on the singular locus and are refused.

use nullmorph::spinor::relative_diff;
use nullmorph::{
    invert_twistor_lift, random_null_curve, twistor_lift, C64, DegreeBounds, NullCurve,
    SpacetimePoint, SpinorPoly,
};

fn main() {
    let curve = random_null_curve(2024, DegreeBounds::default()).expect("curve");
    let s0 = C64::new(0.25, 0.4);

    let chi = curve.chi_jet(s0, 3);
    let z = twistor_lift(&chi).expect("lift");
    println!("twistor curve value at s0: {:?}", z.value_components());

    let (x, xjet) = invert_twistor_lift(&z).expect("inverse");
    println!(
        "point recovery   |x - chi(s0)| rel  : {:.3e}",
        relative_diff(&x, &curve.chi_value(s0))
    );
    println!(
        "tangent recovery |x' - chi'(s0)| rel: {:.3e}",
        relative_diff(&xjet.deriv1(), &curve.tangent_value(s0))
    );

    let (x_scaled, _) = invert_twistor_lift(&z.scale(C64::new(-3.0, 2.0))).expect("inverse");
    println!("scale invariance of the inverse    : {:.3e}", relative_diff(&x, &x_scaled));

    // a null line has constant primed factor: the pairing pi . pi_dot
    // vanishes and the inverse correctly refuses
    let e = [C64::new(1.0, 0.0), C64::new(0.0, 0.0)];
    let line = NullCurve::new(
        SpacetimePoint::zero(),
        SpinorPoly::constant(e),
        SpinorPoly::constant(e),
    )
    .expect("line");
    let zl = twistor_lift(&line.chi_jet(C64::new(0.1, 0.0), 3)).expect("lift");
    match invert_twistor_lift(&zl) {
        Err(e) => println!("null line inversion: {e}"),
        Ok(_) => println!("null line inversion unexpectedly succeeded"),
    }
}
