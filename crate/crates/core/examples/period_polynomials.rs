//! The real side: partial fractions, geodesic integrals in closed form and by
//! quadrature, the period polynomial kappa-bar by two routes, and generating-series
//! coefficients.
//!
//! cargo run --release --example period_polynomials

use num_bigint::BigInt;
use rigid_cocycles::archimedean::{
    closed_geodesic_integral, omega_bar_coeffs, partial_fraction, period_constant, period_polynomial,
    period_polynomial_by_integrals, quadrature_geodesic_integral,
};
use rigid_cocycles::quadforms::{BinaryQF, Cusp};

fn main() -> rigid_cocycles::Result<()> {
    let q = BinaryQF::new(3, 1, -1);
    let pf = partial_fraction(&q, 2, 3)?;
    println!("z^2 / Q(z,1)^3 for Q = {q}: A = {:?}", pf.a.iter().map(|x| x.to_f64()).collect::<Vec<_>>());
    println!("                             B = {:?}", pf.b.iter().map(|x| x.to_f64()).collect::<Vec<_>>());

    let (r, s) = (Cusp::from_int(0), Cusp::from_int(1));
    for i in 0..=4 {
        let exact = closed_geodesic_integral(&q, i, 3, &r, &s)?;
        let quad = quadrature_geodesic_integral(&q, i, 3, &r, &s, 1e-13)?;
        println!("  int_0^1 z^{i} / Q^3 dz: closed {:+.12} {:+.12}i, quadrature {:+.12} {:+.12}i", exact.re, exact.im, quad.re, quad.im);
    }

    let d = BigInt::from(13);
    let c = period_constant(3, &d);
    println!("closed constant for (k, D) = (3, 13): {:.9} {:+.9}i", c.re, c.im);
    let one = period_polynomial(3, &d, 3, &r, &s)?;
    println!("kappa-bar{{0,1}} via the closed constant:");
    for (i, x) in one.coeffs.iter().enumerate() {
        println!("  T^{i}: {:+.9}i", x.im);
    }
    for height in [20, 40, 60] {
        let two = period_polynomial_by_integrals(3, &d, 3, &r, &s, height)?;
        let ratio: Vec<String> = one
            .coeffs
            .iter()
            .zip(&two.coeffs)
            .filter(|(a, _)| a.abs() > 1e-9)
            .map(|(a, b)| format!("{:.9}", (b.z() / a.z()).re))
            .collect();
        println!("via {} Heegner forms of height <= {height}: coefficient ratios [{}]", two.forms_used, ratio.join(", "));
    }

    println!("generating-series coefficients for k = 3, p = 3, D <= 40:");
    for row in omega_bar_coeffs(3, 3, 40)?.iter().filter(|r| !r.is_zero()) {
        println!("  D = {}: {} * {:?}", row.d, row.scale_num, row.spoly);
    }
    Ok(())
}
