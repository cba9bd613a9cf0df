//! The orbit series phi_tau of an RM point: orbit enumeration by breadth-first search,
//! evaluation, the relations, and the involution varpi_p.
//!
//! cargo run --release --example phi_tau

use num_bigint::BigInt;
use rigid_cocycles::arith::{rat, QuadExtElem};
use rigid_cocycles::cocycles::{orbit_slice, varpi, PhiTauFunction, WeightedFunction};
use rigid_cocycles::modsym::check_relations;
use rigid_cocycles::quadforms::BinaryQF;
use rigid_cocycles::verify::relation_points;

fn main() -> rigid_cocycles::Result<()> {
    let (p, k) = (3, 3);
    let q0 = BinaryQF::new(1, 1, -3);
    let bound = BigInt::from(13) * BigInt::from(3).pow(8);
    let slice = orbit_slice(&q0, p, &bound, None)?;
    println!("orbit of {q0}: simple forms per layer up to disc 13 * 3^8:");
    for (n, forms) in &slice.layers {
        println!("  layer {n}: {} forms, e.g. {}", forms.len(), forms[0]);
    }

    let phi = PhiTauFunction::new(p, k, q0.clone())?;
    let phi_neg = PhiTauFunction::new(p, k, q0.neg())?;
    let z = QuadExtElem::from_rationals(p, 2, &rat(1, 1), &rat(1, 1), 40);
    let ev = phi.evaluate(&z, 8)?;
    println!("phi_tau(1 + sqrt(2)) = {} using {} forms in {} layers", ev.value.value, ev.forms_used, ev.layers);
    let other = phi_neg.evaluate(&z, 8)?;
    println!("running from -Q0 gives the same value: {}", other.value.value.agrees_to(&ev.value.value, 8));

    let prec = 6;
    let pts = relation_points(p, 2, 40);
    let rel = check_relations(&phi, &pts, prec)?;
    println!("relations at 10 points to 3^-{prec}: S {}, U {}, D {} (pass: {})", rel.s_relation, rel.u_relation, rel.d_relation, rel.pass);

    let w = varpi(&phi);
    let v = w.eval(&z, prec)?;
    println!("varpi_p(phi_tau)(1 + sqrt(2)) = {}", v.value);
    Ok(())
}
