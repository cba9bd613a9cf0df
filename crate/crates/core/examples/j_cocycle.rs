//! Evaluation of J_{k,D}{r,s}(z) with guaranteed precision, its convergence in the
//! number of layers, and the modular-symbol and SL2 relations it satisfies.
//!
//! cargo run --release --example j_cocycle

use rigid_cocycles::arith::{rat, QuadExtElem};
use rigid_cocycles::cocycles::{eval_j, JFunction, JParams};
use rigid_cocycles::modsym::check_relations;
use rigid_cocycles::quadforms::{Cusp, Mat2};
use rigid_cocycles::verify::relation_points;

fn main() -> rigid_cocycles::Result<()> {
    let params = JParams::new(3, 3, 13)?;
    let u = params.u();
    let z = QuadExtElem::from_rationals(3, u, &rat(1, 2), &rat(1, 1), 60);
    let (zero, inf, one) = (Cusp::from_int(0), Cusp::infinity(), Cusp::from_int(1));

    println!("J_{{3,13}}{{0,inf}}(z), z = 1/2 + sqrt({u}), at increasing target precision:");
    for target in [3, 6, 9, 12] {
        let ev = eval_j(&params, &zero, &inf, &z, target)?;
        println!(
            "  target {target:2}: layers {}..={}, {:5} forms, {} (known to 3^-{})",
            ev.first_layer, ev.layers, ev.forms_used, ev.value.value, ev.value.guaranteed_abs_prec
        );
    }

    let prec = 8;
    let a = eval_j(&params, &zero, &one, &z, prec)?.value.value;
    let b = eval_j(&params, &one, &inf, &z, prec)?.value.value;
    let c = eval_j(&params, &zero, &inf, &z, prec)?.value.value;
    println!("three-term identity J{{0,1}} + J{{1,inf}} = J{{0,inf}} to 3^-{prec}: {}", (&a + &b).agrees_to(&c, prec));

    let g = Mat2::from_ints(2, 1, 1, 1);
    let gz = g.act_qext(&z)?;
    let moved = eval_j(&params, &g.act_cusp(&zero), &g.act_cusp(&inf), &gz, prec)?.value.value;
    let slashed = &g.j_factor(&z).pow(-6)? * &moved;
    println!("invariance under [[2,1],[1,1]] to 3^-{prec}: {}", slashed.agrees_to(&c, prec));

    let report = check_relations(&JFunction::zero_infinity(params), &relation_points(3, u, 40), prec)?;
    println!(
        "relations phi|(1+S) = 0, phi|(1+U+U^2) = 0, phi|D = phi at 10 points: valuations {}, {}, {} (pass: {})",
        report.s_relation, report.u_relation, report.d_relation, report.pass
    );
    Ok(())
}
