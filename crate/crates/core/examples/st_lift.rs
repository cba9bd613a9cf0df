//! The Schneider-Teitelbaum lift of kappa_{3,13}: moments on tree edges, harmonicity,
//! growth bounds, evaluation against J, and Res0 as a left inverse.
//!
//! cargo run --release --example st_lift

use rigid_cocycles::arith::{rat, QuadExtElem};
use rigid_cocycles::bruhat_tits::{level_partition, TreeEdge};
use rigid_cocycles::cocycles::{eval_j, kappa, JParams};
use rigid_cocycles::quadforms::Cusp;
use rigid_cocycles::st_lift::{bound_check, harmonicity_defect, moments_rat, st_eval, vertices_to_depth, EichlerSymbol, StTruncation};

fn main() -> rigid_cocycles::Result<()> {
    let params = JParams::new(3, 3, 13)?;
    let c0 = EichlerSymbol::kappa(&params, 60)?;
    c0.validate()?;
    let (zero, inf) = (Cusp::from_int(0), Cusp::infinity());

    println!("moments of the boundary distribution of {{0, inf}} on U(e0) and a few level-2 edges:");
    let mut edges = vec![TreeEdge::e0(3)];
    edges.extend(level_partition(3, 2)?.into_iter().take(3));
    for e in &edges {
        let m: Vec<String> = moments_rat(&c0, e, &zero, &inf)?.iter().map(|x| x.to_string()).collect();
        println!("  {e}: [{}]", m.join(", "));
    }

    let worst = vertices_to_depth(3, 3)
        .iter()
        .map(|v| harmonicity_defect(&c0, v, &zero, &inf).map(|d| d.is_zero()))
        .collect::<rigid_cocycles::Result<Vec<bool>>>()?;
    println!("harmonic at all {} vertices within distance 3 of v0: {}", worst.len(), worst.iter().all(|&ok| ok));

    let bounds = bound_check(&c0, 4)?;
    println!("growth bound to depth 4 over {} edges: log_3 C = {:?} (pass: {})", bounds.edges_checked, bounds.overall, bounds.pass);

    let z = QuadExtElem::from_rationals(3, params.u(), &rat(1, 1), &rat(1, 1), 60);
    let j = eval_j(&params, &zero, &inf, &z, 21)?;
    println!("J(z) for z = 1 + sqrt(2): {}", j.value.value);
    for level in 2..=6 {
        let st = st_eval(&c0, &z, level, 21)?;
        let gap = &st.value.value - &j.value.value;
        println!("  ST level {level}: agrees with J to 3^-{}, stable against level {} to 3^-{}", gap.val().min(gap.prec()), level - 1, st.prec_observed);
    }

    let tr = StTruncation::build(&c0, 4, 0, 60)?;
    let back = tr.res0(4)?;
    let kap = kappa(&params, &zero, &inf, 4)?;
    println!("Res0 of the level-4 truncation returns kappa{{0,inf}} to 3^-4: {}", back.agrees_to(&kap.coeffs, 4));
    Ok(())
}
