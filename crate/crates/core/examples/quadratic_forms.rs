//! Simple forms of a discriminant, linked forms, intersection numbers and the
//! Heegner-form polynomial s_poly.
//!
//! cargo run --example quadratic_forms -- [D]

use num_bigint::BigInt;
use rigid_cocycles::arith::canonical_sqrt_d;
use rigid_cocycles::quadforms::{
    enumerate_simple, intersection, linked_forms, linked_heegner_forms, padic_intersection, s_poly, BinaryQF, Cusp, Mat2,
};

fn main() -> rigid_cocycles::Result<()> {
    let d: i64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(13);
    let disc = BigInt::from(d);
    let forms = enumerate_simple(&disc)?;
    println!("{} simple forms of discriminant {d}:", forms.len());
    for q in &forms {
        println!("  {q}");
    }

    let (zero, inf, one) = (Cusp::from_int(0), Cusp::infinity(), Cusp::from_int(1));
    let linked = linked_forms(&disc, &zero, &inf)?;
    println!("forms linked to (0, inf) with their intersection numbers:");
    for (q, m) in &linked {
        println!("  {q}: {m:+}");
    }

    let q = BinaryQF::new(1, 1, -3);
    let r: Cusp = "-5/3".parse()?;
    let s: Cusp = "7/2".parse()?;
    println!("intersection of {q} with ({r}, {s}): {}", intersection(&q, &r, &s)?);
    let g = Mat2::from_ints(2, 1, 1, 1);
    let g_inv = Mat2::from_ints(1, -1, -1, 2);
    let (qg, gr, gs) = (q.act(&g), g_inv.act_cusp(&r), g_inv.act_cusp(&s));
    println!("after moving by g = [[2,1],[1,1]]: {qg} with ({gr}, {gs}) gives {}", intersection(&qg, &gr, &gs)?);

    let p = 3;
    let root = canonical_sqrt_d(&disc, p, 10)?;
    println!("Heegner forms linked to (0, 1), p = {p}, with the {p}-adic intersection number:");
    for (h, m) in linked_heegner_forms(&disc, p, &zero, &one)? {
        println!("  {h}: real {m:+}, {p}-adic {:+}", padic_intersection(&h, p, &root)?);
    }
    for k in [1, 3, 5] {
        let poly: Vec<String> = s_poly(k, &disc, p, &zero, &inf)?.iter().map(|c| c.to_string()).collect();
        println!("s_poly for k = {k} on (0, inf): [{}]", poly.join(", "));
    }
    Ok(())
}
