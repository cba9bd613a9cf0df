//! Annular residues at the standard edge: Res0(J_{k,D}) against kappa_{k,D}, the
//! vanishing of the higher layers and the binomial identity behind it.
//!
//! cargo run --release --example residue_map

use rigid_cocycles::cocycles::{annular_residue, exhaustive_binomial_check, kappa, res0_j, JParams};
use rigid_cocycles::quadforms::{BinaryQF, Cusp};

fn main() -> rigid_cocycles::Result<()> {
    let prec = 10;
    for (p, k, d) in [(3u64, 3i64, 13i64), (5, 3, 29), (3, 5, 13)] {
        let params = JParams::new(p, k, d)?;
        let (r, s) = (Cusp::from_int(0), Cusp::infinity());
        let res = res0_j(&params, &r, &s, 2, prec)?;
        let kap = kappa(&params, &r, &s, prec)?;
        let fmt = |v: &[rigid_cocycles::arith::PadicElem]| v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ");
        println!("(p, k, D) = ({p}, {k}, {d})");
        println!("  Res0(J{{0,inf}}) = [{}]", fmt(&res.coeffs));
        println!("  kappa{{0,inf}}   = [{}]", fmt(&kap.coeffs.coeffs));
        println!("  agree to {p}^-{prec}: {}", res.agrees_to(&kap.coeffs, prec));
    }

    for q in [BinaryQF::new(3, 1, -1), BinaryQF::new(9, 9, -1)] {
        let res: Vec<String> = (0..=4).map(|i| annular_residue(&q, i, 3, 3, prec).map(|r| r.with_prec(prec).to_string())).collect::<Result<_, _>>()?;
        println!("Res_e0(z^i / Q^3 dz), i = 0..4, for {q} (disc {}): [{}]", q.disc(), res.join(", "));
    }

    let b = exhaustive_binomial_check(10);
    println!("binomial identity for k <= 10: {} cases, {} failures", b.checked, b.failures.len());
    Ok(())
}
