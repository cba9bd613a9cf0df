//! Discs, edges and level partitions of the Bruhat-Tits tree, and the reduction of
//! points of the p-adic upper half plane.
//!
//! cargo run --example bruhat_tits_tree

use rigid_cocycles::arith::{rat, QuadExtElem};
use rigid_cocycles::bruhat_tits::{depth, edge_to_matrix, level_partition, tree_distance, v0, Ball, TreeEdge};
use rigid_cocycles::quadforms::Mat2;

fn main() -> rigid_cocycles::Result<()> {
    let p = 3;
    let e0 = TreeEdge::e0(p);
    println!("e0: {e0}, reversed: {}", e0.reverse());
    println!("source {} -> target {}", e0.source(), e0.target());

    let b = Ball::finite(p, &rat(5, 1), 2);
    println!("distance v0 to {b}: {}", tree_distance(&v0(p), &b));

    for n in 1..=3 {
        let part = level_partition(p, n)?;
        let even = part.iter().filter(|e| e.is_even()).count();
        println!("level {n}: {} edges ({even} even)", part.len());
    }

    println!("edges at level 2 with alpha(e) and a matrix carrying U(e) onto Z_p:");
    for e in level_partition(p, 2)? {
        let e = if e.is_even() { e } else { e.reverse() };
        let g = edge_to_matrix(&e)?;
        println!("  {e}: alpha {:?}, g = [[{}, {}], [{}, {}]], gU(e) = {}", e.alpha(), g.a, g.b, g.c, g.d, e.u.image(&g));
    }

    let s = Mat2::s();
    println!("S sends {b} to {}", b.image(&s));
    println!("JSON: {}", serde_json::to_string(&TreeEdge::new(b)).expect("edge serializes"));

    for (x, y) in [(rat(0, 1), rat(1, 1)), (rat(1, 1), rat(1, 3)), (rat(1, 9), rat(1, 1)), (rat(0, 1), rat(9, 1))] {
        let z = QuadExtElem::from_rationals(p, 2, &x, &y, 20);
        println!("z = {x} + {y} sqrt(2) reduces to a vertex at distance {} from v0", depth(&z)?);
    }
    Ok(())
}
