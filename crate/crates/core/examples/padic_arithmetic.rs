//! Fixed-precision p-adic numbers, Hensel square roots and the unramified quadratic extension.
//!
//! cargo run --example padic_arithmetic

use num_bigint::BigInt;
use rigid_cocycles::arith::{canonical_sqrt_d, hensel_sqrt, rat, smallest_nonresidue, PadicElem, QuadExtElem};

fn main() -> rigid_cocycles::Result<()> {
    let p = 7;
    let x = PadicElem::from_rational(p, &rat(-2, 21), 8);
    let y = PadicElem::from_i64(p, 49, 8);
    println!("x = -2/21 = {x}  (val {}, prec {})", x.val(), x.prec());
    println!("y = 49    = {y}");
    println!("x + y     = {}", &x + &y);
    println!("x * y     = {}", &x * &y);
    println!("x / y     = {}", x.div(&y)?);
    println!("1/x       = {}", x.inv()?);

    let text = x.to_string();
    let back: PadicElem = text.parse()?;
    println!("round trip of \"{text}\": {}", back == x);

    let two = PadicElem::from_i64(p, 2, 12);
    let r = hensel_sqrt(&two, 3)?;
    println!("sqrt(2) in Z_7 with r = 3 mod 7: {r}; r^2 = {}", &r * &r);

    let d = BigInt::from(29);
    let s = canonical_sqrt_d(&d, 5, 10)?;
    println!("canonical sqrt(29) in Z_5: {s} (residue {} mod 5)", s.unit() % 5);

    let u = smallest_nonresidue(3);
    let z = QuadExtElem::from_rationals(3, u, &rat(1, 2), &rat(1, 3), 10);
    let w = QuadExtElem::from_rationals(3, u, &rat(2, 1), &rat(-1, 1), 10);
    println!("in Q_3(sqrt({u})): z = {z}");
    println!("  z * w   = {}", &z * &w);
    println!("  N(z)    = {}", z.norm());
    println!("  z^-3    = {}", z.pow(-3)?);
    Ok(())
}
