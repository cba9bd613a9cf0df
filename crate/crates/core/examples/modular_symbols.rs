//! Manin continued-fraction paths and extension of a symbol from unimodular pairs.
//!
//! cargo run --example modular_symbols -- [r] [s]

use num_bigint::BigInt;
use rigid_cocycles::modsym::{extend_symbol, manin_decompose, SymbolKernel};
use rigid_cocycles::quadforms::{s_poly, Cusp, Mat2};

/// s_poly for (k, D, p) = (3, 13, 3), evaluated only on unimodular pairs.
struct HeegnerKernel {
    d: BigInt,
}

impl SymbolKernel for HeegnerKernel {
    type Value = Vec<BigInt>;

    fn on_pair(&self, x: &Cusp, y: &Cusp, _g: &Mat2) -> rigid_cocycles::Result<Vec<BigInt>> {
        s_poly(3, &self.d, 3, x, y)
    }

    fn zero(&self) -> Vec<BigInt> {
        vec![BigInt::from(0); 5]
    }

    fn add(&self, a: &Vec<BigInt>, b: &Vec<BigInt>) -> Vec<BigInt> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }
}

fn main() -> rigid_cocycles::Result<()> {
    let mut args = std::env::args().skip(1);
    let r: Cusp = args.next().unwrap_or_else(|| "-7/5".into()).parse()?;
    let s: Cusp = args.next().unwrap_or_else(|| "13/8".into()).parse()?;

    let path = manin_decompose(&r, &s)?;
    println!("{{{r}, {s}}} splits into {} unimodular pairs:", path.pairs.len());
    for ((x, y), g) in path.pairs.iter().zip(path.matrices()) {
        println!("  ({x}, {y})  g = [[{}, {}], [{}, {}]]", g.a, g.b, g.c, g.d);
    }

    let kernel = HeegnerKernel { d: BigInt::from(13) };
    let along_path = extend_symbol(&kernel, &r, &s)?;
    let direct = s_poly(3, &kernel.d, 3, &r, &s)?;
    println!("s_poly{{{r}, {s}}} summed along the path: {along_path:?}");
    println!("s_poly{{{r}, {s}}} computed directly:     {direct:?}");
    println!("agree: {}", along_path == direct);
    Ok(())
}
