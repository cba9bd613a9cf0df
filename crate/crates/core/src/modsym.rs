//! Manin continued-fraction decomposition, extension of symbols from unimodular
//! pairs, and checks of the modular-symbol relations for weighted functions.

use crate::arith::QuadExtElem;
use crate::cocycles::{slash, WeightedFunction};
use crate::error::{Error, Result};
use crate::quadforms::{Cusp, Mat2};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

/// A chain of unimodular pairs (c_i, c_{i+1}) from r to s.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnimodularPath {
    pub pairs: Vec<(Cusp, Cusp)>,
}

impl UnimodularPath {
    /// For each pair (x, y) the matrix g in SL2(Z) with g(0) = x and g(inf) = y.
    pub fn matrices(&self) -> Vec<Mat2> {
        self.pairs.iter().map(|(x, y)| unimodular_matrix(x, y).expect("pairs are unimodular")).collect()
    }
}

pub fn is_unimodular(x: &Cusp, y: &Cusp) -> bool {
    (&y.num * &x.den - &x.num * &y.den).abs().is_one()
}

/// g in SL2(Z) with g(0) = x and g(inf) = y, for a unimodular pair.
pub fn unimodular_matrix(x: &Cusp, y: &Cusp) -> Option<Mat2> {
    let det = &y.num * &x.den - &x.num * &y.den;
    if det.is_one() {
        Some(Mat2::from_bigints(&y.num, &x.num, &y.den, &x.den))
    } else if (-&det).is_one() {
        Some(Mat2::from_bigints(&(-&y.num), &x.num, &(-&y.den), &x.den))
    } else {
        None
    }
}

/// Convergents of x preceded by infinity.
fn convergents(x: &Cusp) -> Vec<Cusp> {
    let mut out = vec![Cusp::infinity()];
    if x.is_infinity() {
        return out;
    }
    let (mut n, mut d) = (x.num.clone(), x.den.clone());
    let (mut h2, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k2, mut k1) = (BigInt::one(), BigInt::zero());
    while !d.is_zero() {
        let a = n.div_floor(&d);
        let h = &a * &h1 + &h2;
        let k = &a * &k1 + &k2;
        out.push(Cusp::new(h.clone(), k.clone()));
        h2 = std::mem::replace(&mut h1, h);
        k2 = std::mem::replace(&mut k1, k);
        let r = &n - &a * &d;
        n = std::mem::replace(&mut d, r);
    }
    out
}

/// Decomposes {r, s} into unimodular pairs using the floor continued fraction.
pub fn manin_decompose(r: &Cusp, s: &Cusp) -> Result<UnimodularPath> {
    if r == s {
        return Err(Error::EqualEndpoints);
    }
    if is_unimodular(r, s) {
        return Ok(UnimodularPath { pairs: vec![(r.clone(), s.clone())] });
    }
    let mut chain: Vec<Cusp> = convergents(r).into_iter().rev().collect();
    chain.extend(convergents(s).into_iter().skip(1));
    let mut pts: Vec<Cusp> = Vec::new();
    for c in chain {
        if pts.len() >= 2 && pts[pts.len() - 2] == c {
            pts.pop();
        } else if pts.last() != Some(&c) {
            pts.push(c);
        }
    }
    let pairs = pts.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect();
    Ok(UnimodularPath { pairs })
}

/// A symbol known on unimodular pairs.
pub trait SymbolKernel {
    type Value: Clone;
    fn on_pair(&self, x: &Cusp, y: &Cusp, g: &Mat2) -> Result<Self::Value>;
    fn zero(&self) -> Self::Value;
    fn add(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
}

/// Extends a kernel to all pairs of cusps by additivity along the Manin path.
pub fn extend_symbol<K: SymbolKernel>(kernel: &K, r: &Cusp, s: &Cusp) -> Result<K::Value> {
    if r == s {
        return Ok(kernel.zero());
    }
    let path = manin_decompose(r, s)?;
    let mut acc = kernel.zero();
    for ((x, y), g) in path.pairs.iter().zip(path.matrices()) {
        acc = kernel.add(&acc, &kernel.on_pair(x, y, &g)?);
    }
    Ok(acc)
}

/// Worst valuation of each relation over the sample points.
#[derive(Clone, Debug, Serialize)]
pub struct RelationReport {
    pub s_relation: i64,
    pub u_relation: i64,
    pub d_relation: i64,
    pub prec: i64,
    pub pass: bool,
}

fn dev_val(x: &QuadExtElem) -> i64 {
    x.val().min(x.prec())
}

/// Checks phi|(1+S) = 0, phi|(1+U+U^2) = 0 and phi|D = phi at each point.
pub fn check_relations<F: WeightedFunction + ?Sized>(
    phi: &F,
    points: &[QuadExtElem],
    prec: i64,
) -> Result<RelationReport> {
    let p = phi.p();
    let w = phi.weight();
    let (s, u, u2, d) = (Mat2::s(), Mat2::u(), Mat2::u().mul(&Mat2::u()), Mat2::d_mat(p));
    let per_point = points
        .par_iter()
        .map(|z| {
            let worst = [&s, &u, &u2, &d].iter().map(|g| g.j_factor(z).val()).max().unwrap_or(0);
            let work = prec + w * worst.max(0) + 1;
            let base = phi.eval(z, work)?.value;
            let fs = slash(phi, &s, z, work)?;
            let fu = slash(phi, &u, z, work)?;
            let fu2 = slash(phi, &u2, z, work)?;
            let fd = slash(phi, &d, z, work)?;
            Ok((dev_val(&(&base + &fs)), dev_val(&(&(&base + &fu) + &fu2)), dev_val(&(&fd - &base))))
        })
        .collect::<Result<Vec<_>>>()?;
    let sv = per_point.iter().map(|t| t.0).min().unwrap_or(i64::MAX);
    let uv = per_point.iter().map(|t| t.1).min().unwrap_or(i64::MAX);
    let dv = per_point.iter().map(|t| t.2).min().unwrap_or(i64::MAX);
    Ok(RelationReport { s_relation: sv, u_relation: uv, d_relation: dv, prec, pass: sv > prec && uv > prec && dv > prec })
}
