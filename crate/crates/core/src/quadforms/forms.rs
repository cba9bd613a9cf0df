use super::matrix::{Cusp, Mat2};
use crate::arith::{is_square, legendre, PadicElem, QuadExtElem, QuadFieldElem, Rat};
use crate::error::{Error, Result};
use crate::modsym::manin_decompose;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

/// Q(x, y) = a x^2 + b x y + c y^2.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BinaryQF {
    #[serde(with = "crate::arith::int_serde::int")]
    pub a: BigInt,
    #[serde(with = "crate::arith::int_serde::int")]
    pub b: BigInt,
    #[serde(with = "crate::arith::int_serde::int")]
    pub c: BigInt,
}

impl BinaryQF {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>) -> Self {
        BinaryQF { a: a.into(), b: b.into(), c: c.into() }
    }

    pub fn disc(&self) -> BigInt {
        &self.b * &self.b - BigInt::from(4) * &self.a * &self.c
    }

    pub fn content(&self) -> BigInt {
        self.a.gcd(&self.b).gcd(&self.c)
    }

    pub fn is_simple(&self) -> bool {
        (&self.a * &self.c).is_negative()
    }

    /// Q(x, 1).
    pub fn eval_rat(&self, x: &Rat) -> Rat {
        Rat::from_integer(self.a.clone()) * x * x + Rat::from_integer(self.b.clone()) * x + Rat::from_integer(self.c.clone())
    }

    /// Q(z, 1) in the unramified quadratic extension.
    pub fn eval_qext(&self, z: &QuadExtElem, z2: &QuadExtElem) -> QuadExtElem {
        let p = z.p();
        let prec = z.prec().max(z2.prec()) + 2 * z.val().abs() + 8;
        let c = PadicElem::from_int(p, &self.c, prec);
        let az2 = z2.mul_int(&self.a);
        let bz = z.mul_int(&self.b);
        (&az2 + &bz).add_base(&c)
    }

    /// Q(x, 1)^e as an integer polynomial, coefficients indexed by degree.
    pub fn power_poly(&self, e: usize) -> Vec<BigInt> {
        let base = [self.c.clone(), self.b.clone(), self.a.clone()];
        let mut acc = vec![BigInt::one()];
        for _ in 0..e {
            let mut next = vec![BigInt::zero(); acc.len() + 2];
            for (i, x) in acc.iter().enumerate() {
                for (j, y) in base.iter().enumerate() {
                    next[i + j] += x * y;
                }
            }
            acc = next;
        }
        acc
    }

    /// The roots (first, second) = ((-b + sqrt disc)/2a, (-b - sqrt disc)/2a).
    pub fn roots(&self) -> Result<(QuadFieldElem, QuadFieldElem)> {
        let d = self.disc();
        if !d.is_positive() || self.a.is_zero() {
            return Err(Error::BadDiscriminant(d.to_string()));
        }
        if is_square(&d) {
            return Err(Error::SquareDiscriminant(d.to_string()));
        }
        let two_a = Rat::from_integer(BigInt::from(2) * &self.a);
        let mb = Rat::from_integer(-self.b.clone()) / &two_a;
        let y = Rat::one() / &two_a;
        Ok((QuadFieldElem::new(&d, mb.clone(), y.clone()), QuadFieldElem::new(&d, mb, -y)))
    }

    /// Right action (Q|g)(x, y) = Q(ax + by, cx + dy); g must be integral.
    pub fn act(&self, g: &Mat2) -> BinaryQF {
        let (a, b, c) = self.act_rational(g);
        assert!(a.is_integer() && b.is_integer() && c.is_integer(), "non-integral action");
        BinaryQF { a: a.to_integer(), b: b.to_integer(), c: c.to_integer() }
    }

    /// Coefficients of Q|g for any rational g.
    pub fn act_rational(&self, g: &Mat2) -> (Rat, Rat, Rat) {
        let (qa, qb, qc) =
            (Rat::from_integer(self.a.clone()), Rat::from_integer(self.b.clone()), Rat::from_integer(self.c.clone()));
        let (a, b, c, d) = (&g.a, &g.b, &g.c, &g.d);
        let two = Rat::from_integer(2.into());
        let na = &qa * a * a + &qb * a * c + &qc * c * c;
        let nb = &two * &qa * a * b + &qb * (a * d + b * c) + &two * &qc * c * d;
        let nc = &qa * b * b + &qb * b * d + &qc * d * d;
        (na, nb, nc)
    }

    /// Rescales a rational triple by a power of p to a p-primitive integral form;
    /// returns (form, e) with triple = p^e * form / u for an integer u prime to p.
    pub fn normalize_p(triple: &(Rat, Rat, Rat), p: u64) -> (BinaryQF, i64) {
        let l = triple.0.denom().lcm(triple.1.denom()).lcm(triple.2.denom());
        let lr = Rat::from_integer(l.clone());
        let ints = [(&triple.0 * &lr).to_integer(), (&triple.1 * &lr).to_integer(), (&triple.2 * &lr).to_integer()];
        let g = ints[0].gcd(&ints[1]).gcd(&ints[2]);
        let (vg, _) = crate::arith::split_p(&g, p);
        let (vl, _) = crate::arith::split_p(&l, p);
        let pe = crate::arith::pow_p(p, vg);
        let q = BinaryQF { a: &ints[0] / &pe, b: &ints[1] / &pe, c: &ints[2] / &pe };
        (q, vg - vl)
    }

    pub fn neg(&self) -> Self {
        BinaryQF { a: -self.a.clone(), b: -self.b.clone(), c: -self.c.clone() }
    }

    /// [-a, b, -c], the image under x -> -x followed by negation.
    pub fn tilde(&self) -> Self {
        BinaryQF { a: -self.a.clone(), b: self.b.clone(), c: -self.c.clone() }
    }

    pub fn height(&self) -> BigInt {
        self.a.abs().max(self.c.abs())
    }
}

impl fmt::Display for BinaryQF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}]", self.a, self.b, self.c)
    }
}

/// Checks that d is positive, non-square and congruent to 0 or 1 mod 4.
pub fn validate_disc(d: &BigInt) -> Result<()> {
    let m = d.mod_floor(&BigInt::from(4));
    if !d.is_positive() || !(m.is_zero() || m.is_one()) {
        return Err(Error::BadDiscriminant(d.to_string()));
    }
    if is_square(d) {
        return Err(Error::SquareDiscriminant(d.to_string()));
    }
    Ok(())
}

/// All integral forms of discriminant d with ac < 0, sorted lexicographically.
pub fn enumerate_simple(d: &BigInt) -> Result<Vec<BinaryQF>> {
    validate_disc(d)?;
    let dd = d.to_i128().ok_or_else(|| Error::BadDiscriminant(d.to_string()))?;
    let mut out = Vec::new();
    let mut b: i128 = if dd % 2 == 0 { 0 } else { 1 };
    while b * b < dd {
        let n = (dd - b * b) / 4;
        let mut divs = Vec::new();
        let mut x: i128 = 1;
        while x * x <= n {
            if n % x == 0 {
                divs.push(x);
                if x * x != n {
                    divs.push(n / x);
                }
            }
            x += 1;
        }
        let bs: Vec<i128> = if b == 0 { vec![0] } else { vec![b, -b] };
        for &bb in &bs {
            for &a in &divs {
                let c = n / a;
                out.push(BinaryQF::new(BigInt::from(a), BigInt::from(bb), BigInt::from(-c)));
                out.push(BinaryQF::new(BigInt::from(-a), BigInt::from(bb), BigInt::from(c)));
            }
        }
        b += 2;
    }
    out.sort();
    Ok(out)
}

/// A point of P1(R) that is either a cusp or a real quadratic irrationality.
#[derive(Clone, Debug)]
pub enum P1Point {
    Infinity,
    Finite(QuadFieldElem),
}

impl P1Point {
    fn from_cusp(c: &Cusp, d: &BigInt) -> Self {
        match c.to_rat() {
            None => P1Point::Infinity,
            Some(x) => P1Point::Finite(QuadFieldElem::from_rat(d, x)),
        }
    }

    fn cmp_lin(&self, o: &Self) -> Ordering {
        match (self, o) {
            (P1Point::Infinity, P1Point::Infinity) => Ordering::Equal,
            (P1Point::Infinity, _) => Ordering::Greater,
            (_, P1Point::Infinity) => Ordering::Less,
            (P1Point::Finite(x), P1Point::Finite(y)) => x.cmp(y),
        }
    }
}

/// True when x, y, z are met in this order going around P1(R) in the positive direction.
fn cyclic(x: &P1Point, y: &P1Point, z: &P1Point) -> bool {
    let lt = |a: &P1Point, b: &P1Point| a.cmp_lin(b) == Ordering::Less;
    (lt(x, y) && lt(y, z)) || (lt(y, z) && lt(z, x)) || (lt(z, x) && lt(x, y))
}

/// Signed intersection of the geodesic from r to s with the oriented geodesic of Q.
pub fn intersection(q: &BinaryQF, r: &Cusp, s: &Cusp) -> Result<i32> {
    let (r1, r2) = q.roots()?;
    if r == s {
        return Ok(0);
    }
    let d = q.disc();
    let (pr, ps) = (P1Point::from_cusp(r, &d), P1Point::from_cusp(s, &d));
    let (p1, p2) = (P1Point::Finite(r1), P1Point::Finite(r2));
    if cyclic(&pr, &p1, &ps) && cyclic(&ps, &p2, &pr) {
        Ok(1)
    } else if cyclic(&pr, &p2, &ps) && cyclic(&ps, &p1, &pr) {
        Ok(-1)
    } else {
        Ok(0)
    }
}

/// (gamma_Q . e0): +1 if the first root lies in Zp and the second does not,
/// -1 in the opposite case. `sqrt_disc` is the chosen square root of disc(Q) in Zp.
pub fn padic_intersection(q: &BinaryQF, p: u64, sqrt_disc: &PadicElem) -> Result<i32> {
    let d = q.disc();
    if legendre(&d, p) == 0 {
        return Err(Error::DiscDivisibleByP(d.to_string()));
    }
    if legendre(&d, p) != 1 {
        return Err(Error::NotSplit(d.to_string()));
    }
    if !(&q.a % BigInt::from(p)).is_zero() {
        return Err(Error::NotHeegner(q.to_string()));
    }
    let va = crate::arith::val_int(&q.a, p);
    let mb = PadicElem::from_int(p, &(-q.b.clone()), sqrt_disc.prec());
    let n1 = &mb + sqrt_disc;
    let n2 = &mb - sqrt_disc;
    if n1.is_zero() && n2.is_zero() {
        return Err(Error::PrecisionLoss { got: sqrt_disc.prec(), wanted: va + 1 });
    }
    // the numerators multiply to 4ac and differ by a unit, so at most one is a unit
    if n1.is_unit() {
        Ok(-1)
    } else if n2.is_unit() {
        Ok(1)
    } else {
        Err(Error::PrecisionLoss { got: sqrt_disc.prec(), wanted: va + 1 })
    }
}

/// Forms of discriminant d linked to (r, s), with multiplicity, obtained by pulling
/// back the simple forms along a Manin decomposition of (r, s).
pub fn linked_forms(d: &BigInt, r: &Cusp, s: &Cusp) -> Result<Vec<(BinaryQF, i32)>> {
    let simple = crate::cache::simple_forms(d)?;
    if r == s {
        return Ok(Vec::new());
    }
    let path = manin_decompose(r, s)?;
    let mut acc: BTreeMap<BinaryQF, i32> = BTreeMap::new();
    for g in path.matrices() {
        let gi = g.inv();
        let identity = g == Mat2::identity();
        for q in simple.iter() {
            let sign = if q.a.is_positive() { 1 } else { -1 };
            let form = if identity { q.clone() } else { q.act(&gi) };
            *acc.entry(form).or_insert(0) += sign;
        }
    }
    Ok(acc.into_iter().filter(|(_, c)| *c != 0).collect())
}
