use crate::arith::{parse_rat, PadicElem, QuadExtElem, Rat};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// A 2x2 matrix [[a, b], [c, d]] with rational entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Mat2 {
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
    pub d: Rat,
}

impl Mat2 {
    pub fn new(a: Rat, b: Rat, c: Rat, d: Rat) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Self {
        let r = |x: i64| Rat::from_integer(x.into());
        Mat2::new(r(a), r(b), r(c), r(d))
    }

    pub fn from_bigints(a: &BigInt, b: &BigInt, c: &BigInt, d: &BigInt) -> Self {
        let r = |x: &BigInt| Rat::from_integer(x.clone());
        Mat2::new(r(a), r(b), r(c), r(d))
    }

    pub fn identity() -> Self {
        Self::from_ints(1, 0, 0, 1)
    }

    /// S = [[0, -1], [1, 0]], z -> -1/z.
    pub fn s() -> Self {
        Self::from_ints(0, -1, 1, 0)
    }

    /// T^j = [[1, j], [0, 1]].
    pub fn t(j: &Rat) -> Self {
        Mat2::new(Rat::one(), j.clone(), Rat::zero(), Rat::one())
    }

    pub fn t_int(j: i64) -> Self {
        Self::from_ints(1, j, 0, 1)
    }

    /// U = [[0, 1], [-1, 1]], of order three in PSL2(Z).
    pub fn u() -> Self {
        Self::from_ints(0, 1, -1, 1)
    }

    /// D = diag(p, 1/p), z -> p^2 z.
    pub fn d_mat(p: u64) -> Self {
        let pr = Rat::from_integer(p.into());
        Mat2::new(pr.clone(), Rat::zero(), Rat::zero(), pr.recip())
    }

    /// D^e for any integer e.
    pub fn d_pow(p: u64, e: i64) -> Self {
        let pr = Rat::from_integer(p.into());
        let x = if e >= 0 {
            num_traits::pow(pr, e as usize)
        } else {
            num_traits::pow(pr.recip(), (-e) as usize)
        };
        Mat2::new(x.clone(), Rat::zero(), Rat::zero(), x.recip())
    }

    pub fn det(&self) -> Rat {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn mul(&self, o: &Self) -> Self {
        Mat2::new(
            &self.a * &o.a + &self.b * &o.c,
            &self.a * &o.b + &self.b * &o.d,
            &self.c * &o.a + &self.d * &o.c,
            &self.c * &o.b + &self.d * &o.d,
        )
    }

    pub fn inv(&self) -> Self {
        let det = self.det();
        assert!(!det.is_zero(), "singular matrix");
        Mat2::new(&self.d / &det, -&self.b / &det, -&self.c / &det, &self.a / &det)
    }

    pub fn pow(&self, e: i64) -> Self {
        let base = if e < 0 { self.inv() } else { self.clone() };
        let mut acc = Mat2::identity();
        for _ in 0..e.abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    pub fn neg(&self) -> Self {
        Mat2::new(-self.a.clone(), -self.b.clone(), -self.c.clone(), -self.d.clone())
    }

    pub fn is_integral(&self) -> bool {
        [&self.a, &self.b, &self.c, &self.d].iter().all(|x| x.is_integer())
    }

    /// Entries lie in Z[1/p] and the determinant is 1.
    pub fn in_sl2_z_1p(&self, p: u64) -> bool {
        let ok = |x: &Rat| {
            let (_, rest) = crate::arith::split_p(x.denom(), p);
            rest.is_one()
        };
        self.det().is_one() && [&self.a, &self.b, &self.c, &self.d].iter().all(|x| ok(x))
    }

    pub fn act_cusp(&self, x: &Cusp) -> Cusp {
        let num = &self.a * Rat::from_integer(x.num.clone()) + &self.b * Rat::from_integer(x.den.clone());
        let den = &self.c * Rat::from_integer(x.num.clone()) + &self.d * Rat::from_integer(x.den.clone());
        Cusp::from_ratio(&num, &den)
    }

    /// Mobius action on the unramified quadratic extension.
    pub fn act_qext(&self, z: &QuadExtElem) -> Result<QuadExtElem> {
        let (num, den) = self.num_den(z);
        num.div(&den)
    }

    /// Automorphy factor cz + d.
    pub fn j_factor(&self, z: &QuadExtElem) -> QuadExtElem {
        self.num_den(z).1
    }

    fn num_den(&self, z: &QuadExtElem) -> (QuadExtElem, QuadExtElem) {
        let p = z.p();
        let prec = z.prec() + 2 * z.val().abs() + 8;
        let e = |x: &Rat| PadicElem::from_rational(p, x, prec + 2 * crate::arith::val_rat_or(x, p, 0).abs());
        let num = z.scale(&e(&self.a)).add_base(&e(&self.b));
        let den = z.scale(&e(&self.c)).add_base(&e(&self.d));
        (num, den)
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// A point of P1(Q): num/den in lowest terms with den >= 0; infinity is 1/0.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Cusp {
    pub num: BigInt,
    pub den: BigInt,
}

impl Cusp {
    pub fn infinity() -> Self {
        Cusp { num: BigInt::one(), den: BigInt::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Cusp { num: n.into(), den: BigInt::one() }
    }

    pub fn from_rat(x: &Rat) -> Self {
        Cusp { num: x.numer().clone(), den: x.denom().clone() }
    }

    pub fn new(num: BigInt, den: BigInt) -> Self {
        if den.is_zero() {
            assert!(!num.is_zero(), "0/0 is not a cusp");
            return Self::infinity();
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = (num / &g, den / &g);
        if d.is_negative() {
            n = -n;
            d = -d;
        }
        Cusp { num: n, den: d }
    }

    fn from_ratio(num: &Rat, den: &Rat) -> Self {
        if den.is_zero() {
            return Self::infinity();
        }
        Self::from_rat(&(num / den))
    }

    pub fn is_infinity(&self) -> bool {
        self.den.is_zero()
    }

    pub fn to_rat(&self) -> Option<Rat> {
        if self.is_infinity() {
            None
        } else {
            Some(Rat::new(self.num.clone(), self.den.clone()))
        }
    }

    pub fn neg(&self) -> Self {
        if self.is_infinity() {
            return self.clone();
        }
        Cusp { num: -self.num.clone(), den: self.den.clone() }
    }
}

impl From<Cusp> for String {
    fn from(c: Cusp) -> String {
        c.to_string()
    }
}

impl TryFrom<String> for Cusp {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl fmt::Display for Cusp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinity() {
            write!(f, "inf")
        } else if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for Cusp {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") || t == "oo" {
            return Ok(Self::infinity());
        }
        Ok(Self::from_rat(&parse_rat(t)?))
    }
}
