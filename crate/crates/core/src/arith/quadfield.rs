use super::{rat_to_f64, PadicElem, Rat};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::cmp::Ordering;
use std::ops::{Add, Mul, Neg, Sub};

/// x + y*sqrt(d) in the real quadratic field Q(sqrt d), d > 0 non-square.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadFieldElem {
    pub d: BigInt,
    pub x: Rat,
    pub y: Rat,
}

impl QuadFieldElem {
    pub fn new(d: &BigInt, x: Rat, y: Rat) -> Self {
        QuadFieldElem { d: d.clone(), x, y }
    }

    pub fn from_rat(d: &BigInt, x: Rat) -> Self {
        Self::new(d, x, Rat::zero())
    }

    pub fn sqrt_d(d: &BigInt) -> Self {
        Self::new(d, Rat::zero(), Rat::from_integer(1.into()))
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(&self.d, self.x.clone(), -self.y.clone())
    }

    pub fn norm(&self) -> Rat {
        &self.x * &self.x - Rat::from_integer(self.d.clone()) * &self.y * &self.y
    }

    pub fn inv(&self) -> Result<Self> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::new(&self.d, &self.x / &n, -&self.y / &n))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self * &o.inv()?)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Self::new(&self.d, &self.x * c, &self.y * c)
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        if e < 0 {
            return self.inv()?.pow(-e);
        }
        let mut acc = Self::from_rat(&self.d, Rat::from_integer(1.into()));
        for _ in 0..e {
            acc = &acc * self;
        }
        Ok(acc)
    }

    /// Sign of the real number x + y*sqrt(d), computed exactly.
    pub fn signum(&self) -> i32 {
        let sx = sign(&self.x);
        let sy = sign(&self.y);
        if sx == 0 {
            return sy;
        }
        if sy == 0 || sx == sy {
            return sx;
        }
        let lhs = &self.x * &self.x;
        let rhs = Rat::from_integer(self.d.clone()) * &self.y * &self.y;
        match lhs.cmp(&rhs) {
            Ordering::Greater => sx,
            Ordering::Less => sy,
            Ordering::Equal => 0,
        }
    }

    pub fn to_f64(&self) -> f64 {
        rat_to_f64(&self.x) + rat_to_f64(&self.y) * rat_to_f64(&Rat::from_integer(self.d.clone())).sqrt()
    }

    /// Image in Qp under sqrt(d) -> the given root.
    pub fn embed(&self, sqrt_d: &PadicElem, prec: i64) -> PadicElem {
        let p = sqrt_d.p();
        let x = PadicElem::from_rational(p, &self.x, prec);
        let y = PadicElem::from_rational(p, &self.y, prec);
        &x + &(&y * sqrt_d)
    }
}

fn sign(r: &Rat) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

impl PartialOrd for QuadFieldElem {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for QuadFieldElem {
    fn cmp(&self, o: &Self) -> Ordering {
        (self - o).signum().cmp(&0)
    }
}

impl<'a> Add<&'a QuadFieldElem> for &'a QuadFieldElem {
    type Output = QuadFieldElem;
    fn add(self, o: &QuadFieldElem) -> QuadFieldElem {
        QuadFieldElem::new(&self.d, &self.x + &o.x, &self.y + &o.y)
    }
}

impl<'a> Sub<&'a QuadFieldElem> for &'a QuadFieldElem {
    type Output = QuadFieldElem;
    fn sub(self, o: &QuadFieldElem) -> QuadFieldElem {
        QuadFieldElem::new(&self.d, &self.x - &o.x, &self.y - &o.y)
    }
}

impl Neg for &QuadFieldElem {
    type Output = QuadFieldElem;
    fn neg(self) -> QuadFieldElem {
        QuadFieldElem::new(&self.d, -self.x.clone(), -self.y.clone())
    }
}

impl<'a> Mul<&'a QuadFieldElem> for &'a QuadFieldElem {
    type Output = QuadFieldElem;
    fn mul(self, o: &QuadFieldElem) -> QuadFieldElem {
        let d = Rat::from_integer(self.d.clone());
        QuadFieldElem::new(
            &self.d,
            &self.x * &o.x + d * &self.y * &o.y,
            &self.x * &o.y + &self.y * &o.x,
        )
    }
}
