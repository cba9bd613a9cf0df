use super::padic::owned_ops;
use super::{PadicElem, Rat};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// a + b*sqrt(u) in the unramified quadratic extension of Qp, u a fixed non-residue.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadExtElem {
    pub a: PadicElem,
    pub b: PadicElem,
    pub u: u64,
}

impl QuadExtElem {
    pub fn new(a: PadicElem, b: PadicElem, u: u64) -> Self {
        assert_eq!(a.p(), b.p(), "mixed primes");
        QuadExtElem { a, b, u }
    }

    pub fn from_rationals(p: u64, u: u64, x: &Rat, y: &Rat, prec: i64) -> Self {
        Self::new(PadicElem::from_rational(p, x, prec), PadicElem::from_rational(p, y, prec), u)
    }

    pub fn from_base(a: PadicElem, u: u64) -> Self {
        let b = PadicElem::zero(a.p(), a.prec());
        Self::new(a, b, u)
    }

    pub fn zero(p: u64, u: u64, prec: i64) -> Self {
        Self::new(PadicElem::zero(p, prec), PadicElem::zero(p, prec), u)
    }

    pub fn one(p: u64, u: u64, prec: i64) -> Self {
        Self::new(PadicElem::one(p, prec), PadicElem::zero(p, prec), u)
    }

    pub fn p(&self) -> u64 {
        self.a.p()
    }

    pub fn prec(&self) -> i64 {
        self.a.prec().min(self.b.prec())
    }

    pub fn val(&self) -> i64 {
        self.a.val().min(self.b.val())
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn with_prec(&self, prec: i64) -> Self {
        Self::new(self.a.with_prec(prec), self.b.with_prec(prec), self.u)
    }

    pub fn conj(&self) -> Self {
        Self::new(self.a.clone(), -&self.b, self.u)
    }

    fn u_elem(&self, prec: i64) -> PadicElem {
        PadicElem::from_int(self.p(), &BigInt::from(self.u), prec.max(1))
    }

    pub fn norm(&self) -> PadicElem {
        let u = self.u_elem(self.prec() + 2 * self.val().abs() + 4);
        &(&self.a * &self.a) - &(&u * &(&self.b * &self.b))
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let ni = n.inv()?;
        Ok(Self::new(&self.a * &ni, -&(&self.b * &ni), self.u))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self * &o.inv()?)
    }

    pub fn scale(&self, c: &PadicElem) -> Self {
        Self::new(&self.a * c, &self.b * c, self.u)
    }

    pub fn mul_int(&self, n: &BigInt) -> Self {
        let c = PadicElem::from_int(self.p(), n, self.prec() - self.val().min(0) + 64);
        self.scale(&c)
    }

    /// Multiplies by p^e exactly.
    pub fn shift(&self, e: i64) -> Self {
        Self::new(self.a.shift(e), self.b.shift(e), self.u)
    }

    pub fn add_base(&self, c: &PadicElem) -> Self {
        Self::new(&self.a + c, self.b.clone(), self.u)
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        if e < 0 {
            return self.inv()?.pow(-e);
        }
        if e == 0 {
            return Ok(Self::one(self.p(), self.u, self.prec().max(1)));
        }
        let mut acc: Option<Self> = None;
        let mut base = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => &a * &base,
                });
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Ok(acc.unwrap())
    }

    /// True when the difference is divisible by p^m and known to that precision.
    pub fn agrees_to(&self, o: &Self, m: i64) -> bool {
        self.a.agrees_to(&o.a, m) && self.b.agrees_to(&o.b, m)
    }
}

impl<'a> Add<&'a QuadExtElem> for &'a QuadExtElem {
    type Output = QuadExtElem;
    fn add(self, o: &QuadExtElem) -> QuadExtElem {
        QuadExtElem::new(&self.a + &o.a, &self.b + &o.b, self.u)
    }
}

impl<'a> Sub<&'a QuadExtElem> for &'a QuadExtElem {
    type Output = QuadExtElem;
    fn sub(self, o: &QuadExtElem) -> QuadExtElem {
        QuadExtElem::new(&self.a - &o.a, &self.b - &o.b, self.u)
    }
}

impl Neg for &QuadExtElem {
    type Output = QuadExtElem;
    fn neg(self) -> QuadExtElem {
        QuadExtElem::new(-&self.a, -&self.b, self.u)
    }
}

impl<'a> Mul<&'a QuadExtElem> for &'a QuadExtElem {
    type Output = QuadExtElem;
    fn mul(self, o: &QuadExtElem) -> QuadExtElem {
        assert_eq!(self.u, o.u, "mixed extensions");
        let u = self.u_elem(self.prec().max(o.prec()) + 2 * (self.val().abs() + o.val().abs()) + 4);
        let a = &(&self.a * &o.a) + &(&u * &(&self.b * &o.b));
        let b = &(&self.a * &o.b) + &(&self.b * &o.a);
        QuadExtElem::new(a, b, self.u)
    }
}

owned_ops!(QuadExtElem);

impl fmt::Display for QuadExtElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + ({})*sqrt({})", self.a, self.b, self.u)
    }
}
