use super::{check_prime, legendre, pow_p, split_p, Rat};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

/// An element of Qp known modulo p^prec.
///
/// Stored as p^val * unit with 0 < unit < p^(prec - val) and p not dividing unit.
/// An element that is zero to the available precision has unit 0 and val = prec.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PadicElem {
    p: u64,
    val: i64,
    unit: BigInt,
    prec: i64,
}

impl PadicElem {
    pub fn zero(p: u64, prec: i64) -> Self {
        PadicElem { p, val: prec, unit: BigInt::zero(), prec }
    }

    pub fn one(p: u64, prec: i64) -> Self {
        Self::from_int(p, &BigInt::one(), prec)
    }

    /// Builds p^val * raw modulo p^prec; raw may contain factors of p.
    pub fn from_parts(p: u64, val: i64, raw: BigInt, prec: i64) -> Self {
        if val >= prec || raw.is_zero() {
            return Self::zero(p, prec);
        }
        let m = pow_p(p, prec - val);
        let r = raw.mod_floor(&m);
        if r.is_zero() {
            return Self::zero(p, prec);
        }
        let (v, u) = split_p(&r, p);
        let val = val + v;
        if val >= prec {
            return Self::zero(p, prec);
        }
        let unit = u.mod_floor(&pow_p(p, prec - val));
        PadicElem { p, val, unit, prec }
    }

    pub fn from_int(p: u64, n: &BigInt, prec: i64) -> Self {
        Self::from_parts(p, 0, n.clone(), prec)
    }

    pub fn from_i64(p: u64, n: i64, prec: i64) -> Self {
        Self::from_int(p, &BigInt::from(n), prec)
    }

    pub fn from_rational(p: u64, x: &Rat, prec: i64) -> Self {
        if x.is_zero() {
            return Self::zero(p, prec);
        }
        let (vn, un) = split_p(x.numer(), p);
        let (vd, ud) = split_p(x.denom(), p);
        let val = vn - vd;
        if val >= prec {
            return Self::zero(p, prec);
        }
        let m = pow_p(p, prec - val);
        let inv = ud.modinv(&m).expect("cofactor is a unit");
        Self::from_parts(p, val, un * inv, prec)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    /// Valuation; for an element that is zero to precision this is the precision.
    pub fn val(&self) -> i64 {
        self.val
    }

    pub fn unit(&self) -> &BigInt {
        &self.unit
    }

    pub fn is_zero(&self) -> bool {
        self.unit.is_zero()
    }

    pub fn rel_prec(&self) -> i64 {
        self.prec - self.val
    }

    /// Lowers the absolute precision.
    pub fn with_prec(&self, prec: i64) -> Self {
        if prec >= self.prec {
            return self.clone();
        }
        if self.is_zero() {
            return Self::zero(self.p, prec);
        }
        Self::from_parts(self.p, self.val, self.unit.clone(), prec)
    }

    /// Multiplies by p^e exactly.
    pub fn shift(&self, e: i64) -> Self {
        PadicElem { p: self.p, val: self.val + e, unit: self.unit.clone(), prec: self.prec + e }
    }

    pub fn is_unit(&self) -> bool {
        !self.is_zero() && self.val == 0
    }

    /// Integer representative of an element of Zp modulo p^prec.
    pub fn to_bigint(&self) -> Option<BigInt> {
        if self.is_zero() {
            return Some(BigInt::zero());
        }
        if self.val < 0 {
            return None;
        }
        Some(&self.unit * pow_p(self.p, self.val))
    }

    /// Rational representative p^val * unit.
    pub fn to_rational(&self) -> Rat {
        if self.is_zero() {
            return Rat::zero();
        }
        if self.val >= 0 {
            Rat::from_integer(&self.unit * pow_p(self.p, self.val))
        } else {
            Rat::new(self.unit.clone(), pow_p(self.p, -self.val))
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let r = self.rel_prec();
        let m = pow_p(self.p, r);
        let u = self.unit.modinv(&m).expect("unit is invertible");
        Ok(PadicElem { p: self.p, val: -self.val, unit: u, prec: r - self.val })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        if e < 0 {
            return self.inv()?.pow(-e);
        }
        if e == 0 {
            return Ok(Self::one(self.p, self.prec.max(1)));
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
        let acc = acc.unwrap();
        Ok(acc)
    }

    /// True when self and other agree modulo p^m.
    pub fn agrees_to(&self, other: &Self, m: i64) -> bool {
        let d = self - other;
        d.prec() >= m && d.val() >= m
    }

    /// Unit digits base p, least significant first.
    pub fn digits(&self) -> Vec<u64> {
        let mut out = Vec::new();
        let pb = BigInt::from(self.p);
        let mut u = self.unit.clone();
        while !u.is_zero() {
            let (q, r) = u.div_rem(&pb);
            out.push(r.to_u64().unwrap());
            u = q;
        }
        out
    }

    pub fn from_digits(p: u64, val: i64, digits: &[u64], prec: i64) -> Result<Self> {
        let mut u = BigInt::zero();
        for &d in digits.iter().rev() {
            if d >= p {
                return Err(Error::Parse(format!("digit {d} out of range for p={p}")));
            }
            u = u * BigInt::from(p) + BigInt::from(d);
        }
        if u.is_zero() {
            return Ok(Self::zero(p, prec));
        }
        let e = Self::from_parts(p, val, u, prec);
        Ok(e)
    }
}

impl<'a> Add<&'a PadicElem> for &'a PadicElem {
    type Output = PadicElem;
    fn add(self, o: &PadicElem) -> PadicElem {
        assert_eq!(self.p, o.p, "mixed primes");
        let prec = self.prec.min(o.prec);
        if o.is_zero() {
            return self.with_prec(prec);
        }
        if self.is_zero() {
            return o.with_prec(prec);
        }
        let v = self.val.min(o.val);
        if v >= prec {
            return PadicElem::zero(self.p, prec);
        }
        let raw = &self.unit * pow_p(self.p, self.val - v) + &o.unit * pow_p(self.p, o.val - v);
        PadicElem::from_parts(self.p, v, raw, prec)
    }
}

impl<'a> Sub<&'a PadicElem> for &'a PadicElem {
    type Output = PadicElem;
    fn sub(self, o: &PadicElem) -> PadicElem {
        self + &(-o)
    }
}

impl Neg for &PadicElem {
    type Output = PadicElem;
    fn neg(self) -> PadicElem {
        if self.is_zero() {
            return self.clone();
        }
        let m = pow_p(self.p, self.rel_prec());
        PadicElem { p: self.p, val: self.val, unit: &m - &self.unit, prec: self.prec }
    }
}

impl<'a> Mul<&'a PadicElem> for &'a PadicElem {
    type Output = PadicElem;
    fn mul(self, o: &PadicElem) -> PadicElem {
        assert_eq!(self.p, o.p, "mixed primes");
        let prec = (self.prec.saturating_add(o.val)).min(o.prec.saturating_add(self.val));
        if self.is_zero() || o.is_zero() {
            return PadicElem::zero(self.p, prec);
        }
        let val = self.val + o.val;
        if val >= prec {
            return PadicElem::zero(self.p, prec);
        }
        let m = pow_p(self.p, prec - val);
        let unit = (&self.unit * &o.unit).mod_floor(&m);
        PadicElem { p: self.p, val, unit, prec }
    }
}

macro_rules! owned_ops {
    ($t:ty) => {
        impl Add for $t {
            type Output = $t;
            fn add(self, o: $t) -> $t {
                &self + &o
            }
        }
        impl Sub for $t {
            type Output = $t;
            fn sub(self, o: $t) -> $t {
                &self - &o
            }
        }
        impl Mul for $t {
            type Output = $t;
            fn mul(self, o: $t) -> $t {
                &self * &o
            }
        }
        impl Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                -&self
            }
        }
    };
}
owned_ops!(PadicElem);
pub(crate) use owned_ops;

impl fmt::Display for PadicElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d: Vec<String> = self.digits().iter().map(|d| d.to_string()).collect();
        write!(f, "{}:{}:{}:{}", self.p, self.val, d.join("."), self.prec)
    }
}

impl FromStr for PadicElem {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("not a p-adic string: {s}"));
        let parts: Vec<&str> = s.trim().split(':').collect();
        if parts.len() != 4 {
            return Err(bad());
        }
        let p: u64 = parts[0].parse().map_err(|_| bad())?;
        let val: i64 = parts[1].parse().map_err(|_| bad())?;
        let prec: i64 = parts[3].parse().map_err(|_| bad())?;
        let digits: Vec<u64> = if parts[2].is_empty() {
            Vec::new()
        } else {
            parts[2].split('.').map(|d| d.parse().map_err(|_| bad())).collect::<Result<_>>()?
        };
        let e = PadicElem::from_digits(p, val, &digits, prec)?;
        if e.is_zero() {
            return Ok(e);
        }
        if e.val != val {
            return Err(bad());
        }
        Ok(e)
    }
}

#[derive(Serialize, Deserialize)]
struct PadicRepr {
    p: u64,
    val: i64,
    digits: Vec<u64>,
    prec: i64,
}

impl Serialize for PadicElem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PadicRepr { p: self.p, val: self.val, digits: self.digits(), prec: self.prec }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PadicElem {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = PadicRepr::deserialize(d)?;
        PadicElem::from_digits(r.p, r.val, &r.digits, r.prec).map_err(serde::de::Error::custom)
    }
}

/// Square root of a p-adic unit lifted from a seed root modulo p.
pub fn hensel_sqrt(a: &PadicElem, seed: u64) -> Result<PadicElem> {
    let p = a.p();
    check_prime(p)?;
    if !a.is_unit() {
        return Err(Error::NotAUnit);
    }
    let pb = BigInt::from(p);
    let a0 = a.unit().mod_floor(&pb);
    if (BigInt::from(seed) * BigInt::from(seed) - &a0).mod_floor(&pb) != BigInt::zero() {
        return Err(Error::NonResidue(a.to_string()));
    }
    let prec = a.prec();
    let m = pow_p(p, prec);
    let av = a.unit().mod_floor(&m);
    let two = BigInt::from(2);
    let mut x = BigInt::from(seed);
    let mut known = 1;
    while known < prec {
        known = (2 * known).min(prec);
        let mk = pow_p(p, known);
        let inv = (&two * &x).modinv(&mk).expect("2x is a unit");
        x = (&x - (&x * &x - &av) * inv).mod_floor(&mk);
    }
    Ok(PadicElem::from_int(p, &x, prec))
}

/// The square root of D in Zp congruent mod p to an element of {1, ..., (p-1)/2}.
pub fn canonical_sqrt_d(d: &BigInt, p: u64, prec: i64) -> Result<PadicElem> {
    check_prime(p)?;
    if legendre(d, p) != 1 {
        return Err(Error::NotSplit(d.to_string()));
    }
    let pb = BigInt::from(p);
    let r = d.mod_floor(&pb);
    let seed = (1..=(p - 1) / 2)
        .find(|&x| (BigInt::from(x * x) - &r).mod_floor(&pb).is_zero())
        .expect("residue has a root in the lower half");
    hensel_sqrt(&PadicElem::from_int(p, d, prec), seed)
}
