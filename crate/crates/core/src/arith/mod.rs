//! Exact arithmetic: rationals, real quadratic fields, p-adic numbers and the
//! unramified quadratic extension of Qp.

pub mod int_serde;
mod padic;
mod qext;
mod quadfield;

pub use padic::{canonical_sqrt_d, hensel_sqrt, PadicElem};
pub use qext::QuadExtElem;
pub use quadfield::QuadFieldElem;

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: impl Into<BigInt>) -> Rat {
    Rat::from_integer(n.into())
}

/// p^e as a big integer, e >= 0.
pub fn pow_p(p: u64, e: i64) -> BigInt {
    debug_assert!(e >= 0);
    num_traits::pow(BigInt::from(p), e as usize)
}

/// p-adic valuation of a nonzero integer.
pub fn val_int(n: &BigInt, p: u64) -> i64 {
    assert!(!n.is_zero(), "valuation of zero");
    let pb = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&pb);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// p-adic valuation of a nonzero rational.
pub fn val_rat(x: &Rat, p: u64) -> i64 {
    val_int(x.numer(), p) - val_int(x.denom(), p)
}

/// Strips all factors of p, returning (valuation, cofactor).
pub fn split_p(n: &BigInt, p: u64) -> (i64, BigInt) {
    let pb = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&pb);
        if !r.is_zero() {
            return (v, n);
        }
        n = q;
        v += 1;
    }
}

pub fn binom(n: i64, r: i64) -> BigInt {
    if r < 0 || n < 0 || r > n {
        return BigInt::zero();
    }
    let r = r.min(n - r);
    let mut acc = BigInt::one();
    for i in 0..r {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Generalized binomial coefficient n(n-1)...(n-r+1)/r! for any integer n.
pub fn binom_falling(n: i64, r: i64) -> BigInt {
    if r < 0 {
        return BigInt::zero();
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..r {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn check_prime(p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p == 2 {
        return Err(Error::EvenPrime(p));
    }
    Ok(())
}

/// Legendre symbol (n/p) for odd prime p.
pub fn legendre(n: &BigInt, p: u64) -> i32 {
    let pb = BigInt::from(p);
    let r = n.mod_floor(&pb);
    if r.is_zero() {
        return 0;
    }
    let e = BigInt::from((p - 1) / 2);
    if r.modpow(&e, &pb).is_one() {
        1
    } else {
        -1
    }
}

/// Smallest positive quadratic non-residue modulo p.
pub fn smallest_nonresidue(p: u64) -> u64 {
    (2..p).find(|&n| legendre(&BigInt::from(n), p) == -1).expect("odd prime has a nonresidue")
}

pub fn is_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

pub fn isqrt(n: &BigInt) -> BigInt {
    n.sqrt()
}

pub fn rat_to_f64(x: &Rat) -> f64 {
    match (x.numer().to_f64(), x.denom().to_f64()) {
        (Some(a), Some(b)) if a.is_finite() && b.is_finite() && b != 0.0 => a / b,
        _ => {
            let shift = (x.denom().bits() as i64 - 60).max(x.numer().bits() as i64 - 60).max(0);
            let n = (x.numer() >> shift as usize).to_f64().unwrap_or(0.0);
            let d = (x.denom() >> shift as usize).to_f64().unwrap_or(1.0);
            n / d
        }
    }
}

/// Parses "a", "a/b" or "-a/b".
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(Rat::new(n, d))
    } else {
        Ok(Rat::from_integer(s.parse().map_err(|_| bad())?))
    }
}

/// Valuation of x, or `default` when x = 0.
pub fn val_rat_or(x: &Rat, p: u64, default: i64) -> i64 {
    if x.is_zero() {
        default
    } else {
        val_rat(x, p)
    }
}
