//! Dense polynomials of bounded degree with rational or p-adic coefficients.

use crate::arith::{PadicElem, Rat};
use crate::quadforms::Mat2;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::ops::{Add, Neg, Sub};

/// Coefficients indexed by degree.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct RatPoly {
    pub coeffs: Vec<Rat>,
}

impl RatPoly {
    pub fn zero(len: usize) -> Self {
        RatPoly { coeffs: vec![Rat::zero(); len] }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        RatPoly { coeffs: c.iter().map(|&x| Rat::from_integer(x.into())).collect() }
    }

    pub fn from_bigints(c: &[BigInt]) -> Self {
        RatPoly { coeffs: c.iter().map(|x| Rat::from_integer(x.clone())).collect() }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn coeff(&self, i: usize) -> Rat {
        self.coeffs.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        RatPoly { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_empty() || o.is_empty() {
            return RatPoly::default();
        }
        let mut out = vec![Rat::zero(); self.len() + o.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatPoly { coeffs: out }
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = RatPoly { coeffs: vec![Rat::one()] };
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Pads or trims to exactly `len` coefficients; trimmed coefficients must vanish.
    pub fn resized(&self, len: usize) -> Self {
        let mut c = self.coeffs.clone();
        while c.len() > len {
            let top = c.pop().unwrap();
            assert!(top.is_zero(), "nonzero coefficient above degree bound");
        }
        c.resize(len, Rat::zero());
        RatPoly { coeffs: c }
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Weight-w right action (P|g)(x) = (cx+d)^w P((ax+b)/(cx+d)).
    pub fn act(&self, w: usize, g: &Mat2) -> Self {
        let lin_num = RatPoly { coeffs: vec![g.b.clone(), g.a.clone()] };
        let lin_den = RatPoly { coeffs: vec![g.d.clone(), g.c.clone()] };
        let mut out = RatPoly::zero(w + 1);
        for (j, pj) in self.coeffs.iter().enumerate() {
            if pj.is_zero() {
                continue;
            }
            assert!(j <= w, "degree exceeds weight");
            let term = lin_num.pow(j).mul(&lin_den.pow(w - j)).scale(pj);
            for (i, t) in term.coeffs.into_iter().enumerate() {
                out.coeffs[i] += t;
            }
        }
        out
    }

    pub fn to_padic(&self, p: u64, prec: i64) -> PadicPoly {
        PadicPoly { coeffs: self.coeffs.iter().map(|c| PadicElem::from_rational(p, c, prec)).collect() }
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(crate::arith::rat_to_f64).collect()
    }
}

impl<'a> Add<&'a RatPoly> for &'a RatPoly {
    type Output = RatPoly;
    fn add(self, o: &RatPoly) -> RatPoly {
        let n = self.len().max(o.len());
        RatPoly { coeffs: (0..n).map(|i| self.coeff(i) + o.coeff(i)).collect() }
    }
}

impl<'a> Sub<&'a RatPoly> for &'a RatPoly {
    type Output = RatPoly;
    fn sub(self, o: &RatPoly) -> RatPoly {
        let n = self.len().max(o.len());
        RatPoly { coeffs: (0..n).map(|i| self.coeff(i) - o.coeff(i)).collect() }
    }
}

impl Neg for &RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        RatPoly { coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }
}

/// Polynomial with p-adic coefficients indexed by degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PadicPoly {
    pub coeffs: Vec<PadicElem>,
}

impl PadicPoly {
    pub fn scale(&self, c: &PadicElem) -> Self {
        PadicPoly { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!(self.coeffs.len(), o.coeffs.len());
        PadicPoly { coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.coeffs.len(), o.coeffs.len());
        PadicPoly { coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect() }
    }

    /// The weight-w right action (cx+d)^w P(gx).
    pub fn act(&self, w: usize, g: &Mat2) -> Self {
        let prec = self.coeffs.iter().map(|c| c.prec()).min().unwrap_or(0);
        let p = self.coeffs.first().map(|c| c.p()).expect("nonempty polynomial");
        let mut out = vec![PadicElem::zero(p, prec); w + 1];
        for (j, pj) in self.coeffs.iter().enumerate() {
            let mut basis = RatPoly::zero(w + 1);
            basis.coeffs[j] = Rat::one();
            for (i, t) in basis.act(w, g).coeffs.iter().enumerate() {
                if !t.is_zero() {
                    out[i] = &out[i] + &(pj * &PadicElem::from_rational(p, t, prec + 64));
                }
            }
        }
        PadicPoly { coeffs: out.into_iter().map(|c| c.with_prec(prec)).collect() }
    }

    /// Minimum over coefficients of min(valuation, precision).
    pub fn min_val(&self) -> i64 {
        self.coeffs.iter().map(|c| c.val().min(c.prec())).min().unwrap_or(i64::MAX)
    }

    /// True when every coefficient of self - o is divisible by p^m to known precision.
    pub fn agrees_to(&self, o: &Self, m: i64) -> bool {
        self.coeffs.len() == o.coeffs.len() && self.coeffs.iter().zip(&o.coeffs).all(|(a, b)| a.agrees_to(b, m))
    }
}
