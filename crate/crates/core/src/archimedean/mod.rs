//! The complex side: partial fractions of z^i / ((z - r1)^k (z - r2)^k), closed forms for
//! their integrals along geodesics of the upper half plane, the odd period polynomial of
//! the Heegner cusp form f_{k,D}^(p), and the coefficients of its generating series.

mod quadrature;

pub use quadrature::integrate;

use crate::arith::{binom, canonical_sqrt_d, is_square, legendre, rat_to_f64, QuadFieldElem, Rat};
use crate::error::{Error, Result};
use crate::quadforms::{check_split, check_weight, intersection, padic_intersection, s_poly, BinaryQF, Cusp};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

/// A complex number with an absolute error estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ComplexVal {
    pub re: f64,
    pub im: f64,
    pub err: f64,
}

impl ComplexVal {
    pub fn new(re: f64, im: f64, err: f64) -> Self {
        ComplexVal { re, im, err }
    }

    pub fn exact(z: Complex64) -> Self {
        Self::new(z.re, z.im, z.norm() * f64::EPSILON)
    }

    pub fn zero() -> Self {
        Self::new(0.0, 0.0, 0.0)
    }

    pub fn z(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn abs(&self) -> f64 {
        self.z().norm()
    }

    pub fn scale(&self, c: f64) -> Self {
        Self::new(self.re * c, self.im * c, self.err * c.abs())
    }

    pub fn dist(&self, o: &Self) -> f64 {
        (self.z() - o.z()).norm()
    }
}

impl Add for ComplexVal {
    type Output = ComplexVal;
    fn add(self, o: Self) -> Self {
        Self::new(self.re + o.re, self.im + o.im, self.err + o.err)
    }
}

impl Sub for ComplexVal {
    type Output = ComplexVal;
    fn sub(self, o: Self) -> Self {
        Self::new(self.re - o.re, self.im - o.im, self.err + o.err)
    }
}

impl Neg for ComplexVal {
    type Output = ComplexVal;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im, self.err)
    }
}

impl Mul for ComplexVal {
    type Output = ComplexVal;
    fn mul(self, o: Self) -> Self {
        let z = self.z() * o.z();
        Self::new(z.re, z.im, self.err * o.abs() + o.err * self.abs() + self.err * o.err)
    }
}

/// Coefficients A_l, B_l (l = 1..=k, stored at index l - 1) of
/// z^i / ((z - r1)^k (z - r2)^k) = sum_l A_l / (z - r1)^l + B_l / (z - r2)^l.
#[derive(Clone, Debug, PartialEq)]
pub struct PartialFractionCoeffs {
    pub k: i64,
    pub i: i64,
    pub r1: QuadFieldElem,
    pub r2: QuadFieldElem,
    pub a: Vec<QuadFieldElem>,
    pub b: Vec<QuadFieldElem>,
}

fn pf_side(x1: &QuadFieldElem, x2: &QuadFieldElem, i: i64, k: i64) -> Result<Vec<QuadFieldElem>> {
    let delta = x1 - x2;
    let d = &x1.d;
    let mut out = Vec::with_capacity(k as usize);
    for l in 1..=k {
        let mut acc = QuadFieldElem::from_rat(d, Rat::zero());
        for j in 0..=i.min(k - l) {
            let c = binom(i, j) * binom(2 * k - l - j - 1, k - 1);
            let c = if (k - l - j) % 2 == 0 { c } else { -c };
            let term = x1.pow(i - j)?.scale(&Rat::from_integer(c));
            acc = &acc + &term.div(&delta.pow(2 * k - l - j)?)?;
        }
        out.push(acc);
    }
    Ok(out)
}

/// Exact partial fraction decomposition in Q(sqrt disc(Q)).
pub fn partial_fraction(q: &BinaryQF, i: i64, k: i64) -> Result<PartialFractionCoeffs> {
    if k < 1 {
        return Err(Error::InvalidWeight(k));
    }
    if i < 0 || i > 2 * k - 2 {
        return Err(Error::config("i", format!("{i} outside [0, 2k-2]")));
    }
    let (r1, r2) = q.roots()?;
    let a = pf_side(&r1, &r2, i, k)?;
    let b = pf_side(&r2, &r1, i, k)?;
    Ok(PartialFractionCoeffs { k, i, r1, r2, a, b })
}

impl PartialFractionCoeffs {
    /// Numerator N(z) with z^i = N(z) after clearing the denominators, as Q(sqrt D) coefficients.
    pub fn cleared_numerator(&self) -> Vec<QuadFieldElem> {
        let d = &self.r1.d;
        let k = self.k as usize;
        let zero = QuadFieldElem::from_rat(d, Rat::zero());
        let one = QuadFieldElem::from_rat(d, Rat::from_integer(1.into()));
        let lin = |r: &QuadFieldElem| vec![-r, one.clone()];
        let mul = |x: &[QuadFieldElem], y: &[QuadFieldElem]| {
            let mut out = vec![zero.clone(); x.len() + y.len() - 1];
            for (s, xs) in x.iter().enumerate() {
                for (t, yt) in y.iter().enumerate() {
                    out[s + t] = &out[s + t] + &(xs * yt);
                }
            }
            out
        };
        let power = |r: &QuadFieldElem, e: usize| (0..e).fold(vec![one.clone()], |acc, _| mul(&acc, &lin(r)));
        let mut total = vec![zero.clone(); 2 * k];
        for l in 1..=k {
            let ta = mul(&[self.a[l - 1].clone()], &mul(&power(&self.r1, k - l), &power(&self.r2, k)));
            let tb = mul(&[self.b[l - 1].clone()], &mul(&power(&self.r2, k - l), &power(&self.r1, k)));
            for (s, c) in ta.iter().enumerate().chain(tb.iter().enumerate()) {
                total[s] = &total[s] + c;
            }
        }
        while total.len() > 1 && total.last().is_some_and(|c| c.is_zero()) {
            total.pop();
        }
        total
    }
}

fn cusp_f64(c: &Cusp) -> Result<(Rat, f64)> {
    match c.to_rat() {
        Some(x) => {
            let f = rat_to_f64(&x);
            Ok((x, f))
        }
        None => Err(Error::config("cusp", "geodesic integrals need finite endpoints")),
    }
}

/// The real-line part G of the integral from r to s: the antiderivative of the partial
/// fractions with logarithms of absolute values.
pub fn g_term(pf: &PartialFractionCoeffs, r: f64, s: f64) -> f64 {
    let (r1, r2) = (pf.r1.to_f64(), pf.r2.to_f64());
    let mut g = 0.0;
    for l in 2..=pf.k {
        let al = pf.a[(l - 1) as usize].to_f64();
        let bl = pf.b[(l - 1) as usize].to_f64();
        let f = (1 - l) as f64;
        let anti = |x: f64| al / (f * (x - r1).powi((l - 1) as i32)) + bl / (f * (x - r2).powi((l - 1) as i32));
        g += anti(s) - anti(r);
    }
    let a1 = pf.a[0].to_f64();
    g + a1 * ((s - r1) / (s - r2)).abs().ln() - a1 * ((r - r1) / (r - r2)).abs().ln()
}

/// Integral of z^i / ((z - r1)^k (z - r2)^k) along the upper semicircle from r to s.
///
/// Equals G + pi sqrt(-1) m A_1 with m = -(gamma_Q . (r,s)).
pub fn closed_geodesic_integral(q: &BinaryQF, i: i64, k: i64, r: &Cusp, s: &Cusp) -> Result<ComplexVal> {
    let (rq, rf) = cusp_f64(r)?;
    let (sq, sf) = cusp_f64(s)?;
    if q.eval_rat(&rq).is_zero() || q.eval_rat(&sq).is_zero() {
        return Err(Error::EndpointIsRoot);
    }
    if r == s {
        return Ok(ComplexVal::zero());
    }
    let pf = partial_fraction(q, i, k)?;
    let g = g_term(&pf, rf, sf);
    let sigma = intersection(q, r, s)? as f64;
    let im = -PI * sigma * pf.a[0].to_f64();
    let scale = g.abs() + im.abs() + 1.0;
    Ok(ComplexVal::new(g, im, scale * 1e-13))
}

/// The same integral by adaptive quadrature on z = c + rho e^(i theta).
pub fn quadrature_geodesic_integral(q: &BinaryQF, i: i64, k: i64, r: &Cusp, s: &Cusp, tol: f64) -> Result<ComplexVal> {
    let (rq, rf) = cusp_f64(r)?;
    let (sq, sf) = cusp_f64(s)?;
    if q.eval_rat(&rq).is_zero() || q.eval_rat(&sq).is_zero() {
        return Err(Error::EndpointIsRoot);
    }
    let (r1, r2) = q.roots()?;
    let (r1, r2) = (r1.to_f64(), r2.to_f64());
    let c = 0.5 * (rf + sf);
    let rho = 0.5 * (sf - rf).abs();
    let (t0, t1) = if rf < sf { (PI, 0.0) } else { (0.0, PI) };
    let f = |t: f64| {
        let e = Complex64::new(0.0, t).exp();
        let z = Complex64::new(c, 0.0) + e * rho;
        let dz = Complex64::new(0.0, rho) * e;
        z.powi(i as i32) / ((z - r1) * (z - r2)).powi(k as i32) * dz
    };
    let (v, err) = integrate(&f, t0, t1, tol);
    Ok(ComplexVal::new(v.re, v.im, err))
}

/// The odd period polynomial kappa-bar of f_{k,D}^(p) on (r, s), coefficients by degree.
#[derive(Clone, Debug, Serialize)]
pub struct PeriodPolynomial {
    pub k: i64,
    #[serde(rename = "D", with = "crate::arith::int_serde::int")]
    pub d: BigInt,
    pub p: u64,
    pub coeffs: Vec<ComplexVal>,
    pub forms_used: usize,
}

impl PeriodPolynomial {
    pub fn max_dist(&self, o: &Self) -> f64 {
        self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.dist(b)).fold(0.0, f64::max)
    }
}

/// The constant 3 pi sqrt(-1) binom(2k-2,k-1) D^(1-k) / sqrt(D) multiplying s_poly.
pub fn period_constant(k: i64, d: &BigInt) -> ComplexVal {
    let df = d.to_f64().unwrap_or(f64::NAN);
    let c = binom(2 * k - 2, k - 1).to_f64().unwrap_or(f64::NAN) * df.powi((1 - k) as i32) / df.sqrt();
    ComplexVal::exact(Complex64::new(0.0, 3.0 * PI * c))
}

/// kappa-bar{r,s} from the closed formula: the period constant times s_poly(k, D, p, r, s).
pub fn period_polynomial(k: i64, d: &BigInt, p: u64, r: &Cusp, s: &Cusp) -> Result<PeriodPolynomial> {
    check_weight(k)?;
    let sp = s_poly(k, d, p, r, s)?;
    let c = period_constant(k, d);
    let coeffs = sp.iter().map(|x| c.scale(x.to_f64().unwrap_or(f64::NAN))).collect();
    Ok(PeriodPolynomial { k, d: d.clone(), p, coeffs, forms_used: sp.len() })
}

/// Forms [a, b, c] of discriminant d with p | a and max(|a|, |c|) <= height.
pub fn heegner_forms_to_height(d: &BigInt, p: u64, height: i64) -> Vec<BinaryQF> {
    let mut out = Vec::new();
    let pi = p as i64;
    for a in (-height..=height).filter(|a| *a != 0 && a % pi == 0) {
        for c in (-height..=height).filter(|c| *c != 0) {
            let b2 = d + BigInt::from(4 * a * c);
            if b2.is_negative() || !is_square(&b2) {
                continue;
            }
            let b = b2.sqrt();
            out.push(BinaryQF::new(a, b.clone(), c));
            if !b.is_zero() {
                out.push(BinaryQF::new(a, -b, c));
            }
        }
    }
    out.sort();
    out
}

/// kappa-bar{r,s}(x) = kappa_f{r,s}(x) - kappa_f{-r,-s}(-x) by integrating f_{k,D}^(p) term by
/// term along the geodesics, over Heegner forms of height at most `height`.
pub fn period_polynomial_by_integrals(k: i64, d: &BigInt, p: u64, r: &Cusp, s: &Cusp, height: i64) -> Result<PeriodPolynomial> {
    check_weight(k)?;
    check_split(d, p)?;
    let w = 2 * k - 2;
    let forms = heegner_forms_to_height(d, p, height);
    let sqrt = canonical_sqrt_d(d, p, 8)?;
    let (mr, ms) = (r.neg(), s.neg());
    let rows: Vec<Vec<ComplexVal>> = forms
        .par_iter()
        .map(|q| -> Result<Vec<ComplexVal>> {
            let eps = padic_intersection(q, p, &sqrt)? as f64;
            let ak = q.a.to_f64().unwrap_or(f64::NAN).powi(k as i32);
            let mut row = vec![ComplexVal::zero(); (w + 1) as usize];
            for i in 0..=w {
                let plus = closed_geodesic_integral(q, i, k, r, s)?;
                let minus = closed_geodesic_integral(q, i, k, &mr, &ms)?;
                let sign_i = if i % 2 == 0 { 1.0 } else { -1.0 };
                let inner = plus - minus.scale(sign_i);
                let c = binom(w, i).to_f64().unwrap_or(f64::NAN) * sign_i * eps / ak;
                row[(w - i) as usize] = inner.scale(c);
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;
    let mut coeffs = vec![ComplexVal::zero(); (w + 1) as usize];
    for row in rows {
        for (c, v) in coeffs.iter_mut().zip(row) {
            *c = *c + v;
        }
    }
    Ok(PeriodPolynomial { k, d: d.clone(), p, coeffs, forms_used: forms.len() })
}

/// One coefficient of the generating series: D, s_poly{0, inf} and the scalar D^(k-1/2).
#[derive(Clone, Debug, Serialize)]
pub struct OmegaEntry {
    #[serde(rename = "D", with = "crate::arith::int_serde::int")]
    pub d: BigInt,
    #[serde(with = "crate::arith::int_serde::ints")]
    pub spoly: Vec<BigInt>,
    pub scale_num: String,
}

impl OmegaEntry {
    pub fn is_zero(&self) -> bool {
        self.spoly.iter().all(|c| c.is_zero())
    }
}

/// Entries for every non-square discriminant D <= d_max; zero when (D/p) != 1.
pub fn omega_bar_coeffs(k: i64, p: u64, d_max: u64) -> Result<Vec<OmegaEntry>> {
    check_weight(k)?;
    let w = (2 * k - 2) as usize;
    let (zero, inf) = (Cusp::from_int(0), Cusp::infinity());
    let mut out = Vec::new();
    for dv in 1..=d_max {
        let d = BigInt::from(dv);
        if !matches!(d.mod_floor(&BigInt::from(4)).to_u8(), Some(0 | 1)) || is_square(&d) {
            continue;
        }
        let spoly = if legendre(&d, p) == 1 { s_poly(k, &d, p, &zero, &inf)? } else { vec![BigInt::zero(); w + 1] };
        out.push(OmegaEntry { scale_num: format!("{d}^({}/2)", 2 * k - 1), d, spoly });
    }
    Ok(out)
}

