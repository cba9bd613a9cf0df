use super::j_eval::{j_layers, layer_forms, JParams};
use crate::arith::{binom, hensel_sqrt, legendre, split_p, val_int, PadicElem};
use crate::error::{Error, Result};
use crate::poly::PadicPoly;
use crate::quadforms::{check_split, s_poly, BinaryQF, Cusp};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;

/// kappa_{k,D}{r,s} = binom(2k-2,k-1) D^(1-k) sqrt(D)^(-1) s_poly, with its parameters.
#[derive(Clone, Debug, Serialize)]
pub struct KappaPoly {
    pub k: i64,
    #[serde(rename = "D", with = "crate::arith::int_serde::int")]
    pub d: BigInt,
    pub p: u64,
    pub r: Cusp,
    pub s: Cusp,
    #[serde(with = "crate::arith::int_serde::ints")]
    pub spoly: Vec<BigInt>,
    pub coeffs: PadicPoly,
}

/// Res_{e0}(z^i / Q(z,1)^k dz): the sum of the residues at the poles lying in Zp.
///
/// The rational function has degree at most -2, so its residues sum to zero and
/// only a form with exactly one root in Zp contributes.
pub fn annular_residue(q: &BinaryQF, i: i64, k: i64, p: u64, prec: i64) -> Result<PadicElem> {
    if i < 0 || i > 2 * k - 2 {
        return Err(Error::config("i", format!("{i} outside [0, 2k-2]")));
    }
    let zero = PadicElem::zero(p, prec);
    let disc = q.disc();
    if disc.is_zero() || q.a.is_zero() {
        return Err(Error::BadDiscriminant(disc.to_string()));
    }
    let (v, d0) = split_p(&disc, p);
    if v % 2 == 1 || legendre(&d0, p) != 1 {
        // conjugate roots share an absolute value; a pole on the open annulus has val in (-1, 0)
        if !q.c.is_zero() && val_int(&q.c, p) - val_int(&q.a, p) == -1 {
            return Err(Error::PoleHit);
        }
        return Ok(zero);
    }
    let va = val_int(&q.a, p);
    let work = prec + 2 * k * (va + v + 2) + 10;
    let pb = BigInt::from(p);
    let r0 = d0.mod_floor(&pb);
    let seed = (1..p).find(|&x| (BigInt::from(x * x) - &r0).mod_floor(&pb).is_zero()).unwrap();
    let s = hensel_sqrt(&PadicElem::from_int(p, &d0, work), seed)?.shift(v / 2);
    let a = PadicElem::from_int(p, &q.a, work);
    let mb = PadicElem::from_int(p, &(-q.b.clone()), work);
    let two_a = &a + &a;
    let rho1 = (&mb + &s).div(&two_a)?;
    let rho2 = (&mb - &s).div(&two_a)?;
    let in1 = rho1.val() >= 0;
    let in2 = rho2.val() >= 0;
    if in1 == in2 {
        return Ok(zero);
    }
    let (rho, sroot) = if in1 { (rho1, s) } else { (rho2, -&s) };
    let a_over_s = a.div(&sroot)?;
    let a_mk = a.pow(-k)?;
    let mut acc = PadicElem::zero(p, work + 4 * k * (va + 1));
    for l in 0..=i.min(k - 1) {
        let c = binom(i, l) * binom(2 * k - 2 - l, k - 1);
        if c.is_zero() {
            continue;
        }
        let c = if l % 2 == 1 { -c } else { c };
        let term = &(&rho.pow(i - l)? * &a_mk) * &a_over_s.pow(2 * k - 1 - l)?;
        acc = &acc + &(&PadicElem::from_int(p, &c, work + 64) * &term);
    }
    Ok(acc)
}

/// Res0(J_{k,D}{r,s}): the polynomial whose T^i coefficient is
/// binom(2k-2,i)(-1)^i Res_{e0}(z^(2k-2-i) J dz), summed over layers first_layer..=last_layer.
pub fn res0_j(params: &JParams, r: &Cusp, s: &Cusp, last_layer: i64, prec: i64) -> Result<PadicPoly> {
    check_split(&params.d, params.p)?;
    let (p, k) = (params.p, params.k);
    let w = 2 * k - 2;
    let mut coeffs = vec![PadicElem::zero(p, super::j_eval::HUGE_PREC); (w + 1) as usize];
    if r == s {
        return Ok(PadicPoly { coeffs: coeffs.into_iter().map(|c| c.with_prec(prec)).collect() });
    }
    for n in j_layers(params)..=last_layer {
        for (q, mult) in layer_forms(params, n, r, s)? {
            for i in 0..=w {
                let res = annular_residue(&q, w - i, k, p, prec + n.abs() * k + 4)?;
                if res.is_zero() {
                    continue;
                }
                let mut c = binom(w, i) * BigInt::from(mult);
                if i % 2 == 1 {
                    c = -c;
                }
                let term = &PadicElem::from_int(p, &c, prec + 64) * &res.shift(n * k);
                coeffs[i as usize] = &coeffs[i as usize] + &term;
            }
        }
    }
    Ok(PadicPoly { coeffs: coeffs.into_iter().map(|c| c.with_prec(prec)).collect() })
}

/// The normalizing scalar binom(2k-2,k-1) D^(1-k) sqrt(D)^(-1) in Qp.
pub fn kappa_scale(params: &JParams, prec: i64) -> Result<PadicElem> {
    let (p, k) = (params.p, params.k);
    let sqrt = crate::arith::canonical_sqrt_d(&params.d, p, prec + 8)?;
    let c = PadicElem::from_int(p, &binom(2 * k - 2, k - 1), prec + 8);
    let dk = PadicElem::from_int(p, &params.d, prec + 8).pow(k - 1)?;
    c.div(&dk)?.div(&sqrt)
}

pub fn kappa(params: &JParams, r: &Cusp, s: &Cusp, prec: i64) -> Result<KappaPoly> {
    check_split(&params.d, params.p)?;
    let sp = s_poly(params.k, &params.d, params.p, r, s)?;
    let scale = kappa_scale(params, prec)?;
    let coeffs = sp
        .iter()
        .map(|c| (&PadicElem::from_int(params.p, c, prec + 64) * &scale).with_prec(prec))
        .collect();
    Ok(KappaPoly {
        k: params.k,
        d: params.d.clone(),
        p: params.p,
        r: r.clone(),
        s: s.clone(),
        spoly: sp,
        coeffs: PadicPoly { coeffs },
    })
}
