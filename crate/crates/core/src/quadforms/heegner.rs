use super::forms::{linked_forms, padic_intersection, validate_disc, BinaryQF};
use super::matrix::Cusp;
use crate::arith::{canonical_sqrt_d, check_prime, legendre, val_int};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::Zero;

/// Forms of discriminant d with p | a linked to (r, s), with multiplicity.
pub fn linked_heegner_forms(d: &BigInt, p: u64, r: &Cusp, s: &Cusp) -> Result<Vec<(BinaryQF, i32)>> {
    check_prime(p)?;
    let pb = BigInt::from(p);
    Ok(linked_forms(d, r, s)?.into_iter().filter(|(q, _)| (&q.a % &pb).is_zero()).collect())
}

pub(crate) fn check_weight(k: i64) -> Result<()> {
    if k < 1 || k % 2 == 0 {
        return Err(Error::InvalidWeight(k));
    }
    Ok(())
}

pub(crate) fn check_split(d: &BigInt, p: u64) -> Result<()> {
    check_prime(p)?;
    validate_disc(d)?;
    match legendre(d, p) {
        1 => Ok(()),
        0 => Err(Error::DiscDivisibleByP(d.to_string())),
        _ => Err(Error::NotSplit(d.to_string())),
    }
}

/// Sum over linked Heegner forms of (gamma_Q . (r,s)) (gamma_Q . e0) Q(x,1)^(k-1);
/// integer coefficients indexed by degree, length 2k - 1.
pub fn s_poly(k: i64, d: &BigInt, p: u64, r: &Cusp, s: &Cusp) -> Result<Vec<BigInt>> {
    check_weight(k)?;
    check_split(d, p)?;
    let forms = linked_heegner_forms(d, p, r, s)?;
    let w = (2 * k - 2) as usize;
    let mut out = vec![BigInt::zero(); w + 1];
    let need = forms.iter().map(|(q, _)| val_int(&q.a, p)).max().unwrap_or(0) + 4;
    let sqrt = canonical_sqrt_d(d, p, need)?;
    for (q, mult) in forms {
        let e0 = padic_intersection(&q, p, &sqrt)?;
        let coef = BigInt::from(mult * e0);
        for (i, c) in q.power_poly((k - 1) as usize).into_iter().enumerate() {
            out[i] += &coef * c;
        }
    }
    Ok(out)
}
