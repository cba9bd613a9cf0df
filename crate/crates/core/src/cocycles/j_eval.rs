use super::{PSeriesValue, WeightedFunction};
use crate::arith::{check_prime, pow_p, smallest_nonresidue, val_int, QuadExtElem};
use crate::bruhat_tits::depth;
use crate::cache::linked_forms_cached;
use crate::error::{Error, Result};
use crate::quadforms::{validate_disc, BinaryQF, Cusp};
use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;
use std::sync::Arc;

pub(crate) const HUGE_PREC: i64 = 1 << 40;

/// Parameters (p, k, D) of J_{k,D}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JParams {
    pub p: u64,
    pub k: i64,
    #[serde(rename = "D", with = "crate::arith::int_serde::int")]
    pub d: BigInt,
}

impl JParams {
    pub fn new(p: u64, k: i64, d: impl Into<BigInt>) -> Result<Self> {
        let d = d.into();
        check_prime(p)?;
        crate::quadforms::check_weight(k)?;
        validate_disc(&d)?;
        Ok(JParams { p, k, d })
    }

    pub fn u(&self) -> u64 {
        smallest_nonresidue(self.p)
    }

    /// Discriminant of layer n: D p^(2n).
    pub fn layer_disc(&self, n: i64) -> BigInt {
        if n >= 0 {
            &self.d * pow_p(self.p, 2 * n)
        } else {
            &self.d / pow_p(self.p, -2 * n)
        }
    }
}

/// Lowest layer: -floor(val_p(D)/2).
pub fn j_layers(params: &JParams) -> i64 {
    -(val_int(&params.d, params.p) / 2)
}

#[derive(Clone, Debug, Serialize)]
pub struct JEvaluation {
    pub value: PSeriesValue,
    pub first_layer: i64,
    pub layers: i64,
    pub forms_used: usize,
}

/// The p-primitive forms of discriminant D p^(2n) linked to (r, s), with multiplicity.
pub fn layer_forms(params: &JParams, n: i64, r: &Cusp, s: &Cusp) -> Result<Vec<(BinaryQF, i32)>> {
    let d = params.layer_disc(n);
    let all: Arc<Vec<(BinaryQF, i32)>> = linked_forms_cached(&d, r, s)?;
    let pb = BigInt::from(params.p);
    Ok(all.iter().filter(|(q, _)| !(q.content() % &pb).is_zero()).cloned().collect())
}

pub(crate) fn form_term(q: &BinaryQF, mult: i32, z: &QuadExtElem, z2: &QuadExtElem, k: i64, shift: i64) -> Result<QuadExtElem> {
    let v = q.eval_qext(z, z2);
    if v.is_zero() || v.val() >= v.prec() - 2 * k {
        return Err(Error::PoleHit);
    }
    let t = v.pow(-k)?.shift(shift);
    Ok(match mult {
        1 => t,
        -1 => -&t,
        m => t.mul_int(&BigInt::from(m)),
    })
}

/// Sum of mult * p^shift * Q(z,1)^(-k) over the forms, in order.
pub(crate) fn sum_terms(forms: &[(BinaryQF, i32)], z: &QuadExtElem, z2: &QuadExtElem, k: i64, shift: i64) -> Result<QuadExtElem> {
    let terms: Vec<Result<QuadExtElem>> = forms.par_iter().map(|(q, m)| form_term(q, *m, z, z2, k, shift)).collect();
    let mut acc = QuadExtElem::zero(z.p(), z.u, HUGE_PREC);
    for t in terms {
        acc = &acc + &t?;
    }
    Ok(acc)
}

/// J_{k,D}{r,s}(z) modulo p^target, truncated at the layer bound.
pub fn eval_j(params: &JParams, r: &Cusp, s: &Cusp, z: &QuadExtElem, target: i64) -> Result<JEvaluation> {
    if z.p() != params.p {
        return Err(Error::config("z", "prime of the evaluation point differs from p"));
    }
    let h = depth(z)?;
    let k = params.k;
    let n_min = j_layers(params);
    let n_max = (2 * h + (target.max(0) + k - 1) / k).max(n_min);
    let z2 = z * z;
    let mut acc = QuadExtElem::zero(params.p, z.u, HUGE_PREC);
    let mut used = 0;
    if r != s {
        for n in n_min..=n_max {
            let forms = layer_forms(params, n, r, s)?;
            used += forms.len();
            acc = &acc + &sum_terms(&forms, z, &z2, k, n * k)?;
        }
    }
    let tail = k * (n_max + 1 - 2 * h);
    let value = PSeriesValue::new(acc, tail);
    Ok(JEvaluation { value, first_layer: n_min, layers: n_max, forms_used: used })
}

/// J_{k,D}{r,s} as a weight-2k function.
#[derive(Clone, Debug)]
pub struct JFunction {
    pub params: JParams,
    pub r: Cusp,
    pub s: Cusp,
}

impl JFunction {
    pub fn new(params: JParams, r: Cusp, s: Cusp) -> Self {
        JFunction { params, r, s }
    }

    pub fn zero_infinity(params: JParams) -> Self {
        Self::new(params, Cusp::from_int(0), Cusp::infinity())
    }
}

impl WeightedFunction for JFunction {
    fn p(&self) -> u64 {
        self.params.p
    }
    fn weight(&self) -> i64 {
        2 * self.params.k
    }
    fn eval(&self, z: &QuadExtElem, prec: i64) -> Result<PSeriesValue> {
        Ok(eval_j(&self.params, &self.r, &self.s, z, prec)?.value)
    }
}
