//! The p-adic side: evaluation of J_{k,D} and of the orbit series phi_tau,
//! the involution varpi, the Heegner polynomial kappa, annular residues and
//! the binomial identity behind Res0(J) = kappa.

mod binomial;
mod j_eval;
mod phi_tau;
mod residue;

pub use binomial::{binomial_identity_check, binomial_identity_sides, exhaustive_binomial_check, BinomialReport};
pub use j_eval::{eval_j, j_layers, layer_forms, JEvaluation, JFunction, JParams};
pub use phi_tau::{eval_phi_tau, orbit_slice, OrbitSlice, PhiTauEvaluation, PhiTauFunction};
pub use residue::{annular_residue, kappa, kappa_scale, res0_j, KappaPoly};

use crate::arith::{PadicElem, QuadExtElem};
use crate::error::Result;
use crate::quadforms::Mat2;
use serde::Serialize;

/// A p-adic value with a guaranteed absolute precision.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PSeriesValue {
    pub value: QuadExtElem,
    pub guaranteed_abs_prec: i64,
}

impl PSeriesValue {
    pub fn new(value: QuadExtElem, guaranteed: i64) -> Self {
        let g = guaranteed.min(value.prec());
        PSeriesValue { value: value.with_prec(g), guaranteed_abs_prec: g }
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(&self.value + &o.value, self.guaranteed_abs_prec.min(o.guaranteed_abs_prec))
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(&self.value - &o.value, self.guaranteed_abs_prec.min(o.guaranteed_abs_prec))
    }

    pub fn scale(&self, c: &PadicElem) -> Self {
        let v = self.value.scale(c);
        let g = v.prec();
        Self::new(v, g)
    }
}

/// A function on the p-adic upper half plane of even weight.
pub trait WeightedFunction: Sync {
    fn p(&self) -> u64;
    /// The weight w, acting by (cz+d)^(-w).
    fn weight(&self) -> i64;
    fn eval(&self, z: &QuadExtElem, prec: i64) -> Result<PSeriesValue>;
}

impl<T: WeightedFunction + ?Sized> WeightedFunction for &T {
    fn p(&self) -> u64 {
        (**self).p()
    }
    fn weight(&self) -> i64 {
        (**self).weight()
    }
    fn eval(&self, z: &QuadExtElem, prec: i64) -> Result<PSeriesValue> {
        (**self).eval(z, prec)
    }
}

/// (phi|g)(z) = (cz+d)^(-w) phi(gz).
pub fn slash<F: WeightedFunction + ?Sized>(phi: &F, g: &Mat2, z: &QuadExtElem, prec: i64) -> Result<QuadExtElem> {
    let gz = g.act_qext(z)?;
    let j = g.j_factor(z).pow(-phi.weight())?;
    let v = phi.eval(&gz, prec)?;
    Ok(&j * &v.value)
}

/// varpi(phi)(z) = -p^(w/2) phi(pz).
pub struct Varpi<F> {
    pub inner: F,
}

pub fn varpi<F: WeightedFunction>(phi: F) -> Varpi<F> {
    Varpi { inner: phi }
}

impl<F: WeightedFunction> WeightedFunction for Varpi<F> {
    fn p(&self) -> u64 {
        self.inner.p()
    }
    fn weight(&self) -> i64 {
        self.inner.weight()
    }
    fn eval(&self, z: &QuadExtElem, prec: i64) -> Result<PSeriesValue> {
        let k = self.weight() / 2;
        let v = self.inner.eval(&z.shift(1), prec + k)?;
        Ok(PSeriesValue::new(-&v.value.shift(k), v.guaranteed_abs_prec + k))
    }
}

/// The zero function of a given weight.
pub struct ZeroFunction {
    pub p: u64,
    pub u: u64,
    pub weight: i64,
}

impl WeightedFunction for ZeroFunction {
    fn p(&self) -> u64 {
        self.p
    }
    fn weight(&self) -> i64 {
        self.weight
    }
    fn eval(&self, _z: &QuadExtElem, prec: i64) -> Result<PSeriesValue> {
        Ok(PSeriesValue::new(QuadExtElem::zero(self.p, self.u, prec), prec))
    }
}
