use super::j_eval::{sum_terms, HUGE_PREC};
use super::{PSeriesValue, WeightedFunction};
use crate::arith::{canonical_sqrt_d, check_prime, legendre, pow_p, split_p, PadicElem, QuadExtElem, Rat};
use crate::bruhat_tits::depth;
use crate::error::{Error, Result};
use crate::modsym::manin_decompose;
use crate::quadforms::{check_weight, intersection, BinaryQF, Cusp};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use std::collections::{BTreeMap, HashMap, VecDeque};
use std::sync::{Arc, Mutex};

/// The simple forms of the Gamma-orbit of a primitive form, grouped by layer.
#[derive(Clone, Debug, Serialize)]
pub struct OrbitSlice {
    #[serde(with = "crate::arith::int_serde::int")]
    pub base_disc: BigInt,
    pub layers: BTreeMap<i64, Vec<BinaryQF>>,
    pub capped: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PhiTauEvaluation {
    pub value: PSeriesValue,
    pub layers: i64,
    pub forms_used: usize,
    /// True when the breadth-first search hit the coefficient-height cap.
    pub capped: bool,
    /// True when the disc bound excludes every form of the orbit.
    pub empty: bool,
}

fn base_disc(d: &BigInt, p: u64) -> (BigInt, i64) {
    let (v, _) = split_p(d, p);
    let n = v / 2;
    (d / pow_p(p, 2 * n), n)
}

fn layer_of(q: &BinaryQF, base: &BigInt, p: u64) -> i64 {
    let d = q.disc();
    let (v, _) = split_p(&(d / base), p);
    v / 2
}

/// A simple form SL2(Z)-equivalent to q.
fn make_simple(q: &BinaryQF) -> Result<BinaryQF> {
    if q.is_simple() {
        return Ok(q.clone());
    }
    let mid = Cusp::from_rat(&Rat::new(-q.b.clone(), BigInt::from(2) * &q.a));
    let path = manin_decompose(&mid, &Cusp::infinity())?;
    for ((x, y), g) in path.pairs.iter().zip(path.matrices()) {
        if intersection(q, x, y)? != 0 {
            let s = q.act(&g);
            debug_assert!(s.is_simple());
            return Ok(s);
        }
    }
    Err(Error::BadDiscriminant(q.disc().to_string()))
}

fn strip_p(a: BigInt, b: BigInt, c: BigInt, p: u64) -> BinaryQF {
    let pb = BigInt::from(p);
    let (mut a, mut b, mut c) = (a, b, c);
    while (&a % &pb).is_zero() && (&b % &pb).is_zero() && (&c % &pb).is_zero() {
        a /= &pb;
        b /= &pb;
        c /= &pb;
    }
    BinaryQF { a, b, c }
}

/// Integers strictly between the real roots of a x^2 + b x + c, widened by one on each side.
fn root_window(a: &BigInt, b: &BigInt, c: &BigInt) -> (i64, i64) {
    let (af, bf, cf) = (a.to_f64().unwrap_or(0.0), b.to_f64().unwrap_or(0.0), c.to_f64().unwrap_or(0.0));
    let s = (bf * bf - 4.0 * af * cf).max(0.0).sqrt();
    let (x, y) = ((-bf + s) / (2.0 * af), (-bf - s) / (2.0 * af));
    (x.min(y).floor() as i64 - 1, x.max(y).ceil() as i64 + 1)
}

fn neighbours(q: &BinaryQF, p: u64) -> Vec<BinaryQF> {
    let (a, b, c) = (&q.a, &q.b, &q.c);
    let mut out = vec![BinaryQF { a: c.clone(), b: -b.clone(), c: a.clone() }];
    // T^j: (a, b + 2aj, a j^2 + b j + c)
    let (lo, hi) = root_window(a, b, c);
    for j in (lo..=hi).filter(|&j| j != 0) {
        let jb = BigInt::from(j);
        let nc = (a * &jb + b) * &jb + c;
        if (a * &nc).is_negative() {
            out.push(BinaryQF { a: a.clone(), b: b + BigInt::from(2) * a * &jb, c: nc });
        }
    }
    // L^j = [[1,0],[j,1]]: (a + b j + c j^2, b + 2cj, c)
    let (lo, hi) = root_window(c, b, a);
    for j in (lo..=hi).filter(|&j| j != 0) {
        let jb = BigInt::from(j);
        let na = (c * &jb + b) * &jb + a;
        if (&na * c).is_negative() {
            out.push(BinaryQF { a: na, b: b + BigInt::from(2) * c * &jb, c: c.clone() });
        }
    }
    // diag(p, 1/p)^(+-1), rescaled to a p-primitive integral form
    let p2 = BigInt::from(p * p);
    let p4 = &p2 * &p2;
    out.push(strip_p(&p4 * a, &p2 * b, c.clone(), p));
    out.push(strip_p(a.clone(), &p2 * b, &p4 * c, p));
    out
}

/// Breadth-first search over simple forms of the orbit of q0 with disc <= disc_bound.
pub fn orbit_slice(q0: &BinaryQF, p: u64, disc_bound: &BigInt, height_cap: Option<&BigInt>) -> Result<OrbitSlice> {
    check_prime(p)?;
    if !q0.content().is_one() {
        return Err(Error::config("q0", "form must be primitive"));
    }
    let d = q0.disc();
    crate::quadforms::validate_disc(&d)?;
    let (base, _) = base_disc(&d, p);
    let start = make_simple(q0)?;
    let mut layers: BTreeMap<i64, Vec<BinaryQF>> = BTreeMap::new();
    let mut capped = false;
    let mut seen = std::collections::HashSet::new();
    let mut queue = VecDeque::new();
    if &start.disc() <= disc_bound {
        seen.insert(start.clone());
        queue.push_back(start);
    }
    while let Some(q) = queue.pop_front() {
        layers.entry(layer_of(&q, &base, p)).or_default().push(q.clone());
        for n in neighbours(&q, p) {
            if &n.disc() > disc_bound || !n.is_simple() {
                continue;
            }
            if let Some(cap) = height_cap {
                if &n.height() > cap {
                    capped = true;
                    continue;
                }
            }
            if seen.insert(n.clone()) {
                queue.push_back(n);
            }
        }
    }
    for v in layers.values_mut() {
        v.sort();
    }
    Ok(OrbitSlice { base_disc: base, layers, capped })
}

/// D0^(k/2) = D0^((k-1)/2) sqrt(D0) with the canonical square root.
fn base_power(base: &BigInt, p: u64, k: i64, prec: i64) -> Result<PadicElem> {
    if legendre(base, p) != 1 {
        return Err(Error::NotSplit(base.to_string()));
    }
    let s = canonical_sqrt_d(base, p, prec)?;
    Ok(&PadicElem::from_int(p, base, prec).pow((k - 1) / 2)? * &s)
}

fn eval_slice(slice: &OrbitSlice, p: u64, k: i64, z: &QuadExtElem, last_layer: i64) -> Result<PhiTauEvaluation> {
    let h = depth(z)?;
    let z2 = z * z;
    let mut acc = QuadExtElem::zero(p, z.u, HUGE_PREC);
    let mut used = 0;
    for (&n, forms) in slice.layers.range(..=last_layer) {
        let signed: Vec<(BinaryQF, i32)> =
            forms.iter().map(|q| (q.clone(), if q.a.is_positive() { 1 } else { -1 })).collect();
        used += signed.len();
        acc = &acc + &sum_terms(&signed, z, &z2, k, n * k)?;
    }
    let scale = base_power(&slice.base_disc, p, k, z.prec() + 8)?;
    let value = acc.scale(&scale);
    let tail = k * (last_layer + 1 - 2 * h);
    Ok(PhiTauEvaluation {
        value: PSeriesValue::new(value, tail),
        layers: last_layer,
        forms_used: used,
        capped: slice.capped,
        empty: used == 0,
    })
}

/// Partial sum of phi_tau over the orbit slice with disc <= disc_bound.
pub fn eval_phi_tau(
    p: u64,
    k: i64,
    q0: &BinaryQF,
    z: &QuadExtElem,
    disc_bound: &BigInt,
    height_cap: Option<&BigInt>,
) -> Result<PhiTauEvaluation> {
    check_weight(k)?;
    let slice = orbit_slice(q0, p, disc_bound, height_cap)?;
    let mut last = 0;
    while &(&slice.base_disc * pow_p(p, 2 * (last + 1))) <= disc_bound {
        last += 1;
    }
    if slice.layers.is_empty() {
        let h = depth(z)?;
        return Ok(PhiTauEvaluation {
            value: PSeriesValue::new(QuadExtElem::zero(p, z.u, z.prec()), k * (1 - 2 * h)),
            layers: -1,
            forms_used: 0,
            capped: slice.capped,
            empty: true,
        });
    }
    eval_slice(&slice, p, k, z, last)
}

/// phi_tau as a weight-2k function; the number of layers follows the requested precision.
pub struct PhiTauFunction {
    pub p: u64,
    pub k: i64,
    pub q0: BinaryQF,
    slices: Mutex<HashMap<i64, Arc<OrbitSlice>>>,
}

impl PhiTauFunction {
    pub fn new(p: u64, k: i64, q0: BinaryQF) -> Result<Self> {
        check_weight(k)?;
        check_prime(p)?;
        let (base, _) = base_disc(&q0.disc(), p);
        if legendre(&base, p) != 1 {
            return Err(Error::NotSplit(base.to_string()));
        }
        Ok(PhiTauFunction { p, k, q0, slices: Mutex::new(HashMap::new()) })
    }

    fn slice(&self, last: i64) -> Result<Arc<OrbitSlice>> {
        if let Some(s) = self.slices.lock().unwrap().get(&last) {
            return Ok(s.clone());
        }
        let (base, _) = base_disc(&self.q0.disc(), self.p);
        let bound = &base * pow_p(self.p, 2 * last);
        let s = Arc::new(orbit_slice(&self.q0, self.p, &bound, None)?);
        self.slices.lock().unwrap().insert(last, s.clone());
        Ok(s)
    }
}

impl PhiTauFunction {
    /// Partial sum over layers up to 2 depth(z) + ceil(prec / k), which is exact to p^(-prec).
    pub fn evaluate(&self, z: &QuadExtElem, prec: i64) -> Result<PhiTauEvaluation> {
        let h = depth(z)?;
        let last = 2 * h + (prec.max(0) + self.k - 1) / self.k;
        let slice = self.slice(last)?;
        eval_slice(&slice, self.p, self.k, z, last)
    }
}

impl WeightedFunction for PhiTauFunction {
    fn p(&self) -> u64 {
        self.p
    }
    fn weight(&self) -> i64 {
        2 * self.k
    }
    fn eval(&self, z: &QuadExtElem, prec: i64) -> Result<PSeriesValue> {
        Ok(self.evaluate(z, prec)?.value)
    }
}
