//! Schneider-Teitelbaum lift: harmonic cocycles from level-p Eichler symbols,
//! their moment distributions on the ends of the tree, growth bounds and the
//! Poisson-kernel integral f(z) = int 1/(z - t) dmu(t).

use crate::arith::{binom, pow_p, val_rat, PadicElem, QuadExtElem, Rat};
use crate::bruhat_tits::{depth, edge_to_matrix, level_partition, tree_distance, v0, Ball, TreeEdge};
use crate::cocycles::{kappa_scale, JParams, PSeriesValue};
use crate::error::{Error, Result};
use crate::poly::{PadicPoly, RatPoly};
use crate::quadforms::{s_poly, Cusp, Mat2};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Mutex;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum InvarianceGroup {
    Gamma0P,
    Sl2Z,
}

type Kernel = Box<dyn Fn(&Cusp, &Cusp) -> Result<RatPoly> + Send + Sync>;

/// A modular symbol c0{r,s} = scale * kernel{r,s} with values in polynomials of degree <= 2k-2.
pub struct EichlerSymbol {
    pub p: u64,
    pub k: i64,
    pub scale: PadicElem,
    pub group: InvarianceGroup,
    kernel: Kernel,
    memo: Mutex<HashMap<(Cusp, Cusp), RatPoly>>,
}

impl EichlerSymbol {
    pub fn new(p: u64, k: i64, scale: PadicElem, group: InvarianceGroup, kernel: Kernel) -> Self {
        EichlerSymbol { p, k, scale, group, kernel, memo: Mutex::new(HashMap::new()) }
    }

    /// kappa_{k,D}: kernel s_poly, scale binom(2k-2,k-1) D^(1-k) sqrt(D)^(-1).
    pub fn kappa(params: &JParams, prec: i64) -> Result<Self> {
        let scale = kappa_scale(params, prec)?;
        let (k, d, p) = (params.k, params.d.clone(), params.p);
        let kernel: Kernel = Box::new(move |r, s| Ok(RatPoly::from_bigints(&s_poly(k, &d, p, r, s)?)));
        Ok(Self::new(p, k, scale, InvarianceGroup::Gamma0P, kernel))
    }

    pub fn zero(p: u64, k: i64, prec: i64) -> Self {
        let w = (2 * k - 1) as usize;
        Self::new(p, k, PadicElem::one(p, prec), InvarianceGroup::Sl2Z, Box::new(move |_, _| Ok(RatPoly::zero(w))))
    }

    pub fn weight(&self) -> usize {
        (2 * self.k - 2) as usize
    }

    /// The rational part of c0{r,s}.
    pub fn kernel(&self, r: &Cusp, s: &Cusp) -> Result<RatPoly> {
        let key = (r.clone(), s.clone());
        if let Some(v) = self.memo.lock().unwrap().get(&key) {
            return Ok(v.clone());
        }
        let v = if r == s { RatPoly::zero(self.weight() + 1) } else { (self.kernel)(r, s)?.resized(self.weight() + 1) };
        self.memo.lock().unwrap().insert(key, v.clone());
        Ok(v)
    }

    /// Checks antisymmetry, the three-term identity and invariance under sample group elements.
    pub fn validate(&self) -> Result<()> {
        let w = self.weight();
        let (zero, inf, one) = (Cusp::from_int(0), Cusp::infinity(), Cusp::from_int(1));
        let a = &self.kernel(&zero, &inf)? + &self.kernel(&inf, &zero)?;
        if !a.is_zero() {
            return Err(Error::NotACocycle("antisymmetry".into()));
        }
        let t = &(&self.kernel(&zero, &inf)? + &self.kernel(&inf, &one)?) + &self.kernel(&one, &zero)?;
        if !t.is_zero() {
            return Err(Error::NotACocycle("three-term identity".into()));
        }
        let p = self.p as i64;
        let gens = match self.group {
            InvarianceGroup::Gamma0P => vec![
                Mat2::t_int(1),
                Mat2::from_ints(1, 0, p, 1),
                Mat2::from_ints(1, 1, p, p + 1),
                Mat2::from_ints(2, 1, p, (p + 1) / 2),
            ],
            InvarianceGroup::Sl2Z => vec![Mat2::t_int(1), Mat2::s()],
        };
        for g in &gens {
            for (r, s) in [(&zero, &inf), (&zero, &one), (&inf, &one)] {
                let lhs = self.kernel(&g.act_cusp(r), &g.act_cusp(s))?.act(w, g);
                if lhs != self.kernel(r, s)? {
                    return Err(Error::NotACocycle(format!("not invariant under {g}")));
                }
            }
        }
        Ok(())
    }
}

/// c{r,s}(e) = c0{g r, g s}|g with g = edge_to_matrix(e); odd edges by negation.
pub fn harmonic_extend(c0: &EichlerSymbol, e: &TreeEdge, r: &Cusp, s: &Cusp) -> Result<RatPoly> {
    if !e.is_even() {
        return Ok(-&harmonic_extend(c0, &e.reverse(), r, s)?);
    }
    let g = edge_to_matrix(e)?;
    harmonic_extend_with(c0, &g, r, s)
}

/// c0{g r, g s}|g for a given matrix carrying U(e) to Zp.
pub fn harmonic_extend_with(c0: &EichlerSymbol, g: &Mat2, r: &Cusp, s: &Cusp) -> Result<RatPoly> {
    Ok(c0.kernel(&g.act_cusp(r), &g.act_cusp(s))?.act(c0.weight(), g))
}

/// Rational parts of int_{U(e)} t^j dmu for j = 0..=2k-2.
pub fn moments_rat(c0: &EichlerSymbol, e: &TreeEdge, r: &Cusp, s: &Cusp) -> Result<Vec<Rat>> {
    let w = c0.weight() as i64;
    let c = harmonic_extend(c0, e, r, s)?;
    Ok((0..=w)
        .map(|j| {
            let v = c.coeff((w - j) as usize) / Rat::from_integer(binom(w, j));
            if j % 2 == 1 {
                -v
            } else {
                v
            }
        })
        .collect())
}

/// int_{U(e)} t^j dmu for j = 0..=2k-2 in Qp.
pub fn moments(c0: &EichlerSymbol, e: &TreeEdge, r: &Cusp, s: &Cusp, prec: i64) -> Result<Vec<PadicElem>> {
    Ok(moments_rat(c0, e, r, s)?
        .iter()
        .map(|m| &PadicElem::from_rational(c0.p, m, prec + 64) * &c0.scale)
        .map(|m| m.with_prec(prec))
        .collect())
}

/// Rational parts of int_{U(e)} (t - a)^m dmu.
pub fn centered_moments_rat(raw: &[Rat], a: &Rat) -> Vec<Rat> {
    (0..raw.len())
        .map(|m| {
            let mut acc = Rat::zero();
            for (j, r) in raw.iter().enumerate().take(m + 1) {
                let c = Rat::from_integer(binom(m as i64, j as i64)) * num_traits::pow(-a.clone(), m - j);
                acc += c * r;
            }
            acc
        })
        .collect()
}

/// Moment rows keyed by edge, written once.
#[derive(Default)]
pub struct MomentTable {
    rows: Mutex<HashMap<TreeEdge, Vec<PadicElem>>>,
}

impl MomentTable {
    pub fn get_or_compute(&self, c0: &EichlerSymbol, e: &TreeEdge, prec: i64) -> Result<Vec<PadicElem>> {
        if let Some(v) = self.rows.lock().unwrap().get(e) {
            return Ok(v.clone());
        }
        let row = moments(c0, e, &Cusp::from_int(0), &Cusp::infinity(), prec)?;
        self.rows.lock().unwrap().entry(e.clone()).or_insert(row.clone());
        Ok(row)
    }

    pub fn len(&self) -> usize {
        self.rows.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Sum of c(e) over the p + 1 edges leaving the vertex attached to the disc v.
pub fn harmonicity_defect(c0: &EichlerSymbol, v: &Ball, r: &Cusp, s: &Cusp) -> Result<RatPoly> {
    let p = v.p;
    let step = if v.level >= 0 {
        Rat::from_integer(pow_p(p, v.level))
    } else {
        Rat::new(BigInt::one(), pow_p(p, -v.level))
    };
    let mut acc = harmonic_extend(c0, &TreeEdge::new(v.complement()), r, s)?;
    for j in 0..p {
        let child = Ball::finite(p, &(&v.center + &step * Rat::from_integer(j.into())), v.level + 1);
        acc = &acc + &harmonic_extend(c0, &TreeEdge::new(child), r, s)?;
    }
    Ok(acc)
}

/// Discs whose vertex lies within distance `depth` of v0.
pub fn vertices_to_depth(p: u64, depth: i64) -> Vec<Ball> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for m in -depth..=depth {
        let mut l = 0.max(-m);
        while 2 * l + m <= depth {
            let count = pow_p(p, (m + l).max(0));
            let den = pow_p(p, l);
            let mut j = BigInt::zero();
            while j < count {
                let b = Ball::finite(p, &Rat::new(j.clone(), den.clone()), m);
                if tree_distance(&b, &v0(p)) <= depth && seen.insert(b.clone()) {
                    out.push(b);
                }
                j += 1;
            }
            l += 1;
        }
    }
    out
}

/// Fitted growth constants, as exponents: C = p^log_c.
#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub depth: i64,
    /// log_p of the fitted constant over edges of each exact depth; None means C = 0.
    pub per_depth: BTreeMap<i64, Option<i64>>,
    pub overall: Option<i64>,
    pub edges_checked: usize,
    pub pass: bool,
}

/// Fits the smallest C with |int_{U(e)} (x-a)^n dmu| <= C p^(-alpha(e)(n-(k-1))) on finite
/// discs and |int_{U(e)} x^n dmu| <= C p^(-alpha(e)((k-1)-n)) on discs around infinity.
pub fn bound_check(c0: &EichlerSymbol, depth: i64) -> Result<BoundReport> {
    let p = c0.p;
    let r = c0.k - 1;
    let scale_val = if c0.scale.is_zero() { None } else { Some(c0.scale.val()) };
    let (zero, inf) = (Cusp::from_int(0), Cusp::infinity());
    let mut edges: Vec<TreeEdge> = Vec::new();
    for b in vertices_to_depth(p, depth) {
        let e = TreeEdge::new(b.clone());
        if e.depth() <= depth {
            edges.push(e.clone());
            if e.alpha().is_some() && e.reverse().alpha().is_some() {
                edges.push(e.reverse());
            }
        }
    }
    let fits: Vec<(i64, Option<i64>)> = edges
        .par_iter()
        .map(|e| -> Result<(i64, Option<i64>)> {
            let alpha = e.alpha().expect("edge has alpha");
            let raw = moments_rat(c0, e, &zero, &inf)?;
            let (vals, finite) = if e.u.co {
                (raw, false)
            } else {
                (centered_moments_rat(&raw, &e.u.center), true)
            };
            let mut best: Option<i64> = None;
            for (n, m) in vals.iter().enumerate() {
                if m.is_zero() || scale_val.is_none() {
                    continue;
                }
                let n = n as i64;
                let v = val_rat(m, p) + scale_val.unwrap();
                let ex = if finite { alpha * (n - r) } else { alpha * (r - n) };
                let c = ex - v;
                best = Some(best.map_or(c, |b: i64| b.max(c)));
            }
            Ok((e.depth(), best))
        })
        .collect::<Result<_>>()?;
    let mut per_depth: BTreeMap<i64, Option<i64>> = BTreeMap::new();
    for (d, c) in &fits {
        let entry = per_depth.entry(*d).or_insert(None);
        *entry = match (*entry, *c) {
            (None, x) => x,
            (x, None) => x,
            (Some(a), Some(b)) => Some(a.max(b)),
        };
    }
    let overall = per_depth.values().fold(None, |acc: Option<i64>, c| match (acc, *c) {
        (None, x) => x,
        (x, None) => x,
        (Some(a), Some(b)) => Some(a.max(b)),
    });
    let shallow = per_depth.range(..=2).fold(None, |acc: Option<i64>, (_, c)| match (acc, *c) {
        (None, x) => x,
        (x, None) => x,
        (Some(a), Some(b)) => Some(a.max(b)),
    });
    let pass = per_depth.range(3..).all(|(_, c)| match (c, shallow) {
        (None, _) => true,
        (Some(_), None) => false,
        (Some(c), Some(s)) => *c <= s,
    });
    Ok(BoundReport { depth, per_depth, overall, edges_checked: edges.len(), pass })
}

/// The level-N Riemann-Taylor approximation of the Poisson integral as a rational function of z.
#[derive(Clone, Debug)]
pub struct StTruncation {
    pub p: u64,
    pub k: i64,
    pub level: i64,
    /// (center a, moments int (t - a)^m dmu) for the discs a + p^N Zp.
    pub finite: Vec<(Rat, Vec<PadicElem>)>,
    /// (center x0, moments int (x - x0)^m dmu) for discs B in pZp whose image S(B) is a piece.
    pub via_s: Vec<(Rat, Vec<PadicElem>)>,
}

impl StTruncation {
    /// Builds the truncation; `recenter` shifts every expansion point by recenter * p^N.
    pub fn build(c0: &EichlerSymbol, level: i64, recenter: i64, prec: i64) -> Result<Self> {
        let p = c0.p;
        let (zero, inf) = (Cusp::from_int(0), Cusp::infinity());
        let shift = Rat::from_integer(pow_p(p, level) * BigInt::from(recenter));
        let parts = level_partition(p, level)?;
        let pieces: Vec<(bool, Rat, Vec<PadicElem>)> = parts
            .par_iter()
            .map(|e| -> Result<(bool, Rat, Vec<PadicElem>)> {
                let to_moments = |raw: Vec<Rat>, center: &Rat| -> Vec<PadicElem> {
                    centered_moments_rat(&raw, center)
                        .iter()
                        .map(|m| (&PadicElem::from_rational(p, m, prec + 64) * &c0.scale).with_prec(prec))
                        .collect()
                };
                let inside_zp = !e.u.co && e.u.level >= 0 && (e.u.center.is_integer());
                if inside_zp {
                    let a = &e.u.center + &shift;
                    let raw = moments_rat(c0, e, &zero, &inf)?;
                    Ok((true, a.clone(), to_moments(raw, &a)))
                } else {
                    let inner = TreeEdge::new(e.u.image(&Mat2::s()));
                    let x0 = &inner.u.center + &shift;
                    let raw = moments_rat(c0, &inner, &zero, &inf)?;
                    Ok((false, x0.clone(), to_moments(raw, &x0)))
                }
            })
            .collect::<Result<_>>()?;
        let mut finite = Vec::new();
        let mut via_s = Vec::new();
        for (f, c, m) in pieces {
            if f {
                finite.push((c, m));
            } else {
                via_s.push((c, m));
            }
        }
        Ok(StTruncation { p, k: c0.k, level, finite, via_s })
    }

    fn w(&self) -> i64 {
        2 * self.k - 2
    }

    pub fn eval(&self, z: &QuadExtElem) -> Result<QuadExtElem> {
        let p = self.p;
        let w = self.w();
        let prec = z.prec();
        let mut acc = QuadExtElem::zero(p, z.u, 1 << 40);
        let finite: Vec<Result<QuadExtElem>> = self
            .finite
            .par_iter()
            .map(|(a, ms)| {
                let inv = z.add_base(&-PadicElem::from_rational(p, a, prec + 64)).inv()?;
                let mut pw = inv.clone();
                let mut t = QuadExtElem::zero(p, z.u, 1 << 40);
                for m in ms {
                    t = &t + &pw.scale(m);
                    pw = &pw * &inv;
                }
                Ok(t)
            })
            .collect();
        for t in finite {
            acc = &acc + &t?;
        }
        let via: Vec<Result<QuadExtElem>> = self
            .via_s
            .par_iter()
            .map(|(x0, ms)| {
                if x0.is_zero() {
                    return Ok(QuadExtElem::zero(p, z.u, 1 << 40));
                }
                let x0p = PadicElem::from_rational(p, x0, prec + 64);
                // h(x) = x^(w+1) / (z x + 1) expanded at x0: h_m = sum_{i+j=m} C(w+1,i) x0^(w+1-i) (-z)^j / A^(j+1)
                let a_inv = z.scale(&x0p).add_base(&PadicElem::one(p, prec + 64)).inv()?;
                let mz = -z;
                let mut t = QuadExtElem::zero(p, z.u, 1 << 40);
                for (m, mm) in ms.iter().enumerate() {
                    let mut hm = QuadExtElem::zero(p, z.u, 1 << 40);
                    for j in 0..=m {
                        let i = (m - j) as i64;
                        let c = PadicElem::from_int(p, &binom(w + 1, i), prec + 64);
                        let xp = x0p.pow(w + 1 - i)?;
                        let term = mz.pow(j as i64)?.scale(&(&c * &xp)) * a_inv.pow(j as i64 + 1)?;
                        hm = &hm + &term;
                    }
                    t = &t + &hm.scale(mm);
                }
                Ok(-&t)
            })
            .collect();
        for t in via {
            acc = &acc + &t?;
        }
        Ok(acc)
    }

    /// Res_{e0} of z^(2k-2-i) times the truncation, packaged as the T^i coefficients
    /// binom(2k-2,i)(-1)^i Res_{e0}(z^(2k-2-i) f dz).
    pub fn res0(&self, prec: i64) -> Result<PadicPoly> {
        let p = self.p;
        let w = self.w();
        let mut coeffs = Vec::new();
        for i in 0..=w {
            let j = w - i;
            let mut res = PadicElem::zero(p, 1 << 40);
            for (a, ms) in &self.finite {
                let ap = PadicElem::from_rational(p, a, prec + 64);
                if ap.val() < 0 {
                    continue;
                }
                for (m, mm) in ms.iter().enumerate() {
                    let m = m as i64;
                    if m > j {
                        break;
                    }
                    let c = PadicElem::from_int(p, &binom(j, m), prec + 64);
                    res = &res + &(&(&c * &ap.pow(j - m)?) * mm);
                }
            }
            for (x0, ms) in &self.via_s {
                if x0.is_zero() {
                    continue;
                }
                let x0p = PadicElem::from_rational(p, x0, prec + 64);
                if x0p.inv()?.val() < 0 {
                    continue;
                }
                // residue at -1/x of z^j x^w/(z + 1/x) is (-1)^j x^(w-j); expand at x0
                for (m, mm) in ms.iter().enumerate() {
                    let m = m as i64;
                    if m > w - j {
                        break;
                    }
                    let mut c = &PadicElem::from_int(p, &binom(w - j, m), prec + 64) * &x0p.pow(w - j - m)?;
                    if j % 2 == 0 {
                        c = -&c;
                    }
                    res = &res + &(&c * mm);
                }
            }
            let mut c = binom(w, i);
            if i % 2 == 1 {
                c = -c;
            }
            coeffs.push((&PadicElem::from_int(p, &c, prec + 64) * &res).with_prec(prec));
        }
        Ok(PadicPoly { coeffs })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StEvaluation {
    pub value: PSeriesValue,
    pub prec_observed: i64,
    pub level: i64,
}

/// ST(c0){0,inf}(z) at level N, with precision observed against level N-1.
pub fn st_eval(c0: &EichlerSymbol, z: &QuadExtElem, level: i64, prec: i64) -> Result<StEvaluation> {
    let h = depth(z)?;
    if h >= level {
        return Err(Error::LevelTooShallow(level));
    }
    c0.validate()?;
    let work = prec + level * c0.k + (2 * c0.k) * (h + 2) + 16;
    let cur = StTruncation::build(c0, level, 0, work)?.eval(z)?;
    let observed = if level - 1 > h {
        let prev = StTruncation::build(c0, level - 1, 0, work)?.eval(z)?;
        let d = &cur - &prev;
        d.val().min(d.prec())
    } else {
        cur.prec()
    };
    Ok(StEvaluation { value: PSeriesValue::new(cur.clone(), cur.prec()), prec_observed: observed, level })
}

