//! End-to-end checks of the central identities, each returning a PASS/FAIL report
//! with the measured quantities. Randomized checks take explicit seeds.

use crate::archimedean::{
    closed_geodesic_integral, partial_fraction, period_polynomial, period_polynomial_by_integrals, quadrature_geodesic_integral,
    ComplexVal,
};
use crate::arith::{is_square, legendre, rat, split_p, QuadExtElem, QuadFieldElem, Rat};
use crate::bruhat_tits::depth;
use crate::cocycles::{
    annular_residue, eval_j, exhaustive_binomial_check, kappa, res0_j, JFunction, JParams, PhiTauFunction,
};
use crate::error::Result;
use crate::modsym::check_relations;
use crate::poly::RatPoly;
use crate::quadforms::{enumerate_simple, s_poly, BinaryQF, Cusp, Mat2};
use crate::st_lift::{bound_check, st_eval, EichlerSymbol, StTruncation};
use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Outcome of one acceptance check.
#[derive(Clone, Debug, Serialize)]
pub struct CriterionReport {
    pub id: u32,
    pub name: String,
    pub pass: bool,
    pub details: Vec<String>,
}

impl CriterionReport {
    fn new(id: u32, name: &str) -> Self {
        CriterionReport { id, name: name.to_string(), pass: true, details: Vec::new() }
    }

    fn check(&mut self, ok: bool, line: String) {
        self.pass &= ok;
        self.details.push(format!("{} {line}", if ok { "ok  " } else { "FAIL" }));
    }

    fn note(&mut self, line: String) {
        self.details.push(format!("     {line}"));
    }

    pub fn line(&self) -> String {
        format!("{} [{}] {}", if self.pass { "PASS" } else { "FAIL" }, self.id, self.name)
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A cusp a/b with |a| <= 12, 1 <= b <= 6, or infinity.
pub fn random_cusp<R: Rng>(rng: &mut R) -> Cusp {
    if rng.gen_ratio(1, 10) {
        return Cusp::infinity();
    }
    let b = rng.gen_range(1..=6i64);
    let a = rng.gen_range(-12..=12i64);
    Cusp::new(a.into(), b.into())
}

/// A word of length <= 4 in S and T^j, |j| <= 3.
pub fn random_sl2z<R: Rng>(rng: &mut R) -> Mat2 {
    let mut g = Mat2::identity();
    for _ in 0..rng.gen_range(1..=4) {
        let h = if rng.gen_bool(0.5) { Mat2::s() } else { Mat2::t_int(rng.gen_range(-3..=3)) };
        g = g.mul(&h);
    }
    g
}

/// A word of length <= 4 in T^j and [[1,0],[pj,1]], |j| <= 2.
pub fn random_gamma0<R: Rng>(rng: &mut R, p: u64) -> Mat2 {
    let mut g = Mat2::identity();
    for _ in 0..rng.gen_range(1..=4) {
        let j = rng.gen_range(-2..=2i64);
        let h = if rng.gen_bool(0.5) { Mat2::t_int(j) } else { Mat2::from_ints(1, 0, p as i64 * j, 1) };
        g = g.mul(&h);
    }
    g
}

fn distinct3<R: Rng>(rng: &mut R) -> (Cusp, Cusp, Cusp) {
    loop {
        let (r, s, t) = (random_cusp(rng), random_cusp(rng), random_cusp(rng));
        if r != s && s != t && r != t {
            return (r, s, t);
        }
    }
}

fn point(p: u64, u: u64, a: Rat, b: Rat, prec: i64) -> QuadExtElem {
    QuadExtElem::from_rationals(p, u, &a, &b, prec)
}

/// Res0(J_{k,D}) = kappa_{k,D} coefficientwise to p^(-prec).
pub fn residue_identity(triples: &[(u64, i64, i64)], prec: i64) -> Result<CriterionReport> {
    let mut rep = CriterionReport::new(1, "residue identity Res0(J) = kappa");
    let pairs = [(Cusp::from_int(0), Cusp::infinity()), (Cusp::from_int(0), Cusp::from_int(1)), (Cusp::infinity(), Cusp::from_int(1))];
    for &(p, k, d) in triples {
        let params = JParams::new(p, k, d)?;
        for (r, s) in &pairs {
            let res = res0_j(&params, r, s, 2, prec)?;
            let kap = kappa(&params, r, s, prec)?;
            let ok = res.agrees_to(&kap.coeffs, prec);
            rep.check(ok, format!("(p,k,D)=({p},{k},{d}) ({r},{s}) agreement to {p}^-{}", res.sub(&kap.coeffs).min_val().min(prec)));
        }
    }
    Ok(rep)
}

/// Exhaustive exact check of the binomial identity for k <= kmax.
pub fn binomial_identity(kmax: i64) -> CriterionReport {
    let mut rep = CriterionReport::new(2, "binomial identity");
    let b = exhaustive_binomial_check(kmax);
    rep.check(b.failures.is_empty(), format!("{} cases, {} failures, {} with negative upper index", b.checked, b.failures.len(), b.negative_upper_index.len()));
    rep
}

/// Sample points of depth <= 1 for the ST comparison.
pub fn st_sample_points(p: u64, u: u64, prec: i64) -> Vec<QuadExtElem> {
    vec![
        point(p, u, rat(0, 1), rat(1, 1), prec),
        point(p, u, rat(1, 1), rat(1, 1), prec),
        point(p, u, rat(1, 1), rat(p as i64, 1), prec),
    ]
}

/// |ST(kappa)(z) - J(z)| at levels 4, 5, 6 with the gap shrinking and at most p^(-4) at level 6.
pub fn st_correspondence(p: u64, k: i64, d: i64) -> Result<CriterionReport> {
    let mut rep = CriterionReport::new(3, "ST(kappa) = J");
    let params = JParams::new(p, k, d)?;
    let c0 = EichlerSymbol::kappa(&params, 60)?;
    let (zero, inf) = (Cusp::from_int(0), Cusp::infinity());
    for z in st_sample_points(p, params.u(), 60) {
        let h = depth(&z)?;
        // J known one level beyond what ST resolves at level 6
        let target = k * (7 - 2 * h);
        let j = eval_j(&params, &zero, &inf, &z, target)?;
        let cap = j.value.guaranteed_abs_prec;
        let mut gaps = Vec::new();
        for level in 4..=6 {
            let st = st_eval(&c0, &z, level, target)?;
            let diff = &st.value.value - &j.value.value;
            gaps.push(diff.val().min(diff.prec()).min(cap));
        }
        let shrinking = gaps.windows(2).all(|w| w[1] > w[0] || (w[1] == w[0] && w[0] >= cap));
        let ok = gaps[2] >= 4 && shrinking;
        rep.check(ok, format!("z={z} depth {h}: val(ST_N - J) for N=4,5,6: {gaps:?} (J known to {p}^-{cap})"));
    }
    Ok(rep)
}

/// Res0 of the level-N truncation of ST(kappa) returns kappa{0,inf} to p^(-prec).
pub fn left_inverse(p: u64, k: i64, d: i64, level: i64, prec: i64) -> Result<CriterionReport> {
    let mut rep = CriterionReport::new(4, "Res0 is a left inverse of ST");
    let params = JParams::new(p, k, d)?;
    let c0 = EichlerSymbol::kappa(&params, prec + 40)?;
    let tr = StTruncation::build(&c0, level, 0, prec + 40)?;
    let res = tr.res0(prec)?;
    let kap = kappa(&params, &Cusp::from_int(0), &Cusp::infinity(), prec)?;
    let ok = res.agrees_to(&kap.coeffs, prec);
    rep.check(ok, format!("level {level}: agreement to {p}^-{}", res.sub(&kap.coeffs).min_val().min(prec)));
    Ok(rep)
}

/// A single constant bounds the moments of ST(kappa) on all edges to the given depth.
pub fn distribution_bounds(p: u64, k: i64, d: i64, max_depth: i64) -> Result<CriterionReport> {
    let mut rep = CriterionReport::new(5, "moment bounds");
    let params = JParams::new(p, k, d)?;
    let c0 = EichlerSymbol::kappa(&params, 60)?;
    let b = bound_check(&c0, max_depth)?;
    let fmt = |c: &Option<i64>| c.map_or("0".to_string(), |e| format!("{p}^{e}"));
    let per: Vec<String> = b.per_depth.iter().map(|(dd, c)| format!("depth {dd}: C={}", fmt(c))).collect();
    rep.check(b.pass, format!("{} edges; {}; overall C={}", b.edges_checked, per.join(", "), fmt(&b.overall)));
    Ok(rep)
}

/// Simple forms of discriminant below 100 used by the quadrature matrix.
pub fn quadrature_forms() -> Vec<BinaryQF> {
    vec![BinaryQF::new(1, 1, -1), BinaryQF::new(2, 1, -2), BinaryQF::new(3, 1, -1), BinaryQF::new(-2, 3, 3), BinaryQF::new(1, 5, -3)]
}

/// Largest relative deviation between the closed form and quadrature over the 30-case matrix.
pub fn quadrature_matrix() -> Result<(f64, usize)> {
    let pairs = [(Cusp::from_int(-2), Cusp::from_int(1)), (Cusp::from_int(0), Cusp::from_int(1)), (Cusp::new(1.into(), 2.into()), Cusp::from_int(3))];
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for k in [3, 5] {
        for q in quadrature_forms() {
            for (r, s) in &pairs {
                cases += 1;
                for i in 0..=2 * k - 2 {
                    let a = closed_geodesic_integral(&q, i, k, r, s)?;
                    let b = quadrature_geodesic_integral(&q, i, k, r, s, 1e-13)?;
                    worst = worst.max(a.dist(&b) / b.abs().max(1e-12));
                }
            }
        }
    }
    Ok((worst, cases))
}

/// Two computations of kappa-bar{r,s}: the closed constant times s_poly and the
/// term-by-term geodesic integrals.
pub fn period_identity(p: u64, k: i64, d: i64, r: &Cusp, s: &Cusp, height: i64) -> Result<CriterionReport> {
    let mut rep = CriterionReport::new(6, "period polynomial identity");
    let dd = BigInt::from(d);
    let one = period_polynomial(k, &dd, p, r, s)?;
    let two = period_polynomial_by_integrals(k, &dd, p, r, s, height)?;
    let dist = one.max_dist(&two);
    rep.check(dist < 1e-5, format!("({r},{s}) height {height}: max coefficient distance {dist:.3e}"));
    let fmt = |c: &ComplexVal| format!("{:.6}{:+.6}i", c.re, c.im);
    rep.note(format!("closed form : [{}]", one.coeffs.iter().map(fmt).collect::<Vec<_>>().join(", ")));
    rep.note(format!("integrals   : [{}]", two.coeffs.iter().map(fmt).collect::<Vec<_>>().join(", ")));
    let ratios: Vec<f64> = one
        .coeffs
        .iter()
        .zip(&two.coeffs)
        .filter(|(a, _)| a.abs() > 1e-9)
        .map(|(a, b)| (b.z() / a.z()).re)
        .collect();
    if let (Some(lo), Some(hi)) = (ratios.iter().cloned().reduce(f64::min), ratios.iter().cloned().reduce(f64::max)) {
        rep.note(format!("coefficient ratio integrals/closed form in [{lo:.9}, {hi:.9}]"));
    }
    let (worst, cases) = quadrature_matrix()?;
    rep.check(worst < 1e-6, format!("geodesic closed form vs quadrature: {cases} cases, max relative error {worst:.3e}"));
    Ok(rep)
}

/// Modular-symbol identities and group invariance for s_poly, kappa, kappa-bar and J,
/// plus the relations for J{0,inf} and phi_tau.
pub fn symbol_suites(p: u64, k: i64, d: i64, instances: usize, seed: u64) -> Result<CriterionReport> {
    let mut rep = CriterionReport::new(7, "modular symbol and invariance suites");
    let params = JParams::new(p, k, d)?;
    let dd = BigInt::from(d);
    let w = (2 * k - 2) as usize;
    let prec = 10;

    let sp = |r: &Cusp, s: &Cusp| -> Result<RatPoly> { Ok(RatPoly::from_bigints(&s_poly(k, &dd, p, r, s)?)) };
    let mut g = rng(seed);
    let (mut anti, mut three, mut inv) = (0, 0, 0);
    for _ in 0..instances {
        let (r, s, t) = distinct3(&mut g);
        anti += (sp(&r, &s)? != -&sp(&s, &r)?) as usize;
        three += (&sp(&r, &s)? + &sp(&s, &t)? != sp(&r, &t)?) as usize;
        let gm = random_gamma0(&mut g, p);
        inv += (sp(&gm.act_cusp(&r), &gm.act_cusp(&s))?.act(w, &gm) != sp(&r, &s)?) as usize;
    }
    rep.check(anti + three + inv == 0, format!("s_poly: {instances} instances each, failures antisymmetry {anti}, three-term {three}, Gamma0(p) {inv}"));

    let kp = |r: &Cusp, s: &Cusp| Ok::<_, crate::Error>(kappa(&params, r, s, prec)?.coeffs);
    let mut g = rng(seed + 1);
    let (mut anti, mut three, mut inv) = (0, 0, 0);
    for _ in 0..instances {
        let (r, s, t) = distinct3(&mut g);
        anti += !kp(&r, &s)?.add(&kp(&s, &r)?).agrees_to(&kp(&r, &r)?, prec) as usize;
        three += !kp(&r, &s)?.add(&kp(&s, &t)?).agrees_to(&kp(&r, &t)?, prec) as usize;
        let gm = random_gamma0(&mut g, p);
        inv += !kp(&gm.act_cusp(&r), &gm.act_cusp(&s))?.act(w, &gm).agrees_to(&kp(&r, &s)?, prec) as usize;
    }
    rep.check(anti + three + inv == 0, format!("kappa: {instances} instances each to {p}^-{prec}, failures antisymmetry {anti}, three-term {three}, Gamma0(p) {inv}"));

    let kb = |r: &Cusp, s: &Cusp| Ok::<_, crate::Error>(period_polynomial(k, &dd, p, r, s)?.coeffs);
    let dist = |a: &[ComplexVal], b: &[ComplexVal]| a.iter().zip(b).map(|(x, y)| x.dist(y)).fold(0.0, f64::max);
    let add = |a: &[ComplexVal], b: &[ComplexVal]| a.iter().zip(b).map(|(x, y)| *x + *y).collect::<Vec<_>>();
    // the slash action in floating point, with the sum of absolute values of the terms per coefficient
    let act = |a: &[ComplexVal], gm: &Mat2| -> (Vec<ComplexVal>, Vec<f64>) {
        let mut out = vec![ComplexVal::zero(); w + 1];
        let mut mag = vec![0.0; w + 1];
        for (j, c) in a.iter().enumerate() {
            let mut basis = RatPoly::zero(w + 1);
            basis.coeffs[j] = Rat::from_integer(1.into());
            for (i, t) in basis.act(w, gm).to_f64().into_iter().enumerate() {
                out[i] = out[i] + c.scale(t);
                mag[i] += c.abs() * t.abs();
            }
        }
        (out, mag)
    };
    let mut g = rng(seed + 2);
    let (mut anti, mut three, mut inv) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..instances {
        let (r, s, t) = distinct3(&mut g);
        anti = anti.max(dist(&add(&kb(&r, &s)?, &kb(&s, &r)?), &vec![ComplexVal::zero(); w + 1]));
        three = three.max(dist(&add(&kb(&r, &s)?, &kb(&s, &t)?), &kb(&r, &t)?));
        let gm = random_gamma0(&mut g, p);
        let (lhs, mag) = act(&kb(&gm.act_cusp(&r), &gm.act_cusp(&s))?, &gm);
        let rhs = kb(&r, &s)?;
        for ((x, y), m) in lhs.iter().zip(&rhs).zip(&mag) {
            inv = inv.max(x.dist(y) / m.max(y.abs()).max(1.0));
        }
    }
    rep.check(
        anti.max(three).max(inv) < 1e-8,
        format!("kappa-bar: {instances} instances each, max deviation antisymmetry {anti:.1e}, three-term {three:.1e}, Gamma0(p) {inv:.1e} relative to term size"),
    );

    let jprec = 6;
    let u = params.u();
    let mut g = rng(seed + 3);
    let (mut anti, mut three, mut inv) = (0, 0, 0);
    for _ in 0..instances {
        let (r, s, t) = distinct3(&mut g);
        let z = point(p, u, rat(g.gen_range(0..p as i64), 1), rat(g.gen_range(1..p as i64), 1), 40);
        let jv = |r: &Cusp, s: &Cusp, z: &QuadExtElem| Ok::<_, crate::Error>(eval_j(&params, r, s, z, jprec)?.value.value);
        anti += !(&jv(&r, &s, &z)? + &jv(&s, &r, &z)?).agrees_to(&QuadExtElem::zero(p, u, jprec), jprec) as usize;
        three += !(&jv(&r, &s, &z)? + &jv(&s, &t, &z)?).agrees_to(&jv(&r, &t, &z)?, jprec) as usize;
        let gm = random_sl2z(&mut g);
        let gz = gm.act_qext(&z)?;
        let lhs = &gm.j_factor(&z).pow(-2 * k)? * &jv(&gm.act_cusp(&r), &gm.act_cusp(&s), &gz)?;
        inv += !lhs.agrees_to(&jv(&r, &s, &z)?, jprec) as usize;
    }
    rep.check(anti + three + inv == 0, format!("J: {instances} instances each to {p}^-{jprec}, failures antisymmetry {anti}, three-term {three}, SL2(Z) {inv}"));

    let rel_prec = 8;
    let pts = relation_points(p, u, 40);
    let j0 = JFunction::zero_infinity(params.clone());
    let rj = check_relations(&j0, &pts, rel_prec)?;
    rep.check(rj.pass, format!("J{{0,inf}} relations at 10 points: S {}, U {}, D {} (need > {rel_prec})", rj.s_relation, rj.u_relation, rj.d_relation));
    let q0 = BinaryQF::new(1, 1, -3);
    let phi = PhiTauFunction::new(p, k, q0.clone())?;
    let rp = check_relations(&phi, &pts, rel_prec)?;
    rep.check(rp.pass, format!("phi_tau for {q0} relations at 10 points: S {}, U {}, D {} (need > {rel_prec})", rp.s_relation, rp.u_relation, rp.d_relation));
    Ok(rep)
}

/// Ten points a + b sqrt(u)/p of depth 1 whose images under S, U and D also have depth 1.
pub fn relation_points(p: u64, u: u64, prec: i64) -> Vec<QuadExtElem> {
    (0..10i64).map(|i| point(p, u, rat(i, 1), rat(1 + (i % 2), p as i64), prec)).collect()
}

/// Simple forms of discriminant disc by a naive double loop.
pub fn brute_force_simple(disc: i64) -> Vec<BinaryQF> {
    let mut out = Vec::new();
    for a in -disc..=disc {
        if a == 0 {
            continue;
        }
        for b in -disc..=disc {
            let num = b * b - disc;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if a * c < 0 {
                out.push(BinaryQF::new(a, b, c));
            }
        }
    }
    out.sort();
    out
}

/// Random simple forms with discriminant below 100.
pub fn random_simple_forms<R: Rng>(rng: &mut R, count: usize) -> Vec<BinaryQF> {
    let mut out = Vec::new();
    while out.len() < count {
        let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
        let (a, c) = (sign * rng.gen_range(1..=6i64), -sign * rng.gen_range(1..=6i64));
        let q = BinaryQF::new(a, rng.gen_range(-5..=5i64), c);
        let d = q.disc();
        if q.is_simple() && d < BigInt::from(100) && !is_square(&d) {
            out.push(q);
        }
    }
    out
}

/// The cleared partial fraction numerator equals z^i exactly.
pub fn partial_fraction_oracle(q: &BinaryQF, i: i64, k: i64) -> Result<bool> {
    let pf = partial_fraction(q, i, k)?;
    let num = pf.cleared_numerator();
    let d = q.disc();
    let mut want = vec![QuadFieldElem::from_rat(&d, Rat::zero()); i as usize + 1];
    want[i as usize] = QuadFieldElem::from_rat(&d, Rat::from_integer(1.into()));
    Ok(num == want)
}

/// Simple-form enumeration, partial fractions and the vanishing of residues of forms
/// with p | disc in the J layers.
pub fn enumeration_oracles(max_disc: i64, seed: u64) -> Result<CriterionReport> {
    let mut rep = CriterionReport::new(8, "enumeration oracles");
    let mut bad = Vec::new();
    let mut checked = 0;
    for disc in 1..=max_disc {
        if !matches!(disc % 4, 0 | 1) || is_square(&BigInt::from(disc)) {
            continue;
        }
        checked += 1;
        let mut got = enumerate_simple(&BigInt::from(disc))?;
        got.sort();
        if got != brute_force_simple(disc) {
            bad.push(disc);
        }
    }
    rep.check(bad.is_empty(), format!("enumerate_simple vs brute force: {checked} discriminants, mismatches {bad:?}"));

    let mut g = rng(seed);
    let mut fails = 0;
    let forms = random_simple_forms(&mut g, 20);
    for q in &forms {
        let k = g.gen_range(1..=3i64);
        let i = g.gen_range(0..=2 * k - 2);
        fails += !partial_fraction_oracle(q, i, k)? as usize;
    }
    rep.check(fails == 0, format!("partial fractions vs cleared-denominator identity: 20 instances, {fails} failures"));

    let mut nonzero = Vec::new();
    let mut tested = 0;
    for p in [3u64, 5, 7] {
        let pb = BigInt::from(p);
        for disc in 1..=max_disc {
            let db = BigInt::from(disc);
            if !matches!(disc % 4, 0 | 1) || is_square(&db) || !(&db % &pb).is_zero() {
                continue;
            }
            let (v, d0) = split_p(&db, p);
            if v % 2 == 1 || legendre(&d0, p) != 1 {
                continue;
            }
            for q in enumerate_simple(&db)? {
                if !(q.content() % &pb).is_zero() {
                    for k in [1i64, 3] {
                        for i in 0..=2 * k - 2 {
                            tested += 1;
                            if !annular_residue(&q, i, k, p, 10)?.is_zero() {
                                nonzero.push(format!("{q} p={p} k={k} i={i}"));
                            }
                        }
                    }
                }
            }
        }
    }
    rep.check(nonzero.is_empty(), format!("residues of p-primitive forms with disc D p^(2n), n >= 1, disc <= {max_disc}: {tested} residues, nonzero {nonzero:?}"));
    Ok(rep)
}

/// All checks with the default parameters.
pub fn run_all(seed: u64) -> Result<Vec<CriterionReport>> {
    Ok(vec![
        residue_identity(&[(3, 3, 13), (5, 3, 29), (3, 3, 37)], 10)?,
        binomial_identity(10),
        st_correspondence(3, 3, 13)?,
        left_inverse(3, 3, 13, 4, 4)?,
        distribution_bounds(3, 3, 13, 4)?,
        period_identity(3, 3, 13, &Cusp::from_int(0), &Cusp::from_int(1), 60)?,
        symbol_suites(3, 3, 13, 100, seed)?,
        enumeration_oracles(200, seed)?,
    ])
}

/// Helper shared by callers that only need the pass flag.
pub fn all_pass(reports: &[CriterionReport]) -> bool {
    reports.iter().all(|r| r.pass)
}
