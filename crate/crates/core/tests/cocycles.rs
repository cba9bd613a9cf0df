use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rigid_cocycles::archimedean::partial_fraction;
use rigid_cocycles::arith::{canonical_sqrt_d, legendre, rat, split_p, PadicElem, QuadExtElem};
use rigid_cocycles::cocycles::{
    annular_residue, binomial_identity_check, binomial_identity_sides, eval_j, eval_phi_tau, kappa, res0_j, varpi,
    JFunction, JParams, PhiTauFunction, WeightedFunction, ZeroFunction,
};
use rigid_cocycles::quadforms::{enumerate_simple, linked_heegner_forms, BinaryQF, Cusp, Mat2};
use rigid_cocycles::Error;

fn cusp(n: i64, d: i64) -> Cusp {
    Cusp::new(BigInt::from(n), BigInt::from(d))
}

fn params() -> JParams {
    JParams::new(3, 3, 13).unwrap()
}

fn pt(a: (i64, i64), b: (i64, i64), prec: i64) -> QuadExtElem {
    QuadExtElem::from_rationals(3, 2, &rat(a.0, a.1), &rat(b.0, b.1), prec)
}

/// binom(n, j) with the falling-factorial convention for negative n and 0 for j < 0.
fn gbinom(n: i64, j: i64) -> BigInt {
    if j < 0 || (n >= 0 && j > n) {
        return BigInt::zero();
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for t in 0..j {
        num *= BigInt::from(n - t);
        den *= BigInt::from(t + 1);
    }
    num / den
}

#[test]
fn binomial_examples() {
    let (lhs, rhs, _) = binomial_identity_sides(3, 2, 1);
    assert_eq!((lhs, rhs), (BigInt::from(36), BigInt::from(36)));
    assert!(binomial_identity_check(3, 2, 1));
    for l in 3..5 {
        let (lhs, rhs, _) = binomial_identity_sides(3, 2, l);
        assert!(lhs.is_zero() && rhs.is_zero());
    }
}

#[test]
fn binomial_identity_exhaustive_with_own_binomials() {
    for k in 1..=10i64 {
        for i in 0..=2 * k - 2 {
            for l in 0..=2 * k - 2 {
                let mut sum = BigInt::zero();
                let mut negative = false;
                for t in 0..=k - 1 {
                    let term = gbinom(k - 1, t) * gbinom(k - 1, 2 * k - 2 - i - t) * gbinom(i + t - k + 1, l);
                    negative |= i + t - k + 1 < 0 && !term.is_zero();
                    sum += term;
                }
                let lhs = gbinom(2 * k - 2, k - 1) * sum;
                let rhs = gbinom(2 * k - 2, i) * gbinom(i, l) * gbinom(2 * k - 2 - l, k - 1);
                assert_eq!(lhs, rhs, "(k, i, l) = ({k}, {i}, {l})");
                assert_eq!(binomial_identity_sides(k, i, l), (lhs, rhs, negative));
                assert!(binomial_identity_check(k, i, l));
            }
        }
    }
}

/// The residue on the standard annulus as the sum of the partial-fraction residues at
/// the roots lying in Zp, computed in Q(sqrt disc) and embedded.
fn residue_oracle(q: &BinaryQF, i: i64, k: i64, p: u64, prec: i64) -> PadicElem {
    let disc = q.disc();
    let (v, d0) = split_p(&disc, p);
    let sqrt = canonical_sqrt_d(&d0, p, prec + 40).unwrap().shift(v / 2);
    let pf = partial_fraction(q, i, k).unwrap();
    let work = prec + 40;
    let a_mk = PadicElem::from_int(p, &q.a, work).pow(-k).unwrap();
    let mut acc = PadicElem::zero(p, work);
    if pf.r1.embed(&sqrt, work).val() >= 0 {
        acc = &acc + &pf.a[0].embed(&sqrt, work);
    }
    if pf.r2.embed(&sqrt, work).val() >= 0 {
        acc = &acc + &pf.b[0].embed(&sqrt, work);
    }
    &acc * &a_mk
}

#[test]
fn residue_vanishing_cases() {
    let q = BinaryQF::new(1, 3, -5);
    for i in 0..=4 {
        assert!(annular_residue(&q, i, 3, 5, 10).unwrap().is_zero());
    }
    let q = BinaryQF::new(5, 5, -5);
    for i in 0..=4 {
        assert!(annular_residue(&q, i, 3, 5, 10).unwrap().is_zero());
    }
}

#[test]
fn residue_matches_partial_fractions_for_example() {
    let q = BinaryQF::new(5, 3, -1);
    for i in 0..=4 {
        let got = annular_residue(&q, i, 3, 5, 12).unwrap();
        let want = residue_oracle(&q, i, 3, 5, 12);
        assert!(!got.is_zero());
        assert!(got.agrees_to(&want, 12), "i = {i}: {got} vs {want}");
    }
}

#[test]
fn residue_matches_partial_fractions_to_disc_200() {
    for p in [3u64, 5, 7] {
        let pb = BigInt::from(p);
        for disc in 5..=200i64 {
            let db = BigInt::from(disc);
            if !matches!(disc % 4, 0 | 1) || rigid_cocycles::arith::is_square(&db) || legendre(&db, p) != 1 {
                continue;
            }
            for q in enumerate_simple(&db).unwrap().into_iter().filter(|q| (&q.a % &pb).is_zero()) {
                for k in [1i64, 3] {
                    for i in 0..=2 * k - 2 {
                        let got = annular_residue(&q, i, k, p, 10).unwrap();
                        let want = residue_oracle(&q, i, k, p, 10);
                        assert!(got.agrees_to(&want, 10), "{q} p={p} k={k} i={i}");
                    }
                }
            }
        }
    }
}

#[test]
fn residues_vanish_on_deeper_layers() {
    for p in [3u64, 5] {
        let pb = BigInt::from(p);
        for disc in 5..=200i64 {
            let db = BigInt::from(disc);
            if !matches!(disc % 4, 0 | 1) || rigid_cocycles::arith::is_square(&db) || !(&db % &pb).is_zero() {
                continue;
            }
            let (v, d0) = split_p(&db, p);
            if v % 2 == 1 || legendre(&d0, p) != 1 {
                continue;
            }
            for q in enumerate_simple(&db).unwrap() {
                if (q.content() % &pb).is_zero() {
                    continue;
                }
                for i in 0..=4 {
                    assert!(annular_residue(&q, i, 3, p, 10).unwrap().is_zero(), "{q} p={p}");
                    assert!(residue_oracle(&q, i, 3, p, 10).is_zero(), "{q} p={p}");
                }
            }
        }
    }
}

#[test]
fn kappa_is_scaled_s_poly() {
    let pr = JParams::new(5, 3, 29).unwrap();
    let kp = kappa(&pr, &Cusp::from_int(0), &Cusp::infinity(), 10).unwrap();
    let golden: Vec<BigInt> = [0, 24, 0, -120, 0].into_iter().map(BigInt::from).collect();
    assert_eq!(kp.spoly, golden);
    let sqrt = canonical_sqrt_d(&BigInt::from(29), 5, 30).unwrap();
    let scale = PadicElem::from_i64(5, 6, 30).div(&PadicElem::from_i64(5, 29 * 29, 30)).unwrap().div(&sqrt).unwrap();
    for (c, s) in kp.coeffs.coeffs.iter().zip(&golden) {
        let want = &PadicElem::from_int(5, s, 30) * &scale;
        assert!(c.agrees_to(&want, 10));
    }
}

#[test]
fn res0_equals_kappa_at_zero_infinity() {
    let pr = params();
    let (r, s) = (Cusp::from_int(0), Cusp::infinity());
    let res = res0_j(&pr, &r, &s, 4, 10).unwrap();
    let kp = kappa(&pr, &r, &s, 10).unwrap();
    assert!(res.agrees_to(&kp.coeffs, 10));
    let back = res0_j(&pr, &s, &r, 4, 10).unwrap();
    for (x, y) in res.coeffs.iter().zip(&back.coeffs) {
        assert!((x + y).agrees_to(&PadicElem::zero(3, 10), 10));
    }
}

/// For D = 5 and p = 11 no simple form of discriminant 5 has 11 | a, since b^2 - 5 = -4.
#[test]
fn res0_vanishes_without_linked_heegner_forms() {
    let pr = JParams::new(11, 3, 5).unwrap();
    let (r, s) = (Cusp::from_int(0), Cusp::infinity());
    assert!(linked_heegner_forms(&BigInt::from(5), 11, &r, &s).unwrap().is_empty());
    let res = res0_j(&pr, &r, &s, 2, 8).unwrap();
    assert!(res.coeffs.iter().all(|c| c.is_zero()));
    assert!(kappa(&pr, &r, &s, 8).unwrap().spoly.iter().all(|c| c.is_zero()));
}

#[test]
fn kappa_rejects_bad_parameters() {
    assert!(matches!(JParams::new(3, 2, 13), Err(Error::InvalidWeight(2))));
    let pr = JParams::new(3, 3, 5).unwrap();
    assert!(matches!(kappa(&pr, &Cusp::from_int(0), &Cusp::infinity(), 5), Err(Error::NotSplit(_))));
}

#[test]
fn j_antisymmetry_and_determinism() {
    let pr = params();
    let z = pt((1, 1), (1, 3), 40);
    let (r, s) = (cusp(-2, 5), cusp(7, 3));
    let a = eval_j(&pr, &r, &s, &z, 6).unwrap();
    let b = eval_j(&pr, &s, &r, &z, 6).unwrap();
    assert!((&a.value.value + &b.value.value).agrees_to(&QuadExtElem::zero(3, 2, 6), 6));
    let again = eval_j(&pr, &r, &s, &z, 6).unwrap();
    assert_eq!(again.value.value, a.value.value);
    assert_eq!(again.forms_used, a.forms_used);
}

#[test]
fn j_invariance_under_generators() {
    let pr = params();
    let (r, s) = (Cusp::from_int(0), Cusp::infinity());
    let z = pt((1, 1), (1, 1), 60);
    let m = 5;
    let base = eval_j(&pr, &r, &s, &z, m).unwrap().value.value;
    for g in [Mat2::s(), Mat2::t_int(1), Mat2::d_mat(3)] {
        let gz = g.act_qext(&z).unwrap();
        let moved = eval_j(&pr, &g.act_cusp(&r), &g.act_cusp(&s), &gz, m).unwrap().value.value;
        let lhs = &g.j_factor(&z).pow(-6).unwrap() * &moved;
        assert!(lhs.agrees_to(&base, m), "g = {g}");
    }
}

#[test]
fn j_tail_contract() {
    let pr = params();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let m = rng.gen_range(2..6);
        let a = rng.gen_range(0..9);
        let z = if rng.gen_bool(0.5) { pt((a, 1), (1, 1), 60) } else { pt((a, 1), (rng.gen_range(1..3), 3), 60) };
        let short = eval_j(&pr, &Cusp::from_int(0), &Cusp::infinity(), &z, m).unwrap();
        let long = eval_j(&pr, &Cusp::from_int(0), &Cusp::infinity(), &z, m + 2 * pr.k).unwrap();
        assert_eq!(long.layers, short.layers + 2);
        assert!(short.value.value.agrees_to(&long.value.value, m), "z = {z}, M = {m}");
        assert!(short.value.guaranteed_abs_prec >= m);
    }
}

#[test]
fn j_rejects_boundary_points() {
    let z = pt((1, 3), (0, 1), 20);
    assert_eq!(eval_j(&params(), &Cusp::from_int(0), &Cusp::infinity(), &z, 4).unwrap_err(), Error::OnBoundary);
}

#[test]
fn varpi_is_an_involution() {
    let j = JFunction::zero_infinity(params());
    let twice = varpi(varpi(&j));
    for z in [pt((1, 1), (1, 1), 60), pt((2, 1), (1, 3), 60)] {
        let a = twice.eval(&z, 5).unwrap().value;
        let b = j.eval(&z, 5).unwrap().value;
        assert!(a.agrees_to(&b, 5), "{z}");
    }
    let zero = ZeroFunction { p: 3, u: 2, weight: 6 };
    assert!(varpi(&zero).eval(&pt((1, 1), (1, 1), 20), 8).unwrap().value.is_zero());
}

#[test]
fn phi_tau_is_even_in_q0() {
    let z = pt((1, 1), (1, 1), 60);
    let a = PhiTauFunction::new(3, 3, BinaryQF::new(1, 1, -3)).unwrap().evaluate(&z, 6).unwrap();
    let b = PhiTauFunction::new(3, 3, BinaryQF::new(-1, -1, 3)).unwrap().evaluate(&z, 6).unwrap();
    assert!(a.value.value.agrees_to(&b.value.value, 6));
    assert!(!a.empty && a.forms_used > 0);
}

#[test]
fn phi_tau_empty_slice() {
    let z = pt((1, 1), (1, 1), 30);
    let e = eval_phi_tau(3, 3, &BinaryQF::new(1, 1, -3), &z, &BigInt::from(12), None).unwrap();
    assert!(e.empty);
    assert!(e.value.value.is_zero());
    assert_eq!(e.forms_used, 0);
}

#[test]
fn phi_tau_layers_use_primitive_forms() {
    let z = pt((1, 1), (1, 1), 30);
    let bound = BigInt::from(13 * 81);
    let e = eval_phi_tau(3, 3, &BinaryQF::new(1, 1, -3), &z, &bound, None).unwrap();
    let slice = rigid_cocycles::cocycles::orbit_slice(&BinaryQF::new(1, 1, -3), 3, &bound, None).unwrap();
    let sizes: Vec<usize> = slice.layers.values().map(|v| v.len()).collect();
    assert_eq!(sizes, vec![12, 40, 160]);
    assert_eq!(e.forms_used, 212);
    for (n, forms) in &slice.layers {
        for q in forms {
            assert_eq!(q.disc(), BigInt::from(13) * BigInt::from(9).pow(*n as u32));
            assert!(!(q.content().mod_floor(&BigInt::from(3))).is_zero());
            assert!(q.a.clone() * q.c.clone() < BigInt::zero());
        }
    }
}
