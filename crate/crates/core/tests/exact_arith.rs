use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;
use rigid_cocycles::arith::{
    canonical_sqrt_d, hensel_sqrt, pow_p, rat, smallest_nonresidue, PadicElem, QuadExtElem, QuadFieldElem, Rat,
};
use rigid_cocycles::Error;

const PRIMES: [u64; 4] = [3, 5, 7, 11];

fn residue(x: &PadicElem, e: i64) -> BigInt {
    x.to_bigint().unwrap().mod_floor(&pow_p(x.p(), e))
}

#[test]
fn hensel_examples() {
    let r = hensel_sqrt(&PadicElem::from_i64(7, 2, 12), 3).unwrap();
    assert_eq!(residue(&r, 1), BigInt::from(3));
    assert_eq!(&r * &r, PadicElem::from_i64(7, 2, 12));

    let r = hensel_sqrt(&PadicElem::from_i64(3, 13, 12), 1).unwrap();
    assert_eq!(residue(&r, 1), BigInt::from(1));

    let r = hensel_sqrt(&PadicElem::from_i64(5, 29, 2), 2).unwrap();
    let brute: Vec<i64> = (0..25).filter(|x| (x * x - 29i64).rem_euclid(25) == 0 && x % 5 == 2).collect();
    assert_eq!(brute, vec![2]);
    assert_eq!(residue(&r, 2), BigInt::from(2));
}

#[test]
fn canonical_roots() {
    let r = canonical_sqrt_d(&BigInt::from(2), 7, 10).unwrap();
    assert_eq!(residue(&r, 1), BigInt::from(3));
    let r = canonical_sqrt_d(&BigInt::from(13), 3, 10).unwrap();
    assert_eq!(residue(&r, 1), BigInt::from(1));
    let r = canonical_sqrt_d(&BigInt::from(29), 5, 10).unwrap();
    assert_eq!(residue(&r, 1), BigInt::from(2));
    assert_eq!(residue(&r, 2), BigInt::from(2));
    assert_eq!(&r * &r, PadicElem::from_i64(5, 29, 10));
    assert!(matches!(canonical_sqrt_d(&BigInt::from(5), 3, 10), Err(Error::NotSplit(_))));
}

#[test]
fn nonresidues() {
    assert_eq!(smallest_nonresidue(3), 2);
    assert_eq!(smallest_nonresidue(5), 2);
    assert_eq!(smallest_nonresidue(7), 3);
    assert_eq!(smallest_nonresidue(17), 3);
}

#[test]
fn string_format() {
    let x = PadicElem::from_rational(3, &rat(5, 9), 4);
    assert_eq!(x.val(), -2);
    assert_eq!(x.to_string(), "3:-2:2.1:4");
    assert_eq!("3:-2:2.1:4".parse::<PadicElem>().unwrap(), x);
    assert!("3:0:3:4".parse::<PadicElem>().is_err());
    assert!("3:1:0.1:4".parse::<PadicElem>().is_err());
    assert_eq!(PadicElem::zero(5, 7).to_string(), "5:7::7");
}

#[test]
fn precision_never_grows() {
    let x = PadicElem::from_i64(5, 7, 6);
    let y = PadicElem::from_i64(5, 3, 9);
    assert_eq!((&x + &y).prec(), 6);
    let z = PadicElem::from_i64(5, 25, 6);
    assert_eq!((&x * &z).prec(), 6);
    assert_eq!((&z * &z).prec(), 8);
    let w = z.inv().unwrap();
    assert_eq!(w.val(), -2);
    assert!(w.prec() <= 6 - 4);
    assert_eq!(PadicElem::zero(5, 6).inv(), Err(Error::DivisionByZero));
}

fn padic(p: u64, prec: i64) -> impl Strategy<Value = PadicElem> {
    (-3i64..4, 1i64..1_000_000).prop_map(move |(v, n)| {
        let x = Rat::from_integer(BigInt::from(n)) * Rat::from_integer(BigInt::from(p)).pow(v as i32);
        PadicElem::from_rational(p, &x, prec)
    })
}

fn prime_and_pair() -> impl Strategy<Value = (PadicElem, PadicElem)> {
    prop::sample::select(PRIMES.to_vec()).prop_flat_map(|p| (padic(p, 12), padic(p, 12)))
}

fn prime_and_triple() -> impl Strategy<Value = (PadicElem, PadicElem, PadicElem)> {
    prop::sample::select(PRIMES.to_vec()).prop_flat_map(|p| (padic(p, 12), padic(p, 12), padic(p, 12)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn valuation_is_additive((x, y) in prime_and_pair()) {
        let xy = &x * &y;
        if !x.is_zero() && !y.is_zero() && x.val() + y.val() < xy.prec() {
            prop_assert_eq!(xy.val(), x.val() + y.val());
        }
    }

    #[test]
    fn ultrametric((x, y) in prime_and_pair()) {
        let s = &x + &y;
        prop_assert!(s.val() >= x.val().min(y.val()).min(s.prec()));
        if x.val() != y.val() && x.val().min(y.val()) < s.prec() {
            prop_assert_eq!(s.val(), x.val().min(y.val()));
        }
    }

    #[test]
    fn ring_laws((x, y, z) in prime_and_triple()) {
        prop_assert_eq!(&x + &y, &y + &x);
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
        let lhs = &(&x + &y) * &z;
        let rhs = &(&x * &z) + &(&y * &z);
        let m = lhs.prec().min(rhs.prec());
        prop_assert!(lhs.agrees_to(&rhs, m));
        let d = &x - &x;
        prop_assert!(d.is_zero());
    }

    #[test]
    fn inverse((x, _) in prime_and_pair()) {
        prop_assume!(!x.is_zero());
        let one = &x * &x.inv().unwrap();
        prop_assert!(one.agrees_to(&PadicElem::one(x.p(), 20), one.prec()));
        prop_assert_eq!(one.prec(), x.rel_prec());
    }

    #[test]
    fn rational_reduction(n in -100_000i64..100_000, d in 1i64..10_000, idx in 0usize..4) {
        let p = PRIMES[idx];
        prop_assume!(d % p as i64 != 0);
        let x = PadicElem::from_rational(p, &rat(n, d), 9);
        let m = pow_p(p, 9);
        let rep = if x.is_zero() { BigInt::from(0) } else { x.to_bigint().unwrap() };
        prop_assert_eq!((rep * BigInt::from(d) - BigInt::from(n)).mod_floor(&m), BigInt::from(0));
    }

    #[test]
    fn string_round_trip((x, y) in prime_and_pair()) {
        for e in [&x, &y, &(&x - &x)] {
            let s = e.to_string();
            let back: PadicElem = s.parse().unwrap();
            prop_assert_eq!(&back, e);
            prop_assert_eq!(back.to_string(), s);
            let js = serde_json::to_string(e).unwrap();
            let back: PadicElem = serde_json::from_str(&js).unwrap();
            prop_assert_eq!(&back, e);
        }
    }

    #[test]
    fn quad_ext_valuation((x, y) in prime_and_pair()) {
        let u = smallest_nonresidue(x.p());
        let z = QuadExtElem::new(x.clone(), y.clone(), u);
        prop_assert_eq!(z.val(), x.val().min(y.val()));
        if !z.is_zero() {
            let w = &z * &z.inv().unwrap();
            prop_assert!(w.agrees_to(&QuadExtElem::one(x.p(), u, 30), w.prec()));
        }
    }

    #[test]
    fn hensel_idempotent(n in 1i64..100_000, idx in 0usize..4, prec in 2i64..30) {
        let p = PRIMES[idx];
        let a = PadicElem::from_i64(p, n * n, prec);
        prop_assume!(a.is_unit());
        let seed = (n.rem_euclid(p as i64)) as u64;
        let r = hensel_sqrt(&a, seed).unwrap();
        prop_assert_eq!(&(&r * &r), &a);
        let again = hensel_sqrt(&(&r * &r), seed).unwrap();
        prop_assert_eq!(again, r);
    }

    #[test]
    fn quad_field_norm(x in -1000i64..1000, y in -1000i64..1000, xd in 1i64..50, yd in 1i64..50, idx in 0usize..5) {
        let d = BigInt::from([2, 3, 5, 13, 29][idx]);
        let e = QuadFieldElem::new(&d, rat(x, xd), rat(y, yd));
        let prod = &e * &e.conj();
        prop_assert!(prod.y == Rat::from_integer(0.into()));
        prop_assert_eq!(prod.x, e.norm());
        prop_assert_eq!(e.norm(), rat(x, xd) * rat(x, xd) - Rat::from_integer(d) * rat(y, yd) * rat(y, yd));
    }
}

#[test]
fn quad_ext_valuation_bulk() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    for _ in 0..1000 {
        let p = PRIMES[rng.gen_range(0..4)];
        let u = smallest_nonresidue(p);
        let mk = |rng: &mut rand_chacha::ChaCha8Rng| {
            let v = rng.gen_range(-3..5);
            PadicElem::from_parts(p, v, BigInt::from(rng.gen_range(1..1_000_000i64)), 15)
        };
        let (a, b) = (mk(&mut rng), mk(&mut rng));
        let z = QuadExtElem::new(a.clone(), b.clone(), u);
        assert_eq!(z.val(), a.val().min(b.val()));
        let n = z.norm();
        if 2 * z.val() < n.prec() {
            assert_eq!(n.val(), 2 * z.val());
        }
    }
}
