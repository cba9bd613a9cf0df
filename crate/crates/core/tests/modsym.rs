use num_bigint::BigInt;
use proptest::prelude::*;
use rigid_cocycles::arith::{rat, QuadExtElem};
use rigid_cocycles::cocycles::{PSeriesValue, WeightedFunction, ZeroFunction};
use rigid_cocycles::modsym::{check_relations, extend_symbol, is_unimodular, manin_decompose, SymbolKernel};
use rigid_cocycles::poly::RatPoly;
use rigid_cocycles::quadforms::{intersection, linked_forms, BinaryQF, Cusp, Mat2};
use rigid_cocycles::verify::relation_points;
use rigid_cocycles::Error;

fn cusp(n: i64, d: i64) -> Cusp {
    Cusp::new(BigInt::from(n), BigInt::from(d))
}

/// Weight-0 symbol: the intersection number with a fixed form.
struct Crossing(BinaryQF);

impl SymbolKernel for Crossing {
    type Value = i32;
    fn on_pair(&self, x: &Cusp, y: &Cusp, _g: &Mat2) -> rigid_cocycles::Result<i32> {
        intersection(&self.0, x, y)
    }
    fn zero(&self) -> i32 {
        0
    }
    fn add(&self, a: &i32, b: &i32) -> i32 {
        a + b
    }
}

/// Weight-4 SL2(Z)-equivariant symbol: sum over linked forms of discriminant 13 of Q(x,1)^2.
struct LinkedSquares;

impl SymbolKernel for LinkedSquares {
    type Value = RatPoly;
    fn on_pair(&self, x: &Cusp, y: &Cusp, _g: &Mat2) -> rigid_cocycles::Result<RatPoly> {
        let mut acc = RatPoly::zero(5);
        for (q, m) in linked_forms(&BigInt::from(13), x, y)? {
            let sq = RatPoly::from_bigints(&q.power_poly(2)).scale(&rat(m as i64, 1));
            acc = &acc + &sq;
        }
        Ok(acc)
    }
    fn zero(&self) -> RatPoly {
        RatPoly::zero(5)
    }
    fn add(&self, a: &RatPoly, b: &RatPoly) -> RatPoly {
        a + b
    }
}

struct Constant {
    p: u64,
    u: u64,
}

impl WeightedFunction for Constant {
    fn p(&self) -> u64 {
        self.p
    }
    fn weight(&self) -> i64 {
        6
    }
    fn eval(&self, _z: &QuadExtElem, prec: i64) -> rigid_cocycles::Result<PSeriesValue> {
        Ok(PSeriesValue::new(QuadExtElem::one(self.p, self.u, prec), prec))
    }
}

#[test]
fn manin_examples() {
    let path = manin_decompose(&Cusp::from_int(0), &Cusp::infinity()).unwrap();
    assert_eq!(path.pairs, vec![(Cusp::from_int(0), Cusp::infinity())]);

    let path = manin_decompose(&Cusp::infinity(), &cusp(5, 3)).unwrap();
    let want = vec![
        (Cusp::infinity(), Cusp::from_int(1)),
        (Cusp::from_int(1), Cusp::from_int(2)),
        (Cusp::from_int(2), cusp(5, 3)),
    ];
    assert_eq!(path.pairs, want);

    let back = manin_decompose(&cusp(5, 3), &Cusp::infinity()).unwrap();
    let reversed: Vec<_> = want.iter().rev().map(|(x, y)| (y.clone(), x.clone())).collect();
    assert_eq!(back.pairs, reversed);

    assert_eq!(manin_decompose(&cusp(2, 7), &cusp(2, 7)), Err(Error::EqualEndpoints));
}

#[test]
fn single_pair_extension_is_kernel_value() {
    let k = Crossing(BinaryQF::new(1, 1, -1));
    let (x, y) = (Cusp::from_int(0), Cusp::infinity());
    assert_eq!(extend_symbol(&k, &x, &y).unwrap(), k.on_pair(&x, &y, &Mat2::identity()).unwrap());
    assert_eq!(extend_symbol(&k, &x, &x).unwrap(), 0);
}

#[test]
fn relations_of_trivial_functions() {
    let pts = relation_points(3, 2, 20);
    let zero = ZeroFunction { p: 3, u: 2, weight: 6 };
    assert!(check_relations(&zero, &pts, 8).unwrap().pass);
    let c = check_relations(&Constant { p: 3, u: 2 }, &pts, 8).unwrap();
    assert!(!c.pass);
    assert!(c.s_relation <= 8);
}

fn small_cusp() -> impl Strategy<Value = Cusp> {
    prop_oneof![
        1 => Just(Cusp::infinity()),
        12 => (-200i64..200, 1i64..150).prop_map(|(n, d)| cusp(n, d)),
    ]
}

fn sl2z() -> impl Strategy<Value = Mat2> {
    prop::collection::vec((any::<bool>(), -3i64..4), 1..6).prop_map(|steps| {
        steps.into_iter().fold(Mat2::identity(), |g, (s, j)| g.mul(&if s { Mat2::s() } else { Mat2::t_int(j) }))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn path_is_unimodular_and_telescopes(r in small_cusp(), s in small_cusp()) {
        prop_assume!(r != s);
        let path = manin_decompose(&r, &s).unwrap();
        prop_assert_eq!(&path.pairs.first().unwrap().0, &r);
        prop_assert_eq!(&path.pairs.last().unwrap().1, &s);
        for w in path.pairs.windows(2) {
            prop_assert_eq!(&w[0].1, &w[1].0);
        }
        for (x, y) in &path.pairs {
            let det = &y.num * &x.den - &x.num * &y.den;
            prop_assert!(det == BigInt::from(1) || det == BigInt::from(-1));
            prop_assert!(is_unimodular(x, y));
        }
        let bound = r.den.bits().max(s.den.bits()) as usize;
        prop_assert!(path.pairs.len() <= 4 * (bound + 2));
        for ((x, y), g) in path.pairs.iter().zip(path.matrices()) {
            prop_assert_eq!(&g.act_cusp(&Cusp::from_int(0)), x);
            prop_assert_eq!(&g.act_cusp(&Cusp::infinity()), y);
        }
    }

    #[test]
    fn extension_is_a_modular_symbol(r in small_cusp(), s in small_cusp(), t in small_cusp()) {
        let k = Crossing(BinaryQF::new(2, 3, -7));
        let m = |a: &Cusp, b: &Cusp| extend_symbol(&k, a, b).unwrap();
        prop_assert_eq!(m(&r, &s) + m(&s, &r), 0);
        prop_assert_eq!(m(&r, &s) + m(&s, &t), m(&r, &t));
        prop_assert_eq!(m(&r, &s), intersection(&k.0, &r, &s).unwrap());
    }

    #[test]
    fn extension_independent_of_route(r in small_cusp(), s in small_cusp(), t in small_cusp()) {
        let m = |a: &Cusp, b: &Cusp| extend_symbol(&LinkedSquares, a, b).unwrap();
        prop_assert_eq!(&m(&r, &t) + &m(&t, &s), m(&r, &s));
    }

    #[test]
    fn equivariant_kernel_gives_invariant_symbol(r in small_cusp(), s in small_cusp(), g in sl2z()) {
        let m = |a: &Cusp, b: &Cusp| extend_symbol(&LinkedSquares, a, b).unwrap();
        prop_assert_eq!(m(&g.act_cusp(&r), &g.act_cusp(&s)).act(4, &g), m(&r, &s));
    }
}
