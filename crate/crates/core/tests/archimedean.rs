use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rigid_cocycles::archimedean::{
    closed_geodesic_integral, g_term, omega_bar_coeffs, partial_fraction, period_polynomial, period_polynomial_by_integrals,
    quadrature_geodesic_integral, ComplexVal,
};
use rigid_cocycles::arith::rat;
use rigid_cocycles::quadforms::{intersection, s_poly, BinaryQF, Cusp};
use rigid_cocycles::verify::{quadrature_matrix, random_simple_forms};
use rigid_cocycles::Error;
use std::f64::consts::PI;

fn cusp(n: i64, d: i64) -> Cusp {
    Cusp::new(BigInt::from(n), BigInt::from(d))
}

fn c64(x: &ComplexVal) -> Complex64 {
    x.z()
}

/// Composite Simpson rule on the upper semicircle from r to s.
fn simpson(q: &BinaryQF, i: i64, k: i64, r: f64, s: f64, n: usize) -> Complex64 {
    let (a, b, c) = (q.a.to_f64().unwrap(), q.b.to_f64().unwrap(), q.c.to_f64().unwrap());
    let centre = 0.5 * (r + s);
    let rho = 0.5 * (s - r).abs();
    let (t0, t1) = if r < s { (PI, 0.0) } else { (0.0, PI) };
    let f = |t: f64| {
        let e = Complex64::new(0.0, t).exp();
        let z = centre + e * rho;
        let qz = (z * z * a + z * b + c) / a;
        z.powi(i as i32) / qz.powi(k as i32) * Complex64::new(0.0, rho) * e
    };
    let h = (t1 - t0) / n as f64;
    let mut acc = f(t0) + f(t1);
    for j in 1..n {
        acc += f(t0 + h * j as f64) * if j % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * h / 3.0
}

#[test]
fn partial_fractions_reproduce_the_rational_function() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for q in random_simple_forms(&mut rng, 20) {
        let k = rng.gen_range(1..=5);
        let i = rng.gen_range(0..=2 * k - 2);
        let pf = partial_fraction(&q, i, k).unwrap();
        let (r1, r2) = (pf.r1.to_f64(), pf.r2.to_f64());
        for _ in 0..5 {
            let z = Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(0.1..3.0));
            let lhs = z.powi(i as i32) / ((z - r1) * (z - r2)).powi(k as i32);
            let mut rhs = Complex64::new(0.0, 0.0);
            for l in 1..=k {
                rhs += pf.a[(l - 1) as usize].to_f64() / (z - r1).powi(l as i32);
                rhs += pf.b[(l - 1) as usize].to_f64() / (z - r2).powi(l as i32);
            }
            assert!((lhs - rhs).norm() <= 1e-9 * (1.0 + lhs.norm()), "{q} i={i} k={k} z={z}");
        }
    }
}

#[test]
fn partial_fraction_argument_checks() {
    let q = BinaryQF::new(1, 1, -1);
    assert_eq!(partial_fraction(&q, 0, 0).unwrap_err(), Error::InvalidWeight(0));
    assert!(matches!(partial_fraction(&q, 5, 3), Err(Error::ConfigInvalid { .. })));
}

/// Negating the roots multiplies A_l by (-1)^(i+l).
#[test]
fn partial_fractions_of_the_reflected_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for q in random_simple_forms(&mut rng, 50) {
        let k = rng.gen_range(1..=4);
        let i = rng.gen_range(0..=2 * k - 2);
        let tilde = BinaryQF::new(q.a.clone(), -&q.b, q.c.clone());
        let pf = partial_fraction(&q, i, k).unwrap();
        let pt = partial_fraction(&tilde, i, k).unwrap();
        let matched = if pt.r1 == -&pf.r1 { &pt.a } else { &pt.b };
        assert!(pt.r1 == -&pf.r1 || pt.r2 == -&pf.r1);
        for l in 1..=k {
            let sign = if (i + l) % 2 == 0 { 1 } else { -1 };
            assert_eq!(matched[(l - 1) as usize], pf.a[(l - 1) as usize].scale(&rat(sign, 1)), "{q} i={i} k={k} l={l}");
        }
    }
}

#[test]
fn closed_form_matches_simpson() {
    let forms = [BinaryQF::new(1, 1, -1), BinaryQF::new(3, 1, -1), BinaryQF::new(-2, 3, 3)];
    let pairs = [(-2, 1), (0, 1), (3, -1)];
    for q in &forms {
        for k in [3, 5] {
            for (r, s) in pairs {
                for i in 0..=2 * k - 2 {
                    let closed = closed_geodesic_integral(q, i, k, &Cusp::from_int(r), &Cusp::from_int(s)).unwrap();
                    let oracle = simpson(q, i, k, r as f64, s as f64, 200_000);
                    assert!((c64(&closed) - oracle).norm() <= 1e-6 * (1.0 + oracle.norm()), "{q} k={k} i={i} ({r},{s})");
                }
            }
        }
    }
}

#[test]
fn closed_form_matches_adaptive_quadrature() {
    let (worst, cases) = quadrature_matrix().unwrap();
    assert_eq!(cases, 30);
    assert!(worst < 1e-6, "{worst}");
    let q = BinaryQF::new(1, 5, -3);
    let b = quadrature_geodesic_integral(&q, 2, 3, &cusp(1, 2), &Cusp::from_int(3), 1e-13).unwrap();
    assert!(b.err < 1e-9);
}

#[test]
fn swapping_endpoints_negates() {
    let q = BinaryQF::new(2, 1, -2);
    for (r, s) in [(cusp(-3, 1), cusp(1, 2)), (cusp(0, 1), cusp(2, 1)), (cusp(-1, 3), cusp(5, 2))] {
        for i in 0..=4 {
            let a = closed_geodesic_integral(&q, i, 3, &r, &s).unwrap();
            let b = closed_geodesic_integral(&q, i, 3, &s, &r).unwrap();
            assert!((c64(&a) + c64(&b)).norm() < 1e-10);
        }
    }
}

#[test]
fn root_endpoints_and_infinite_cusps_are_rejected() {
    let q = BinaryQF::new(1, 0, -1);
    assert_eq!(closed_geodesic_integral(&q, 0, 3, &Cusp::from_int(1), &Cusp::from_int(2)), Err(Error::EndpointIsRoot));
    assert_eq!(quadrature_geodesic_integral(&q, 0, 3, &Cusp::from_int(-1), &Cusp::from_int(2), 1e-10), Err(Error::EndpointIsRoot));
    let q = BinaryQF::new(1, 1, -1);
    assert!(closed_geodesic_integral(&q, 0, 3, &Cusp::from_int(0), &Cusp::infinity()).is_err());
}

#[test]
fn unlinked_geodesic_is_pure_real_part() {
    let q = BinaryQF::new(1, 1, -1);
    let (r, s) = (Cusp::from_int(1), Cusp::from_int(3));
    assert_eq!(intersection(&q, &r, &s).unwrap(), 0);
    for i in 0..=4 {
        let v = closed_geodesic_integral(&q, i, 3, &r, &s).unwrap();
        assert_eq!(v.im, 0.0);
        assert_eq!(v.re, g_term(&partial_fraction(&q, i, 3).unwrap(), 1.0, 3.0));
    }
}

#[test]
fn linked_geodesic_picks_up_half_residue() {
    let q = BinaryQF::new(1, 1, -1);
    let (r, s) = (Cusp::from_int(0), Cusp::from_int(1));
    let m = intersection(&q, &r, &s).unwrap();
    assert_ne!(m, 0);
    for i in 0..=4 {
        let pf = partial_fraction(&q, i, 3).unwrap();
        let v = closed_geodesic_integral(&q, i, 3, &r, &s).unwrap();
        assert!((v.im + PI * m as f64 * pf.a[0].to_f64()).abs() < 1e-12);
    }
}

#[test]
fn period_polynomial_is_scaled_s_poly() {
    let d = BigInt::from(13);
    let (zero, inf) = (Cusp::from_int(0), Cusp::infinity());
    let pp = period_polynomial(3, &d, 3, &zero, &inf).unwrap();
    let sp = s_poly(3, &d, 3, &zero, &inf).unwrap();
    let c = 3.0 * PI * 6.0 / (13.0f64.powi(2) * 13.0f64.sqrt());
    for (x, n) in pp.coeffs.iter().zip(&sp) {
        assert!(x.re.abs() < 1e-15);
        assert!((x.im - c * n.to_f64().unwrap()).abs() < 1e-12);
    }
    for (deg, x) in pp.coeffs.iter().enumerate() {
        if deg % 2 == 0 {
            assert_eq!(x.abs(), 0.0, "degree {deg}");
        }
    }
    assert!(pp.coeffs.iter().any(|x| x.abs() > 0.0));
}

#[test]
fn period_polynomial_is_a_modular_symbol() {
    let d = BigInt::from(13);
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut pick = || if rng.gen_ratio(1, 10) { Cusp::infinity() } else { cusp(rng.gen_range(-40..40), rng.gen_range(1..25)) };
    for _ in 0..20 {
        let (r, s, t) = (pick(), pick(), pick());
        let rs = period_polynomial(3, &d, 3, &r, &s).unwrap();
        let sr = period_polynomial(3, &d, 3, &s, &r).unwrap();
        let st = period_polynomial(3, &d, 3, &s, &t).unwrap();
        let rt = period_polynomial(3, &d, 3, &r, &t).unwrap();
        for j in 0..rs.coeffs.len() {
            assert!((c64(&rs.coeffs[j]) + c64(&sr.coeffs[j])).norm() < 1e-8);
            assert!((c64(&rs.coeffs[j]) + c64(&st.coeffs[j]) - c64(&rt.coeffs[j])).norm() < 1e-8);
        }
    }
}

#[test]
fn omega_coefficients() {
    let entries = omega_bar_coeffs(3, 3, 20).unwrap();
    let nonzero: Vec<i64> = entries.iter().filter(|e| !e.is_zero()).map(|e| e.d.to_i64().unwrap()).collect();
    assert_eq!(nonzero, vec![13]);
    let five = entries.iter().find(|e| e.d == BigInt::from(5)).unwrap();
    assert!(five.is_zero());
    assert!(entries.iter().all(|e| e.d != BigInt::from(4) && e.d != BigInt::from(16) && e.d != BigInt::from(7)));
    let e13 = entries.iter().find(|e| e.d == BigInt::from(13)).unwrap();
    assert_eq!(e13.spoly, s_poly(3, &BigInt::from(13), 3, &Cusp::from_int(0), &Cusp::infinity()).unwrap());
    assert_eq!(e13.scale_num, "13^(5/2)");

    let mut prev = 0;
    for dmax in [10, 20, 40, 60] {
        let n = omega_bar_coeffs(3, 3, dmax).unwrap().len();
        assert!(n >= prev);
        prev = n;
    }
}

/// The term-by-term integrals and the closed constant differ by the fixed factor -2/3.
#[test]
fn integral_path_ratio_to_closed_constant() {
    let d = BigInt::from(13);
    let (r, s) = (cusp(-1, 2), cusp(1, 3));
    let one = period_polynomial(3, &d, 3, &r, &s).unwrap();
    let two = period_polynomial_by_integrals(3, &d, 3, &r, &s, 20).unwrap();
    assert!(two.forms_used > 0);
    let mut seen = 0;
    for (a, b) in one.coeffs.iter().zip(&two.coeffs) {
        if a.abs() > 1e-9 {
            let ratio = c64(b) / c64(a);
            assert!((ratio - Complex64::new(-2.0 / 3.0, 0.0)).norm() < 1e-6, "{ratio}");
            seen += 1;
        } else {
            assert!(b.abs() < 1e-6);
        }
    }
    assert!(seen > 0);
}

#[test]
fn simple_poles_for_weight_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for q in random_simple_forms(&mut rng, 10) {
        let pf = partial_fraction(&q, 0, 1).unwrap();
        let want = (&pf.r1 - &pf.r2).inv().unwrap();
        assert_eq!(pf.a, vec![want.clone()]);
        assert_eq!(pf.b, vec![-&want]);
    }
}

#[test]
fn quadrature_agreement_on_random_forms() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let (r, s) = (Cusp::from_int(-2), Cusp::from_int(1));
    let forms: Vec<BinaryQF> = random_simple_forms(&mut rng, 40)
        .into_iter()
        .filter(|q| !q.eval_rat(&rat(-2, 1)).is_zero() && !q.eval_rat(&rat(1, 1)).is_zero())
        .take(5)
        .collect();
    assert_eq!(forms.len(), 5);
    for q in &forms {
        for i in 0..=4 {
            let a = closed_geodesic_integral(q, i, 3, &r, &s).unwrap();
            let b = quadrature_geodesic_integral(q, i, 3, &r, &s, 1e-13).unwrap();
            assert!(a.dist(&b) <= 1e-8 * b.abs().max(1.0), "{q} i={i}: {} vs {}", c64(&a), c64(&b));
        }
    }
}
