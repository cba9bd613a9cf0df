//! Adaptive Gauss-Kronrod (7, 15) integration of complex-valued functions on an interval.

use num_complex::Complex64;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        kron += s * WGK[j];
        if j % 2 == 1 {
            gauss += s * WG[j / 2];
        }
    }
    (kron * h, ((kron - gauss) * h).norm())
}

pub const MAX_PIECES: usize = 1 << 16;

/// Integral of f over [a, b] with its estimated absolute error; `tol` is relative to
/// the integral of |f|. Subdivision stops after `MAX_PIECES` panels.
pub fn integrate<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64, tol: f64) -> (Complex64, f64) {
    let mut stack = vec![(a, b, 0u32)];
    let mut total = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    let width = (b - a).abs();
    let (mag, _) = gk15(&|x| Complex64::new(f(x).norm(), 0.0), a, b);
    let tol = tol * mag.re.abs().max(f64::MIN_POSITIVE);
    let mut pieces = 0;
    while let Some((lo, hi, depth)) = stack.pop() {
        pieces += 1;
        let (v, e) = gk15(f, lo, hi);
        let local_tol = tol * ((hi - lo).abs() / width).max(1e-12);
        if e <= local_tol || depth >= 50 || pieces >= MAX_PIECES {
            total += v;
            err += e;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((mid, hi, depth + 1));
            stack.push((lo, mid, depth + 1));
        }
    }
    (total, err)
}
