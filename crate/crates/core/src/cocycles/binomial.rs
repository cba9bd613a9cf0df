use crate::arith::{binom, binom_falling};
use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

/// binom(n, j): zero for j < 0 or j > n >= 0, falling factorial for n < 0.
fn gbinom(n: i64, j: i64) -> BigInt {
    if j < 0 {
        BigInt::zero()
    } else if n >= 0 {
        binom(n, j)
    } else {
        binom_falling(n, j)
    }
}

/// Both sides of
/// binom(2k-2,k-1) sum_t binom(k-1,t) binom(k-1,2k-2-i-t) binom(i+t-k+1,l)
///   = binom(2k-2,i) binom(i,l) binom(2k-2-l,k-1),
/// and whether the left side used a negative upper index with a nonzero factor.
pub fn binomial_identity_sides(k: i64, i: i64, l: i64) -> (BigInt, BigInt, bool) {
    let mut sum = BigInt::zero();
    let mut negative = false;
    for t in 0..=(k - 1) {
        let outer = gbinom(k - 1, t) * gbinom(k - 1, 2 * k - 2 - i - t);
        if outer.is_zero() {
            continue;
        }
        let top = i + t - k + 1;
        let inner = gbinom(top, l);
        if top < 0 && !inner.is_zero() {
            negative = true;
        }
        sum += outer * inner;
    }
    let lhs = binom(2 * k - 2, k - 1) * sum;
    let rhs = gbinom(2 * k - 2, i) * gbinom(i, l) * gbinom(2 * k - 2 - l, k - 1);
    (lhs, rhs, negative)
}

pub fn binomial_identity_check(k: i64, i: i64, l: i64) -> bool {
    let (lhs, rhs, _) = binomial_identity_sides(k, i, l);
    lhs == rhs
}

#[derive(Clone, Debug, Serialize)]
pub struct BinomialReport {
    pub kmax: i64,
    pub checked: usize,
    pub failures: Vec<(i64, i64, i64)>,
    pub negative_upper_index: Vec<(i64, i64, i64)>,
}

/// Exhaustive check for 1 <= k <= kmax, 0 <= i, l <= 2k-2.
pub fn exhaustive_binomial_check(kmax: i64) -> BinomialReport {
    let mut rep = BinomialReport { kmax, checked: 0, failures: Vec::new(), negative_upper_index: Vec::new() };
    for k in 1..=kmax {
        for i in 0..=(2 * k - 2) {
            for l in 0..=(2 * k - 2) {
                let (lhs, rhs, neg) = binomial_identity_sides(k, i, l);
                rep.checked += 1;
                if lhs != rhs {
                    rep.failures.push((k, i, l));
                }
                if neg {
                    rep.negative_upper_index.push((k, i, l));
                }
            }
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_k3_i2_l1() {
        let (lhs, rhs, _) = binomial_identity_sides(3, 2, 1);
        assert_eq!(lhs, BigInt::from(36));
        assert_eq!(rhs, BigInt::from(36));
    }

    #[test]
    fn l_above_i_vanishes() {
        for k in 1..6 {
            for i in 0..=(2 * k - 2) {
                for l in (i + 1)..=(2 * k - 2) {
                    let (lhs, rhs, _) = binomial_identity_sides(k, i, l);
                    assert!(lhs.is_zero() && rhs.is_zero(), "{k} {i} {l}");
                }
            }
        }
    }
}
