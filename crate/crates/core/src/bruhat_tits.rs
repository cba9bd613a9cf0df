//! The Bruhat-Tits tree of PGL2(Qp) through its ends: vertices are closed
//! discs in Qp, an oriented edge is recorded by the open compact set U(e)
//! of ends it points to, and the standard edge e0 has U(e0) = Zp.

use crate::arith::{val_rat, PadicElem, QuadExtElem, Rat};
use crate::error::{Error, Result};
use crate::quadforms::Mat2;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::fmt;

/// A closed disc {x : val(x - center) >= level}, or its complement in P1(Qp) when `co` is set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "BallRepr", try_from = "BallRepr")]
pub struct Ball {
    pub p: u64,
    pub center: Rat,
    pub level: i64,
    pub co: bool,
}

#[derive(Serialize, Deserialize)]
struct BallRepr {
    center: String,
    level: i64,
    #[serde(rename = "coInfinite")]
    co_infinite: bool,
}

impl From<Ball> for BallRepr {
    fn from(b: Ball) -> Self {
        let c = PadicElem::from_rational(b.p, &b.center, b.level);
        BallRepr { center: c.to_string(), level: b.level, co_infinite: b.co }
    }
}

impl TryFrom<BallRepr> for Ball {
    type Error = Error;
    fn try_from(r: BallRepr) -> Result<Self> {
        let c: PadicElem = r.center.parse()?;
        let center = c.to_rational();
        Ok(Ball { p: c.p(), center: canonical_center(c.p(), &center, r.level), level: r.level, co: r.co_infinite })
    }
}

/// A point of P1(Qp).
#[derive(Clone, Debug)]
pub enum ProjPoint {
    Infinity,
    Finite(PadicElem),
}

fn canonical_center(p: u64, c: &Rat, level: i64) -> Rat {
    if c.is_zero() {
        return Rat::zero();
    }
    let e = PadicElem::from_rational(p, c, level);
    e.to_rational()
}

impl Ball {
    pub fn finite(p: u64, center: &Rat, level: i64) -> Self {
        Ball { p, center: canonical_center(p, center, level), level, co: false }
    }

    pub fn cofinite(p: u64, center: &Rat, level: i64) -> Self {
        Ball { p, center: canonical_center(p, center, level), level, co: true }
    }

    pub fn complement(&self) -> Self {
        Ball { co: !self.co, ..self.clone() }
    }

    /// The disc underlying the ball or its complement.
    pub fn disc(&self) -> Ball {
        Ball { co: false, ..self.clone() }
    }

    pub fn contains_rat(&self, x: &Rat) -> bool {
        let inside = (x - &self.center).is_zero() || val_rat(&(x - &self.center), self.p) >= self.level;
        inside != self.co
    }

    pub fn contains(&self, x: &ProjPoint) -> bool {
        match x {
            ProjPoint::Infinity => self.co,
            ProjPoint::Finite(t) => {
                let c = PadicElem::from_rational(self.p, &self.center, t.prec());
                let d = t - &c;
                let inside = d.val() >= self.level;
                inside != self.co
            }
        }
    }

    fn affine(&self, alpha: &Rat, beta: &Rat) -> Ball {
        let c = alpha * &self.center + beta;
        let m = self.level + val_rat(alpha, self.p);
        Ball { p: self.p, center: canonical_center(self.p, &c, m), level: m, co: self.co }
    }

    fn inversion(&self) -> Ball {
        let p = self.p;
        let zero_inside = self.center.is_zero() || val_rat(&self.center, p) >= self.level;
        if zero_inside {
            Ball { p, center: Rat::zero(), level: 1 - self.level, co: !self.co }
        } else {
            let v = val_rat(&self.center, p);
            let c = self.center.recip();
            let m = self.level - 2 * v;
            Ball { p, center: canonical_center(p, &c, m), level: m, co: self.co }
        }
    }

    /// Image under the Mobius transformation of an invertible matrix.
    pub fn image(&self, g: &Mat2) -> Ball {
        if g.c.is_zero() {
            return self.affine(&(&g.a / &g.d), &(&g.b / &g.d));
        }
        // gz = a/c - det / (c (cz + d))
        let step1 = self.affine(&g.c, &g.d).inversion();
        step1.affine(&(-g.det() / &g.c), &(&g.a / &g.c))
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base = format!("{} + {}^{} Z_{}", self.center, self.p, self.level, self.p);
        if self.co {
            write!(f, "P1 - ({base})")
        } else {
            write!(f, "{base}")
        }
    }
}

/// Distance between the vertices attached to two discs.
pub fn tree_distance(b1: &Ball, b2: &Ball) -> i64 {
    let p = b1.p;
    let diff = &b1.center - &b2.center;
    let mut log_r = (-b1.level).max(-b2.level);
    if !diff.is_zero() {
        log_r = log_r.max(-val_rat(&diff, p));
    }
    2 * log_r + b1.level + b2.level
}

pub fn v0(p: u64) -> Ball {
    Ball::finite(p, &Rat::zero(), 0)
}

/// An oriented edge, identified with the set U(e) of ends it points to.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TreeEdge {
    pub u: Ball,
}

impl TreeEdge {
    pub fn e0(p: u64) -> Self {
        TreeEdge { u: v0(p) }
    }

    pub fn new(u: Ball) -> Self {
        TreeEdge { u }
    }

    pub fn reverse(&self) -> Self {
        TreeEdge { u: self.u.complement() }
    }

    pub fn target(&self) -> Ball {
        let d = self.u.disc();
        if self.u.co {
            Ball::finite(d.p, &d.center, d.level - 1)
        } else {
            d
        }
    }

    pub fn source(&self) -> Ball {
        let d = self.u.disc();
        if self.u.co {
            d
        } else {
            Ball::finite(d.p, &d.center, d.level - 1)
        }
    }

    /// Edges in the orbit of e0 are even: their target is at even distance from v0.
    pub fn is_even(&self) -> bool {
        tree_distance(&self.target(), &v0(self.u.p)) % 2 == 0
    }

    /// Distance from v0 to the farther endpoint.
    pub fn depth(&self) -> i64 {
        let p = self.u.p;
        tree_distance(&self.target(), &v0(p)).max(tree_distance(&self.source(), &v0(p)))
    }

    /// The exponent alpha(e) used in the growth bounds, when defined.
    pub fn alpha(&self) -> Option<i64> {
        if !self.u.co {
            Some(self.u.level)
        } else if !self.u.contains_rat(&Rat::zero()) {
            Some(-self.u.level)
        } else {
            None
        }
    }

    pub fn image(&self, g: &Mat2) -> Self {
        TreeEdge { u: self.u.image(g) }
    }
}

impl fmt::Display for TreeEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "U = {}", self.u)
    }
}

/// Distance from v0 to the vertex to which z reduces.
pub fn depth(z: &QuadExtElem) -> Result<i64> {
    if z.b.is_zero() {
        return Err(Error::OnBoundary);
    }
    let m = z.b.val();
    if z.a.prec() < m {
        return Err(Error::PrecisionLoss { got: z.a.prec(), wanted: m });
    }
    let mut log_r = (-m).max(0);
    if !z.a.is_zero() && z.a.val() < m {
        log_r = log_r.max(-z.a.val());
    }
    Ok(2 * log_r + m)
}

/// The covering of P1(Qp) by the edges at level n: the discs a + p^n Zp and
/// the images under S of the discs p b + p^n Zp.
pub fn level_partition(p: u64, n: i64) -> Result<Vec<TreeEdge>> {
    if n < 1 {
        return Err(Error::LevelTooShallow(n));
    }
    let pn = crate::arith::pow_p(p, n);
    let pn1 = crate::arith::pow_p(p, n - 1);
    let mut out = Vec::new();
    let mut a = num_bigint::BigInt::zero();
    while a < pn {
        out.push(TreeEdge::new(Ball::finite(p, &Rat::from_integer(a.clone()), n)));
        a += 1;
    }
    let s = Mat2::s();
    let mut b = num_bigint::BigInt::zero();
    while b < pn1 {
        let inner = Ball::finite(p, &Rat::from_integer(&b * num_bigint::BigInt::from(p)), n);
        out.push(TreeEdge::new(inner.image(&s)));
        b += 1;
    }
    Ok(out)
}

/// A matrix in SL2(Z[1/p]) carrying U(e) onto Zp, for an even edge e.
pub fn edge_to_matrix(e: &TreeEdge) -> Result<Mat2> {
    if !e.is_even() {
        return Err(Error::OddOrientation);
    }
    let u = &e.u;
    let t = Mat2::t(&(-u.center.clone()));
    if u.co {
        Ok(Mat2::s().mul(&Mat2::d_pow(u.p, -(u.level - 1) / 2)).mul(&t))
    } else {
        Ok(Mat2::d_pow(u.p, -u.level / 2).mul(&t))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn distances() {
        let p = 3;
        let b1 = Ball::finite(p, &rat(0, 1), 0);
        let b2 = Ball::finite(p, &rat(1, 3), 1);
        assert_eq!(tree_distance(&b1, &b2), 3);
        assert_eq!(tree_distance(&b1, &Ball::finite(p, &rat(0, 1), 2)), 2);
    }

    #[test]
    fn depth_examples() {
        let z = QuadExtElem::from_rationals(3, 2, &rat(0, 1), &rat(3, 1), 10);
        assert_eq!(depth(&z).unwrap(), 1);
        let z = QuadExtElem::from_rationals(3, 2, &rat(1, 3), &rat(3, 1), 10);
        assert_eq!(depth(&z).unwrap(), 3);
        let z = QuadExtElem::from_rationals(3, 2, &rat(1, 3), &rat(0, 1), 10);
        assert_eq!(depth(&z), Err(Error::OnBoundary));
    }

    #[test]
    fn partition_sizes() {
        assert_eq!(level_partition(3, 2).unwrap().len(), 12);
        assert_eq!(level_partition(3, 0), Err(Error::LevelTooShallow(0)));
    }

    #[test]
    fn edge_matrices_carry_to_zp() {
        let p = 3;
        for e in level_partition(p, 3).unwrap() {
            let e = if e.is_even() { e } else { e.reverse() };
            let g = edge_to_matrix(&e).unwrap();
            assert!(g.in_sl2_z_1p(p));
            assert_eq!(e.u.image(&g), v0(p), "{e}");
        }
        assert!(TreeEdge::e0(p).is_even());
        assert_eq!(edge_to_matrix(&TreeEdge::e0(p)).unwrap(), Mat2::identity());
    }
}
