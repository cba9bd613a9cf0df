//! Integral binary quadratic forms, SL2 matrices, cusps and intersection numbers.

mod forms;
mod heegner;
mod matrix;

pub use forms::{
    enumerate_simple, intersection, linked_forms, padic_intersection, validate_disc, BinaryQF, P1Point,
};
pub use heegner::{linked_heegner_forms, s_poly};
pub(crate) use heegner::{check_split, check_weight};
pub use matrix::{Cusp, Mat2};

/// Applies the right action (Q|g)(x, y) = Q(ax + by, cx + dy) for integral g.
pub fn act(q: &BinaryQF, g: &Mat2) -> BinaryQF {
    q.act(g)
}
