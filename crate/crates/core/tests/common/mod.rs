#![allow(dead_code)]

use lpdo::arith::rational::rat;
use lpdo::{BigRational, ConstantMatrix, DerivPower, DiffOp, RatFunc};
use proptest::prelude::*;

pub fn x() -> RatFunc {
    RatFunc::x()
}

pub fn y() -> RatFunc {
    RatFunc::y()
}

pub fn inv_x_plus_y() -> RatFunc {
    (&x() + &y()).checked_inv().expect("nonzero")
}

/// `{0, ±1, ±2, x, y, x·y, x+y, 1/(x+y)}`.
pub fn coefficient_pool() -> Vec<RatFunc> {
    vec![
        RatFunc::integer(0),
        RatFunc::integer(1),
        RatFunc::integer(-1),
        RatFunc::integer(2),
        RatFunc::integer(-2),
        x(),
        y(),
        &x() * &y(),
        &x() + &y(),
        inv_x_plus_y(),
    ]
}

pub fn coefficient() -> impl Strategy<Value = RatFunc> {
    prop::sample::select(coefficient_pool())
}

pub fn nonzero_coefficient() -> impl Strategy<Value = RatFunc> {
    prop::sample::select(coefficient_pool()[1..].to_vec())
}

/// Atoms `{x, y, x+y, 1/(x+y), x·y, small rationals}`.
fn atom() -> impl Strategy<Value = RatFunc> {
    prop_oneof![
        Just(x()),
        Just(y()),
        Just(&x() + &y()),
        Just(inv_x_plus_y()),
        Just(&x() * &y()),
        (-5i64..=5, 1i64..=4).prop_map(|(n, d)| RatFunc::constant(BigRational::new(n.into(), d.into()))),
    ]
}

/// Sums, products and quotients of up to three atoms.
pub fn ratfunc() -> impl Strategy<Value = RatFunc> {
    (atom(), atom(), atom(), 0u8..6).prop_map(|(a, b, c, shape)| match shape {
        0 => a,
        1 => &a + &b,
        2 => &a * &b,
        3 => &(&a * &b) + &c,
        4 => match b.checked_inv() {
            Ok(inv) => &(&a * &inv) + &c,
            Err(_) => &a + &c,
        },
        _ => &(&a + &b) * &c,
    })
}

pub fn nonzero_ratfunc() -> impl Strategy<Value = RatFunc> {
    ratfunc().prop_filter("nonzero", |f| !num_traits::Zero::is_zero(f))
}

/// Operators of order at most `max_order` with pool coefficients.
pub fn diffop(max_order: u32) -> impl Strategy<Value = DiffOp> {
    let slots: Vec<(u32, u32)> = (0..=max_order)
        .flat_map(|n| (0..=n).map(move |i| (i, n - i)))
        .collect();
    let n = slots.len();
    prop::collection::vec((0..n, coefficient()), 1..=4).prop_map(move |terms| {
        DiffOp::from_terms(terms.into_iter().map(|(k, c)| (DerivPower::new(slots[k].0, slots[k].1), c)))
    })
}

pub fn nonzero_diffop(max_order: u32) -> impl Strategy<Value = DiffOp> {
    diffop(max_order).prop_filter("nonzero", |p| !p.is_zero())
}

/// Integer entries in `[-3, 3]` with nonzero determinant.
pub fn invertible_matrix() -> impl Strategy<Value = ConstantMatrix> {
    (-3i64..=3, -3i64..=3, -3i64..=3, -3i64..=3)
        .prop_filter("invertible", |(a, b, c, d)| a * d - b * c != 0)
        .prop_map(|(a, b, c, d)| ConstantMatrix::new(rat(a), rat(b), rat(c), rat(d)))
}
