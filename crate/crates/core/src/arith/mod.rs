//! Exact arithmetic: rationals, polynomials and rational functions in `x`, `y`,
//! with the two commuting derivations.

mod gcd;
mod integrate;
mod poly;
mod ratfunc;
pub mod rational;
mod unipoly;

pub use gcd::poly_gcd;
pub use integrate::integrate_y;
pub use num_rational::BigRational;
pub use poly::{Monomial, Poly};
pub use ratfunc::RatFunc;
pub use unipoly::{Field, UniPoly};

/// One of the two base variables; also names the derivation `d_x` or `d_y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X,
    Y,
}

/// Canonical form of `num / den`.
pub fn ratfunc_canonicalize(num: Poly, den: Poly) -> crate::Result<RatFunc> {
    RatFunc::new(num, den)
}

/// Exact partial derivative.
pub fn derive(f: &RatFunc, var: Var) -> RatFunc {
    f.derive(var)
}
