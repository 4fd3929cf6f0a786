//! Rational antiderivatives with respect to `y`.
//!
//! `f` is treated as a rational function of `y` over the field `Q(x)`.
//! Hermite reduction splits off the rational part of the integral; the
//! antiderivative is rational exactly when the remaining simple part is zero.

use num_traits::Zero;

use super::poly::{Monomial, Poly};
use super::ratfunc::RatFunc;
use super::unipoly::{Field, UniPoly};
use super::Var;

type YPoly = UniPoly<RatFunc>;

fn to_ypoly(p: &Poly) -> YPoly {
    let dy = p.degree_in(Var::Y).unwrap_or(0) as usize;
    let mut rows = vec![Poly::zero(); dy + 1];
    for (m, c) in p.terms() {
        rows[m.y as usize].add_term(Monomial::new(m.x, 0), c.clone());
    }
    UniPoly::new(rows.into_iter().map(RatFunc::from_poly).collect())
}

fn from_ypoly(p: &YPoly) -> RatFunc {
    let y = RatFunc::y();
    p.coeffs()
        .iter()
        .rev()
        .fold(RatFunc::zero(), |acc, c| &acc * &y + c)
}

/// `d/dy` of a polynomial in `y` with `y`-free coefficients.
fn ypoly_derivative(p: &YPoly) -> YPoly {
    p.derivative()
}

/// A rational `F` with `F_y = f`, or `None` when every antiderivative
/// needs a logarithm. The integration constant is zero.
pub fn integrate_y(f: &RatFunc) -> Option<RatFunc> {
    if f.is_zero() {
        return Some(RatFunc::zero());
    }
    if !f.involves(Var::Y) {
        return Some(f * &RatFunc::y());
    }
    let num = to_ypoly(f.num());
    let den = to_ypoly(f.den());
    let (poly_part, proper) = num.div_rem(&den);

    let mut result = RatFunc::zero();
    for (k, c) in poly_part.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let k1 = RatFunc::from_u64(k as u64 + 1);
        let term = (c / &k1) * RatFunc::y().pow(k as i32 + 1).unwrap();
        result = result + term;
    }
    if proper.is_zero() {
        return Some(result);
    }

    let (rational, simple_num, simple_den) = hermite_reduce(proper, den);
    let (extra_poly, simple_rem) = simple_num.div_rem(&simple_den);
    if !simple_rem.is_zero() {
        return None;
    }
    for (k, c) in extra_poly.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let k1 = RatFunc::from_u64(k as u64 + 1);
        result = result + (c / &k1) * RatFunc::y().pow(k as i32 + 1).unwrap();
    }
    let antiderivative = result + rational;
    debug_assert_eq!(&antiderivative.derive(Var::Y), f);
    Some(antiderivative)
}

/// Returns `(g, a, d)` with `num/den = g' + a/d` and `d` squarefree.
fn hermite_reduce(mut a: YPoly, den: YPoly) -> (RatFunc, YPoly, YPoly) {
    let lc = den.leading().cloned().unwrap();
    let mut d = den.monic();
    a = a.scale(&(RatFunc::from_u64(1) / lc));
    let mut g = RatFunc::zero();
    let factors = d.squarefree_factors();
    for (v, i) in factors {
        if i < 2 {
            continue;
        }
        let u = d.div_exact(&v.pow(i)).expect("squarefree factor power divides");
        let uv_prime = u.mul(&ypoly_derivative(&v));
        for j in (1..i).rev() {
            let jf = RatFunc::from_u64(j as u64);
            let rhs = a.scale(&(-RatFunc::from_u64(1) / jf.clone()));
            let (b, c) = UniPoly::solve_bezout(&uv_prime, &v, &rhs)
                .expect("U V' and V are coprime");
            let vj = from_ypoly(&v.pow(j));
            g = g + from_ypoly(&b) / vj;
            a = c.scale(&(-jf)).sub(&u.mul(&ypoly_derivative(&b)));
        }
        d = u.mul(&v);
    }
    (g, a, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::rat;

    fn x() -> Poly {
        Poly::var(Var::X)
    }
    fn y() -> Poly {
        Poly::var(Var::Y)
    }

    fn check(f: &RatFunc) -> bool {
        match integrate_y(f) {
            Some(g) => {
                assert_eq!(&g.derive(Var::Y), f);
                true
            }
            None => false,
        }
    }

    #[test]
    fn polynomials_integrate() {
        let f = RatFunc::from_poly(x().mul(&y()).add(&Poly::constant(rat(3))));
        assert!(check(&f));
    }

    #[test]
    fn y_free_integrand() {
        let f = RatFunc::new(Poly::one(), x()).unwrap();
        assert_eq!(integrate_y(&f).unwrap(), RatFunc::new(y(), x()).unwrap());
    }

    #[test]
    fn inverse_square_is_rational() {
        // -1/(x+y)^2 integrates to 1/(x+y)
        let f = RatFunc::new(Poly::constant(rat(-1)), x().add(&y()).pow(2)).unwrap();
        assert!(check(&f));
        assert_eq!(
            integrate_y(&f).unwrap(),
            RatFunc::new(Poly::one(), x().add(&y())).unwrap()
        );
    }

    #[test]
    fn higher_poles_with_numerators() {
        // d/dy [ (x y + 1) / (y^2 + x)^3 ]
        let g = RatFunc::new(x().mul(&y()).add(&Poly::one()), y().pow(2).add(&x()).pow(3)).unwrap();
        let f = g.derive(Var::Y);
        let h = integrate_y(&f).unwrap();
        assert!((&h - &g).derive(Var::Y).is_zero());
    }

    #[test]
    fn logarithmic_parts_are_rejected() {
        assert!(!check(&RatFunc::new(Poly::one(), y()).unwrap()));
        assert!(!check(&RatFunc::new(x(), x().add(&y())).unwrap()));
        // rational part plus a log part
        let f = RatFunc::new(Poly::one(), y().pow(2)).unwrap() + RatFunc::new(Poly::one(), y()).unwrap();
        assert!(!check(&f));
    }
}
