//! Roots in Q(x,y) of univariate polynomials over Q(x,y).
//!
//! Denominators are cleared to get `F = Σ A_i t^i` with `A_i ∈ Q[x,y]`.
//! Specializing at a lattice point where `F` stays squarefree gives a
//! univariate polynomial over Q whose rational roots are found by Sturm
//! isolation; each is lifted as a power series in the shifted variables.
//! A root `r = p/q` has `q | A_e`, so `A_e r` is a polynomial of total degree
//! at most `deg A_e + deg A_0` and truncating `A_e * series` recovers it.
//! Every candidate is checked exactly before it is returned.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{poly_gcd, Poly, RatFunc, UniPoly};

type QPoly = UniPoly<BigRational>;

/// Distinct roots of `h` lying in Q(x,y).
pub fn rational_roots(h: &UniPoly<RatFunc>) -> Vec<RatFunc> {
    let mut out = Vec::new();
    let Some(deg) = h.degree() else {
        return out;
    };
    if deg == 0 {
        return out;
    }
    let mut h = h.monic();
    let mut sqf = UniPoly::one();
    for (f, _) in h.squarefree_factors() {
        sqf = sqf.mul(&f);
    }
    h = sqf;
    if h.coeff(0).is_zero() {
        out.push(RatFunc::zero());
        h = UniPoly::new(h.coeffs()[1..].to_vec());
    }
    match h.degree() {
        Some(1) => out.push(-(h.coeff(0) / h.coeff(1))),
        Some(d) if d >= 2 => out.extend(lifted_roots(&h)),
        _ => {}
    }
    out
}

fn lcm(a: &Poly, b: &Poly) -> Poly {
    a.mul(b).div_exact(&poly_gcd(a, b)).expect("gcd divides product")
}

/// Polynomial coefficients of a scalar multiple of `h`.
fn clear_denominators(h: &UniPoly<RatFunc>) -> Vec<Poly> {
    let l = h
        .coeffs()
        .iter()
        .fold(Poly::one(), |acc, c| lcm(&acc, c.den()));
    h.coeffs()
        .iter()
        .map(|c| c.num().mul(&l.div_exact(c.den()).expect("den divides lcm")))
        .collect()
}

fn lifted_roots(h: &UniPoly<RatFunc>) -> Vec<RatFunc> {
    let a = clear_denominators(h);
    let e = a.len() - 1;
    let bound = a[e].total_degree().unwrap_or(0) + a[0].total_degree().unwrap_or(0);

    let Some((x0, y0, f0)) = good_point(&a) else {
        return Vec::new();
    };
    let shifted: Vec<Poly> = a.iter().map(|p| p.shift(&x0, &y0)).collect();
    let lead = RatFunc::from_poly(a[e].clone());

    let mut out = Vec::new();
    for r0 in q_rational_roots(&f0) {
        let slope = f0.derivative().eval(&r0);
        let series = lift(&shifted, r0, &slope, bound);
        let t = shifted[e].mul(&series).truncate(bound);
        let numer = t.shift(&-x0.clone(), &-y0.clone());
        let Ok(r) = RatFunc::from_poly(numer).checked_div(&lead) else {
            continue;
        };
        if h.eval(&r).is_zero() {
            out.push(r);
        }
    }
    out
}

/// Newton-free linear lifting: one homogeneous degree per step.
fn lift(f: &[Poly], r0: BigRational, slope: &BigRational, bound: u32) -> Poly {
    let inv = BigRational::one() / slope;
    let mut s = Poly::constant(r0);
    for k in 1..=bound {
        let mut acc = Poly::zero();
        for c in f.iter().rev() {
            acc = acc.mul(&s).truncate(k).add(&c.truncate(k));
        }
        let err = acc.homogeneous_part(k);
        if !err.is_zero() {
            s = s.sub(&err.scale(&inv));
        }
    }
    s
}

/// A lattice point keeping the leading coefficient nonzero and the
/// specialization squarefree.
fn good_point(a: &[Poly]) -> Option<(BigRational, BigRational, QPoly)> {
    let e = a.len() - 1;
    for radius in 0i64..64 {
        for xi in -radius..=radius {
            let rest = radius - xi.abs();
            let ys: &[i64] = if rest == 0 { &[0] } else { &[rest, -rest] };
            for &yi in ys {
                let x0 = BigRational::from_integer(xi.into());
                let y0 = BigRational::from_integer(yi.into());
                if a[e].eval(&x0, &y0).is_zero() {
                    continue;
                }
                let f0 = QPoly::new(a.iter().map(|p| p.eval(&x0, &y0)).collect());
                if f0.is_squarefree() {
                    return Some((x0, y0, f0));
                }
            }
        }
    }
    None
}

fn sign_changes(seq: &[QPoly], t: &BigRational) -> usize {
    let mut count = 0;
    let mut last = 0i8;
    for p in seq {
        let v = p.eval(t);
        let s = if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        };
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

fn sturm_sequence(f: &QPoly) -> Vec<QPoly> {
    let mut seq = vec![f.clone(), f.derivative()];
    loop {
        let n = seq.len();
        let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
        if r.is_zero() {
            break;
        }
        seq.push(r.neg());
    }
    seq
}

/// Distinct rational roots of a squarefree polynomial over Q.
pub(crate) fn q_rational_roots(f: &QPoly) -> Vec<BigRational> {
    let mut out = Vec::new();
    let Some(_) = f.degree() else {
        return out;
    };
    let mut f = f.clone();
    if f.coeff(0).is_zero() {
        out.push(BigRational::zero());
        while f.coeff(0).is_zero() && !f.is_zero() {
            f = QPoly::new(f.coeffs()[1..].to_vec());
        }
    }
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    // integer coefficients
    let den_lcm = f
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let f = f.scale(&BigRational::from_integer(den_lcm));
    let lead = f.leading().unwrap().abs();
    let bound = BigRational::one()
        + f.coeffs()
            .iter()
            .map(|c| c.abs() / &lead)
            .max()
            .unwrap_or_else(BigRational::zero);
    let seq = sturm_sequence(&f);
    let mut stack = vec![(-bound.clone(), bound)];
    while let Some((lo, hi)) = stack.pop() {
        let n = sign_changes(&seq, &lo) - sign_changes(&seq, &hi);
        if n == 0 {
            continue;
        }
        if (&hi - &lo) * &lead < BigRational::one() {
            // at most one point of (1/lead)Z lies in (lo, hi]
            let t = (&hi * &lead).floor() / &lead;
            if t > lo && f.eval(&t).is_zero() {
                out.push(t);
            }
            continue;
        }
        let mid = (&lo + &hi) / BigRational::from_integer(2.into());
        stack.push((mid.clone(), hi));
        stack.push((lo, mid));
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{frac, rat};
    use crate::arith::Var;

    fn qp(c: &[i64]) -> QPoly {
        QPoly::new(c.iter().map(|&n| rat(n)).collect())
    }

    #[test]
    fn rational_roots_over_q() {
        // (2t - 1)(t + 3)(t^2 + 1)
        let f = qp(&[-1, 2]).mul(&qp(&[3, 1])).mul(&qp(&[1, 0, 1]));
        assert_eq!(q_rational_roots(&f), vec![rat(-3), frac(1, 2)]);
        assert!(q_rational_roots(&qp(&[-2, 0, 1])).is_empty());
        assert_eq!(q_rational_roots(&qp(&[0, 1])), vec![rat(0)]);
    }

    #[test]
    fn close_roots_are_separated() {
        // (100 t - 1)(101 t - 1)
        let f = qp(&[-1, 100]).mul(&qp(&[-1, 101]));
        assert_eq!(q_rational_roots(&f), vec![frac(1, 101), frac(1, 100)]);
    }

    #[test]
    fn roots_over_the_function_field() {
        let x = RatFunc::x();
        let y = RatFunc::y();
        let r1 = &x / &(&x + &y);
        let r2 = &(&x * &y) - &RatFunc::integer(3);
        let t = |r: &RatFunc| UniPoly::new(vec![-r, RatFunc::one()]);
        let irreducible = UniPoly::new(vec![y.clone(), RatFunc::zero(), RatFunc::one()]);
        let h = t(&r1).mul(&t(&r2)).mul(&irreducible).scale(&RatFunc::from_poly(Poly::var(Var::Y)));
        let mut roots = rational_roots(&h);
        roots.sort_by_key(crate::io::format_ratfunc);
        let mut want = vec![r1, r2];
        want.sort_by_key(crate::io::format_ratfunc);
        assert_eq!(roots, want);
    }
}
