//! Canonical text for functions, operators and forms. Everything printed
//! here parses back to the same value.

use num_traits::{One, Signed};

use crate::arith::{BigRational, Poly, RatFunc, UniPoly};
use crate::ore::DiffOp;
use crate::symbolform::BinaryForm;

fn power(name: &str, k: u32) -> Option<String> {
    match k {
        0 => None,
        1 => Some(name.to_string()),
        _ => Some(format!("{name}^{k}")),
    }
}

/// `x+2*y^2-1/2`, terms in descending graded-lex order.
pub fn format_poly(p: &Poly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (m, c) in p.terms().rev() {
        let neg = c.is_negative();
        if neg {
            out.push('-');
        } else if !out.is_empty() {
            out.push('+');
        }
        let c = c.abs();
        let vars: Vec<String> = [power("x", m.x), power("y", m.y)].into_iter().flatten().collect();
        let mut parts = Vec::new();
        if !c.is_one() || vars.is_empty() {
            parts.push(c.to_string());
        }
        parts.extend(vars);
        out.push_str(&parts.join("*"));
    }
    out
}

/// Denominators print bare only as a single variable power.
fn bare_denominator(p: &Poly) -> bool {
    p.is_monomial()
        && p.leading().is_some_and(|(m, c)| c.is_one() && (m.x == 0 || m.y == 0))
}

pub fn format_ratfunc(f: &RatFunc) -> String {
    let num = format_poly(f.num());
    if f.is_polynomial() {
        return num;
    }
    let num = if f.num().len() > 1 { format!("({num})") } else { num };
    let den = format_poly(f.den());
    if bare_denominator(f.den()) {
        format!("{num}/{den}")
    } else {
        format!("{num}/({den})")
    }
}

/// Rational coefficient in parseable form.
pub fn format_rational(q: &BigRational) -> String {
    format_poly(&Poly::constant(q.clone()))
}

/// Joins `(coefficient, monomial)` pairs; an empty monomial is the constant term.
fn format_terms<'a, I>(terms: I) -> String
where
    I: Iterator<Item = (&'a RatFunc, String)>,
{
    let mut out = String::new();
    for (c, mono) in terms {
        let first = out.is_empty();
        let (neg, body) = if mono.is_empty() {
            let s = format_ratfunc(c);
            let simple = c.is_polynomial() && c.num().is_monomial();
            if simple && s.starts_with('-') {
                (true, s[1..].to_string())
            } else if simple {
                (false, s)
            } else {
                (false, format!("({s})"))
            }
        } else if c.is_one() {
            (false, mono)
        } else if (-c).is_one() {
            (true, mono)
        } else {
            (false, format!("({})*{mono}", format_ratfunc(c)))
        };
        match (first, neg) {
            (true, true) => out.push('-'),
            (true, false) => {}
            (false, true) => out.push_str(" - "),
            (false, false) => out.push_str(" + "),
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

/// `Dx*Dy + (x)*Dx`: descending total order, then descending power of `Dx`.
pub fn print_canonical(p: &DiffOp) -> String {
    format_terms(p.terms().rev().map(|(k, c)| {
        let parts: Vec<String> = [power("Dx", k.dx), power("Dy", k.dy)].into_iter().flatten().collect();
        (c, parts.join("*"))
    }))
}

/// `v^2*w + (x)*w^3`, descending in the power of `v`.
pub fn format_form(f: &BinaryForm) -> String {
    let n = f.degree();
    format_terms(
        f.coeffs()
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !num_traits::Zero::is_zero(*c))
            .map(|(i, c)| {
                let i = i as u32;
                let parts: Vec<String> = [power("v", i), power("w", n - i)].into_iter().flatten().collect();
                (c, parts.join("*"))
            }),
    )
}

/// Univariate polynomial in `z`, descending.
pub fn format_zpoly(p: &UniPoly<RatFunc>) -> String {
    format_terms(
        p.coeffs()
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !num_traits::Zero::is_zero(*c))
            .map(|(i, c)| (c, power("z", i as u32).unwrap_or_default())),
    )
}
