//! Bivariate polynomial gcd over Q.
//!
//! Inputs are scaled to primitive integer polynomials and viewed in
//! `Z[u][t]`, with `t` the variable of smaller degree. Contents in `Z[u]`
//! come from a primitive remainder sequence over Z, and the primitive parts
//! are reduced with the same sequence one level up. Coprime inputs, the
//! common case when adding fractions, are caught first by a modular test.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::{Monomial, Poly};
use super::Var;

/// Dense `Z[u]`, ascending, no trailing zeros.
type ZPoly = Vec<BigInt>;
/// Dense `Z[u][t]`, indexed by the power of `t`, no trailing zeros.
type Recursive = Vec<ZPoly>;

fn ztrim(p: &mut ZPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn zmul(a: &ZPoly, b: &ZPoly) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    ztrim(&mut out);
    out
}

fn zsub(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let mut out = a.clone();
    if out.len() < b.len() {
        out.resize(b.len(), BigInt::zero());
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    ztrim(&mut out);
    out
}

fn zcontent(p: &ZPoly) -> BigInt {
    let mut g = BigInt::zero();
    for c in p {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    g
}

/// Primitive with positive leading coefficient.
fn zprimitive(p: &ZPoly) -> ZPoly {
    let Some(lead) = p.last() else {
        return Vec::new();
    };
    let mut c = zcontent(p);
    if lead.is_negative() {
        c = -c;
    }
    p.iter().map(|a| a / &c).collect()
}

/// `lc(b)^k a mod b` in `Z[u]`.
fn zprem(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r = a.clone();
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let lr = r.last().unwrap().clone();
        for c in r.iter_mut() {
            *c *= lb;
        }
        for (i, bc) in b.iter().enumerate() {
            r[i + shift] -= bc * &lr;
        }
        ztrim(&mut r);
    }
    r
}

/// Exact quotient in `Z[u]`, if it exists.
fn zdiv_exact(a: &ZPoly, b: &ZPoly) -> Option<ZPoly> {
    if a.is_empty() {
        return Some(Vec::new());
    }
    let db = b.len() - 1;
    if a.len() <= db {
        return None;
    }
    let lb = &b[db];
    let mut r = a.clone();
    let mut q = vec![BigInt::zero(); a.len() - db];
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let (qc, rem) = r.last().unwrap().div_rem(lb);
        if !rem.is_zero() {
            return None;
        }
        for (i, bc) in b.iter().enumerate() {
            r[i + shift] -= bc * &qc;
        }
        q[shift] = qc;
        ztrim(&mut r);
    }
    r.is_empty().then_some(q)
}

/// Gcd in `Z[u]` with positive leading coefficient.
fn zgcd(a: &ZPoly, b: &ZPoly) -> ZPoly {
    if a.is_empty() {
        return zprimitive(b).into_iter().map(|c| c * zcontent(b)).collect();
    }
    if b.is_empty() {
        return zprimitive(a).into_iter().map(|c| c * zcontent(a)).collect();
    }
    let cont = zcontent(a).gcd(&zcontent(b));
    if zcoprime_mod_p(a, b) {
        return vec![cont];
    }
    let (mut a, mut b) = (zprimitive(a), zprimitive(b));
    if let Some(g) = zheuristic(&a, &b) {
        return g.into_iter().map(|c| c * &cont).collect();
    }
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        if b.len() == 1 {
            return vec![cont];
        }
        let r = zprem(&a, &b);
        a = b;
        b = zprimitive(&r);
    }
    a.iter().map(|c| c * &cont).collect()
}

/// Integer gcd of values at a large point, read back as symmetric digits.
/// Inputs are primitive; the candidate is kept only if it divides both.
fn zheuristic(a: &ZPoly, b: &ZPoly) -> Option<ZPoly> {
    let norm = |f: &ZPoly| f.iter().map(|c| c.abs()).max().unwrap_or_default();
    let mut xi = BigInt::from(2) * norm(a).min(norm(b)) + BigInt::from(2);
    let horner = |f: &ZPoly, t: &BigInt| f.iter().rev().fold(BigInt::zero(), |acc, c| acc * t + c);
    for _ in 0..6 {
        let h = horner(a, &xi).gcd(&horner(b, &xi));
        let half = &xi / 2;
        let mut g: ZPoly = Vec::new();
        let mut c = h;
        while !c.is_zero() {
            let mut d = c.mod_floor(&xi);
            if d > half {
                d -= &xi;
            }
            c = (c - &d) / &xi;
            g.push(d);
        }
        let g = zprimitive(&g);
        if !g.is_empty() && zdiv_exact(a, &g).is_some() && zdiv_exact(b, &g).is_some() {
            return Some(g);
        }
        xi = xi * BigInt::from(73794) / BigInt::from(27011);
    }
    None
}

/// True when reduction mod PRIME proves `gcd(a, b)` has degree 0.
fn zcoprime_mod_p(a: &ZPoly, b: &ZPoly) -> bool {
    let p = BigInt::from(PRIME);
    let reduce = |f: &ZPoly| -> Vec<u64> {
        f.iter().map(|c| c.mod_floor(&p).to_u64().expect("reduced")).collect()
    };
    let (ra, rb) = (reduce(a), reduce(b));
    if ra.last() == Some(&0) || rb.last() == Some(&0) {
        return false;
    }
    gcd_degree_mod_p(ra, rb) == 0
}

fn rtrim(r: &mut Recursive) {
    while r.last().is_some_and(|c| c.is_empty()) {
        r.pop();
    }
}

fn content(r: &Recursive) -> ZPoly {
    let mut order: Vec<&ZPoly> = r.iter().filter(|c| !c.is_empty()).collect();
    order.sort_by_key(|c| c.len());
    let mut g: ZPoly = Vec::new();
    for c in order {
        g = zgcd(&g, c);
        if g.len() == 1 && g[0].is_one() {
            break;
        }
    }
    g
}

/// Primitive over `Z[u]` with positive leading integer coefficient.
fn primitive_part(r: &Recursive) -> Recursive {
    let c = content(r);
    if c.is_empty() {
        return Vec::new();
    }
    let mut out: Recursive = r
        .iter()
        .map(|a| zdiv_exact(a, &c).expect("content divides every coefficient"))
        .collect();
    if out.last().and_then(|l| l.last()).is_some_and(|c| c.is_negative()) {
        for a in out.iter_mut() {
            for c in a.iter_mut() {
                *c = -&*c;
            }
        }
    }
    out
}

fn pseudo_remainder(a: &Recursive, b: &Recursive) -> Recursive {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r = a.clone();
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let lr = r.last().unwrap().clone();
        for c in r.iter_mut() {
            *c = zmul(c, lb);
        }
        for (i, bc) in b.iter().enumerate() {
            let t = zmul(bc, &lr);
            r[i + shift] = zsub(&r[i + shift], &t);
        }
        rtrim(&mut r);
    }
    r
}

/// `(t, u)` exponents of `m` when `main` is the outer variable.
fn split(m: &Monomial, main: Var) -> (u32, u32) {
    match main {
        Var::Y => (m.y, m.x),
        Var::X => (m.x, m.y),
    }
}

fn join(t: u32, u: u32, main: Var) -> Monomial {
    match main {
        Var::Y => Monomial::new(u, t),
        Var::X => Monomial::new(t, u),
    }
}

/// Integer polynomial proportional to `p`, as `Z[u][t]`.
fn to_recursive(p: &Poly, main: Var) -> Recursive {
    let scale = p.integer_normalizer();
    let dt = p.terms().map(|(m, _)| split(m, main).0).max().unwrap_or(0) as usize;
    let du = p.terms().map(|(m, _)| split(m, main).1).max().unwrap_or(0) as usize;
    let mut out: Recursive = vec![vec![BigInt::zero(); du + 1]; dt + 1];
    for (m, c) in p.terms() {
        let (t, u) = split(m, main);
        out[t as usize][u as usize] = (c * &scale).to_integer();
    }
    for c in out.iter_mut() {
        ztrim(c);
    }
    rtrim(&mut out);
    out
}

fn from_recursive(r: &Recursive, main: Var) -> Poly {
    Poly::from_terms(r.iter().enumerate().flat_map(|(t, cu)| {
        cu.iter().enumerate().map(move |(u, c)| {
            (join(t as u32, u as u32, main), BigRational::from_integer(c.clone()))
        })
    }))
}

/// Largest monomial dividing every term of a nonzero polynomial.
fn monomial_content(p: &Poly) -> Monomial {
    let mut it = p.terms();
    let first = *it.next().expect("nonzero").0;
    it.fold(first, |acc, (t, _)| Monomial::new(acc.x.min(t.x), acc.y.min(t.y)))
}

const PRIME: u64 = 4_294_967_291;

fn pow_mod(mut b: u64, mut e: u64) -> u64 {
    let mut acc = 1u64;
    b %= PRIME;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % PRIME;
        }
        b = b * b % PRIME;
        e >>= 1;
    }
    acc
}

fn modp(c: &BigRational) -> Option<u64> {
    let p = BigInt::from(PRIME);
    let n = c.numer().mod_floor(&p).to_u64()?;
    let d = c.denom().mod_floor(&p).to_u64()?;
    (d != 0).then(|| n * pow_mod(d, PRIME - 2) % PRIME)
}

/// `p` mod PRIME with the other variable fixed at `val`, dense in `keep`.
fn specialize(p: &Poly, keep: Var, val: u64) -> Option<Vec<u64>> {
    let deg = p.degree_in(keep).unwrap_or(0) as usize;
    let mut out = vec![0u64; deg + 1];
    for (m, c) in p.terms() {
        let (k, o) = split(m, keep);
        let t = modp(c)? * pow_mod(val, o as u64) % PRIME;
        out[k as usize] = (out[k as usize] + t) % PRIME;
    }
    Some(out)
}

fn ptrim(p: &mut Vec<u64>) {
    while p.last() == Some(&0) {
        p.pop();
    }
}

/// Degree of the gcd over `F_p`.
fn gcd_degree_mod_p(mut a: Vec<u64>, mut b: Vec<u64>) -> usize {
    ptrim(&mut a);
    ptrim(&mut b);
    while !b.is_empty() {
        let inv = pow_mod(*b.last().unwrap(), PRIME - 2);
        while a.len() >= b.len() {
            let shift = a.len() - b.len();
            let q = a.last().unwrap() * inv % PRIME;
            for (i, c) in b.iter().enumerate() {
                a[i + shift] = (a[i + shift] + PRIME - q * c % PRIME) % PRIME;
            }
            ptrim(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

/// True when some specialization proves `gcd(p, q)` is free of `keep`.
fn free_of(p: &Poly, q: &Poly, keep: Var) -> bool {
    let (dp, dq) = (p.degree_in(keep).unwrap_or(0), q.degree_in(keep).unwrap_or(0));
    if dp == 0 || dq == 0 {
        return true;
    }
    for val in [7u64, 1_000_003, 123_456_789] {
        let (Some(a), Some(b)) = (specialize(p, keep, val), specialize(q, keep, val)) else {
            return false;
        };
        // the bound needs both leading coefficients to survive
        if a[dp as usize] == 0 || b[dq as usize] == 0 {
            continue;
        }
        return gcd_degree_mod_p(a, b) == 0;
    }
    false
}

fn max_norm(p: &Poly) -> BigInt {
    p.terms().map(|(_, c)| c.numer().abs()).max().unwrap_or_default()
}

/// Coefficients in `x` of `p(x, xi)`.
fn eval_y(p: &Poly, xi: &BigInt) -> ZPoly {
    let dx = p.degree_in(Var::X).unwrap_or(0) as usize;
    let mut out = vec![BigInt::zero(); dx + 1];
    for (m, c) in p.terms() {
        out[m.x as usize] += c.numer() * num_traits::pow(xi.clone(), m.y as usize);
    }
    ztrim(&mut out);
    out
}

/// Inverse of `eval_y` with symmetric digits in base `xi`.
fn expand_y(g: &ZPoly, xi: &BigInt) -> Poly {
    let half = xi / 2;
    let mut out = Poly::zero();
    for (i, c) in g.iter().enumerate() {
        let mut c = c.clone();
        let mut k = 0u32;
        while !c.is_zero() {
            let mut d = c.mod_floor(xi);
            if d > half {
                d -= xi;
            }
            if !d.is_zero() {
                out.add_term(Monomial::new(i as u32, k), BigRational::from_integer(d.clone()));
            }
            c = (c - d) / xi;
            k += 1;
        }
    }
    out
}

/// Evaluation at a large integer, univariate gcd, and reconstruction.
/// Only a candidate dividing both inputs is returned.
fn heuristic_gcd(p: &Poly, q: &Poly) -> Option<Poly> {
    let a = p.scale(&p.integer_normalizer());
    let b = q.scale(&q.integer_normalizer());
    let mut xi = BigInt::from(2) * max_norm(&a).min(max_norm(&b)) + BigInt::from(2);
    for _ in 0..6 {
        let (ea, eb) = (eval_y(&a, &xi), eval_y(&b, &xi));
        if ea.len() == a.degree_in(Var::X).unwrap_or(0) as usize + 1
            && eb.len() == b.degree_in(Var::X).unwrap_or(0) as usize + 1
        {
            let g = expand_y(&zgcd(&ea, &eb), &xi);
            if !g.is_zero() {
                let g = g.scale(&g.integer_normalizer());
                if a.div_exact(&g).is_some() && b.div_exact(&g).is_some() {
                    return Some(g);
                }
            }
        }
        xi = xi * BigInt::from(73794) / BigInt::from(27011);
    }
    None
}

/// Greatest common divisor normalized to graded-lex leading coefficient 1.
/// `gcd(0, q)` is `q` normalized; `gcd(0, 0) = 0`.
pub fn poly_gcd(p: &Poly, q: &Poly) -> Poly {
    if p.is_zero() {
        return q.monic();
    }
    if q.is_zero() {
        return p.monic();
    }
    if p.is_constant() || q.is_constant() {
        return Poly::one();
    }
    if p == q {
        return p.monic();
    }
    let mp = monomial_content(p);
    let mq = monomial_content(q);
    let mono = Poly::term(BigRational::one(), Monomial::new(mp.x.min(mq.x), mp.y.min(mq.y)));
    let strip = |f: &Poly, m: Monomial| {
        f.div_exact(&Poly::term(BigRational::one(), m))
            .expect("monomial content divides")
    };
    let (p, q) = (strip(p, mp), strip(q, mq));
    if p.is_constant() || q.is_constant() {
        return mono;
    }
    if free_of(&p, &q, Var::X) && free_of(&p, &q, Var::Y) {
        return mono;
    }
    if let Some(g) = heuristic_gcd(&p, &q) {
        return g.mul(&mono).monic();
    }
    let degree = |v: Var| p.degree_in(v).unwrap_or(0).max(q.degree_in(v).unwrap_or(0));
    let main = if degree(Var::X) < degree(Var::Y) { Var::X } else { Var::Y };
    let a = to_recursive(&p, main);
    let b = to_recursive(&q, main);
    let cont = zgcd(&content(&a), &content(&b));
    let mut a = primitive_part(&a);
    let mut b = primitive_part(&b);
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        if b.len() == 1 {
            a = vec![vec![BigInt::one()]];
            break;
        }
        let r = pseudo_remainder(&a, &b);
        a = b;
        b = primitive_part(&r);
    }
    from_recursive(&a, main)
        .mul(&from_recursive(&vec![cont], main))
        .mul(&mono)
        .monic()
}
