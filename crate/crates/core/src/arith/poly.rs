//! Sparse polynomials in `x`, `y` over the rationals.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::rational::{binomial, rat};
use super::Var;

/// Exponent pair `x^x * y^y`, ordered graded-lexicographically with `x > y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub x: u32,
    pub y: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { x: 0, y: 0 };

    pub fn new(x: u32, y: u32) -> Self {
        Monomial { x, y }
    }

    pub fn degree(self) -> u32 {
        self.x + self.y
    }

    pub fn mul(self, other: Monomial) -> Monomial {
        Monomial::new(self.x + other.x, self.y + other.y)
    }

    pub fn divide(self, other: Monomial) -> Option<Monomial> {
        Some(Monomial::new(
            self.x.checked_sub(other.x)?,
            self.y.checked_sub(other.y)?,
        ))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then(self.x.cmp(&other.x))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Invariant: no stored coefficient is zero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::term(c, Monomial::ONE)
    }

    pub fn term(c: BigRational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn var(v: Var) -> Self {
        match v {
            Var::X => Self::term(BigRational::one(), Monomial::new(1, 0)),
            Var::Y => Self::term(BigRational::one(), Monomial::new(0, 1)),
        }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, BigRational)>>(it: I) -> Self {
        let mut p = Poly::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&Monomial::ONE).is_some_and(|c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| *m == Monomial::ONE)
    }

    pub fn constant_value(&self) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        self.is_constant().then(|| self.terms[&Monomial::ONE].clone())
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: Monomial) -> BigRational {
        self.terms.get(&m).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Leading term in graded-lex order.
    pub fn leading(&self) -> Option<(Monomial, &BigRational)> {
        self.terms.iter().next_back().map(|(m, c)| (*m, c))
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn degree_in(&self, v: Var) -> Option<u32> {
        self.terms
            .keys()
            .map(|m| match v {
                Var::X => m.x,
                Var::Y => m.y,
            })
            .max()
    }

    pub fn involves(&self, v: Var) -> bool {
        self.degree_in(v).is_some_and(|d| d > 0)
    }

    pub fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(slot) => {
                *slot += c;
                if slot.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let (mut big, small) = if self.len() >= other.len() {
            (self.clone(), other)
        } else {
            (other.clone(), self)
        };
        for (m, c) in &small.terms {
            big.add_term(*m, c.clone());
        }
        big
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if let Some(c) = other.constant_value() {
            return self.scale(&c);
        }
        if let Some(c) = self.constant_value() {
            return other.scale(&c);
        }
        // integer products avoid a gcd per coefficient
        let (a, la) = self.integer_terms();
        let (b, lb) = other.integer_terms();
        let width = (self.degree_in(Var::Y).unwrap() + other.degree_in(Var::Y).unwrap() + 1) as usize;
        let height = (self.degree_in(Var::X).unwrap() + other.degree_in(Var::X).unwrap() + 1) as usize;
        let mut dense = vec![BigInt::zero(); width * height];
        for (ma, ca) in &a {
            for (mb, cb) in &b {
                let m = ma.mul(*mb);
                dense[m.x as usize * width + m.y as usize] += ca * cb;
            }
        }
        let den = la * lb;
        let terms = dense
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| {
                let m = Monomial::new((k / width) as u32, (k % width) as u32);
                (m, BigRational::new(c, den.clone()))
            })
            .collect();
        Poly { terms }
    }

    /// Integer numerators over the lcm of the denominators.
    fn integer_terms(&self) -> (Vec<(Monomial, BigInt)>, BigInt) {
        let den = self.terms.values().fold(BigInt::one(), |d, c| d.lcm(c.denom()));
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (*m, c.numer() * (&den / c.denom())))
            .collect();
        (terms, den)
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        if c.is_one() {
            return self.clone();
        }
        Poly {
            terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: Monomial) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one();
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn derivative(&self, v: Var) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            match v {
                Var::X if m.x > 0 => {
                    out.add_term(Monomial::new(m.x - 1, m.y), c * rat(m.x as i64))
                }
                Var::Y if m.y > 0 => {
                    out.add_term(Monomial::new(m.x, m.y - 1), c * rat(m.y as i64))
                }
                _ => {}
            }
        }
        out
    }

    /// Exact quotient by the graded-lex division algorithm, or `None`.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        let (dm, _) = divisor.leading().expect("polynomial division by zero");
        if let Some(c) = divisor.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        // divisor * f is primitive over Z, so an exact quotient of integer data is integral
        let f = divisor.integer_normalizer();
        let d: Vec<(Monomial, BigInt)> = divisor
            .terms
            .iter()
            .map(|(m, c)| (*m, (c * &f).to_integer()))
            .collect();
        let (a, la) = self.integer_terms();
        let dlc = d.last().unwrap().1.clone();
        let mut rem: BTreeMap<Monomial, BigInt> = a.into_iter().collect();
        let mut quot: Vec<(Monomial, BigInt)> = Vec::new();
        while let Some((&rm, rc)) = rem.iter().next_back() {
            let qm = rm.divide(dm)?;
            let (qc, r) = rc.div_rem(&dlc);
            if !r.is_zero() {
                return None;
            }
            for (m, c) in &d {
                let key = m.mul(qm);
                let entry = rem.entry(key).or_insert_with(BigInt::zero);
                *entry -= &qc * c;
                if entry.is_zero() {
                    rem.remove(&key);
                }
            }
            quot.push((qm, qc));
        }
        let scale = f / BigRational::from_integer(la);
        Some(Poly {
            terms: quot.into_iter().map(|(m, c)| (m, BigRational::from_integer(c) * &scale)).collect(),
        })
    }

    /// Scales so the graded-lex leading coefficient is 1.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    pub fn eval(&self, x0: &BigRational, y0: &BigRational) -> BigRational {
        self.terms
            .iter()
            .map(|(m, c)| c * num_traits::pow(x0.clone(), m.x as usize) * num_traits::pow(y0.clone(), m.y as usize))
            .fold(BigRational::zero(), |a, b| a + b)
    }

    /// `p(x + dx, y + dy)`.
    pub fn shift(&self, dx: &BigRational, dy: &BigRational) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            for i in 0..=m.x {
                let cx = binomial(m.x, i) * num_traits::pow(dx.clone(), (m.x - i) as usize);
                if cx.is_zero() {
                    continue;
                }
                for j in 0..=m.y {
                    let cy = binomial(m.y, j) * num_traits::pow(dy.clone(), (m.y - j) as usize);
                    out.add_term(Monomial::new(i, j), c * &cx * cy);
                }
            }
        }
        out
    }

    /// Drops all terms of total degree above `deg`.
    pub fn truncate(&self, deg: u32) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() <= deg)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Homogeneous component of total degree `deg`.
    pub fn homogeneous_part(&self, deg: u32) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == deg)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Multiplies by the lcm of the coefficient denominators and divides
    /// by the gcd of the resulting numerators; returns the factor used.
    pub fn integer_normalizer(&self) -> BigRational {
        let mut den = BigInt::one();
        let mut num = BigInt::zero();
        for c in self.terms.values() {
            den = den.lcm(c.denom());
        }
        for c in self.terms.values() {
            num = num.gcd(&(c.numer() * (&den / c.denom())));
        }
        if num.is_zero() {
            return BigRational::one();
        }
        BigRational::new(den, num.abs())
    }

    /// Perfect-square test; returns `s` with `s^2 = self` and positive leading coefficient.
    pub fn sqrt(&self) -> Option<Poly> {
        if self.is_zero() {
            return Some(Poly::zero());
        }
        let (lm, lc) = self.leading().unwrap();
        if lm.x % 2 != 0 || lm.y % 2 != 0 {
            return None;
        }
        let root_c = super::rational::sqrt_exact(lc)?;
        let lead = Monomial::new(lm.x / 2, lm.y / 2);
        let mut s = Poly::term(root_c.clone(), lead);
        let two_lead_c = root_c * rat(2);
        loop {
            let rem = self.sub(&s.mul(&s));
            let Some((rm, rc)) = rem.leading() else {
                return Some(s);
            };
            let tm = rm.divide(lead)?;
            if tm >= lead {
                return None;
            }
            s.add_term(tm, rc / &two_lead_c);
        }
    }
}
