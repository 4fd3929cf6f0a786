//! Homogeneous binary forms in `(v, w)` over Q(x,y).
//!
//! Symbols of operators live here: `v` stands for `d_x` and `w` for `d_y`.
//! All root counting over the algebraic closure goes through squarefree
//! decompositions, so no algebraic extension is ever constructed.

mod roots;

use std::fmt;

use num_traits::{One, Zero};

use crate::arith::{Monomial, Poly, RatFunc, UniPoly};
use crate::error::{Error, Result};
use crate::ore::ConstantMatrix;

pub use roots::rational_roots;

/// `Σ c_i v^i w^(n-i)`. An empty coefficient list is the zero form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinaryForm {
    degree: u32,
    coeffs: Vec<RatFunc>,
}

impl BinaryForm {
    /// `coeffs[i]` multiplies `v^i w^(degree-i)`; missing entries are zero.
    pub fn new(degree: u32, mut coeffs: Vec<RatFunc>) -> Self {
        coeffs.resize(degree as usize + 1, RatFunc::zero());
        if coeffs.iter().all(|c| c.is_zero()) {
            return Self::zero();
        }
        BinaryForm { degree, coeffs }
    }

    pub fn zero() -> Self {
        BinaryForm {
            degree: 0,
            coeffs: Vec::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(RatFunc::one())
    }

    pub fn constant(c: RatFunc) -> Self {
        Self::new(0, vec![c])
    }

    pub fn v() -> Self {
        Self::new(1, vec![RatFunc::zero(), RatFunc::one()])
    }

    pub fn w() -> Self {
        Self::new(1, vec![RatFunc::one(), RatFunc::zero()])
    }

    /// `a v + b w`.
    pub fn linear(a: RatFunc, b: RatFunc) -> Self {
        Self::new(1, vec![b, a])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Coefficient of `v^i w^(n-i)`.
    pub fn coeff(&self, i: u32) -> RatFunc {
        self.coeffs
            .get(i as usize)
            .cloned()
            .unwrap_or_else(RatFunc::zero)
    }

    pub fn coeffs(&self) -> &[RatFunc] {
        &self.coeffs
    }

    /// The power of `w` dividing the form.
    pub fn w_valuation(&self) -> u32 {
        match self.coeffs.iter().rposition(|c| !c.is_zero()) {
            Some(top) => self.degree - top as u32,
            None => 0,
        }
    }

    /// `(f(v, 1), w-adic valuation)`.
    pub fn dehomogenize(&self) -> (UniPoly<RatFunc>, u32) {
        (UniPoly::new(self.coeffs.clone()), self.w_valuation())
    }

    /// `w^w_power * h(v/w) * w^deg(h)`.
    pub fn homogenize(h: &UniPoly<RatFunc>, w_power: u32) -> Self {
        let Some(d) = h.degree() else {
            return Self::zero();
        };
        let n = d as u32 + w_power;
        Self::new(n, h.coeffs().to_vec())
    }

    pub fn mul(&self, other: &BinaryForm) -> BinaryForm {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let (a, ka) = self.dehomogenize();
        let (b, kb) = other.dehomogenize();
        Self::homogenize(&a.mul(&b), ka + kb)
    }

    pub fn pow(&self, k: u32) -> BinaryForm {
        (0..k).fold(Self::one(), |acc, _| acc.mul(self))
    }

    pub fn scale(&self, c: &RatFunc) -> BinaryForm {
        Self::new(self.degree, self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Scales so the coefficient of the highest power of `v` is 1.
    pub fn monic(&self) -> BinaryForm {
        match self.coeffs.iter().rev().find(|c| !c.is_zero()) {
            None => Self::zero(),
            Some(lead) => {
                let inv = lead.checked_inv().expect("nonzero leading coefficient");
                self.scale(&inv)
            }
        }
    }

    /// Exact quotient, or `None` if `other` does not divide `self`.
    pub fn div_exact(&self, other: &BinaryForm) -> Option<BinaryForm> {
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let (a, ka) = self.dehomogenize();
        let (b, kb) = other.dehomogenize();
        if kb > ka {
            return None;
        }
        Some(Self::homogenize(&a.div_exact(&b)?, ka - kb))
    }

    /// Substitutes `v ↦ b1 v + b2 w`, `w ↦ b3 v + b4 w`.
    pub fn substitute(&self, m: &ConstantMatrix) -> BinaryForm {
        if self.is_zero() {
            return Self::zero();
        }
        let [[b1, b2], [b3, b4]] = &m.entries;
        let lv = Poly::from_terms([(Monomial::new(1, 0), b1.clone()), (Monomial::new(0, 1), b2.clone())]);
        let lw = Poly::from_terms([(Monomial::new(1, 0), b3.clone()), (Monomial::new(0, 1), b4.clone())]);
        let n = self.degree;
        let mut out = vec![RatFunc::zero(); n as usize + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let i = i as u32;
            let expanded = lv.pow(i).mul(&lw.pow(n - i));
            for (mono, q) in expanded.terms() {
                let slot = &mut out[mono.x as usize];
                *slot = &*slot + &c.scale(q);
            }
        }
        Self::new(n, out)
    }
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::io::format_form(self))
    }
}

/// A linear divisor over Q(x,y): `w`, or `v + a w`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LinearDivisor {
    W,
    V(RatFunc),
}

impl LinearDivisor {
    pub fn to_form(&self) -> BinaryForm {
        match self {
            LinearDivisor::W => BinaryForm::w(),
            LinearDivisor::V(a) => BinaryForm::linear(RatFunc::one(), a.clone()),
        }
    }

    /// Divisor proportional to `alpha v + beta w`.
    pub fn from_coefficients(alpha: &RatFunc, beta: &RatFunc) -> Option<Self> {
        if !alpha.is_zero() {
            Some(LinearDivisor::V(beta.checked_div(alpha).ok()?))
        } else if !beta.is_zero() {
            Some(LinearDivisor::W)
        } else {
            None
        }
    }
}

impl fmt::Display for LinearDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_form().fmt(f)
    }
}

/// Squarefree factor `form` occurring with `multiplicity`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquarefreeFactor {
    pub form: BinaryForm,
    pub multiplicity: u32,
}

/// For each multiplicity, how many distinct linear divisors over the
/// algebraic closure occur with it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicityPattern {
    /// `(multiplicity, number of distinct divisors)`, ascending in multiplicity.
    pub entries: Vec<(u32, u32)>,
    /// Some squarefree part does not split into Q(x,y)-rational linear factors.
    pub unsplit: bool,
}

impl MultiplicityPattern {
    /// Multiplicities listed once per distinct divisor, descending: `[2, 1]`, `[3]`.
    pub fn profile(&self) -> Vec<u32> {
        let mut out: Vec<u32> = self
            .entries
            .iter()
            .flat_map(|&(m, c)| std::iter::repeat_n(m, c as usize))
            .collect();
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }

    pub fn total_degree(&self) -> u32 {
        self.entries.iter().map(|(m, c)| m * c).sum()
    }
}

impl fmt::Display for MultiplicityPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.profile().iter().map(u32::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// Rational linear divisors with multiplicities plus the residual form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearDivisors {
    pub divisors: Vec<(LinearDivisor, u32)>,
    pub residual: BinaryForm,
}

fn nonzero(f: &BinaryForm) -> Result<()> {
    if f.is_zero() {
        Err(Error::ZeroForm)
    } else {
        Ok(())
    }
}

/// Gcd normalized so the highest `v`-power coefficient is 1.
pub fn form_gcd(f: &BinaryForm, g: &BinaryForm) -> Result<BinaryForm> {
    nonzero(f)?;
    nonzero(g)?;
    let (a, ka) = f.dehomogenize();
    let (b, kb) = g.dehomogenize();
    Ok(BinaryForm::homogenize(&a.gcd(&b), ka.min(kb)))
}

/// Gcd of a nonempty list of forms.
pub fn forms_gcd<'a, I: IntoIterator<Item = &'a BinaryForm>>(forms: I) -> Result<BinaryForm> {
    let mut it = forms.into_iter();
    let first = it.next().ok_or(Error::ZeroForm)?;
    nonzero(first)?;
    it.try_fold(first.monic(), |acc, f| form_gcd(&acc, f))
}

/// No repeated linear factor over the algebraic closure.
pub fn is_separable(f: &BinaryForm) -> Result<bool> {
    nonzero(f)?;
    if f.degree() == 0 {
        return Err(Error::SeparabilityUndefined);
    }
    let (h, k) = f.dehomogenize();
    Ok(k <= 1 && h.is_squarefree())
}

/// Pairwise coprime monic squarefree forms `f_k` with `f = unit * Π f_k^k`,
/// ascending in `k`.
pub fn squarefree_decomposition(f: &BinaryForm) -> Result<Vec<SquarefreeFactor>> {
    nonzero(f)?;
    if f.degree() == 0 {
        return Err(Error::SeparabilityUndefined);
    }
    let (h, k) = f.dehomogenize();
    let mut out: Vec<SquarefreeFactor> = h
        .squarefree_factors()
        .into_iter()
        .map(|(p, m)| SquarefreeFactor {
            form: BinaryForm::homogenize(&p, 0),
            multiplicity: m,
        })
        .collect();
    if k > 0 {
        match out.iter_mut().find(|s| s.multiplicity == k) {
            Some(s) => s.form = s.form.mul(&BinaryForm::w()),
            None => {
                out.push(SquarefreeFactor {
                    form: BinaryForm::w(),
                    multiplicity: k,
                });
                out.sort_by_key(|s| s.multiplicity);
            }
        }
    }
    Ok(out)
}

pub fn multiplicity_pattern(f: &BinaryForm) -> Result<MultiplicityPattern> {
    nonzero(f)?;
    let entries = if f.degree() == 0 {
        Vec::new()
    } else {
        squarefree_decomposition(f)?
            .iter()
            .map(|s| (s.multiplicity, s.form.degree()))
            .collect()
    };
    let unsplit = rational_linear_divisors(f)?.residual.degree() > 0;
    Ok(MultiplicityPattern { entries, unsplit })
}

/// All Q(x,y)-rational linear divisors `v + a w` and `w`, with multiplicities.
pub fn rational_linear_divisors(f: &BinaryForm) -> Result<LinearDivisors> {
    nonzero(f)?;
    let (h, k) = f.dehomogenize();
    let mut divisors = Vec::new();
    if k > 0 {
        divisors.push((LinearDivisor::W, k));
    }
    let mut residual = UniPoly::one();
    for (part, m) in h.squarefree_factors() {
        let mut rest = part.clone();
        for r in rational_roots(&part) {
            let lin = UniPoly::new(vec![-&r, RatFunc::one()]);
            rest = rest.div_exact(&lin).expect("verified root divides");
            divisors.push((LinearDivisor::V(-r), m));
        }
        residual = residual.mul(&rest.pow(m));
    }
    divisors.sort_by_key(|(d, m)| {
        let key = match d {
            LinearDivisor::V(a) => (0, crate::io::format_ratfunc(a)),
            LinearDivisor::W => (1, String::new()),
        };
        (*m, key)
    });
    Ok(LinearDivisors {
        divisors,
        residual: BinaryForm::homogenize(&residual.monic(), 0),
    })
}
