//! The operator ring `Q(x,y)[d_x, d_y]`.
//!
//! Operators are kept in normal form `Σ p_ij d_x^i d_y^j` with every
//! coefficient to the left of the derivations. Composition moves
//! derivations to the right with `d_v ∘ f = f d_v + f_v`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use crate::arith::rational::binomial;
use crate::arith::{BigRational, Monomial, Poly, RatFunc, Var};
use crate::error::{Error, Result};
use crate::symbolform::BinaryForm;

/// Exponents of `d_x^dx d_y^dy`, ordered by total order and then `dx`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DerivPower {
    pub dx: u32,
    pub dy: u32,
}

impl DerivPower {
    pub const fn new(dx: u32, dy: u32) -> Self {
        DerivPower { dx, dy }
    }

    pub fn order(self) -> u32 {
        self.dx + self.dy
    }
}

impl Ord for DerivPower {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order()
            .cmp(&other.order())
            .then(self.dx.cmp(&other.dx))
    }
}

impl PartialOrd for DerivPower {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A linear partial differential operator. No stored coefficient is zero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct DiffOp {
    coeffs: BTreeMap<DerivPower, RatFunc>,
}

impl DiffOp {
    pub fn zero() -> Self {
        DiffOp::default()
    }

    pub fn one() -> Self {
        Self::scalar(RatFunc::one())
    }

    pub fn scalar(f: RatFunc) -> Self {
        Self::term(f, 0, 0)
    }

    /// `f d_x^i d_y^j`.
    pub fn term(f: RatFunc, i: u32, j: u32) -> Self {
        let mut coeffs = BTreeMap::new();
        if !f.is_zero() {
            coeffs.insert(DerivPower::new(i, j), f);
        }
        DiffOp { coeffs }
    }

    pub fn dx() -> Self {
        Self::term(RatFunc::one(), 1, 0)
    }

    pub fn dy() -> Self {
        Self::term(RatFunc::one(), 0, 1)
    }

    pub fn d(v: Var) -> Self {
        match v {
            Var::X => Self::dx(),
            Var::Y => Self::dy(),
        }
    }

    /// `d_v + f`.
    pub fn monic_linear(v: Var, f: RatFunc) -> Self {
        Self::d(v).add(&Self::scalar(f))
    }

    pub fn from_terms<I: IntoIterator<Item = (DerivPower, RatFunc)>>(it: I) -> Self {
        let mut op = DiffOp::zero();
        for (k, c) in it {
            op.add_term(k, c);
        }
        op
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero operator.
    pub fn order(&self) -> Option<u32> {
        self.coeffs.keys().next_back().map(|k| k.order())
    }

    pub fn coeff(&self, i: u32, j: u32) -> RatFunc {
        self.coeffs
            .get(&DerivPower::new(i, j))
            .cloned()
            .unwrap_or_else(RatFunc::zero)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&DerivPower, &RatFunc)> {
        self.coeffs.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = DerivPower> + '_ {
        self.coeffs.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    /// The order-0 operator as a function.
    pub fn as_scalar(&self) -> Option<RatFunc> {
        match self.order() {
            None => Some(RatFunc::zero()),
            Some(0) => Some(self.coeff(0, 0)),
            Some(_) => None,
        }
    }

    /// True when some term contains `d_v`.
    pub fn involves(&self, v: Var) -> bool {
        self.coeffs.keys().any(|k| match v {
            Var::X => k.dx > 0,
            Var::Y => k.dy > 0,
        })
    }

    fn add_term(&mut self, k: DerivPower, c: RatFunc) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.get_mut(&k) {
            Some(slot) => {
                let s = &*slot + &c;
                if s.is_zero() {
                    self.coeffs.remove(&k);
                } else {
                    *slot = s;
                }
            }
            None => {
                self.coeffs.insert(k, c);
            }
        }
    }

    pub fn add(&self, other: &DiffOp) -> DiffOp {
        let mut out = self.clone();
        for (k, c) in &other.coeffs {
            out.add_term(*k, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &DiffOp) -> DiffOp {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> DiffOp {
        DiffOp {
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }

    /// `f ∘ self`, multiplying every coefficient on the left.
    pub fn scale_left(&self, f: &RatFunc) -> DiffOp {
        if f.is_zero() {
            return DiffOp::zero();
        }
        DiffOp {
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, f * c)).collect(),
        }
    }

    /// Composition `self ∘ other` in normal form.
    pub fn mul(&self, other: &DiffOp) -> DiffOp {
        if self.is_zero() || other.is_zero() {
            return DiffOp::zero();
        }
        let max_dx = self.coeffs.keys().map(|k| k.dx).max().unwrap_or(0);
        let max_dy = self.coeffs.keys().map(|k| k.dy).max().unwrap_or(0);

        // ∂^{s,t} of each coefficient of `other`
        let mut derived: HashMap<(DerivPower, u32, u32), RatFunc> = HashMap::new();
        for (k, b) in &other.coeffs {
            let mut col = b.clone();
            for s in 0..=max_dx {
                let mut f = col.clone();
                for t in 0..=max_dy {
                    if f.is_zero() {
                        break;
                    }
                    derived.insert((*k, s, t), f.clone());
                    f = f.derive(Var::Y);
                }
                col = col.derive(Var::X);
                if col.is_zero() {
                    break;
                }
            }
        }

        let mut buckets: BTreeMap<DerivPower, Vec<RatFunc>> = BTreeMap::new();
        for (ka, a) in &self.coeffs {
            for kb in other.coeffs.keys() {
                for s in 0..=ka.dx {
                    let cs = binomial(ka.dx, s);
                    for t in 0..=ka.dy {
                        let Some(db) = derived.get(&(*kb, s, t)) else {
                            continue;
                        };
                        let c = cs.clone() * binomial(ka.dy, t);
                        let target = DerivPower::new(ka.dx - s + kb.dx, ka.dy - t + kb.dy);
                        buckets.entry(target).or_default().push((a * db).scale(&c));
                    }
                }
            }
        }
        DiffOp {
            coeffs: buckets
                .into_iter()
                .map(|(k, v)| (k, RatFunc::sum(&v)))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> DiffOp {
        let mut acc = DiffOp::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// `Σ p_ij d_x^i d_y^j (f)`.
    pub fn apply(&self, f: &RatFunc) -> RatFunc {
        let parts: Vec<RatFunc> = self
            .coeffs
            .iter()
            .map(|(k, c)| c * &f.derive_n(k.dx, k.dy))
            .collect();
        RatFunc::sum(&parts)
    }

    /// `Σ_{i+j=n} p_ij v^i w^j` for `n = order`.
    pub fn symbol(&self) -> Result<BinaryForm> {
        let n = self.order().ok_or(Error::ZeroOperator)?;
        let coeffs = (0..=n).map(|i| self.coeff(i, n - i)).collect();
        Ok(BinaryForm::new(n, coeffs))
    }

    /// Substitutes `d_x ↦ b1 d_x + b2 d_y`, `d_y ↦ b3 d_x + b4 d_y`.
    pub fn change_derivations(&self, m: &ConstantMatrix) -> Result<DiffOp> {
        if m.det().is_zero() {
            return Err(Error::SingularMatrix);
        }
        let [[b1, b2], [b3, b4]] = &m.entries;
        // the substituted derivations commute, so expand as commutative polynomials
        let lx = Poly::from_terms([
            (Monomial::new(1, 0), b1.clone()),
            (Monomial::new(0, 1), b2.clone()),
        ]);
        let ly = Poly::from_terms([
            (Monomial::new(1, 0), b3.clone()),
            (Monomial::new(0, 1), b4.clone()),
        ]);
        let mut out = DiffOp::zero();
        for (k, c) in &self.coeffs {
            let expanded = lx.pow(k.dx).mul(&ly.pow(k.dy));
            for (mono, q) in expanded.terms() {
                out.add_term(DerivPower::new(mono.x, mono.y), c.scale(q));
            }
        }
        Ok(out)
    }

    /// `self = quotient ∘ divisor + remainder` for a monic first-order
    /// divisor `d_v + B` and a dividend free of the other derivation.
    pub fn right_divide_linear(&self, divisor: &DiffOp) -> Result<(DiffOp, RatFunc)> {
        let v = divisor.linear_direction()?;
        let other = match v {
            Var::X => Var::Y,
            Var::Y => Var::X,
        };
        if self.involves(other) {
            return Err(Error::NotUnivariate);
        }
        let mut rem = self.clone();
        let mut quot = DiffOp::zero();
        while let Some(n) = rem.order().filter(|&n| n >= 1) {
            let lead = match v {
                Var::X => rem.coeff(n, 0),
                Var::Y => rem.coeff(0, n),
            };
            let t = match v {
                Var::X => DiffOp::term(lead, n - 1, 0),
                Var::Y => DiffOp::term(lead, 0, n - 1),
            };
            rem = rem.sub(&t.mul(divisor));
            quot = quot.add(&t);
        }
        Ok((quot, rem.coeff(0, 0)))
    }

    /// The derivation of a divisor `d_v + B`.
    fn linear_direction(&self) -> Result<Var> {
        let bad = || Error::InvalidDivisor(crate::io::print_canonical(self));
        if self.order() != Some(1) {
            return Err(bad());
        }
        let cx = self.coeff(1, 0);
        let cy = self.coeff(0, 1);
        match (cx.is_zero(), cy.is_zero()) {
            (false, true) if cx.is_one() => Ok(Var::X),
            (true, false) if cy.is_one() => Ok(Var::Y),
            _ => Err(bad()),
        }
    }

    /// Remainder of right division by `d_y - g`. Zero means `P` is a left
    /// multiple of `d_y - g`.
    pub fn riccati_residual(&self, g: &RatFunc) -> Result<RatFunc> {
        Ok(self.riccati_division(g)?.1)
    }

    /// Quotient and remainder of right division by `d_y - g`.
    pub fn riccati_division(&self, g: &RatFunc) -> Result<(DiffOp, RatFunc)> {
        if self.involves(Var::X) {
            return Err(Error::ContainsDx(crate::io::print_canonical(self)));
        }
        self.right_divide_linear(&DiffOp::monic_linear(Var::Y, -g))
    }
}

/// Constant change of derivations `d_x ↦ b1 d_x + b2 d_y`, `d_y ↦ b3 d_x + b4 d_y`,
/// stored as `[[b1, b2], [b3, b4]]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstantMatrix {
    pub entries: [[BigRational; 2]; 2],
}

impl ConstantMatrix {
    pub fn new(b1: BigRational, b2: BigRational, b3: BigRational, b4: BigRational) -> Self {
        ConstantMatrix {
            entries: [[b1, b2], [b3, b4]],
        }
    }

    pub fn from_ints(b: [[i64; 2]; 2]) -> Self {
        use crate::arith::rational::rat;
        Self::new(rat(b[0][0]), rat(b[0][1]), rat(b[1][0]), rat(b[1][1]))
    }

    /// Rejects entries that are not rational constants.
    pub fn from_ratfuncs(b: [[RatFunc; 2]; 2]) -> Result<Self> {
        let c = |f: &RatFunc| f.as_constant().ok_or(Error::NonConstantChange);
        Ok(Self::new(c(&b[0][0])?, c(&b[0][1])?, c(&b[1][0])?, c(&b[1][1])?))
    }

    pub fn identity() -> Self {
        Self::from_ints([[1, 0], [0, 1]])
    }

    pub fn swap() -> Self {
        Self::from_ints([[0, 1], [1, 0]])
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    pub fn det(&self) -> BigRational {
        let [[a, b], [c, d]] = &self.entries;
        a * d - b * c
    }

    /// Matrix product `self · other`. Applying `self` and then `other`
    /// equals applying `self · other` once.
    pub fn compose(&self, other: &ConstantMatrix) -> ConstantMatrix {
        let a = &self.entries;
        let b = &other.entries;
        let e = |i: usize, j: usize| &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j];
        ConstantMatrix {
            entries: [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]],
        }
    }
}

pub fn op_add(a: &DiffOp, b: &DiffOp) -> DiffOp {
    a.add(b)
}

pub fn op_mul(a: &DiffOp, b: &DiffOp) -> DiffOp {
    a.mul(b)
}

pub fn op_apply(a: &DiffOp, f: &RatFunc) -> RatFunc {
    a.apply(f)
}

pub fn op_symbol(p: &DiffOp) -> Result<BinaryForm> {
    p.symbol()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::rat;

    fn x() -> RatFunc {
        RatFunc::x()
    }
    fn y() -> RatFunc {
        RatFunc::y()
    }
    fn inv_sum() -> RatFunc {
        RatFunc::new(Poly::one(), Poly::var(Var::X).add(&Poly::var(Var::Y))).unwrap()
    }
    fn s(f: RatFunc) -> DiffOp {
        DiffOp::scalar(f)
    }

    #[test]
    fn addition() {
        assert!(DiffOp::dx().add(&DiffOp::dx().neg()).is_zero());
        let a = DiffOp::dy().pow(2).add(&DiffOp::term(x(), 1, 0));
        let sum = a.add(&DiffOp::dy());
        assert_eq!(sum.coeff(0, 1), RatFunc::one());
        assert_eq!(sum.len(), 3);
        assert_eq!(DiffOp::zero().add(&a), a);
    }

    #[test]
    fn leibniz_rule() {
        let lhs = DiffOp::dx().mul(&s(x()));
        assert_eq!(lhs, DiffOp::term(x(), 1, 0).add(&DiffOp::one()));
        let lhs = DiffOp::dy().mul(&s(inv_sum()));
        let expect = DiffOp::term(inv_sum(), 0, 1).sub(&s(inv_sum().pow(2).unwrap()));
        assert_eq!(lhs, expect);
    }

    #[test]
    fn hyperbolic_product() {
        let a = x().pow(2).unwrap();
        let b = &x() * &y();
        let prod = DiffOp::monic_linear(Var::Y, a.clone()).mul(&DiffOp::monic_linear(Var::X, b.clone()));
        let expected = DiffOp::term(RatFunc::one(), 1, 1)
            .add(&DiffOp::term(a.clone(), 1, 0))
            .add(&DiffOp::term(b.clone(), 0, 1))
            .add(&s(&a * &b + b.derive(Var::Y)));
        assert_eq!(prod, expected);
    }

    #[test]
    fn application() {
        let dxdy = DiffOp::term(RatFunc::one(), 1, 1);
        assert_eq!(dxdy.apply(&(&x() * &y())), RatFunc::one());
        assert_eq!(DiffOp::dy().pow(2).apply(&y().pow(2).unwrap()), RatFunc::integer(2));
        let op = DiffOp::dx().add(&s(y()));
        assert_eq!(op.apply(&x()), RatFunc::one() + &x() * &y());
    }

    #[test]
    fn symbols() {
        let p = DiffOp::dy().pow(2).add(&DiffOp::term(x(), 1, 0)).add(&DiffOp::dy());
        assert_eq!(p.symbol().unwrap().to_string(), "w^2");
        let q = DiffOp::term(RatFunc::one(), 1, 1).add(&s(y()));
        assert_eq!(q.symbol().unwrap().to_string(), "v*w");
        assert_eq!(DiffOp::zero().symbol(), Err(Error::ZeroOperator));
    }

    #[test]
    fn changes_of_derivations() {
        let p = DiffOp::term(x(), 1, 1).add(&DiffOp::dy());
        assert_eq!(p.change_derivations(&ConstantMatrix::identity()).unwrap(), p);
        let dxdy = DiffOp::term(RatFunc::one(), 1, 1);
        let shear = ConstantMatrix::from_ints([[1, 0], [1, 1]]);
        let expect = DiffOp::dx().pow(2).add(&dxdy);
        assert_eq!(dxdy.change_derivations(&shear).unwrap(), expect);
        let p = DiffOp::dy().pow(2).add(&DiffOp::dx());
        let swapped = p.change_derivations(&ConstantMatrix::swap()).unwrap();
        assert_eq!(swapped, DiffOp::dx().pow(2).add(&DiffOp::dy()));
        let singular = ConstantMatrix::from_ints([[1, 2], [2, 4]]);
        assert_eq!(p.change_derivations(&singular), Err(Error::SingularMatrix));
        let nonconst = [[x(), RatFunc::zero()], [RatFunc::zero(), RatFunc::one()]];
        assert_eq!(ConstantMatrix::from_ratfuncs(nonconst), Err(Error::NonConstantChange));
    }

    #[test]
    fn change_composition_law() {
        let p = DiffOp::term(x(), 2, 1).add(&DiffOp::term(y(), 0, 2));
        let m = ConstantMatrix::from_ints([[1, 2], [0, 1]]);
        let n = ConstantMatrix::new(rat(3), rat(1), rat(-1), rat(1));
        let twice = p.change_derivations(&m).unwrap().change_derivations(&n).unwrap();
        let once = p.change_derivations(&m.compose(&n)).unwrap();
        assert_eq!(twice, once);
    }

    #[test]
    fn right_division_examples() {
        let (q, r) = DiffOp::dx().pow(2).right_divide_linear(&DiffOp::dx()).unwrap();
        assert_eq!(q, DiffOp::dx());
        assert!(r.is_zero());

        let b = &x() * &y();
        let big_b = y().pow(3).unwrap();
        let (q, r) = DiffOp::monic_linear(Var::X, b.clone())
            .right_divide_linear(&DiffOp::monic_linear(Var::X, big_b.clone()))
            .unwrap();
        assert_eq!(q, DiffOp::one());
        assert_eq!(r, &b - &big_b);

        let inv_y = y().pow(-1).unwrap();
        let (q, r) = DiffOp::dy()
            .pow(2)
            .right_divide_linear(&DiffOp::monic_linear(Var::Y, -&inv_y))
            .unwrap();
        assert_eq!(q, DiffOp::monic_linear(Var::Y, inv_y.clone()));
        assert!(r.is_zero());
        // hand check of the quotient
        let back = DiffOp::monic_linear(Var::Y, inv_y.clone()).mul(&DiffOp::monic_linear(Var::Y, -&inv_y));
        assert_eq!(back, DiffOp::dy().pow(2));
    }

    #[test]
    fn right_division_errors() {
        let mixed = DiffOp::term(RatFunc::one(), 1, 1);
        assert_eq!(mixed.right_divide_linear(&DiffOp::dx()), Err(Error::NotUnivariate));
        assert_eq!(DiffOp::dy().right_divide_linear(&DiffOp::dx()), Err(Error::NotUnivariate));
        let two_dx = DiffOp::term(RatFunc::integer(2), 1, 0);
        assert!(matches!(
            DiffOp::dx().pow(2).right_divide_linear(&two_dx),
            Err(Error::InvalidDivisor(_))
        ));
        assert!(matches!(
            DiffOp::dx().pow(3).right_divide_linear(&DiffOp::dx().pow(2)),
            Err(Error::InvalidDivisor(_))
        ));
    }

    #[test]
    fn order_zero_dividend() {
        let (q, r) = s(x()).right_divide_linear(&DiffOp::dx()).unwrap();
        assert!(q.is_zero());
        assert_eq!(r, x());
    }

    #[test]
    fn riccati_residuals() {
        let d2 = DiffOp::dy().pow(2);
        assert!(d2.riccati_residual(&RatFunc::zero()).unwrap().is_zero());
        assert!(d2.riccati_residual(&y().pow(-1).unwrap()).unwrap().is_zero());
        let p = d2.add(&DiffOp::one());
        assert_eq!(p.riccati_residual(&RatFunc::zero()).unwrap(), RatFunc::one());
        assert!(matches!(
            DiffOp::dx().riccati_residual(&RatFunc::zero()),
            Err(Error::ContainsDx(_))
        ));
    }

    #[test]
    fn order_of_zero_is_none() {
        assert_eq!(DiffOp::zero().order(), None);
        assert_eq!(DiffOp::one().order(), Some(0));
        assert_eq!(s(rat(3).into()).as_scalar(), Some(RatFunc::integer(3)));
    }
}
