//! Rational functions in `x`, `y` over Q in canonical form.

use std::collections::HashMap;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::gcd::poly_gcd;
use super::poly::Poly;
use super::rational::rat;
use super::unipoly::Field;
use super::Var;
use crate::error::{Error, Result};

/// `num / den` with `gcd(num, den) = 1` and `den` monic in graded-lex order.
/// Zero is `0 / 1`. Equal values have identical representations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    /// Canonical representative of `num / den`.
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::canonical(num, den))
    }

    fn canonical(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        if let Some(c) = den.constant_value() {
            let inv = c.recip();
            return RatFunc {
                num: num.scale(&inv),
                den: Poly::one(),
            };
        }
        let g = poly_gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        Self::with_monic_den(num, den)
    }

    /// Assumes `gcd(num, den) = 1`; only fixes the denominator scaling.
    fn with_monic_den(num: Poly, den: Poly) -> Self {
        let lc = den.leading().map(|(_, c)| c.clone()).unwrap();
        if lc.is_one() {
            RatFunc { num, den }
        } else {
            let inv = lc.recip();
            RatFunc {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn integer(n: i64) -> Self {
        Self::constant(rat(n))
    }

    pub fn var(v: Var) -> Self {
        Self::from_poly(Poly::var(v))
    }

    pub fn x() -> Self {
        Self::var(Var::X)
    }

    pub fn y() -> Self {
        Self::var(Var::Y)
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// `Some(c)` when the value is a rational constant.
    pub fn as_constant(&self) -> Option<BigRational> {
        if self.is_polynomial() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    pub fn involves(&self, v: Var) -> bool {
        self.num.involves(v) || self.den.involves(v)
    }

    pub fn checked_inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::with_monic_den(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.checked_inv()?)
    }

    pub fn pow(&self, k: i32) -> Result<Self> {
        let base = if k < 0 { self.checked_inv()? } else { self.clone() };
        let e = k.unsigned_abs();
        Ok(RatFunc {
            num: base.num.pow(e),
            den: base.den.pow(e),
        })
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    /// Exact partial derivative.
    pub fn derive(&self, v: Var) -> Self {
        let dn = self.num.derivative(v);
        if self.den.is_one() {
            return Self::from_poly(dn);
        }
        let dd = self.den.derivative(v);
        if dd.is_zero() {
            return Self::canonical(dn, self.den.clone());
        }
        // d = g f, d' = g e with g = gcd(d, d'): (n' f - n e) / (f d), and only g can cancel
        let g = poly_gcd(&self.den, &dd);
        let (f, e) = if g.is_one() {
            (self.den.clone(), dd)
        } else {
            (self.den.div_exact(&g).unwrap(), dd.div_exact(&g).unwrap())
        };
        let top = dn.mul(&f).sub(&self.num.mul(&e));
        Self::cancel_within(top, f.mul(&self.den), g)
    }

    /// Reduces `num / den` when every common factor of the two divides `g`.
    fn cancel_within(mut num: Poly, mut den: Poly, mut g: Poly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        while !g.is_one() {
            let h = poly_gcd(&num, &g);
            if h.is_one() {
                break;
            }
            num = num.div_exact(&h).unwrap();
            den = den.div_exact(&h).unwrap();
            g = g.div_exact(&h).unwrap();
        }
        Self::with_monic_den(num, den)
    }

    /// `d_x^i d_y^j` applied to `self`.
    pub fn derive_n(&self, i: u32, j: u32) -> Self {
        let mut f = self.clone();
        for _ in 0..i {
            if f.is_zero() {
                break;
            }
            f = f.derive(Var::X);
        }
        for _ in 0..j {
            if f.is_zero() {
                break;
            }
            f = f.derive(Var::Y);
        }
        f
    }

    fn add_impl(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return Self::canonical(self.num.add(&other.num), self.den.clone());
        }
        if self.den.is_one() {
            let top = self.num.mul(&other.den).add(&other.num);
            return RatFunc {
                num: top,
                den: other.den.clone(),
            }
            .reduce_zero();
        }
        if other.den.is_one() {
            let top = other.num.mul(&self.den).add(&self.num);
            return RatFunc {
                num: top,
                den: self.den.clone(),
            }
            .reduce_zero();
        }
        let g = poly_gcd(&self.den, &other.den);
        if g.is_one() {
            let top = self.num.mul(&other.den).add(&other.num.mul(&self.den));
            return RatFunc {
                num: top,
                den: self.den.mul(&other.den),
            }
            .reduce_zero();
        }
        let d1 = self.den.div_exact(&g).unwrap();
        let d2 = other.den.div_exact(&g).unwrap();
        let top = self.num.mul(&d2).add(&other.num.mul(&d1));
        Self::cancel_within(top, self.den.mul(&d2), g)
    }

    /// Sum of coprime-denominator pieces is already reduced; only zero needs care.
    fn reduce_zero(self) -> Self {
        if self.num.is_zero() {
            Self::zero()
        } else {
            self
        }
    }

    fn mul_impl(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if let Some(c) = other.as_constant() {
            return self.scale(&c);
        }
        if let Some(c) = self.as_constant() {
            return other.scale(&c);
        }
        let g1 = poly_gcd(&self.num, &other.den);
        let g2 = poly_gcd(&other.num, &self.den);
        let n1 = self.num.div_exact(&g1).unwrap();
        let d2 = other.den.div_exact(&g1).unwrap();
        let n2 = other.num.div_exact(&g2).unwrap();
        let d1 = self.den.div_exact(&g2).unwrap();
        Self::with_monic_den(n1.mul(&n2), d1.mul(&d2))
    }

    /// Sums many terms, adding numerators of equal denominators first.
    pub fn sum<'a, I: IntoIterator<Item = &'a RatFunc>>(items: I) -> RatFunc {
        let mut buckets: HashMap<&Poly, Poly> = HashMap::new();
        let mut order: Vec<&Poly> = Vec::new();
        for f in items {
            if f.is_zero() {
                continue;
            }
            match buckets.get_mut(&f.den) {
                Some(acc) => *acc = acc.add(&f.num),
                None => {
                    order.push(&f.den);
                    buckets.insert(&f.den, f.num.clone());
                }
            }
        }
        let mut total = RatFunc::zero();
        for den in order {
            let num = buckets.remove(den).unwrap();
            if num.is_zero() {
                continue;
            }
            total = total.add_impl(&Self::canonical(num, den.clone()));
        }
        total
    }
}

impl Zero for RatFunc {
    fn zero() -> Self {
        RatFunc {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RatFunc {
    fn one() -> Self {
        Self::from_poly(Poly::one())
    }
}

impl Field for RatFunc {
    fn from_u64(n: u64) -> Self {
        Self::constant(BigRational::from_integer(n.into()))
    }
}

impl From<Poly> for RatFunc {
    fn from(p: Poly) -> Self {
        Self::from_poly(p)
    }
}

impl From<BigRational> for RatFunc {
    fn from(c: BigRational) -> Self {
        Self::constant(c)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait<&RatFunc> for &RatFunc {
            type Output = RatFunc;
            fn $method(self, rhs: &RatFunc) -> RatFunc {
                let f: fn(&RatFunc, &RatFunc) -> RatFunc = $body;
                f(self, rhs)
            }
        }
        impl $trait<RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $method(self, rhs: RatFunc) -> RatFunc {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $method(self, rhs: &RatFunc) -> RatFunc {
                (&self).$method(rhs)
            }
        }
        impl $trait<RatFunc> for &RatFunc {
            type Output = RatFunc;
            fn $method(self, rhs: RatFunc) -> RatFunc {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| a.add_impl(b));
forward_binop!(Sub, sub, |a, b| a.add_impl(&-b));
forward_binop!(Mul, mul, |a, b| a.mul_impl(b));
forward_binop!(Div, div, |a, b| a
    .checked_div(b)
    .expect("rational function division by zero"));

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::frac;

    fn x() -> Poly {
        Poly::var(Var::X)
    }
    fn y() -> Poly {
        Poly::var(Var::Y)
    }

    #[test]
    fn cancels_common_factor() {
        let f = RatFunc::new(x().pow(2).sub(&Poly::one()), x().sub(&Poly::one())).unwrap();
        assert_eq!(f, RatFunc::from_poly(x().add(&Poly::one())));
    }

    #[test]
    fn zero_numerator() {
        let f = RatFunc::new(Poly::zero(), x().add(&y())).unwrap();
        assert!(f.is_zero());
        assert!(f.den().is_one());
    }

    #[test]
    fn content_goes_to_numerator() {
        let two = Poly::constant(rat(2));
        let f = RatFunc::new(x().add(&y()).mul(&two), Poly::constant(rat(4))).unwrap();
        assert_eq!(f.num(), &x().add(&y()).scale(&frac(1, 2)));
        assert!(f.den().is_one());
        let g = RatFunc::new(Poly::one(), x().scale(&rat(3))).unwrap();
        assert_eq!(g.num(), &Poly::constant(frac(1, 3)));
        assert_eq!(g.den(), &x());
    }

    #[test]
    fn zero_denominator_is_an_error() {
        assert_eq!(RatFunc::new(x(), Poly::zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn derivatives() {
        let xy = RatFunc::from_poly(x().mul(&y()));
        assert_eq!(xy.derive(Var::X), RatFunc::y());
        let inv = RatFunc::new(Poly::one(), x().add(&y())).unwrap();
        let expect = RatFunc::new(Poly::constant(rat(-1)), x().add(&y()).pow(2)).unwrap();
        assert_eq!(inv.derive(Var::X), expect);
        assert!(RatFunc::x().derive(Var::Y).is_zero());
    }

    #[test]
    fn sum_groups_denominators() {
        let s = RatFunc::new(Poly::one(), x().add(&y())).unwrap();
        let t = RatFunc::new(x(), x().add(&y()).pow(2)).unwrap();
        let items = vec![s.clone(), t.clone(), -&s, RatFunc::y()];
        assert_eq!(RatFunc::sum(&items), &t + &RatFunc::y());
    }
}
