use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::poly::Poly;
use super::ring::{Field, Rat, Ring};

/// Element of `K(t)` in canonical form: denominator monic, numerator and
/// denominator coprime, zero is `0/1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFunc<K> {
    num: Poly<K>,
    den: Poly<K>,
}

impl<K: Field> RatFunc<K> {
    pub fn new(num: Poly<K>, den: Poly<K>) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        let (num, den) = if den.degree() == Some(0) {
            (num, den)
        } else {
            let g = num.gcd(&den);
            if g.degree() == Some(0) {
                (num, den)
            } else {
                (
                    num.exact_div(&g).expect("gcd divides"),
                    den.exact_div(&g).expect("gcd divides"),
                )
            }
        };
        if den == Poly::one() {
            return RatFunc { num, den };
        }
        let lc = den.lc().inverse();
        RatFunc {
            num: num.scale(&lc),
            den: den.scale(&lc),
        }
    }

    pub fn from_poly(p: Poly<K>) -> Self {
        RatFunc {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn zero() -> Self {
        RatFunc {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_poly(Poly::one())
    }

    pub fn constant(c: K) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn var() -> Self {
        Self::from_poly(Poly::var())
    }

    pub fn num(&self) -> &Poly<K> {
        &self.num
    }

    pub fn den(&self) -> &Poly<K> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_poly(&self) -> bool {
        self.den.degree() == Some(0)
    }

    pub fn as_poly(&self) -> Option<&Poly<K>> {
        self.is_poly().then_some(&self.num)
    }

    /// `deg num - deg den`; `None` for zero.
    pub fn degree(&self) -> Option<i64> {
        Some(self.num.degree()? as i64 - self.den.degree()? as i64)
    }

    pub fn map<L: Field>(&self, f: impl Fn(&K) -> L) -> RatFunc<L> {
        RatFunc::new(self.num.map(&f), self.den.map(&f))
    }

    pub fn add_ref(&self, rhs: &Self) -> Self {
        if self.den == rhs.den {
            return Self::new(&self.num + &rhs.num, self.den.clone());
        }
        Self::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }

    pub fn sub_ref(&self, rhs: &Self) -> Self {
        self.add_ref(&rhs.neg_ref())
    }

    pub fn mul_ref(&self, rhs: &Self) -> Self {
        Self::new(&self.num * &rhs.num, &self.den * &rhs.den)
    }

    pub fn neg_ref(&self) -> Self {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero rational function");
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn div_ref(&self, rhs: &Self) -> Self {
        self.mul_ref(&rhs.inv())
    }

    pub fn scale(&self, c: &K) -> Self {
        Self::new(self.num.scale(c), self.den.clone())
    }

    pub fn eval(&self, at: &K) -> Option<K> {
        let d = self.den.eval(at);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(at).over(&d))
    }

    /// Substitutes `t -> inner`.
    pub fn compose(&self, inner: &RatFunc<K>) -> Self {
        let ev = |p: &Poly<K>| {
            p.coeffs().iter().rev().fold(Self::zero(), |acc, c| {
                acc.mul_ref(inner).add_ref(&Self::constant(c.clone()))
            })
        };
        ev(&self.num).div_ref(&ev(&self.den))
    }

    pub fn derivative(&self) -> Self {
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        Self::new(n, &self.den * &self.den)
    }

    /// Square root in `K(t)` when numerator and denominator are squares with
    /// a square leading-coefficient ratio (given a constant square root
    /// oracle).
    pub fn sqrt_with(&self, const_sqrt: impl Fn(&K) -> Option<K>) -> Option<Self> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        let (c, h) = self.num.square_up_to_constant()?;
        let (one, k) = self.den.square_up_to_constant()?;
        debug_assert!(one.is_one());
        let r = const_sqrt(&c)?;
        Some(Self::new(h.scale(&r), k))
    }
}

impl RatFunc<Rat> {
    pub fn sqrt(&self) -> Option<Self> {
        self.sqrt_with(super::ring::rat_sqrt)
    }
}

impl<K: Field> Ring for RatFunc<K> {
    fn zero() -> Self {
        RatFunc::zero()
    }
    fn one() -> Self {
        RatFunc::one()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn plus(&self, rhs: &Self) -> Self {
        self.add_ref(rhs)
    }
    fn minus(&self, rhs: &Self) -> Self {
        self.sub_ref(rhs)
    }
    fn times(&self, rhs: &Self) -> Self {
        self.mul_ref(rhs)
    }
    fn negated(&self) -> Self {
        self.neg_ref()
    }
    fn from_rat(r: &Rat) -> Self {
        RatFunc::constant(K::from_rat(r))
    }
    fn split_sign(&self) -> (bool, Self) {
        if self.is_poly() {
            let (neg, abs) = self.num.split_sign();
            return (neg, RatFunc::from_poly(abs));
        }
        (false, self.clone())
    }
    fn is_atomic(&self) -> bool {
        self.is_poly() && self.num.is_atomic()
    }
}

impl<K: Field> Field for RatFunc<K> {
    fn inverse(&self) -> Self {
        self.inv()
    }
}

macro_rules! rf_binop {
    ($tr:ident, $m:ident, $f:ident) => {
        impl<K: Field> $tr<&RatFunc<K>> for &RatFunc<K> {
            type Output = RatFunc<K>;
            fn $m(self, rhs: &RatFunc<K>) -> RatFunc<K> {
                self.$f(rhs)
            }
        }
        impl<K: Field> $tr<RatFunc<K>> for RatFunc<K> {
            type Output = RatFunc<K>;
            fn $m(self, rhs: RatFunc<K>) -> RatFunc<K> {
                self.$f(&rhs)
            }
        }
        impl<K: Field> $tr<&RatFunc<K>> for RatFunc<K> {
            type Output = RatFunc<K>;
            fn $m(self, rhs: &RatFunc<K>) -> RatFunc<K> {
                self.$f(rhs)
            }
        }
    };
}
rf_binop!(Add, add, add_ref);
rf_binop!(Sub, sub, sub_ref);
rf_binop!(Mul, mul, mul_ref);
rf_binop!(Div, div, div_ref);

impl<K: Field> Neg for RatFunc<K> {
    type Output = RatFunc<K>;
    fn neg(self) -> RatFunc<K> {
        self.neg_ref()
    }
}

impl<K: Field> Neg for &RatFunc<K> {
    type Output = RatFunc<K>;
    fn neg(self) -> RatFunc<K> {
        self.neg_ref()
    }
}

impl<K: Field> From<Poly<K>> for RatFunc<K> {
    fn from(p: Poly<K>) -> Self {
        RatFunc::from_poly(p)
    }
}

impl<K: Field> fmt::Display for RatFunc<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_poly() {
            return write!(f, "{}", self.num);
        }
        let wrap = |p: &Poly<K>| {
            if p.coeffs().iter().filter(|c| !c.is_zero()).count() <= 1 {
                format!("{p}")
            } else {
                format!("({p})")
            }
        };
        write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

pub type QRatFunc = RatFunc<Rat>;
