use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational number. `num_rational` keeps values in lowest terms with a
/// positive denominator, so structural equality is numeric equality.
pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Commutative ring with unit containing the rationals.
///
/// Arithmetic goes through named methods rather than operator traits so that
/// generic code does not need higher-ranked bounds on references.
pub trait Ring: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn negated(&self) -> Self;
    fn from_rat(r: &Rat) -> Self;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn from_int(n: i64) -> Self {
        Self::from_rat(&rat(n))
    }

    fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.times(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.times(&base);
            }
        }
        acc
    }

    /// Splits off a leading minus sign for printing. Returns `true` and the
    /// absolute value when the element prints as a negated atom.
    fn split_sign(&self) -> (bool, Self) {
        (false, self.clone())
    }

    /// Whether the printed form can stand as a product factor without
    /// parentheses.
    fn is_atomic(&self) -> bool {
        true
    }
}

pub trait Field: Ring {
    /// Multiplicative inverse. Panics on zero.
    fn inverse(&self) -> Self;

    fn over(&self, rhs: &Self) -> Self {
        self.times(&rhs.inverse())
    }
}

impl Ring for Rat {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn negated(&self) -> Self {
        -self
    }
    fn from_rat(r: &Rat) -> Self {
        r.clone()
    }
    fn is_one(&self) -> bool {
        One::is_one(self)
    }
    fn split_sign(&self) -> (bool, Self) {
        if self.is_negative() {
            (true, -self)
        } else {
            (false, self.clone())
        }
    }
}

impl Field for Rat {
    fn inverse(&self) -> Self {
        assert!(!Zero::is_zero(self), "division by zero rational");
        self.recip()
    }
}

/// Squarefree-ish integer part used for quadratic extensions: strips square
/// factors of small primes and returns `(core, cofactor)` with
/// `n = core * cofactor^2`.
pub(crate) fn strip_small_squares(n: &BigInt) -> (BigInt, BigInt) {
    let mut core = n.clone();
    let mut cof = BigInt::one();
    let mut p: u32 = 2;
    while p < 10_000 {
        let pp = BigInt::from(p) * BigInt::from(p);
        if pp > core.abs() {
            break;
        }
        while (&core % &pp).is_zero() {
            core /= &pp;
            cof *= BigInt::from(p);
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if let Some(r) = exact_isqrt(&core.abs()) {
        if !r.is_one() {
            cof *= &r;
            core = if core.is_negative() {
                -BigInt::one()
            } else {
                BigInt::one()
            };
        }
    }
    (core, cof)
}

pub(crate) fn exact_isqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

/// Square root of a rational number if it is a rational square.
pub fn rat_sqrt(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    let n = exact_isqrt(r.numer())?;
    let d = exact_isqrt(r.denom())?;
    Some(Rat::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rat_sqrt_detects_squares() {
        assert_eq!(rat_sqrt(&ratio(1, 64)), Some(ratio(1, 8)));
        assert_eq!(rat_sqrt(&rat(2)), None);
        assert_eq!(rat_sqrt(&rat(-4)), None);
    }

    #[test]
    fn strip_squares() {
        let (c, f) = strip_small_squares(&BigInt::from(72));
        assert_eq!((c, f), (BigInt::from(2), BigInt::from(6)));
        let (c, f) = strip_small_squares(&BigInt::from(-49));
        assert_eq!((c, f), (BigInt::from(-1), BigInt::from(7)));
    }

    #[test]
    fn pow_by_squaring() {
        assert_eq!(ratio(2, 3).pow(5), ratio(32, 243));
        assert_eq!(rat(7).pow(0), rat(1));
    }
}
