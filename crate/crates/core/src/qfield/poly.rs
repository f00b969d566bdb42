use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::ring::{Field, Rat, Ring};

/// Dense univariate polynomial, coefficient `i` multiplies `t^i`.
///
/// The coefficient vector never ends in a zero, so the zero polynomial is the
/// empty vector and has no degree.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly<K> {
    coeffs: Vec<K>,
}

impl<K: Ring> Poly<K> {
    pub fn new(mut coeffs: Vec<K>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(K::one())
    }

    pub fn constant(c: K) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `t`.
    pub fn var() -> Self {
        Self::monomial(K::one(), 1)
    }

    pub fn monomial(c: K, k: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut v = vec![K::zero(); k + 1];
        v[k] = c;
        Poly { coeffs: v }
    }

    pub fn from_rats(cs: &[Rat]) -> Self {
        Self::new(cs.iter().map(K::from_rat).collect())
    }

    pub fn from_ints(cs: &[i64]) -> Self {
        Self::new(cs.iter().map(|&c| K::from_int(c)).collect())
    }

    pub fn coeffs(&self) -> &[K] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<K> {
        self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to `-1`; only for comparisons
    /// in degree-bound checks, never for arithmetic.
    pub fn degree_or_neg(&self) -> i64 {
        self.degree().map_or(-1, |d| d as i64)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn coeff(&self, i: usize) -> K {
        self.coeffs.get(i).cloned().unwrap_or_else(K::zero)
    }

    pub fn lc(&self) -> K {
        self.coeffs.last().cloned().unwrap_or_else(K::zero)
    }

    pub fn constant_term(&self) -> K {
        self.coeff(0)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn map<L: Ring>(&self, f: impl Fn(&K) -> L) -> Poly<L> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    pub fn scale(&self, c: &K) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self::new(self.coeffs.iter().map(|a| a.times(c)).collect())
    }

    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = vec![K::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        Poly { coeffs: v }
    }

    pub fn add_ref(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Self::new(
            (0..n)
                .map(|i| match (self.coeffs.get(i), rhs.coeffs.get(i)) {
                    (Some(a), Some(b)) => a.plus(b),
                    (Some(a), None) => a.clone(),
                    (None, Some(b)) => b.clone(),
                    (None, None) => unreachable!(),
                })
                .collect(),
        )
    }

    pub fn sub_ref(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Self::new(
            (0..n)
                .map(|i| match (self.coeffs.get(i), rhs.coeffs.get(i)) {
                    (Some(a), Some(b)) => a.minus(b),
                    (Some(a), None) => a.clone(),
                    (None, Some(b)) => b.negated(),
                    (None, None) => unreachable!(),
                })
                .collect(),
        )
    }

    pub fn mul_ref(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut out = vec![K::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].plus(&a.times(b));
            }
        }
        Self::new(out)
    }

    pub fn neg_ref(&self) -> Self {
        Poly {
            coeffs: self.coeffs.iter().map(|c| c.negated()).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        Ring::pow(self, e)
    }

    pub fn eval(&self, at: &K) -> K {
        self.coeffs
            .iter()
            .rev()
            .fold(K::zero(), |acc, c| acc.times(at).plus(c))
    }

    /// Evaluates at an element of any ring the coefficients embed into.
    pub fn eval_in<R: Ring>(&self, at: &R, embed: impl Fn(&K) -> R) -> R {
        self.coeffs
            .iter()
            .rev()
            .fold(R::zero(), |acc, c| acc.times(at).plus(&embed(c)))
    }

    /// Composition `self(inner)`.
    pub fn compose(&self, inner: &Self) -> Self {
        self.coeffs.iter().rev().fold(Self::zero(), |acc, c| {
            acc.mul_ref(inner).add_ref(&Self::constant(c.clone()))
        })
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.times(&K::from_int(i as i64)))
                .collect(),
        )
    }

    /// Reverses the coefficient list as a polynomial of formal degree `n`:
    /// `t^n * p(1/t)`. Requires `n >= deg p`.
    pub fn reversed(&self, n: usize) -> Self {
        let mut v = vec![K::zero(); n + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            assert!(i <= n, "reversal degree below polynomial degree");
            v[n - i] = c.clone();
        }
        Self::new(v)
    }

    pub fn display_var<'a>(&'a self, var: &'a str) -> PolyDisplay<'a, K> {
        PolyDisplay { poly: self, var }
    }
}

impl<K: Field> Poly<K> {
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let inv = self.lc().inverse();
        self.scale(&inv)
    }

    /// Euclidean division. Panics if `divisor` is zero.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("polynomial division by zero");
        let inv = divisor.lc().inverse();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![K::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd].times(&inv);
            if c.is_zero() {
                continue;
            }
            for (j, b) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].minus(&c.times(b));
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    /// Quotient when `divisor` divides `self` exactly.
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(divisor);
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, other: &Self) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.rem(self).is_zero()
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Extended gcd: `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn xgcd(&self, other: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub_ref(&q.mul_ref(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub_ref(&q.mul_ref(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = r0.lc().inverse();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    /// Order of `factor` dividing `self`; `None` when `self` is zero.
    pub fn multiplicity_of(&self, factor: &Self) -> Option<u32> {
        if self.is_zero() {
            return None;
        }
        assert!(factor.degree().unwrap_or(0) >= 1, "multiplicity of a unit");
        let mut k = 0;
        let mut cur = self.clone();
        while let Some(q) = cur.exact_div(factor) {
            cur = q;
            k += 1;
        }
        Some(k)
    }

    /// Yun's squarefree decomposition: returns `(c, [(g_i, i)])` with
    /// `self = c * prod g_i^i`, each `g_i` monic squarefree and pairwise
    /// coprime. Works over any characteristic-zero field.
    pub fn squarefree_decomposition(&self) -> (K, Vec<(Self, u32)>) {
        assert!(!self.is_zero(), "squarefree decomposition of zero");
        let c = self.lc();
        let f = self.monic();
        let mut out = Vec::new();
        if f.degree() == Some(0) {
            return (c, out);
        }
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.exact_div(&a0).expect("gcd divides");
        let mut cc = df.exact_div(&a0).expect("gcd divides");
        let mut d = cc.sub_ref(&b.derivative());
        let mut i = 1;
        loop {
            let a = b.gcd(&d);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), i));
            }
            b = b.exact_div(&a).expect("gcd divides");
            if b.degree() == Some(0) {
                break;
            }
            cc = d.exact_div(&a).expect("gcd divides");
            d = cc.sub_ref(&b.derivative());
            i += 1;
        }
        (c, out)
    }

    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && self.gcd(&self.derivative()).degree() == Some(0)
    }

    /// `(c, h)` with `self = c * h^2` and `h` monic, when every squarefree
    /// part has even multiplicity.
    pub fn square_up_to_constant(&self) -> Option<(K, Self)> {
        if self.is_zero() {
            return None;
        }
        let (c, parts) = self.squarefree_decomposition();
        let mut h = Self::one();
        for (g, m) in parts {
            if m % 2 == 1 {
                return None;
            }
            h = h.mul_ref(&g.pow(m / 2));
        }
        Some((c, h))
    }
}

impl Poly<Rat> {
    /// Ordering key: degree first, then coefficients from the top down.
    pub fn canonical_cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl<K: Ring> Ring for Poly<K> {
    fn zero() -> Self {
        Poly::zero()
    }
    fn one() -> Self {
        Poly::one()
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
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
        Poly::constant(K::from_rat(r))
    }
    fn split_sign(&self) -> (bool, Self) {
        if self.coeffs.len() == 1 {
            let (neg, abs) = self.coeffs[0].split_sign();
            return (neg, Poly::constant(abs));
        }
        (false, self.clone())
    }
    fn is_atomic(&self) -> bool {
        self.coeffs.len() <= 1 && self.coeffs.first().is_none_or(|c| c.is_atomic())
    }
}

macro_rules! poly_binop {
    ($tr:ident, $m:ident, $f:ident) => {
        impl<K: Ring> $tr<&Poly<K>> for &Poly<K> {
            type Output = Poly<K>;
            fn $m(self, rhs: &Poly<K>) -> Poly<K> {
                self.$f(rhs)
            }
        }
        impl<K: Ring> $tr<Poly<K>> for Poly<K> {
            type Output = Poly<K>;
            fn $m(self, rhs: Poly<K>) -> Poly<K> {
                self.$f(&rhs)
            }
        }
        impl<K: Ring> $tr<&Poly<K>> for Poly<K> {
            type Output = Poly<K>;
            fn $m(self, rhs: &Poly<K>) -> Poly<K> {
                self.$f(rhs)
            }
        }
    };
}
poly_binop!(Add, add, add_ref);
poly_binop!(Sub, sub, sub_ref);
poly_binop!(Mul, mul, mul_ref);

impl<K: Ring> Neg for Poly<K> {
    type Output = Poly<K>;
    fn neg(self) -> Poly<K> {
        self.neg_ref()
    }
}

impl<K: Ring> Neg for &Poly<K> {
    type Output = Poly<K>;
    fn neg(self) -> Poly<K> {
        self.neg_ref()
    }
}

pub struct PolyDisplay<'a, K> {
    poly: &'a Poly<K>,
    var: &'a str,
}

impl<K: Ring> fmt::Display for PolyDisplay<'_, K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.poly.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (neg, abs) = c.split_sign();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            let body = if abs.is_atomic() {
                format!("{abs}")
            } else {
                format!("({abs})")
            };
            match (k, abs.is_one()) {
                (0, _) => write!(f, "{body}")?,
                (_, true) => {}
                _ => write!(f, "{body}*")?,
            }
            match k {
                0 => {}
                1 => write!(f, "{}", self.var)?,
                _ => write!(f, "{}^{}", self.var, k)?,
            }
        }
        Ok(())
    }
}

impl<K: Ring> fmt::Display for Poly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_var("t"))
    }
}

pub type QPoly = Poly<Rat>;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfield::ring::{rat, ratio};

    fn p(cs: &[i64]) -> QPoly {
        Poly::from_ints(cs)
    }

    #[test]
    fn canonical_trailing_zeros() {
        assert_eq!(p(&[1, 2, 0, 0]), p(&[1, 2]));
        assert_eq!(p(&[0, 0]).degree(), None);
        assert!(p(&[]).is_zero());
    }

    #[test]
    fn gcd_examples() {
        // t^2 - 1, t - 1
        assert_eq!(p(&[-1, 0, 1]).gcd(&p(&[-1, 1])), p(&[-1, 1]));
        assert_eq!(p(&[0, 1]).gcd(&p(&[1])), p(&[1]));
        assert!(QPoly::zero().gcd(&QPoly::zero()).is_zero());
        // t(t-5825)(t-2025) and 36 t^2 (t-2025)^2 share t(t-2025)
        let t = QPoly::var();
        let c = |n: i64| QPoly::constant(rat(n));
        let a = &(&t * &(&t - &c(5825))) * &(&t - &c(2025));
        let b = &(&c(36) * &t.pow(2)) * &(&t - &c(2025)).pow(2);
        assert_eq!(a.gcd(&b), &t * &(&t - &c(2025)));
    }

    #[test]
    fn division_and_xgcd() {
        let a = p(&[3, 0, 2, 1]);
        let b = p(&[1, 1]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(&(&q * &b) + &r, a);
        let (g, s, t) = a.xgcd(&p(&[2, 0, 1]));
        assert_eq!(&(&s * &a) + &(&t * &p(&[2, 0, 1])), g);
    }

    #[test]
    fn display_is_parseable_style() {
        let q = QPoly::new(vec![ratio(-921375, 4), ratio(435, 2), ratio(1, 36)]);
        assert_eq!(q.to_string(), "1/36*t^2 + 435/2*t - 921375/4");
        assert_eq!(p(&[0, -1]).to_string(), "-t");
        assert_eq!(QPoly::zero().to_string(), "0");
    }

    #[test]
    fn squarefree_and_squares() {
        let t = QPoly::var();
        let f = &(&t.pow(3) * &(&t - &p(&[1])).pow(2)) * &p(&[5]);
        let (c, parts) = f.squarefree_decomposition();
        assert_eq!(c, rat(5));
        assert_eq!(parts, vec![(p(&[-1, 1]), 2), (t.clone(), 3)]);
        assert_eq!(
            p(&[0, 0, 4]).square_up_to_constant(),
            Some((rat(4), t.clone()))
        );
        assert_eq!(p(&[0, -1, 1]).square_up_to_constant(), None);
    }

    #[test]
    fn compose_and_reverse() {
        let f = p(&[1, 2, 3]);
        let g = p(&[0, 0, 1]);
        assert_eq!(f.compose(&g), p(&[1, 0, 2, 0, 3]));
        assert_eq!(f.reversed(3), p(&[0, 3, 2, 1]));
    }
}
