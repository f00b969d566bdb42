use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

use super::factor::{factor, factor_squarefree};
use super::poly::QPoly;
use super::ratfunc::QRatFunc;

/// Order of vanishing; `PosInfinity` is the valuation of zero.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Valuation {
    Finite(i64),
    PosInfinity,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::PosInfinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Valuation::PosInfinity
    }

    /// Shift by an integer; infinity absorbs.
    pub fn plus(self, k: i64) -> Valuation {
        match self {
            Valuation::Finite(v) => Valuation::Finite(v + k),
            Valuation::PosInfinity => Valuation::PosInfinity,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::PosInfinity => write!(f, "+inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlaceError {
    #[error("place polynomial {0} is not monic of positive degree")]
    NotMonic(QPoly),
    #[error("place polynomial {0} is reducible over Q")]
    Reducible(QPoly),
}

/// A closed point of the projective t-line over Q.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Place {
    /// Zero set of a monic irreducible polynomial.
    Finite(QPoly),
    Infinity,
}

impl Place {
    pub fn finite(pi: QPoly) -> Result<Place, PlaceError> {
        if !pi.is_monic() || pi.degree().unwrap_or(0) == 0 {
            return Err(PlaceError::NotMonic(pi));
        }
        if factor_squarefree(&pi).len() != 1 || !pi.is_squarefree() {
            return Err(PlaceError::Reducible(pi));
        }
        Ok(Place::Finite(pi))
    }

    /// Degree of the residue field over Q.
    pub fn degree(&self) -> usize {
        match self {
            Place::Finite(pi) => pi.degree().expect("nonzero place polynomial"),
            Place::Infinity => 1,
        }
    }

    pub fn poly_valuation(&self, p: &QPoly) -> Valuation {
        if p.is_zero() {
            return Valuation::PosInfinity;
        }
        match self {
            Place::Finite(pi) => Valuation::Finite(p.multiplicity_of(pi).expect("nonzero") as i64),
            Place::Infinity => Valuation::Finite(-(p.degree().expect("nonzero") as i64)),
        }
    }

    /// Valuation of `x`, twisted at infinity: there the result is the order
    /// at `s = 0` of `s^twist * x(1/s)`. Finite places ignore the twist.
    pub fn valuation(&self, x: &QRatFunc, twist: i64) -> Valuation {
        if x.is_zero() {
            return Valuation::PosInfinity;
        }
        let plain = |p: &QPoly| self.poly_valuation(p).finite().expect("nonzero");
        let v = plain(x.num()) - plain(x.den());
        match self {
            Place::Finite(_) => Valuation::Finite(v),
            Place::Infinity => Valuation::Finite(v + twist),
        }
    }
}

impl PartialOrd for Place {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Finite places ordered by degree and coefficients, infinity last.
impl Ord for Place {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Place::Finite(a), Place::Finite(b)) => a.canonical_cmp(b),
            (Place::Finite(_), Place::Infinity) => Ordering::Less,
            (Place::Infinity, Place::Finite(_)) => Ordering::Greater,
            (Place::Infinity, Place::Infinity) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(pi) => write!(f, "{pi}"),
            Place::Infinity => write!(f, "inf"),
        }
    }
}

/// Finite places where a nonzero polynomial vanishes, with orders.
pub fn zeros_of(p: &QPoly) -> Vec<(Place, u32)> {
    factor(p)
        .map(|f| f.factors)
        .unwrap_or_default()
        .into_iter()
        .map(|(pi, m)| (Place::Finite(pi), m))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfield::ratfunc::RatFunc;
    use crate::qfield::ring::rat;

    fn p(cs: &[i64]) -> QPoly {
        QPoly::from_ints(cs)
    }

    #[test]
    fn valuations() {
        let x = RatFunc::new(p(&[0, 0, 1]), p(&[-1, 1]));
        assert_eq!(
            Place::Finite(p(&[0, 1])).valuation(&x, 0),
            Valuation::Finite(2)
        );
        assert_eq!(
            Place::Finite(p(&[-1, 1])).valuation(&x, 0),
            Valuation::Finite(-1)
        );
        assert_eq!(Place::Infinity.valuation(&x, 0), Valuation::Finite(-1));
        assert_eq!(Place::Infinity.valuation(&x, 2), Valuation::Finite(1));
        assert_eq!(
            Place::Infinity.valuation(&RatFunc::zero(), 0),
            Valuation::PosInfinity
        );
    }

    #[test]
    fn construction_checks() {
        assert!(Place::finite(p(&[1, 0, 1])).is_ok());
        assert!(matches!(
            Place::finite(p(&[-1, 0, 1])),
            Err(PlaceError::Reducible(_))
        ));
        assert!(matches!(
            Place::finite(p(&[1, 2])),
            Err(PlaceError::NotMonic(_))
        ));
        assert!(matches!(
            Place::finite(QPoly::constant(rat(1))),
            Err(PlaceError::NotMonic(_))
        ));
    }

    #[test]
    fn ordering() {
        let mut v = vec![
            Place::Infinity,
            Place::Finite(p(&[1, 0, 1])),
            Place::Finite(p(&[0, 1])),
        ];
        v.sort();
        assert_eq!(
            v,
            vec![
                Place::Finite(p(&[0, 1])),
                Place::Finite(p(&[1, 0, 1])),
                Place::Infinity
            ]
        );
    }
}
