use std::fmt;

use thiserror::Error;

use crate::qfield::{Poly, QPoly, QRatFunc, QtPoly, RatFunc};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BranchError {
    #[error("genus must be at least 1")]
    BadGenus,
    #[error("degree parameter d = {0} must be even and positive")]
    BadDegree(u32),
    #[error("x-degree is {found}, expected {expected}")]
    XDegree { found: usize, expected: usize },
    #[error("not monic in x: leading coefficient is {0}")]
    NotMonic(String),
    #[error("coefficient of x^{power} has t-degree {degree}, above the bound {bound}")]
    DegreeBound {
        power: usize,
        degree: usize,
        bound: usize,
    },
    #[error("not reduced: repeated factor in x over Q(t)")]
    NotReduced,
}

/// Affine model `p(x, t) = sum_k c_k(t) x^k` of a curve on the Hirzebruch
/// surface of degree `d`, monic of x-degree `2g + 1`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BranchCurve {
    g: u32,
    d: u32,
    coeffs: Vec<QPoly>,
}

impl BranchCurve {
    pub fn new(g: u32, d: u32, coeffs: Vec<QPoly>) -> Result<Self, BranchError> {
        let b = Self::raw(g, d, coeffs);
        match b.violations().into_iter().next() {
            Some(e) => Err(e),
            None => Ok(b),
        }
    }

    /// Builds the curve without validation; see [`BranchCurve::violations`].
    pub fn raw(g: u32, d: u32, mut coeffs: Vec<QPoly>) -> Self {
        while coeffs.last().is_some_and(QPoly::is_zero) {
            coeffs.pop();
        }
        BranchCurve { g, d, coeffs }
    }

    /// Every violated structural condition.
    pub fn violations(&self) -> Vec<BranchError> {
        let mut out = Vec::new();
        if self.g == 0 {
            out.push(BranchError::BadGenus);
        }
        if self.d == 0 || self.d % 2 == 1 {
            out.push(BranchError::BadDegree(self.d));
        }
        let expected = 2 * self.g as usize + 1;
        let found = self.coeffs.len().saturating_sub(1);
        if found != expected {
            out.push(BranchError::XDegree { found, expected });
        }
        if let Some(lc) = self.coeffs.last() {
            if lc != &QPoly::one() {
                out.push(BranchError::NotMonic(lc.to_string()));
            }
        }
        for (k, c) in self.coeffs.iter().enumerate() {
            let bound = self.d as usize * expected.saturating_sub(k);
            if let Some(degree) = c.degree().filter(|&deg| deg > bound) {
                out.push(BranchError::DegreeBound {
                    power: k,
                    degree,
                    bound,
                });
            }
        }
        if !self.coeffs.is_empty() && !self.is_reduced() {
            out.push(BranchError::NotReduced);
        }
        out
    }

    pub fn genus(&self) -> u32 {
        self.g
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    /// Coefficients of `x^k`, low degree first.
    pub fn coeffs(&self) -> &[QPoly] {
        &self.coeffs
    }

    pub fn as_qt_poly(&self) -> QtPoly {
        Poly::new(
            self.coeffs
                .iter()
                .cloned()
                .map(RatFunc::from_poly)
                .collect(),
        )
    }

    /// Squarefree as a polynomial in `x` over `Q(t)`.
    pub fn is_reduced(&self) -> bool {
        let p = self.as_qt_poly();
        p.degree().unwrap_or(0) > 0 && p.gcd(&p.derivative()).degree() == Some(0)
    }

    pub fn eval_x(&self, x: &QRatFunc) -> QRatFunc {
        self.as_qt_poly().eval(x)
    }

    /// `dp/dx` as a polynomial in `x`.
    pub fn dx(&self) -> Vec<QPoly> {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.scale(&crate::qfield::rat(k as i64)))
            .collect()
    }

    /// `dp/dt` as a polynomial in `x`.
    pub fn dt(&self) -> Vec<QPoly> {
        self.coeffs.iter().map(QPoly::derivative).collect()
    }

    /// Coefficients `c_k(t)` of `p(u + f, t) = sum c_k u^k`.
    pub fn u_adic(&self, f: &QPoly) -> Vec<QPoly> {
        let p: Poly<QPoly> = Poly::new(self.coeffs.clone());
        let shifted = p.compose(&Poly::new(vec![f.clone(), QPoly::one()]));
        let mut out = shifted.into_coeffs();
        out.resize(self.coeffs.len(), QPoly::zero());
        out
    }
}

/// Evaluates a polynomial in `x` with `Q[t]` coefficients at `x = f(t)`.
pub(crate) fn eval_at_poly(cs: &[QPoly], f: &QPoly) -> QPoly {
    cs.iter()
        .rev()
        .fold(QPoly::zero(), |acc, c| &(&acc * f) + c)
}

impl fmt::Display for BranchCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let xs = match k {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{k}"),
            };
            terms.push(match (c == &QPoly::one(), k) {
                (true, 0) => "1".to_string(),
                (true, _) => xs,
                (false, 0) => format!("({c})"),
                (false, _) => format!("({c})*{xs}"),
            });
        }
        if terms.is_empty() {
            return write!(f, "0");
        }
        write!(f, "{}", terms.join(" + "))
    }
}
