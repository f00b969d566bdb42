//! Weierstrass surfaces `y^2 = x^3 + a2 x^2 + a4 x + a6` over `Q(t)` and the
//! group law on their sections.

mod branch;
mod torsion;

use std::fmt;

use thiserror::Error;

use crate::qfield::{Field, Poly, QPoly, QRatFunc, QuadTower, Rat, RatFunc, Ring, TowerElem};

pub(crate) use branch::eval_at_poly;
pub use branch::{BranchCurve, BranchError};
pub use torsion::TwoTorsion;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("degree parameter d = {0} must be even and positive")]
    BadDegree(u32),
    #[error("coefficient {name} has degree {degree}, above the bound {bound}")]
    DegreeBound {
        name: &'static str,
        degree: usize,
        bound: usize,
    },
    #[error("degenerate surface: the discriminant vanishes identically")]
    Degenerate,
    #[error("section {0} does not lie on the surface")]
    NotOnCurve(String),
}

/// Elliptic surface over the Hirzebruch surface of degree `d`, with
/// `deg a2 <= d`, `deg a4 <= 2d`, `deg a6 <= 3d`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeierstrassSurface {
    a2: QPoly,
    a4: QPoly,
    a6: QPoly,
    d: u32,
}

/// Standard invariants with `1728 disc = c4^3 - c6^2` and `j = c4^3 / disc`.
#[derive(Clone, PartialEq, Debug)]
pub struct Invariants {
    pub c4: QPoly,
    pub c6: QPoly,
    pub disc: QPoly,
    pub j: QRatFunc,
}

fn q(n: i64) -> QPoly {
    QPoly::constant(Rat::from_integer(n.into()))
}

impl WeierstrassSurface {
    pub fn new(a2: QPoly, a4: QPoly, a6: QPoly, d: u32) -> Result<Self, CurveError> {
        if d == 0 || d % 2 == 1 {
            return Err(CurveError::BadDegree(d));
        }
        let d = d as usize;
        for (name, c, bound) in [("a2", &a2, d), ("a4", &a4, 2 * d), ("a6", &a6, 3 * d)] {
            if let Some(degree) = c.degree().filter(|&k| k > bound) {
                return Err(CurveError::DegreeBound {
                    name,
                    degree,
                    bound,
                });
            }
        }
        let s = WeierstrassSurface {
            a2,
            a4,
            a6,
            d: d as u32,
        };
        if s.discriminant().is_zero() {
            return Err(CurveError::Degenerate);
        }
        Ok(s)
    }

    pub fn a2(&self) -> &QPoly {
        &self.a2
    }

    pub fn a4(&self) -> &QPoly {
        &self.a4
    }

    pub fn a6(&self) -> &QPoly {
        &self.a6
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn genus(&self) -> u32 {
        1
    }

    /// `-16 (4 a2^3 a6 - a2^2 a4^2 - 18 a2 a4 a6 + 4 a4^3 + 27 a6^2)`.
    pub fn discriminant(&self) -> QPoly {
        let (a2, a4, a6) = (&self.a2, &self.a4, &self.a6);
        let inner = &(&(&(&q(4) * &a2.pow(3)) * a6) - &(&a2.pow(2) * &a4.pow(2)))
            - &(&(&(&q(18) * a2) * a4) * a6);
        let inner = &(&inner + &(&q(4) * &a4.pow(3))) + &(&q(27) * &a6.pow(2));
        &q(-16) * &inner
    }

    pub fn invariants(&self) -> Invariants {
        let (a2, a4, a6) = (&self.a2, &self.a4, &self.a6);
        let c4 = &(&q(16) * &a2.pow(2)) - &(&q(48) * a4);
        let c6 = &(&(&q(-64) * &a2.pow(3)) + &(&(&q(288) * a2) * a4)) - &(&q(864) * a6);
        let disc = self.discriminant();
        let j = RatFunc::new(c4.pow(3), disc.clone());
        Invariants { c4, c6, disc, j }
    }

    /// Short Weierstrass coefficients `(A, B)` of `y^2 = x'^3 + A x' + B`
    /// with `x' = x + a2/3`.
    pub fn short_form(&self) -> (QPoly, QPoly) {
        let third = Rat::new(1.into(), 3.into());
        let (a2, a4, a6) = (&self.a2, &self.a4, &self.a6);
        let a = a4 - &a2.pow(2).scale(&third);
        let b = &(a6 - &(a2 * a4).scale(&third)) + &a2.pow(3).scale(&Rat::new(2.into(), 27.into()));
        (a, b)
    }

    /// The model in the chart `s = 1/t`: `a_k -> s^{kd/2} a_k(1/s)`.
    pub fn at_infinity(&self) -> WeierstrassSurface {
        let d = self.d as usize;
        WeierstrassSurface {
            a2: self.a2.reversed(d),
            a4: self.a4.reversed(2 * d),
            a6: self.a6.reversed(3 * d),
            d: self.d,
        }
    }

    pub fn branch_curve(&self) -> BranchCurve {
        BranchCurve::new(
            1,
            self.d,
            vec![
                self.a6.clone(),
                self.a4.clone(),
                self.a2.clone(),
                QPoly::one(),
            ],
        )
        .expect("surface coefficients satisfy the branch bounds")
    }

    fn lift<K: Field>(c: &QPoly) -> RatFunc<K> {
        RatFunc::from_poly(c.map(K::from_rat))
    }

    /// `x^3 + a2 x^2 + a4 x + a6`.
    pub fn cubic_at<K: Field>(&self, x: &RatFunc<K>) -> RatFunc<K> {
        let a2 = Self::lift::<K>(&self.a2);
        let a4 = Self::lift::<K>(&self.a4);
        let a6 = Self::lift::<K>(&self.a6);
        &(&(&(&(x + &a2) * x) + &a4) * x) + &a6
    }

    /// `3x^2 + 2 a2 x + a4`.
    pub fn cubic_derivative_at<K: Field>(&self, x: &RatFunc<K>) -> RatFunc<K> {
        let a2 = Self::lift::<K>(&self.a2);
        let a4 = Self::lift::<K>(&self.a4);
        let three = RatFunc::constant(K::from_int(3));
        let two = RatFunc::constant(K::from_int(2));
        &(&(&(&three * x) + &(&two * &a2)) * x) + &a4
    }

    pub fn on_curve<K: Field>(&self, p: &Section<K>) -> bool {
        match p {
            Section::Zero => true,
            Section::Affine { x, y } => y * y == self.cubic_at(x),
        }
    }

    pub fn check<K: Field>(&self, p: &Section<K>) -> Result<(), CurveError> {
        if self.on_curve(p) {
            Ok(())
        } else {
            Err(CurveError::NotOnCurve(p.to_string()))
        }
    }

    pub fn add<K: Field>(&self, p: &Section<K>, q: &Section<K>) -> Result<Section<K>, CurveError> {
        self.check(p)?;
        self.check(q)?;
        Ok(self.add_unchecked(p, q))
    }

    /// Chord-tangent addition for sections already known to be on the curve.
    pub fn add_unchecked<K: Field>(&self, p: &Section<K>, q: &Section<K>) -> Section<K> {
        let (xp, yp, xq, yq) = match (p, q) {
            (Section::Zero, _) => return q.clone(),
            (_, Section::Zero) => return p.clone(),
            (Section::Affine { x: xp, y: yp }, Section::Affine { x: xq, y: yq }) => {
                (xp, yp, xq, yq)
            }
        };
        let lambda = if xp == xq {
            if (yp + yq).is_zero() {
                return Section::Zero;
            }
            &self.cubic_derivative_at(xp) / &(yp + yp)
        } else {
            &(yq - yp) / &(xq - xp)
        };
        let a2 = Self::lift::<K>(&self.a2);
        let xr = &(&(&(&lambda * &lambda) - &a2) - xp) - xq;
        let yr = (yp + &(&lambda * &(&xr - xp))).neg_ref();
        Section::Affine { x: xr, y: yr }
    }

    pub fn double<K: Field>(&self, p: &Section<K>) -> Result<Section<K>, CurveError> {
        self.add(p, p)
    }

    /// `n P` by double-and-add; negative `n` negates.
    pub fn mul<K: Field>(&self, n: i64, p: &Section<K>) -> Result<Section<K>, CurveError> {
        self.check(p)?;
        Ok(self.mul_unchecked(n, p))
    }

    pub fn mul_unchecked<K: Field>(&self, n: i64, p: &Section<K>) -> Section<K> {
        let mut acc = Section::Zero;
        let mut base = if n < 0 { p.neg() } else { p.clone() };
        let mut k = n.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add_unchecked(&acc, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.add_unchecked(&base, &base);
            }
        }
        acc
    }

    pub fn two_torsion_sections(&self, cap: usize) -> TwoTorsion {
        torsion::two_torsion(self, cap)
    }
}

impl fmt::Display for WeierstrassSurface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "y^2 = x^3 + ({})*x^2 + ({})*x + ({})  [d = {}]",
            self.a2, self.a4, self.a6, self.d
        )
    }
}

/// Point of the generic fiber, over `Q` by default or over a quadratic
/// tower.
#[derive(Clone, PartialEq, Debug)]
pub enum Section<K = Rat> {
    Zero,
    Affine { x: RatFunc<K>, y: RatFunc<K> },
}

pub type TowerSection = Section<TowerElem>;

impl<K: Field> Section<K> {
    pub fn affine(x: RatFunc<K>, y: RatFunc<K>) -> Self {
        Section::Affine { x, y }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Section::Zero)
    }

    pub fn x(&self) -> Option<&RatFunc<K>> {
        match self {
            Section::Zero => None,
            Section::Affine { x, .. } => Some(x),
        }
    }

    pub fn y(&self) -> Option<&RatFunc<K>> {
        match self {
            Section::Zero => None,
            Section::Affine { y, .. } => Some(y),
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            Section::Zero => Section::Zero,
            Section::Affine { x, y } => Section::Affine {
                x: x.clone(),
                y: y.neg_ref(),
            },
        }
    }

    /// Substitutes `t -> nu` and rescales `(x, y) -> (u^2 x, u^3 y)`.
    pub fn transform(&self, nu: &RatFunc<K>, u: &RatFunc<K>) -> Self {
        match self {
            Section::Zero => Section::Zero,
            Section::Affine { x, y } => {
                let u2 = u * u;
                Section::Affine {
                    x: &x.compose(nu) * &u2,
                    y: &y.compose(nu) * &(&u2 * u),
                }
            }
        }
    }
}

impl Section<Rat> {
    pub fn embed(&self, tower: &QuadTower) -> TowerSection {
        match self {
            Section::Zero => Section::Zero,
            Section::Affine { x, y } => Section::Affine {
                x: x.map(|c| tower.embed(c)),
                y: y.map(|c| tower.embed(c)),
            },
        }
    }

    /// The chart at infinity: `(s^d x(1/s), s^{3d/2} y(1/s))`.
    pub fn at_infinity(&self, d: u32) -> Section<Rat> {
        match self {
            Section::Zero => Section::Zero,
            Section::Affine { x, y } => {
                let s_inv = RatFunc::new(QPoly::one(), QPoly::var());
                let sd = RatFunc::from_poly(QPoly::monomial(Rat::one(), d as usize));
                let s3 = RatFunc::from_poly(QPoly::monomial(Rat::one(), 3 * d as usize / 2));
                Section::Affine {
                    x: &x.compose(&s_inv) * &sd,
                    y: &y.compose(&s_inv) * &s3,
                }
            }
        }
    }
}

impl TowerSection {
    /// The section over `Q` when all coordinates are rational.
    pub fn to_rational(&self) -> Option<Section<Rat>> {
        match self {
            Section::Zero => Some(Section::Zero),
            Section::Affine { x, y } => {
                let down = |f: &RatFunc<TowerElem>| -> Option<QRatFunc> {
                    let n: Option<Vec<Rat>> =
                        f.num().coeffs().iter().map(TowerElem::as_rat).collect();
                    let d: Option<Vec<Rat>> =
                        f.den().coeffs().iter().map(TowerElem::as_rat).collect();
                    Some(RatFunc::new(Poly::new(n?), Poly::new(d?)))
                };
                Some(Section::Affine {
                    x: down(x)?,
                    y: down(y)?,
                })
            }
        }
    }
}

impl<K: Field> fmt::Display for Section<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Section::Zero => write!(f, "O"),
            Section::Affine { x, y } => write!(f, "({x}, {y})"),
        }
    }
}
