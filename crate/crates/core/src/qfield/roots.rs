//! Roots of polynomials in `X` whose coefficients lie in `Q(t)`.
//!
//! A root `X` in `Q(t)` is determined by its valuation at every place and a
//! constant. Valuations are read off the Newton polygons at the places
//! dividing the extreme coefficients (all other places force valuation 0),
//! and the constant is a rational root of the gcd of the coefficient
//! equations. Factorization over `Q(t)` is complete up to degree 4: after
//! removing linear factors, cubics and quadratics are irreducible and
//! quartics are tested for a split into two quadratics with the resolvent
//! cubic.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use super::factor::rational_roots;
use super::place::{zeros_of, Place};
use super::poly::{Poly, QPoly};
use super::ratfunc::{QRatFunc, RatFunc};
use super::ring::{Rat, Ring};
use super::tower::{QuadTower, TowerElem, TowerError};

/// Polynomial in `X` over `Q(t)`.
pub type QtPoly = Poly<QRatFunc>;

/// Polynomial in `X` over `K(t)` for a quadratic tower `K`.
pub type TowerRatFunc = RatFunc<TowerElem>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootError {
    #[error("root finding on the zero polynomial")]
    Zero,
    #[error(
        "factor of degree {0} without linear factors is beyond the supported range (at most 4)"
    )]
    TooLarge(usize),
}

/// Total order on rational functions used for deterministic listings.
pub fn ratfunc_cmp(a: &QRatFunc, b: &QRatFunc) -> Ordering {
    a.num()
        .canonical_cmp(b.num())
        .then_with(|| a.den().canonical_cmp(b.den()))
}

pub fn qt_from_polys(cs: &[QPoly]) -> QtPoly {
    Poly::new(cs.iter().cloned().map(RatFunc::from_poly).collect())
}

/// Clears denominators: returns polynomial coefficients `h_0..h_n`
/// proportional to those of `h`.
fn clear_denominators(h: &QtPoly) -> Vec<QPoly> {
    let l = h.coeffs().iter().fold(QPoly::one(), |acc, c| {
        let g = acc.gcd(c.den());
        (&acc * c.den()).exact_div(&g).expect("gcd divides")
    });
    h.coeffs()
        .iter()
        .map(|c| {
            (c.num() * &l)
                .exact_div(c.den())
                .expect("lcm is a multiple")
        })
        .collect()
}

/// Slopes `(dy, dx)` of the lower convex hull of the points `(i, v_i)`.
fn newton_slopes(points: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &p in points {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            if (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0) <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    hull.windows(2)
        .map(|w| (w[1].1 - w[0].1, w[1].0 - w[0].0))
        .collect()
}

/// Integer root valuations allowed by the Newton polygon of the points
/// `(i, v_i)`.
fn newton_root_valuations(points: &[(i64, i64)]) -> BTreeSet<i64> {
    newton_slopes(points)
        .into_iter()
        .filter(|(dy, dx)| dy % dx == 0)
        .map(|(dy, dx)| -dy / dx)
        .collect()
}

fn valuation_points(h: &[QPoly], place: &Place) -> Vec<(i64, i64)> {
    h.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i as i64, place.poly_valuation(c).finite().expect("nonzero")))
        .collect()
}

fn extreme_places(h: &[QPoly]) -> Vec<Place> {
    let n = h.len() - 1;
    let mut places: Vec<Place> = zeros_of(&h[0])
        .into_iter()
        .chain(zeros_of(&h[n]))
        .map(|(p, _)| p)
        .collect();
    places.sort();
    places.dedup();
    places
}

/// A place with a non-integral Newton slope, searched over the places
/// dividing the extreme coefficients and infinity.
fn fractional_slope(f: &QtPoly) -> Option<RootlessEvidence> {
    let mut h = clear_denominators(f);
    while h.first().is_some_and(QPoly::is_zero) {
        h.remove(0);
    }
    if h.len() < 2 {
        return None;
    }
    let mut places = extreme_places(&h);
    places.push(Place::Infinity);
    for place in places {
        for (dy, dx) in newton_slopes(&valuation_points(&h, &place)) {
            if dy % dx != 0 {
                let g = num_integer::gcd(dy, dx);
                return Some(RootlessEvidence::FractionalSlope {
                    place,
                    num: dy / g,
                    den: dx / g,
                });
            }
        }
    }
    None
}

/// Distinct roots in `Q(t)` of `sum h_i X^i` with `h_0, h_n` nonzero.
fn nonzero_roots(h: &[QPoly]) -> Vec<QRatFunc> {
    let places = extreme_places(h);
    let point_set = |place: &Place| valuation_points(h, place);
    let choices: Vec<Vec<i64>> = places
        .iter()
        .map(|p| newton_root_valuations(&point_set(p)).into_iter().collect())
        .collect();
    let degrees: BTreeSet<i64> = newton_root_valuations(&point_set(&Place::Infinity))
        .into_iter()
        .map(|e| -e)
        .collect();

    let mut out: Vec<QRatFunc> = Vec::new();
    let mut combo = vec![0usize; places.len()];
    if choices.iter().any(Vec::is_empty) || degrees.is_empty() {
        return out;
    }
    loop {
        let mut num = QPoly::one();
        let mut den = QPoly::one();
        let mut deg = 0i64;
        for (k, place) in places.iter().enumerate() {
            let e = choices[k][combo[k]];
            let Place::Finite(pi) = place else {
                unreachable!()
            };
            deg += e * place.degree() as i64;
            if e > 0 {
                num = &num * &pi.pow(e as u32);
            } else if e < 0 {
                den = &den * &pi.pow((-e) as u32);
            }
        }
        if degrees.contains(&deg) {
            for c in scalar_multipliers(h, &num, &den) {
                let root = RatFunc::new(num.scale(&c), den.clone());
                if !out.contains(&root) {
                    out.push(root);
                }
            }
        }
        // advance the mixed-radix counter
        let mut k = 0;
        loop {
            if k == combo.len() {
                out.sort_by(ratfunc_cmp);
                return out;
            }
            combo[k] += 1;
            if combo[k] < choices[k].len() {
                break;
            }
            combo[k] = 0;
            k += 1;
        }
    }
}

/// Nonzero rationals `c` with `sum h_i (c num/den)^i = 0`.
fn scalar_multipliers(h: &[QPoly], num: &QPoly, den: &QPoly) -> Vec<Rat> {
    let n = h.len() - 1;
    let terms: Vec<QPoly> = h
        .iter()
        .enumerate()
        .map(|(i, hi)| &(hi * &num.pow(i as u32)) * &den.pow((n - i) as u32))
        .collect();
    let top = terms.iter().filter_map(|p| p.degree()).max().unwrap_or(0);
    let mut g = QPoly::zero();
    for k in 0..=top {
        let eq = Poly::new(terms.iter().map(|p| p.coeff(k)).collect());
        g = g.gcd(&eq);
        if g.degree() == Some(0) {
            return Vec::new();
        }
    }
    if g.is_zero() {
        return Vec::new();
    }
    rational_roots(&g)
        .into_iter()
        .filter(|c| !Ring::is_zero(c))
        .collect()
}

/// Distinct roots in `Q(t)`, sorted.
pub fn roots_in_qt(h: &QtPoly) -> Result<Vec<QRatFunc>, RootError> {
    if h.is_zero() {
        return Err(RootError::Zero);
    }
    let mut cs = clear_denominators(h);
    let mut out = Vec::new();
    if cs[0].is_zero() {
        out.push(QRatFunc::zero());
        while cs[0].is_zero() {
            cs.remove(0);
        }
    }
    if cs.len() >= 2 {
        out.extend(nonzero_roots(&cs));
    }
    out.sort_by(ratfunc_cmp);
    Ok(out)
}

/// Factorization over `Q(t)` of a polynomial whose nonlinear part has degree
/// at most 4.
#[derive(Debug, Clone, PartialEq)]
pub struct QtFactorization {
    pub leading: QRatFunc,
    /// Roots with multiplicities.
    pub roots: Vec<(QRatFunc, u32)>,
    /// Monic irreducible factors of degree at least 2 with multiplicities.
    pub nonlinear: Vec<(QtPoly, u32)>,
}

impl QtFactorization {
    pub fn expand(&self) -> QtPoly {
        let mut acc = QtPoly::constant(self.leading.clone());
        for (r, m) in &self.roots {
            acc = &acc * &linear(r).pow(*m);
        }
        for (f, m) in &self.nonlinear {
            acc = &acc * &f.pow(*m);
        }
        acc
    }
}

fn linear(r: &QRatFunc) -> QtPoly {
    Poly::new(vec![r.neg_ref(), QRatFunc::one()])
}

pub fn factor_over_qt(h: &QtPoly) -> Result<QtFactorization, RootError> {
    let distinct = roots_in_qt(h)?;
    let leading = h.lc();
    let mut rest = h.monic();
    let mut roots = Vec::new();
    for r in distinct {
        let lin = linear(&r);
        let mut m = 0;
        while let Some(q) = rest.exact_div(&lin) {
            rest = q;
            m += 1;
        }
        roots.push((r, m));
    }
    let mut nonlinear = Vec::new();
    match rest.degree().unwrap_or(0) {
        0 => {}
        // without roots, a quadratic or cubic is irreducible
        2 | 3 => nonlinear.push((rest, 1)),
        _ => {
            let (_, parts) = rest.squarefree_decomposition();
            for (g, m) in parts {
                match g.degree().expect("nonzero") {
                    2 | 3 => nonlinear.push((g, m)),
                    4 => match split_quartic(&g)? {
                        Some((a, b)) => {
                            nonlinear.push((a, m));
                            nonlinear.push((b, m));
                        }
                        None => nonlinear.push((g, m)),
                    },
                    k => return Err(RootError::TooLarge(k)),
                }
            }
        }
    }
    nonlinear.sort_by(|a, b| qt_cmp(&a.0, &b.0));
    Ok(QtFactorization {
        leading,
        roots,
        nonlinear,
    })
}

fn qt_cmp(a: &QtPoly, b: &QtPoly) -> Ordering {
    a.coeffs().len().cmp(&b.coeffs().len()).then_with(|| {
        a.coeffs()
            .iter()
            .rev()
            .zip(b.coeffs().iter().rev())
            .map(|(x, y)| ratfunc_cmp(x, y))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    })
}

fn rf(n: i64) -> QRatFunc {
    QRatFunc::from_rat(&Rat::from_integer(n.into()))
}

/// Split of a monic quartic without roots in `Q(t)` into two monic
/// quadratics, if one exists.
fn split_quartic(g: &QtPoly) -> Result<Option<(QtPoly, QtPoly)>, RootError> {
    let b = g.coeff(3);
    let shift = b.scale(&Rat::new(1.into(), 4.into()));
    // depressed form in Y = X + b/4
    let x_of_y = Poly::new(vec![shift.neg_ref(), QRatFunc::one()]);
    let dep = g.compose(&x_of_y);
    let (p, q, r) = (dep.coeff(2), dep.coeff(1), dep.coeff(0));
    let back = |f: QtPoly| f.compose(&Poly::new(vec![shift.clone(), QRatFunc::one()]));

    if q.is_zero() {
        let disc = &(&p * &p) - &(&rf(4) * &r);
        if let Some(s) = disc.sqrt() {
            let half = Rat::new(1.into(), 2.into());
            let beta = (&p - &s).scale(&half);
            let gamma = (&p + &s).scale(&half);
            let f1 = Poly::new(vec![beta, QRatFunc::zero(), QRatFunc::one()]);
            let f2 = Poly::new(vec![gamma, QRatFunc::zero(), QRatFunc::one()]);
            return Ok(Some(order_pair(back(f1), back(f2))));
        }
    }
    let resolvent = Poly::new(vec![
        (&q * &q).neg_ref(),
        &(&p * &p) - &(&rf(4) * &r),
        &rf(2) * &p,
        QRatFunc::one(),
    ]);
    for z in roots_in_qt(&resolvent)? {
        if z.is_zero() {
            continue;
        }
        let Some(alpha) = z.sqrt() else { continue };
        let half = Rat::new(1.into(), 2.into());
        let q_over = &q / &alpha;
        let beta = (&(&p + &z) - &q_over).scale(&half);
        let gamma = (&(&p + &z) + &q_over).scale(&half);
        let f1 = Poly::new(vec![beta, alpha.clone(), QRatFunc::one()]);
        let f2 = Poly::new(vec![gamma, alpha.neg_ref(), QRatFunc::one()]);
        if &f1 * &f2 == dep {
            return Ok(Some(order_pair(back(f1), back(f2))));
        }
    }
    Ok(None)
}

fn order_pair(a: QtPoly, b: QtPoly) -> (QtPoly, QtPoly) {
    if qt_cmp(&a, &b).is_le() {
        (a, b)
    } else {
        (b, a)
    }
}

/// Discriminant of a polynomial of degree 2, 3 or 4.
pub fn discriminant(f: &QtPoly) -> QRatFunc {
    let f = f.monic();
    let c = |i: usize| f.coeff(i);
    match f.degree() {
        Some(2) => &(&c(1) * &c(1)) - &(&rf(4) * &c(0)),
        Some(3) => {
            let (b, cc, d) = (c(2), c(1), c(0));
            let terms = [
                (&(&b * &b) * &(&cc * &cc), 1),
                (&(&cc * &cc) * &cc, -4),
                (&(&b * &b) * &(&b * &d), -4),
                (&d * &d, -27),
                (&(&b * &cc) * &d, 18),
            ];
            terms
                .iter()
                .fold(QRatFunc::zero(), |acc, (t, k)| &acc + &(t * &rf(*k)))
        }
        Some(4) => {
            let shift = c(3).scale(&Rat::new(1.into(), 4.into()));
            let dep = f.compose(&Poly::new(vec![shift.neg_ref(), QRatFunc::one()]));
            let (p, q, r) = (dep.coeff(2), dep.coeff(1), dep.coeff(0));
            let p2 = &p * &p;
            let q2 = &q * &q;
            let r2 = &r * &r;
            let terms = [
                (&(&p2 * &p2) * &r, 16),
                (&(&p2 * &p) * &q2, -4),
                (&p2 * &r2, -128),
                (&(&p * &q2) * &r, 144),
                (&q2 * &q2, -27),
                (&r2 * &r, 256),
            ];
            terms
                .iter()
                .fold(QRatFunc::zero(), |acc, (t, k)| &acc + &(t * &rf(*k)))
        }
        d => panic!("discriminant implemented for degrees 2..4, got {d:?}"),
    }
}

/// Why an irreducible factor over `Q(t)` has no root over `K(t)` for any
/// constant extension `K`. If one root were there, all conjugates would be,
/// so the factor would split with integral root valuations and a square
/// discriminant.
#[derive(Debug, Clone, PartialEq)]
pub enum RootlessEvidence {
    /// The Newton polygon at `place` has the non-integral slope `num/den`.
    FractionalSlope { place: Place, num: i64, den: i64 },
    /// The discriminant is not a constant times a square.
    Discriminant(QRatFunc),
}

impl fmt::Display for RootlessEvidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootlessEvidence::FractionalSlope { place, num, den } => {
                write!(f, "Newton polygon slope {num}/{den} at {place}")
            }
            RootlessEvidence::Discriminant(d) => {
                write!(f, "discriminant {d} is not a constant times a square")
            }
        }
    }
}

/// What is known about roots of an irreducible factor over `K(t)` for
/// quadratic towers `K`.
#[derive(Debug, Clone, PartialEq)]
pub enum ExtensionRoots {
    /// The factor has no root over any constant field extension.
    Rootless(RootlessEvidence),
    /// Quadratic factor whose roots live over a quadratic constant extension.
    Quadratic {
        tower: QuadTower,
        roots: Vec<TowerRatFunc>,
    },
    /// Roots, if any, need more than the analysis provides.
    Undecided { reason: String },
}

pub fn embed_ratfunc(x: &QRatFunc, tower: &QuadTower) -> TowerRatFunc {
    x.map(|c| tower.embed(c))
}

/// Whether `x` is `c * h^2` for a constant `c` and `h` in `Q(t)`.
pub fn square_up_to_constant_rf(x: &QRatFunc) -> Option<(Rat, QRatFunc)> {
    let (c, h) = x.num().square_up_to_constant()?;
    let (_, k) = x.den().square_up_to_constant()?;
    Some((c, RatFunc::new(h, k)))
}

pub fn constant_extension_roots(f: &QtPoly, base: &QuadTower, cap: usize) -> ExtensionRoots {
    if let Some(ev) = fractional_slope(f) {
        return ExtensionRoots::Rootless(ev);
    }
    let disc = discriminant(f);
    let Some((c, h)) = square_up_to_constant_rf(&disc) else {
        return ExtensionRoots::Rootless(RootlessEvidence::Discriminant(disc));
    };
    if f.degree() != Some(2) {
        return ExtensionRoots::Undecided {
            reason: format!(
                "degree {} factor with square discriminant",
                f.degree().unwrap_or(0)
            ),
        };
    }
    match base.sqrt(&c, cap) {
        Ok((tower, root)) => {
            let f = f.monic();
            let sq = embed_ratfunc(&h, &tower).scale(&root);
            let b = embed_ratfunc(&f.coeff(1), &tower);
            let half = tower.embed(&Rat::new(1.into(), 2.into()));
            let r1 = (&b.neg_ref() + &sq).scale(&half);
            let r2 = (&b.neg_ref() - &sq).scale(&half);
            ExtensionRoots::Quadratic {
                tower,
                roots: vec![r1, r2],
            }
        }
        Err(e @ TowerError::Overflow { .. }) => ExtensionRoots::Undecided {
            reason: e.to_string(),
        },
        Err(TowerError::Zero) => unreachable!("irreducible quadratic has nonzero discriminant"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfield::ring::{rat, ratio};

    fn p(cs: &[i64]) -> QPoly {
        QPoly::from_ints(cs)
    }

    fn qp(cs: &[QPoly]) -> QtPoly {
        qt_from_polys(cs)
    }

    #[test]
    fn newton_polygon_slopes() {
        let v = newton_root_valuations(&[(0, 2), (1, 0), (2, 0)]);
        assert_eq!(v.into_iter().collect::<Vec<_>>(), vec![0, 2]);
    }

    #[test]
    fn roots_of_products() {
        // (X - t^2/3)(X + 1/(t-1))(X^2 - t)
        let r1 = RatFunc::from_poly(Poly::from_rats(&[rat(0), rat(0), ratio(1, 3)]));
        let r2 = RatFunc::new(p(&[-1]), p(&[-1, 1]));
        let h = &(&linear(&r1) * &linear(&r2)) * &qp(&[p(&[0, -1]), p(&[0]), p(&[1])]);
        let roots = roots_in_qt(&h).unwrap();
        assert_eq!(roots.len(), 2);
        assert!(roots.contains(&r1) && roots.contains(&r2));
        let f = factor_over_qt(&h).unwrap();
        assert_eq!(f.expand(), h);
        assert_eq!(f.nonlinear.len(), 1);
    }

    #[test]
    fn zero_root_and_multiplicity() {
        let h = qp(&[p(&[0]), p(&[0]), p(&[0, 1]), p(&[-1])]);
        let f = factor_over_qt(&h).unwrap();
        assert_eq!(f.roots[0], (QRatFunc::zero(), 2));
        assert_eq!(f.expand(), h);
    }

    #[test]
    fn quartic_two_quadratics() {
        // (X^2 + tX + 1)(X^2 - t)
        let a = qp(&[p(&[1]), p(&[0, 1]), p(&[1])]);
        let b = qp(&[p(&[0, -1]), p(&[0]), p(&[1])]);
        let f = factor_over_qt(&(&a * &b)).unwrap();
        assert_eq!(f.nonlinear.len(), 2);
        assert_eq!(f.expand(), &a * &b);
        // (X^2 - t)(X^2 - 2t) has no odd part: exercises the q = 0 branch
        let c = qp(&[p(&[0, -2]), p(&[0]), p(&[1])]);
        let f = factor_over_qt(&(&b * &c)).unwrap();
        assert_eq!(f.nonlinear.len(), 2);
        // X^4 - t is irreducible
        let d = qp(&[p(&[0, -1]), p(&[0]), p(&[0]), p(&[0]), p(&[1])]);
        assert_eq!(factor_over_qt(&d).unwrap().nonlinear.len(), 1);
    }

    #[test]
    fn extension_roots() {
        // X^2 - 2X t + t^2 - 2 = (X - t - sqrt 2)(X - t + sqrt 2)
        let f = qp(&[p(&[-2, 0, 1]), p(&[0, -2]), p(&[1])]);
        match constant_extension_roots(&f, &QuadTower::rational(), 3) {
            ExtensionRoots::Quadratic { tower, roots } => {
                assert_eq!(tower.height(), 1);
                let lifted = f.map(|c| embed_ratfunc(c, &tower));
                for r in roots {
                    assert!(lifted.eval(&r).is_zero());
                }
            }
            other => panic!("unexpected {other:?}"),
        }
        let g = qp(&[p(&[0, -1]), p(&[0]), p(&[1])]);
        assert!(matches!(
            constant_extension_roots(&g, &QuadTower::rational(), 3),
            ExtensionRoots::Rootless(_)
        ));
    }
}
