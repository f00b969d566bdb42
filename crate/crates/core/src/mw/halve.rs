use std::fmt;

use crate::curve::{Section, TowerSection, WeierstrassSurface};
use crate::qfield::{
    constant_extension_roots, embed_ratfunc, factor_over_qt, rat, ExtensionRoots, Field, QPoly,
    QRatFunc, QtFactorization, QtPoly, QuadTower, RatFunc, TowerElem,
};

use super::{MWContext, MwError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Divisible,
    NotDivisible,
    /// Some factor of the halving polynomial could not be settled.
    UndecidedOverTower(String),
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Divisible => write!(f, "divisible"),
            Verdict::NotDivisible => write!(f, "not divisible"),
            Verdict::UndecidedOverTower(r) => write!(f, "undecided ({r})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum HalfSection {
    Rational(Section),
    Tower(QuadTower, TowerSection),
}

impl HalfSection {
    pub fn rational(&self) -> Option<&Section> {
        match self {
            HalfSection::Rational(s) => Some(s),
            HalfSection::Tower(..) => None,
        }
    }
}

impl fmt::Display for HalfSection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HalfSection::Rational(s) => write!(f, "{s}"),
            HalfSection::Tower(t, s) => write!(f, "{s} over {t}"),
        }
    }
}

/// A section `P` with `2P = sign * target`.
#[derive(Clone, Debug, PartialEq)]
pub struct Half {
    pub section: HalfSection,
    pub sign: i8,
}

/// Status of one nonlinear factor of the halving polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct FactorEvidence {
    pub factor: QtPoly,
    pub multiplicity: u32,
    pub roots: ExtensionRoots,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HalvingCertificate {
    pub target: Section,
    /// Quartic in `x` whose roots are the `x`-coordinates of the halves of
    /// `target` and `-target`. Empty for the zero target.
    pub halving_poly: QtPoly,
    pub factorization: Option<QtFactorization>,
    pub halves: Vec<Half>,
    pub evidence: Vec<FactorEvidence>,
    pub verdict: Verdict,
}

impl HalvingCertificate {
    /// Halves `P` with `2P = target`.
    pub fn halves_of_target(&self) -> impl Iterator<Item = &HalfSection> {
        self.halves
            .iter()
            .filter(|h| h.sign == 1)
            .map(|h| &h.section)
    }
}

/// `x^4 - 4 xS x^3 - (2 a4 + 4 a2 xS) x^2 - (8 a6 + 4 a4 xS) x + a4^2 - 4 a2 a6 - 4 a6 xS`.
pub fn halving_polynomial(s: &WeierstrassSurface, xs: &QRatFunc) -> QtPoly {
    let lift = |p: &QPoly| QRatFunc::from_poly(p.clone());
    let (a2, a4, a6) = (lift(s.a2()), lift(s.a4()), lift(s.a6()));
    let c = |n: i64| QRatFunc::constant(rat(n));
    let c3 = &c(-4) * xs;
    let c2 = &(&c(-2) * &a4) - &(&c(4) * &(&a2 * xs));
    let c1 = &(&c(-8) * &a6) - &(&c(4) * &(&a4 * xs));
    let c0 = &(&(&a4 * &a4) - &(&c(4) * &(&a2 * &a6))) - &(&c(4) * &(&a6 * xs));
    QtPoly::new(vec![c0, c1, c2, c3, QRatFunc::one()])
}

/// `y0` for the point over `x0` whose double is `(xS, eps * yS)`, from
/// `2 y0 y2 = -2 f(x0) - f'(x0)(xS - x0)`.
fn half_y<K: Field>(
    s: &WeierstrassSurface,
    x0: &RatFunc<K>,
    xs: &RatFunc<K>,
    ys: &RatFunc<K>,
) -> RatFunc<K> {
    let two = RatFunc::constant(K::from_int(2));
    let num = (&(&two * &s.cubic_at(x0)) + &(&s.cubic_derivative_at(x0) * &(xs - x0))).neg_ref();
    &num / &(&two * ys)
}

fn rational_halves(
    s: &WeierstrassSurface,
    x0: &QRatFunc,
    xs: &QRatFunc,
    ys: &QRatFunc,
    target: &Section,
) -> Vec<Half> {
    let mut out = Vec::new();
    let candidates: Vec<Section> = if ys.is_zero() {
        match s.cubic_at(x0).sqrt() {
            Some(y) => vec![
                Section::affine(x0.clone(), y.clone()),
                Section::affine(x0.clone(), y.neg_ref()),
            ],
            None => Vec::new(),
        }
    } else {
        let y = half_y(s, x0, xs, ys);
        vec![
            Section::affine(x0.clone(), y.clone()),
            Section::affine(x0.clone(), y.neg_ref()),
        ]
    };
    for p in candidates {
        if !s.on_curve(&p) {
            continue;
        }
        let d = s.add_unchecked(&p, &p);
        let sign = if &d == target {
            1
        } else if d == target.neg() {
            -1
        } else {
            continue;
        };
        let h = Half {
            section: HalfSection::Rational(p),
            sign,
        };
        if !out.contains(&h) {
            out.push(h);
        }
    }
    out
}

fn tower_halves(
    s: &WeierstrassSurface,
    tower: &QuadTower,
    x0: &RatFunc<TowerElem>,
    xs: &QRatFunc,
    ys: &QRatFunc,
    target: &Section,
) -> Vec<Half> {
    if ys.is_zero() {
        return Vec::new();
    }
    let (xs, ys) = (embed_ratfunc(xs, tower), embed_ratfunc(ys, tower));
    let y = half_y(s, x0, &xs, &ys);
    let t = target.embed(tower);
    let mut out = Vec::new();
    for p in [
        Section::affine(x0.clone(), y.clone()),
        Section::affine(x0.clone(), y.neg_ref()),
    ] {
        if !s.on_curve(&p) {
            continue;
        }
        let d = s.add_unchecked(&p, &p);
        let sign = if d == t {
            1
        } else if d == t.neg() {
            -1
        } else {
            continue;
        };
        out.push(Half {
            section: HalfSection::Tower(tower.clone(), p),
            sign,
        });
    }
    out
}

fn zero_target(ctx: &MWContext) -> HalvingCertificate {
    let tt = ctx.two_torsion();
    let mut halves = vec![Half {
        section: HalfSection::Rational(Section::Zero),
        sign: 1,
    }];
    halves.extend(tt.rational.iter().map(|p| Half {
        section: HalfSection::Rational(p.clone()),
        sign: 1,
    }));
    halves.extend(tt.over_tower.iter().map(|(t, p)| Half {
        section: HalfSection::Tower(t.clone(), p.clone()),
        sign: 1,
    }));
    HalvingCertificate {
        target: Section::Zero,
        halving_poly: QtPoly::zero(),
        factorization: None,
        halves,
        evidence: Vec::new(),
        verdict: Verdict::Divisible,
    }
}

/// Search for `P` with `2P = target` over `Q(t)` and over quadratic constant
/// extensions, with a certificate for every factor of the halving
/// polynomial.
pub fn halve(ctx: &MWContext, target: &Section) -> Result<HalvingCertificate, MwError> {
    let s = ctx.surface();
    s.check(target)?;
    let (xs, ys) = match target {
        Section::Zero => return Ok(zero_target(ctx)),
        Section::Affine { x, y } => (x, y),
    };
    let h = halving_polynomial(s, xs);
    let fac = factor_over_qt(&h)?;
    let mut halves = Vec::new();
    for (x0, _) in &fac.roots {
        halves.extend(rational_halves(s, x0, xs, ys, target));
    }
    let mut evidence = Vec::new();
    let mut undecided = None;
    for (f, m) in &fac.nonlinear {
        let roots = constant_extension_roots(f, &QuadTower::rational(), ctx.tower_cap());
        match &roots {
            ExtensionRoots::Rootless(_) => {}
            ExtensionRoots::Quadratic { tower, roots } => {
                for x0 in roots {
                    halves.extend(tower_halves(s, tower, x0, xs, ys, target));
                }
            }
            ExtensionRoots::Undecided { reason } => undecided = Some(reason.clone()),
        }
        evidence.push(FactorEvidence {
            factor: f.clone(),
            multiplicity: *m,
            roots,
        });
    }
    let verdict = if halves.iter().any(|h| h.sign == 1) {
        Verdict::Divisible
    } else if let Some(r) = undecided {
        Verdict::UndecidedOverTower(r)
    } else {
        Verdict::NotDivisible
    };
    Ok(HalvingCertificate {
        target: target.clone(),
        halving_poly: h,
        factorization: Some(fac),
        halves,
        evidence,
        verdict,
    })
}

pub fn is_two_divisible(ctx: &MWContext, target: &Section) -> Result<Verdict, MwError> {
    Ok(halve(ctx, target)?.verdict)
}
