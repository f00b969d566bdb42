use crate::curve::{Section, WeierstrassSurface};
use crate::fibers::classify_fibers;
use crate::qfield::{Place, QPoly, QRatFunc, Rat, RatFunc};

use super::SplitError;

/// A pulled-back surface with its transported sections.
#[derive(Clone, Debug, PartialEq)]
pub struct BaseChange {
    pub surface: WeierstrassSurface,
    pub sections: Vec<Section>,
    /// Minimalization steps applied after the substitution, as
    /// `(place, power)`.
    pub shifts: Vec<(Place, u32)>,
    steps: Vec<Step>,
}

/// Coordinate change on `x`: either `t -> nu, x -> u^2 x` or
/// `x -> (x + r) / q^2`.
#[derive(Clone, Debug, PartialEq)]
enum Step {
    Pull { nu: QRatFunc, u: QRatFunc },
    Shift { r: QRatFunc, q: QRatFunc },
}

impl Step {
    fn apply(&self, p: &Section) -> Section {
        match (self, p) {
            (_, Section::Zero) => Section::Zero,
            (Step::Pull { nu, u }, _) => p.transform(nu, u),
            (Step::Shift { r, q }, Section::Affine { x, y }) => {
                let q2 = q * q;
                Section::affine(&(x + r) / &q2, y / &(&q2 * q))
            }
        }
    }

    fn apply_x(&self, x: &QRatFunc) -> QRatFunc {
        match self {
            Step::Pull { nu, u } => &x.compose(nu) * &(u * u),
            Step::Shift { r, q } => &(x + r) / &(q * q),
        }
    }
}

impl BaseChange {
    /// Moves a further section of the original surface to the new one.
    pub fn transport(&self, p: &Section) -> Section {
        self.steps.iter().fold(p.clone(), |acc, st| st.apply(&acc))
    }

    /// Moves an `x`-coordinate, e.g. a curve `x = f(t)`, to the new model.
    pub fn transport_x(&self, x: &QRatFunc) -> QRatFunc {
        self.steps
            .iter()
            .fold(x.clone(), |acc, st| st.apply_x(&acc))
    }
}

/// `sum_i c_i N^i D^(b - i)` for `c(t) = sum c_i t^i` of degree at most `b`.
fn homogenize(c: &QPoly, num: &QPoly, den: &QPoly, b: usize) -> QPoly {
    c.coeffs()
        .iter()
        .enumerate()
        .fold(QPoly::zero(), |acc, (i, ci)| {
            &acc + &(&num.pow(i as u32) * &den.pow((b - i) as u32)).scale(ci)
        })
}

/// Pulls the surface back along `t = nu(s)`, clears denominators by
/// `(x, y) -> (u^2 x, u^3 y)` with `u = den(nu)^(d/2)`, and minimalizes.
pub fn base_change(
    s: &WeierstrassSurface,
    nu: &QRatFunc,
    sections: &[Section],
) -> Result<BaseChange, SplitError> {
    let (num, den) = (nu.num(), nu.den());
    let n = num.degree().unwrap_or(0).max(den.degree().unwrap_or(0));
    if n == 0 {
        return Err(SplitError::ConstantBaseChange);
    }
    let d = s.d() as usize;
    let a2 = homogenize(s.a2(), num, den, d);
    let a4 = homogenize(s.a4(), num, den, 2 * d);
    let a6 = homogenize(s.a6(), num, den, 3 * d);
    let pulled = WeierstrassSurface::new(a2, a4, a6, (n * d) as u32)?;
    let pull = Step::Pull {
        nu: nu.clone(),
        u: RatFunc::from_poly(den.pow(s.d() / 2)),
    };
    let moved: Vec<Section> = sections.iter().map(|p| pull.apply(p)).collect();
    for p in &moved {
        pulled
            .check(p)
            .map_err(|e| SplitError::RescalingFailed(e.to_string()))?;
    }
    let mut bc = minimalize(&pulled, &moved)?;
    bc.steps.insert(0, pull);
    Ok(bc)
}

fn divide_exact(c: &QPoly, q: &QPoly) -> Option<QPoly> {
    if c.is_zero() {
        return Some(QPoly::zero());
    }
    c.exact_div(q)
}

/// Removes every non-minimal place, translating to short form where the
/// plain rescaling leaves non-polynomial coefficients.
pub fn minimalize(s: &WeierstrassSurface, sections: &[Section]) -> Result<BaseChange, SplitError> {
    let mut s = s.clone();
    let mut secs = sections.to_vec();
    let mut applied = Vec::new();
    let mut steps = Vec::new();
    loop {
        let cfg = classify_fibers(&s)?;
        let Some((place, e)) = cfg
            .fibers
            .iter()
            .filter(|f| f.shift > 0)
            .map(|f| (f.place.clone(), f.shift))
            .chain(cfg.smooth_shifts.iter().cloned())
            .next()
        else {
            break;
        };
        let (next, r, q) = shift_once(&s, &place, e)?;
        let step = Step::Shift { r, q };
        secs = secs.iter().map(|p| step.apply(p)).collect();
        steps.push(step);
        for p in &secs {
            next.check(p)
                .map_err(|e| SplitError::RescalingFailed(e.to_string()))?;
        }
        s = next;
        applied.push((place, e));
    }
    Ok(BaseChange {
        surface: s,
        sections: secs,
        shifts: applied,
        steps,
    })
}

/// One step at a place with shift `e`. Returns the new surface, the
/// translation `r` (new `x` is `(x + r) / q^2`) and the scale `q`.
fn shift_once(
    s: &WeierstrassSurface,
    place: &Place,
    e: u32,
) -> Result<(WeierstrassSurface, QRatFunc, QRatFunc), SplitError> {
    let third = Rat::new(1.into(), 3.into());
    let candidates = [
        (
            QPoly::zero(),
            s.a2().clone(),
            s.a4().clone(),
            s.a6().clone(),
        ),
        {
            let (a, b) = s.short_form();
            (s.a2().scale(&third), QPoly::zero(), a, b)
        },
    ];
    for (r, a2, a4, a6) in candidates {
        let attempt = match place {
            Place::Finite(pi) => {
                let q = pi.pow(e);
                let q2 = q.pow(2);
                let scaled = (|| {
                    let a2 = divide_exact(&a2, &q2)?;
                    let a4 = divide_exact(&a4, &q2.pow(2))?;
                    let a6 = divide_exact(&a6, &q2.pow(3))?;
                    Some((a2, a4, a6))
                })();
                let dnew = s.d() as i64 - 2 * (e as i64) * pi.degree().unwrap_or(0) as i64;
                scaled
                    .filter(|_| dnew > 0)
                    .map(|(a2, a4, a6)| (a2, a4, a6, dnew as u32, QRatFunc::from_poly(q)))
            }
            Place::Infinity => {
                let dnew = s.d() as i64 - 2 * e as i64;
                (dnew > 0).then(|| {
                    (
                        a2.clone(),
                        a4.clone(),
                        a6.clone(),
                        dnew as u32,
                        QRatFunc::one(),
                    )
                })
            }
        };
        if let Some((a2, a4, a6, dnew, q)) = attempt {
            if let Ok(next) = WeierstrassSurface::new(a2, a4, a6, dnew) {
                return Ok((next, QRatFunc::from_poly(r), q));
            }
        }
    }
    Err(SplitError::RescalingFailed(format!(
        "cannot remove the shift {e} at {place}"
    )))
}
