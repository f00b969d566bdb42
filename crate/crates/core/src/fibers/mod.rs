//! Singular fibers: Kodaira classification from discriminant data, the
//! Euler characteristic, which fiber component a section meets, and the
//! local correction terms given by `-A^{-1}` of the fiber intersection
//! matrix.

mod kodaira;
pub mod linalg;

use thiserror::Error;

use crate::curve::{Section, WeierstrassSurface};
use crate::qfield::{factor, Place, QPoly, QRatFunc, Rat, RatFunc, Valuation};

pub use kodaira::KodairaType;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FiberError {
    #[error(
        "internal error: inconsistent valuations at {place}: v(c4)={v4}, v(c6)={v6}, v(disc)={vd}"
    )]
    Inconsistent {
        place: String,
        v4: Valuation,
        v6: Valuation,
        vd: i64,
    },
    #[error("fiber accounting error: Euler sum {0} is not a positive multiple of 12")]
    EulerSum(u32),
    #[error("internal error: component orientation at {0} is inconsistent with the group law")]
    Orientation(String),
    #[error("no singular fiber at {0}")]
    UnknownPlace(String),
}

/// A singular fiber of the minimal model.
#[derive(Clone, PartialEq, Debug)]
pub struct FiberData {
    pub place: Place,
    pub kodaira: KodairaType,
    /// Valuation of the minimal discriminant.
    pub v_disc: u32,
    /// The given model is non-minimal at this place by `(x, y) -> (pi^2 x, pi^3 y)` to this power.
    pub shift: u32,
    pub components: u32,
    pub intersection_matrix: Vec<Vec<i64>>,
}

impl FiberData {
    pub fn euler(&self) -> u32 {
        self.kodaira.euler()
    }

    pub fn neg_inverse(&self) -> Vec<Vec<Rat>> {
        self.kodaira.neg_inverse()
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct FiberConfiguration {
    /// Singular fibers, finite places first in canonical order.
    pub fibers: Vec<FiberData>,
    /// Places where the model is not minimal but the fiber is smooth.
    pub smooth_shifts: Vec<(Place, u32)>,
    pub chi: u32,
    pub euler_total: u32,
}

impl FiberConfiguration {
    pub fn fiber(&self, place: &Place) -> Option<&FiberData> {
        self.fibers.iter().find(|f| &f.place == place)
    }

    /// Minimalization shift at a place (0 when the model is minimal there).
    pub fn shift_at(&self, place: &Place) -> u32 {
        self.fiber(place)
            .map(|f| f.shift)
            .or_else(|| {
                self.smooth_shifts
                    .iter()
                    .find(|(p, _)| p == place)
                    .map(|(_, e)| *e)
            })
            .unwrap_or(0)
    }

    /// All places where a non-minimal shift is applied.
    pub fn shifted_places(&self) -> Vec<Place> {
        let mut out: Vec<Place> = self
            .fibers
            .iter()
            .filter(|f| f.shift > 0)
            .map(|f| f.place.clone())
            .collect();
        out.extend(self.smooth_shifts.iter().map(|(p, _)| p.clone()));
        out.sort();
        out
    }

    /// Fibers with more than one component.
    pub fn reducible(&self) -> impl Iterator<Item = &FiberData> {
        self.fibers.iter().filter(|f| f.components > 1)
    }
}

/// Local view of the surface at a place: a model in a chart where the place
/// is `pi = 0`, in short Weierstrass form.
pub(crate) struct Local {
    pi: Place,
    d: u32,
    infinity: bool,
    a2: QPoly,
    a: QPoly,
    shift: u32,
}

impl Local {
    pub(crate) fn new(s: &WeierstrassSurface, place: &Place, shift: u32) -> Local {
        let (chart, pi, infinity) = match place {
            Place::Finite(pi) => (s.clone(), pi.clone(), false),
            Place::Infinity => (s.at_infinity(), QPoly::var(), true),
        };
        let (a, _) = chart.short_form();
        Local {
            pi: Place::Finite(pi),
            d: s.d(),
            infinity,
            a2: chart.a2().clone(),
            a,
            shift,
        }
    }

    pub(crate) fn val(&self, f: &QRatFunc) -> Valuation {
        self.pi.valuation(f, 0)
    }

    fn pi_power(&self, k: i64) -> QRatFunc {
        let Place::Finite(pi) = &self.pi else {
            unreachable!()
        };
        if k >= 0 {
            RatFunc::from_poly(pi.pow(k as u32))
        } else {
            RatFunc::new(QPoly::one(), pi.pow((-k) as u32))
        }
    }

    /// Short minimal coordinates `(x'', y'')` of an affine section.
    pub(crate) fn coords(&self, p: &Section) -> Option<(QRatFunc, QRatFunc)> {
        let p = if self.infinity {
            p.at_infinity(self.d)
        } else {
            p.clone()
        };
        let Section::Affine { x, y } = p else {
            return None;
        };
        let third = Rat::new(1.into(), 3.into());
        let xs = &x + &RatFunc::from_poly(self.a2.scale(&third));
        let e = self.shift as i64;
        Some((&xs * &self.pi_power(-2 * e), &y * &self.pi_power(-3 * e)))
    }

    fn a_min(&self) -> QRatFunc {
        &RatFunc::from_poly(self.a.clone()) * &self.pi_power(-4 * self.shift as i64)
    }

    /// Pole order of `x''` halved: the local intersection with `O`.
    pub(crate) fn meets_o(&self, p: &Section) -> i64 {
        let Some((x, _)) = self.coords(p) else {
            return 0;
        };
        match self.val(&x) {
            Valuation::Finite(v) if v < 0 => -v,
            _ => 0,
        }
    }

    /// Whether the section passes through the singular point of the
    /// minimal model's fiber, and the valuations `v(y'')`, `v(3x''^2 + A'')`.
    fn singular_data(&self, p: &Section) -> Option<(Valuation, Valuation)> {
        let (x, y) = self.coords(p)?;
        if self.val(&x) < Valuation::Finite(0) {
            return None;
        }
        let three = RatFunc::constant(Rat::from_integer(3.into()));
        let grad = &(&three * &(&x * &x)) + &self.a_min();
        let (vy, vg) = (self.val(&y), self.val(&grad));
        (vy > Valuation::Finite(0) && vg > Valuation::Finite(0)).then_some((vy, vg))
    }
}

/// Kodaira type, minimal discriminant valuation and minimalization shift
/// from the valuations of `c4`, `c6` and the discriminant.
fn classify_local(
    place: &Place,
    v4: Valuation,
    v6: Valuation,
    vd: i64,
) -> Result<(KodairaType, u32, u32), FiberError> {
    let cap = |v: Valuation, k: i64| v.finite().map_or(i64::MAX, |x| x / k);
    let e = cap(v4, 4).min(cap(v6, 6)).min(vd / 12);
    let v4 = v4.plus(-4 * e);
    let v6 = v6.plus(-6 * e);
    let vd_min = vd - 12 * e;
    let f = |k: i64| Valuation::Finite(k);
    let bad = || FiberError::Inconsistent {
        place: place.to_string(),
        v4,
        v6,
        vd: vd_min,
    };
    let t = if vd_min == 0 {
        KodairaType::I0
    } else if v4 == f(0) {
        KodairaType::I(vd_min as u32)
    } else if v4 == f(2) && v6 == f(3) && vd_min >= 6 {
        KodairaType::IStar((vd_min - 6) as u32)
    } else {
        match vd_min {
            2 if v4 >= f(1) && v6 == f(1) => KodairaType::II,
            3 if v4 == f(1) && v6 >= f(2) => KodairaType::III,
            4 if v4 >= f(2) && v6 == f(2) => KodairaType::IV,
            6 if v4 >= f(2) && v6 >= f(3) => KodairaType::IStar(0),
            8 if v4 >= f(3) && v6 == f(4) => KodairaType::IVStar,
            9 if v4 == f(3) && v6 >= f(5) => KodairaType::IIIStar,
            10 if v4 >= f(4) && v6 == f(5) => KodairaType::IIStar,
            _ => return Err(bad()),
        }
    };
    Ok((t, vd_min as u32, e as u32))
}

pub fn classify_fibers(s: &WeierstrassSurface) -> Result<FiberConfiguration, FiberError> {
    let inv = s.invariants();
    let mut places: Vec<Place> = factor(&inv.disc)
        .expect("nonzero discriminant")
        .factors
        .into_iter()
        .map(|(p, _)| Place::Finite(p))
        .collect();
    places.push(Place::Infinity);

    let mut fibers = Vec::new();
    let mut smooth_shifts = Vec::new();
    for place in places {
        let (c4, c6, disc, pi) = match &place {
            Place::Finite(pi) => (inv.c4.clone(), inv.c6.clone(), inv.disc.clone(), pi.clone()),
            Place::Infinity => {
                let i = s.at_infinity().invariants();
                (i.c4, i.c6, i.disc, QPoly::var())
            }
        };
        let local = Place::Finite(pi);
        let vd = local
            .poly_valuation(&disc)
            .finite()
            .expect("nonzero discriminant");
        if vd == 0 {
            continue;
        }
        let (t, v_disc, shift) = classify_local(
            &place,
            local.poly_valuation(&c4),
            local.poly_valuation(&c6),
            vd,
        )?;
        if t == KodairaType::I0 {
            smooth_shifts.push((place, shift));
            continue;
        }
        fibers.push(FiberData {
            place,
            kodaira: t,
            v_disc,
            shift,
            components: t.components(),
            intersection_matrix: t.intersection_matrix(),
        });
    }
    fibers.sort_by(|a, b| a.place.cmp(&b.place));
    let euler_total: u32 = fibers
        .iter()
        .map(|f| f.euler() * f.place.degree() as u32)
        .sum();
    if euler_total == 0 || !euler_total.is_multiple_of(12) {
        return Err(FiberError::EulerSum(euler_total));
    }
    Ok(FiberConfiguration {
        fibers,
        smooth_shifts,
        chi: euler_total / 12,
        euler_total,
    })
}

/// The non-identity component a section meets, as an index into the
/// component numbering of [`KodairaType::dual_graph`] (0 is the identity
/// component). For `I_n` the index `k <= n/2` stands for the pair `+-k`;
/// for `IV`, `I0*`, `IV*` and the far pair of `I_n*` it names one
/// representative of the simple components at the same distance.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ComponentIncidence {
    pub component: usize,
    /// For `I_n*`: true when the section meets the far pair.
    pub far: bool,
}

impl ComponentIncidence {
    pub const IDENTITY: ComponentIncidence = ComponentIncidence {
        component: 0,
        far: false,
    };
}

pub fn incidence(
    s: &WeierstrassSurface,
    config: &FiberConfiguration,
    p: &Section,
    place: &Place,
) -> Result<ComponentIncidence, FiberError> {
    let fiber = config
        .fiber(place)
        .ok_or_else(|| FiberError::UnknownPlace(place.to_string()))?;
    Ok(incidence_at(s, fiber, p))
}

pub(crate) fn incidence_at(
    s: &WeierstrassSurface,
    fiber: &FiberData,
    p: &Section,
) -> ComponentIncidence {
    let local = Local::new(s, &fiber.place, fiber.shift);
    let Some((vy, vg)) = local.singular_data(p) else {
        return ComponentIncidence::IDENTITY;
    };
    let one = |far| ComponentIncidence { component: 1, far };
    match fiber.kodaira {
        KodairaType::I0 | KodairaType::I(1) | KodairaType::II | KodairaType::IIStar => {
            ComponentIncidence::IDENTITY
        }
        KodairaType::I(n) => {
            let k = vy.finite().map_or(n / 2, |v| (v as u32).min(n / 2));
            ComponentIncidence {
                component: k as usize,
                far: false,
            }
        }
        KodairaType::IStar(m) if m > 0 => {
            if vg == Valuation::Finite(2) {
                one(false)
            } else {
                ComponentIncidence {
                    component: 2,
                    far: true,
                }
            }
        }
        _ => one(false),
    }
}

/// `(-A^{-1})_{ij}` with 1-based component indices; 0 when either is 0.
fn matrix_entry(fiber: &FiberData, i: usize, j: usize) -> Rat {
    if i == 0 || j == 0 {
        return Rat::from_integer(0.into());
    }
    fiber.neg_inverse()[i - 1][j - 1].clone()
}

/// Local correction term of the height pairing at `place`.
pub fn contribution(
    s: &WeierstrassSurface,
    config: &FiberConfiguration,
    place: &Place,
    p: &Section,
    q: &Section,
) -> Result<Rat, FiberError> {
    let fiber = config
        .fiber(place)
        .ok_or_else(|| FiberError::UnknownPlace(place.to_string()))?;
    contribution_at(s, fiber, p, q)
}

pub(crate) fn contribution_at(
    s: &WeierstrassSurface,
    fiber: &FiberData,
    p: &Section,
    q: &Section,
) -> Result<Rat, FiberError> {
    let ip = incidence_at(s, fiber, p);
    let iq = incidence_at(s, fiber, q);
    if ip.component == 0 || iq.component == 0 {
        return Ok(Rat::from_integer(0.into()));
    }
    let diff = s.add_unchecked(p, &q.neg());
    let id = incidence_at(s, fiber, &diff);
    let same = id.component == 0;
    let (i, j) = match fiber.kodaira {
        KodairaType::I(n) => {
            let (i, k) = (ip.component as i64, id.component as i64);
            let n = n as i64;
            let jq = iq.component as i64;
            let fits = |j: i64| {
                let r = (i - j).rem_euclid(n);
                r == k || r == (n - k) % n
            };
            let j = [jq, (n - jq) % n]
                .into_iter()
                .find(|&j| fits(j))
                .ok_or_else(|| FiberError::Orientation(fiber.place.to_string()))?;
            (i as usize, j as usize)
        }
        KodairaType::IStar(m) if m > 0 => match (ip.far, iq.far) {
            (false, false) => (1, 1),
            (false, true) => (1, 2),
            (true, false) => (2, 1),
            (true, true) => {
                if same {
                    (2, 2)
                } else {
                    (2, 3)
                }
            }
        },
        KodairaType::III | KodairaType::IIIStar => (1, 1),
        _ => {
            if same {
                (1, 1)
            } else {
                (1, 2)
            }
        }
    };
    Ok(matrix_entry(fiber, i, j))
}

/// Coefficients of the correction divisor in the basis of non-identity
/// components: column `i` of `-A^{-1}` for the component `i` met by `p`.
pub fn correction_vector(
    s: &WeierstrassSurface,
    config: &FiberConfiguration,
    place: &Place,
    p: &Section,
) -> Result<Vec<Rat>, FiberError> {
    let fiber = config
        .fiber(place)
        .ok_or_else(|| FiberError::UnknownPlace(place.to_string()))?;
    let r = fiber.components as usize - 1;
    let i = incidence_at(s, fiber, p).component;
    Ok((1..=r).map(|j| matrix_entry(fiber, j, i)).collect())
}

/// Sum of local correction terms, weighted by place degree.
pub fn total_contribution(
    s: &WeierstrassSurface,
    config: &FiberConfiguration,
    p: &Section,
    q: &Section,
) -> Result<Rat, FiberError> {
    let mut acc = Rat::from_integer(0.into());
    for fiber in config.reducible() {
        let c = contribution_at(s, fiber, p, q)?;
        acc += c * Rat::from_integer(fiber.place.degree().into());
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(cs: &[i64]) -> QPoly {
        QPoly::from_ints(cs)
    }

    #[test]
    fn cusp_fiber() {
        // y^2 = x^3 + t: II at 0, and at infinity v(disc) = 12 - 2 = 10 -> II*
        let s = WeierstrassSurface::new(p(&[0]), p(&[0]), p(&[0, 1]), 2).unwrap();
        let c = classify_fibers(&s).unwrap();
        let kinds: Vec<_> = c
            .fibers
            .iter()
            .map(|f| (f.place.clone(), f.kodaira))
            .collect();
        assert_eq!(
            kinds,
            vec![
                (Place::Finite(p(&[0, 1])), KodairaType::II),
                (Place::Infinity, KodairaType::IIStar)
            ]
        );
        assert_eq!(c.chi, 1);
    }

    #[test]
    fn twelve_nodal_fibers() {
        // generic a4, a6 produce only I1 fibers
        let s = WeierstrassSurface::new(p(&[0]), p(&[1, 1]), p(&[1, 0, 0, 0, 0, 0, 1]), 2).unwrap();
        let c = classify_fibers(&s).unwrap();
        assert_eq!(c.chi, 1);
        assert!(c.fibers.iter().all(|f| f.kodaira == KodairaType::I(1)));
        let total: usize = c.fibers.iter().map(|f| f.place.degree()).sum();
        assert_eq!(total, 12);
    }

    #[test]
    fn non_minimal_model_is_minimalized() {
        // y^2 = x^3 + t^6 becomes y^2 = x^3 + 1 after x -> t^2 x: a product
        // surface with no singular fiber
        let s = WeierstrassSurface::new(p(&[0]), p(&[0]), p(&[0, 0, 0, 0, 0, 0, 1]), 2).unwrap();
        assert!(matches!(classify_fibers(&s), Err(FiberError::EulerSum(0))));
        // y^2 = x^3 + t^7 is y^2 = x^3 + t after the shift at t = 0
        let s = WeierstrassSurface::new(
            p(&[0]),
            p(&[0]),
            QPoly::monomial(Rat::from_integer(1.into()), 7),
            4,
        )
        .unwrap();
        let c = classify_fibers(&s).unwrap();
        let at_zero = c.fiber(&Place::Finite(p(&[0, 1]))).unwrap();
        assert_eq!((at_zero.kodaira, at_zero.shift), (KodairaType::II, 1));
    }
}
