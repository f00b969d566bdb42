//! Mordell-Weil lattice: intersection numbers with the zero section, the
//! height pairing with fiber corrections, and 2-divisibility by halving.

mod halve;

use thiserror::Error;

use crate::curve::{CurveError, Section, TwoTorsion, WeierstrassSurface};
use crate::fibers::{classify_fibers, total_contribution, FiberConfiguration, FiberError, Local};
use crate::qfield::{zeros_of, Place, Rat, RootError};

pub use halve::{
    halve, halving_polynomial, is_two_divisible, FactorEvidence, Half, HalfSection,
    HalvingCertificate, Verdict,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MwError {
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Fiber(#[from] FiberError),
    #[error(transparent)]
    Root(#[from] RootError),
    #[error("internal error: odd pole order {0} along the zero section")]
    OddPoleOrder(i64),
    #[error("the zero section has no intersection number defined here")]
    ZeroSection,
    #[error("self-intersection is not defined here; use the height pairing")]
    SelfIntersection,
    #[error("unknown section name {0}")]
    UnknownSection(String),
}

/// A surface together with its fiber configuration and named sections.
#[derive(Clone, Debug)]
pub struct MWContext {
    surface: WeierstrassSurface,
    config: FiberConfiguration,
    sections: Vec<(String, Section)>,
    torsion: TwoTorsion,
    tower_cap: usize,
}

impl MWContext {
    pub fn new(
        surface: WeierstrassSurface,
        sections: Vec<(String, Section)>,
        tower_cap: usize,
    ) -> Result<Self, MwError> {
        for (_, s) in &sections {
            surface.check(s)?;
        }
        let config = classify_fibers(&surface)?;
        let torsion = surface.two_torsion_sections(tower_cap);
        Ok(MWContext {
            surface,
            config,
            sections,
            torsion,
            tower_cap,
        })
    }

    pub fn surface(&self) -> &WeierstrassSurface {
        &self.surface
    }

    pub fn config(&self) -> &FiberConfiguration {
        &self.config
    }

    pub fn sections(&self) -> &[(String, Section)] {
        &self.sections
    }

    pub fn section(&self, name: &str) -> Result<&Section, MwError> {
        self.sections
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, s)| s)
            .ok_or_else(|| MwError::UnknownSection(name.to_string()))
    }

    pub fn two_torsion(&self) -> &TwoTorsion {
        &self.torsion
    }

    /// Set only when no two-torsion was found over the reachable towers.
    pub fn torsion_free(&self) -> bool {
        self.torsion.is_trivial()
    }

    pub fn tower_cap(&self) -> usize {
        self.tower_cap
    }

    pub fn chi(&self) -> u32 {
        self.config.chi
    }

    pub fn meets_o(&self, p: &Section) -> Result<u64, MwError> {
        meets_o(self, p)
    }

    pub fn height(&self, p: &Section, q: &Section) -> Result<Rat, MwError> {
        height(self, p, q)
    }
}

/// Places where a section can meet `O`: poles of `x`, places where the
/// model is rescaled, and infinity.
fn candidate_places(ctx: &MWContext, p: &Section) -> Vec<Place> {
    let mut places: Vec<Place> = match p.x() {
        Some(x) => zeros_of(x.den()).into_iter().map(|(pl, _)| pl).collect(),
        None => Vec::new(),
    };
    places.extend(ctx.config.shifted_places());
    places.push(Place::Infinity);
    places.sort();
    places.dedup();
    places
}

/// Intersection number `(P.O)` on the minimal smooth model.
pub fn meets_o(ctx: &MWContext, p: &Section) -> Result<u64, MwError> {
    if p.is_zero() {
        return Err(MwError::ZeroSection);
    }
    let mut poles = 0i64;
    for place in candidate_places(ctx, p) {
        let local = Local::new(&ctx.surface, &place, ctx.config.shift_at(&place));
        let k = local.meets_o(p);
        if k % 2 == 1 {
            return Err(MwError::OddPoleOrder(k));
        }
        poles += k * place.degree() as i64;
    }
    Ok((poles / 2) as u64)
}

/// Intersection number `(P.Q)` of distinct sections, computed as
/// `((P - Q).O)` since translation by `-Q` is an automorphism of the
/// smooth model.
pub fn meets(ctx: &MWContext, p: &Section, q: &Section) -> Result<u64, MwError> {
    if p.is_zero() || q.is_zero() {
        return Err(MwError::ZeroSection);
    }
    if p == q {
        return Err(MwError::SelfIntersection);
    }
    meets_o(ctx, &ctx.surface.add(p, &q.neg())?)
}

/// Height pairing `<P, Q>`.
pub fn height(ctx: &MWContext, p: &Section, q: &Section) -> Result<Rat, MwError> {
    let s = &ctx.surface;
    s.check(p)?;
    s.check(q)?;
    if p.is_zero() || q.is_zero() {
        return Ok(Rat::from_integer(0.into()));
    }
    let chi = Rat::from_integer(ctx.config.chi.into());
    let corr = total_contribution(s, &ctx.config, p, q)?;
    let int = |n: u64| Rat::from_integer(n.into());
    if p == q {
        let po = meets_o(ctx, p)?;
        return Ok(&chi * Rat::from_integer(2.into()) + int(2 * po) - corr);
    }
    let (po, qo, pq) = (meets_o(ctx, p)?, meets_o(ctx, q)?, meets(ctx, p, q)?);
    Ok(chi + int(po) + int(qo) - int(pq) - corr)
}

pub fn gram(ctx: &MWContext, sections: &[Section]) -> Result<Vec<Vec<Rat>>, MwError> {
    let mut out = vec![vec![Rat::from_integer(0.into()); sections.len()]; sections.len()];
    for i in 0..sections.len() {
        for j in i..sections.len() {
            let h = height(ctx, &sections[i], &sections[j])?;
            out[i][j] = h.clone();
            out[j][i] = h;
        }
    }
    Ok(out)
}
