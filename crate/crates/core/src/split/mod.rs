//! Splitting curves: tangency conditions for a section `x = f(t)` against
//! the branch curve `p(x, t) = 0`, the decomposition
//! `p = (x - f) G^2 + sigma F^2`, and the comparison with 2-divisibility.

mod base_change;
mod crosscheck;
mod decompose;

use std::fmt;

use thiserror::Error;

use crate::curve::{BranchCurve, BranchError, CurveError, Section, WeierstrassSurface};
use crate::fibers::{classify_fibers, FiberError};
use crate::mw::MwError;
use crate::qfield::{factor_over_qt, zeros_of, Place, QPoly, Rat, RootError};

pub use base_change::{base_change, minimalize, BaseChange};
pub use crosscheck::{theorem_crosscheck, Agreement, CrosscheckReport};
pub use decompose::{
    decompose, decompose_unchecked, pullback_factor_check, Obstruction, SplitDecomposition,
    SplitVerdict,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SplitError {
    #[error("invalid branch curve: {}", join(.0))]
    Branch(Vec<BranchError>),
    #[error("section degree {degree} exceeds the bound d = {bound}")]
    SectionDegree { degree: usize, bound: u32 },
    #[error("section meets the zero section (x-coordinate {0} is not a polynomial)")]
    MeetsZeroSection(String),
    #[error("the section is a component of the branch curve")]
    Component,
    #[error("tangency conditions fail: {0}")]
    Tangency(String),
    #[error("instance outside theorem hypotheses: {0}")]
    OutsideHypotheses(String),
    #[error("base change must be nonconstant")]
    ConstantBaseChange,
    #[error("rescaling failed: {0}")]
    RescalingFailed(String),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Fiber(#[from] FiberError),
    #[error(transparent)]
    Mw(#[from] MwError),
    #[error(transparent)]
    Root(#[from] RootError),
}

fn join(errs: &[BranchError]) -> String {
    errs.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

/// A branch curve with a section `x = f(t)` of degree at most `d`.
#[derive(Clone, Debug, PartialEq)]
pub struct SplitInstance {
    pub branch: BranchCurve,
    pub f: QPoly,
}

impl SplitInstance {
    pub fn new(branch: BranchCurve, f: QPoly) -> Result<Self, SplitError> {
        let degree = f.degree().unwrap_or(0);
        if degree > branch.d() as usize {
            return Err(SplitError::SectionDegree {
                degree,
                bound: branch.d(),
            });
        }
        Ok(SplitInstance { branch, f })
    }

    /// The instance given by the branch curve of `surface` and the
    /// `x`-coordinate of a section disjoint from `O`.
    pub fn from_section(
        surface: &WeierstrassSurface,
        section: &Section,
    ) -> Result<Self, SplitError> {
        let x = section
            .x()
            .ok_or_else(|| SplitError::MeetsZeroSection("O".into()))?;
        let f = x
            .as_poly()
            .ok_or_else(|| SplitError::MeetsZeroSection(x.to_string()))?;
        Self::new(surface.branch_curve(), f.clone())
    }

    /// `p(f(t), t)`.
    pub fn c0(&self) -> QPoly {
        self.branch.u_adic(&self.f).swap_remove(0)
    }
}

/// Structural checks on a branch curve.
#[derive(Clone, Debug, PartialEq)]
pub struct BranchReport {
    pub violations: Vec<BranchError>,
    /// `None` when the factorization over `Q(t)` is out of range.
    pub irreducible: Option<bool>,
    /// For `g = 1`: the root lattice attached to each reducible fiber of
    /// the double cover, which matches the simple singularity of the curve.
    pub singularities: Option<Vec<(Place, String)>>,
    /// Number of `A1` points, counted with the degree of their place.
    pub nodes: Option<u32>,
}

impl BranchReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    /// Every singular point is a node.
    pub fn only_nodes(&self) -> Option<bool> {
        self.singularities
            .as_ref()
            .map(|s| s.iter().all(|(_, l)| l == "A1"))
    }
}

impl fmt::Display for BranchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            writeln!(f, "valid")?;
        }
        for v in &self.violations {
            writeln!(f, "violation: {v}")?;
        }
        match self.irreducible {
            Some(true) => writeln!(f, "irreducible over Q(t)")?,
            Some(false) => writeln!(f, "reducible over Q(t)")?,
            None => writeln!(f, "irreducibility undecided")?,
        }
        if let Some(sing) = &self.singularities {
            let list: Vec<String> = sing.iter().map(|(p, l)| format!("{l}@{p}")).collect();
            writeln!(
                f,
                "singularities: {}",
                if list.is_empty() {
                    "none".into()
                } else {
                    list.join(", ")
                }
            )?;
        }
        if let Some(n) = self.nodes {
            writeln!(f, "nodes: {n}")?;
        }
        Ok(())
    }
}

pub fn validate_branch(branch: &BranchCurve) -> BranchReport {
    let violations = branch.violations();
    let irreducible = if branch.coeffs().len() > 1 {
        factor_over_qt(&branch.as_qt_poly())
            .ok()
            .map(|fac| fac.roots.is_empty() && fac.nonlinear.len() == 1 && fac.nonlinear[0].1 == 1)
    } else {
        None
    };
    let (mut singularities, mut nodes) = (None, None);
    if violations.is_empty() && branch.genus() == 1 {
        let c = branch.coeffs();
        if let Ok(s) = WeierstrassSurface::new(c[2].clone(), c[1].clone(), c[0].clone(), branch.d())
        {
            if let Ok(cfg) = classify_fibers(&s) {
                let sing: Vec<(Place, String)> = cfg
                    .fibers
                    .iter()
                    .filter_map(|fd| fd.kodaira.root_lattice().map(|l| (fd.place.clone(), l)))
                    .collect();
                nodes = Some(
                    sing.iter()
                        .filter(|(_, l)| l == "A1")
                        .map(|(p, _)| p.degree() as u32)
                        .sum(),
                );
                singularities = Some(sing);
            }
        }
    }
    BranchReport {
        violations,
        irreducible,
        singularities,
        nodes,
    }
}

/// Intersection of the section with the branch curve at one place.
#[derive(Clone, Debug, PartialEq)]
pub struct TangencyPoint {
    pub place: Place,
    pub multiplicity: u32,
    /// The branch curve is smooth at the intersection point.
    pub smooth: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TangencyReport {
    pub c0: QPoly,
    /// `c0 = kappa * h^2` when it exists.
    pub square: Option<(Rat, QPoly)>,
    pub points: Vec<TangencyPoint>,
}

impl TangencyReport {
    pub fn pass(&self) -> bool {
        self.square.is_some()
            && self
                .points
                .iter()
                .all(|p| p.smooth && p.multiplicity % 2 == 0)
    }

    /// Human-readable reasons for failure; empty on a pass.
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        for p in &self.points {
            if p.multiplicity % 2 == 1 {
                out.push(format!(
                    "odd intersection multiplicity {} at {}",
                    p.multiplicity, p.place
                ));
            }
            if !p.smooth {
                out.push(format!(
                    "branch curve singular at the intersection over {}",
                    p.place
                ));
            }
        }
        if self.square.is_none() && out.is_empty() {
            out.push("p(f, t) is not a constant times a square".into());
        }
        out
    }
}

impl fmt::Display for TangencyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", if self.pass() { "PASS" } else { "FAIL" })?;
        for p in &self.points {
            let sm = if p.smooth { "smooth" } else { "singular" };
            writeln!(f, "  {} multiplicity {} ({sm})", p.place, p.multiplicity)?;
        }
        for r in self.failures() {
            writeln!(f, "  {r}")?;
        }
        Ok(())
    }
}

/// Whether the place divides both partial derivatives of `p` along `x = f`.
fn singular_over(branch: &BranchCurve, f: &QPoly, place: &Place) -> bool {
    let px = crate::curve::eval_at_poly(&branch.dx(), f);
    let pt = crate::curve::eval_at_poly(&branch.dt(), f);
    let Place::Finite(pi) = place else {
        unreachable!("finite place expected")
    };
    pi.divides(&px) && pi.divides(&pt)
}

/// The branch curve and section in the chart `s = 1/t`, `x = x~ / s^d`.
fn chart_at_infinity(branch: &BranchCurve, f: &QPoly) -> (BranchCurve, QPoly) {
    let d = branch.d() as usize;
    let n = branch.coeffs().len() - 1;
    let coeffs = branch
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| c.reversed(d * (n - k)))
        .collect();
    (
        BranchCurve::raw(branch.genus(), branch.d(), coeffs),
        f.reversed(d),
    )
}

pub fn validate_tangency(inst: &SplitInstance) -> Result<TangencyReport, SplitError> {
    let c0 = inst.c0();
    if c0.is_zero() {
        return Err(SplitError::Component);
    }
    let square = c0.square_up_to_constant();
    let mut points = Vec::new();
    for (place, m) in zeros_of(&c0) {
        let smooth = !singular_over(&inst.branch, &inst.f, &place);
        points.push(TangencyPoint {
            place,
            multiplicity: m,
            smooth,
        });
    }
    let top = (inst.branch.coeffs().len() - 1) * inst.branch.d() as usize;
    let at_inf = top - c0.degree().unwrap_or(0);
    if at_inf > 0 {
        let (chart, f) = chart_at_infinity(&inst.branch, &inst.f);
        let smooth = !singular_over(
            &chart,
            &f,
            &Place::finite(QPoly::var()).expect("t is a place"),
        );
        points.push(TangencyPoint {
            place: Place::Infinity,
            multiplicity: at_inf as u32,
            smooth,
        });
    }
    Ok(TangencyReport { c0, square, points })
}
