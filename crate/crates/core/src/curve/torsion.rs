use crate::qfield::{
    constant_extension_roots, factor_over_qt, qt_from_polys, ExtensionRoots, QuadTower, RatFunc,
};

use super::{Section, TowerSection, WeierstrassSurface};

/// Two-torsion sections found over `Q(t)` and over quadratic constant
/// extensions.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct TwoTorsion {
    pub rational: Vec<Section>,
    pub over_tower: Vec<(QuadTower, TowerSection)>,
    /// Set when some factor of the cubic could not be settled.
    pub undecided: Option<String>,
}

impl TwoTorsion {
    /// No two-torsion over any constant extension reached by the analysis.
    pub fn is_trivial(&self) -> bool {
        self.rational.is_empty() && self.over_tower.is_empty() && self.undecided.is_none()
    }
}

pub(super) fn two_torsion(s: &WeierstrassSurface, cap: usize) -> TwoTorsion {
    let cubic = qt_from_polys(&[
        s.a6().clone(),
        s.a4().clone(),
        s.a2().clone(),
        crate::qfield::QPoly::one(),
    ]);
    let fac = factor_over_qt(&cubic).expect("cubic factors within range");
    let mut out = TwoTorsion::default();
    for (r, _) in fac.roots {
        out.rational.push(Section::affine(r, RatFunc::zero()));
    }
    for (f, _) in fac.nonlinear {
        match constant_extension_roots(&f, &QuadTower::rational(), cap) {
            ExtensionRoots::Rootless(_) => {}
            ExtensionRoots::Quadratic { tower, roots } => {
                for r in roots {
                    out.over_tower
                        .push((tower.clone(), Section::affine(r, RatFunc::zero())));
                }
            }
            ExtensionRoots::Undecided { reason } => out.undecided = Some(reason),
        }
    }
    out
}
