//! Exact arithmetic over Q: rationals, polynomials and rational functions in
//! `t`, quadratic constant-field towers, factorization, places and root
//! finding.

pub mod factor;
pub mod place;
pub mod poly;
pub mod ratfunc;
pub mod ring;
pub mod roots;
pub mod tower;

pub use factor::{factor, rational_roots, FactorError, Factorization};
pub use place::{zeros_of, Place, PlaceError, Valuation};
pub use poly::{Poly, QPoly};
pub use ratfunc::{QRatFunc, RatFunc};
pub use ring::{rat, rat_sqrt, ratio, Field, Rat, Ring};
pub use roots::{
    constant_extension_roots, discriminant, embed_ratfunc, factor_over_qt, qt_from_polys,
    ratfunc_cmp, roots_in_qt, square_up_to_constant_rf, ExtensionRoots, QtFactorization, QtPoly,
    RootError, RootlessEvidence, TowerRatFunc,
};
pub use tower::{QuadTower, TowerElem, TowerError, DEFAULT_TOWER_CAP};
