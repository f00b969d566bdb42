#![allow(dead_code)]

pub mod props;

use mwsplit::curve::{Section, WeierstrassSurface};
use mwsplit::qfield::{ratio, Place, QPoly, QRatFunc, Rat};

pub fn p(cs: &[i64]) -> QPoly {
    QPoly::from_ints(cs)
}

pub fn pr(cs: &[(i64, i64)]) -> QRatFunc {
    QRatFunc::from_poly(QPoly::from_rats(
        &cs.iter().map(|&(n, d)| ratio(n, d)).collect::<Vec<Rat>>(),
    ))
}

pub fn sec(x: QRatFunc, y: QRatFunc) -> Section {
    Section::affine(x, y)
}

pub fn ip(cs: &[i64]) -> QRatFunc {
    QRatFunc::from_poly(p(cs))
}

/// y^2 = x^3 + (271350 - 98t)x^2 + t(t-5825)(t-2025)x + 36t^2(t-2025)^2
pub fn surface_a() -> (WeierstrassSurface, [Section; 3]) {
    let a4 = &(&p(&[0, 1]) * &p(&[-5825, 1])) * &p(&[-2025, 1]);
    let sq = &p(&[0, 1]) * &p(&[-2025, 1]);
    let a6 = (&sq * &sq).scale(&ratio(36, 1));
    let s = WeierstrassSurface::new(p(&[271350, -98]), a4, a6, 2).unwrap();
    let s0 = sec(ip(&[0]), ip(&[0, -12150, 6]));
    let s1 = sec(ip(&[0, -32]), ip(&[0, -6930, 2]));
    let s2 = sec(ip(&[0, -20]), ip(&[0, -4500, 4]));
    (s, [s0, s1, s2])
}

/// y^2 = x^3 + (25t + 9)x^2 + (144t^2 + t^3)x + 16t^4
pub fn surface_b() -> (WeierstrassSurface, [Section; 3]) {
    let s =
        WeierstrassSurface::new(p(&[9, 25]), p(&[0, 0, 144, 1]), p(&[0, 0, 0, 0, 16]), 2).unwrap();
    let s0 = sec(ip(&[0]), ip(&[0, 0, 4]));
    let s1 = sec(ip(&[0, -16]), ip(&[0, -48]));
    let s2 = sec(ip(&[0, -15]), ip(&[0, 45, 1]));
    (s, [s0, s1, s2])
}

pub fn place(cs: &[i64]) -> Place {
    Place::finite(p(cs)).unwrap()
}
