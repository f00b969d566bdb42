//! Property checks shared by the proptest suites and the acceptance run.
//! Each check returns `Err` with a description of the counterexample.

#![allow(clippy::needless_range_loop)]

use std::sync::OnceLock;

use mwsplit::curve::{Section, WeierstrassSurface};
use mwsplit::fibers::KodairaType;
use mwsplit::mw::{halve, height, MWContext};
use mwsplit::qfield::{factor, zeros_of, Place, QPoly, QRatFunc, Rat, Ring};
use proptest::prelude::*;

use super::{surface_a, surface_b};

/// Coefficients of a combination `a s0 + b s1 + c s2`.
pub type Coeffs = [i64; 3];

struct Pool {
    ctx: MWContext,
    secs: [Section; 3],
}

fn pools() -> &'static [Pool; 2] {
    static POOLS: OnceLock<[Pool; 2]> = OnceLock::new();
    POOLS.get_or_init(|| {
        let mk = |(s, secs): (WeierstrassSurface, [Section; 3])| Pool {
            ctx: MWContext::new(s, vec![], 3).unwrap(),
            secs,
        };
        [mk(surface_a()), mk(surface_b())]
    })
}

fn combo(pool: &Pool, c: Coeffs) -> Section {
    let s = pool.ctx.surface();
    c.iter()
        .zip(&pool.secs)
        .fold(Section::Zero, |acc, (&n, p)| {
            s.add(&acc, &s.mul(n, p).unwrap()).unwrap()
        })
}

fn h(pool: &Pool, p: &Section, q: &Section) -> Result<Rat, String> {
    height(&pool.ctx, p, q).map_err(|e| e.to_string())
}

pub fn coeffs() -> impl Strategy<Value = Coeffs> {
    [-1i64..=1, -1i64..=1, -1i64..=1]
}

pub fn surface_index() -> impl Strategy<Value = usize> {
    0usize..2
}

pub fn bilinear(which: usize, a: Coeffs, b: Coeffs, c: Coeffs) -> Result<(), String> {
    let pool = &pools()[which];
    let (p, q, r) = (combo(pool, a), combo(pool, b), combo(pool, c));
    let sum = pool.ctx.surface().add(&p, &q).unwrap();
    let lhs = h(pool, &sum, &r)?;
    let rhs = h(pool, &p, &r)? + h(pool, &q, &r)?;
    if lhs != rhs {
        return Err(format!(
            "surface {which}: <{a:?}+{b:?}, {c:?}> = {lhs}, sum of parts {rhs}"
        ));
    }
    Ok(())
}

pub fn symmetric(which: usize, a: Coeffs, b: Coeffs) -> Result<(), String> {
    let pool = &pools()[which];
    let (p, q) = (combo(pool, a), combo(pool, b));
    let (pq, qp) = (h(pool, &p, &q)?, h(pool, &q, &p)?);
    if pq != qp {
        return Err(format!(
            "surface {which}: <{a:?}, {b:?}> = {pq} but reversed {qp}"
        ));
    }
    Ok(())
}

/// Both example groups are torsion free, so every nonzero section has
/// positive height.
pub fn positive(which: usize, a: Coeffs) -> Result<(), String> {
    let pool = &pools()[which];
    let p = combo(pool, a);
    let hp = h(pool, &p, &p)?;
    let ok = if p.is_zero() {
        hp == Rat::zero()
    } else {
        hp > Rat::zero()
    };
    if !ok {
        return Err(format!("surface {which}: height of {a:?} is {hp}"));
    }
    Ok(())
}

pub fn double_height(which: usize, a: Coeffs) -> Result<(), String> {
    let pool = &pools()[which];
    let p = combo(pool, a);
    let d = pool.ctx.surface().double(&p).unwrap();
    let (hd, hp) = (h(pool, &d, &d)?, h(pool, &p, &p)?);
    if hd != Rat::from_int(4) * &hp {
        return Err(format!(
            "surface {which}: <2P, 2P> = {hd}, <P, P> = {hp} for {a:?}"
        ));
    }
    Ok(())
}

pub fn halve_double(which: usize, a: Coeffs) -> Result<(), String> {
    let pool = &pools()[which];
    let p = combo(pool, a);
    let d = pool.ctx.surface().double(&p).unwrap();
    let cert = halve(&pool.ctx, &d).map_err(|e| e.to_string())?;
    if !cert
        .halves_of_target()
        .any(|half| half.rational() == Some(&p))
    {
        return Err(format!(
            "surface {which}: {a:?} is not among the halves of its double"
        ));
    }
    Ok(())
}

/// A nonzero rational function has as many zeros as poles, counted with
/// the degree of the place.
pub fn valuation_degree(num: &[i64], den: &[i64]) -> Result<(), String> {
    let (n, d) = (QPoly::from_ints(num), QPoly::from_ints(den));
    if n.is_zero() || d.is_zero() {
        return Ok(());
    }
    let x = QRatFunc::new(n.clone(), d.clone());
    let mut places: Vec<Place> = zeros_of(&n)
        .into_iter()
        .chain(zeros_of(&d))
        .map(|(p, _)| p)
        .collect();
    places.sort();
    places.dedup();
    places.push(Place::Infinity);
    let total: i64 = places
        .iter()
        .map(|pl| pl.valuation(&x, 0).finite().unwrap() * pl.degree() as i64)
        .sum();
    if total != 0 {
        return Err(format!("sum of valuations of {x} is {total}"));
    }
    Ok(())
}

pub fn factor_roundtrip(cs: &[i64]) -> Result<(), String> {
    let p = QPoly::from_ints(cs);
    if p.is_zero() {
        return Ok(());
    }
    let f = factor(&p).map_err(|e| e.to_string())?;
    if f.expand() != p {
        return Err(format!("factorization of {p} expands to {}", f.expand()));
    }
    if let Some((g, _)) = f.factors.iter().find(|(g, _)| !g.is_monic()) {
        return Err(format!("factor {g} of {p} is not monic"));
    }
    Ok(())
}

/// Every reducible Kodaira type up to `I9` and `I4*`.
pub fn fiber_types() -> Vec<KodairaType> {
    let mut out: Vec<KodairaType> = (2..=9).map(KodairaType::I).collect();
    out.extend([KodairaType::III, KodairaType::IV]);
    out.extend((0..=4).map(KodairaType::IStar));
    out.extend([
        KodairaType::IVStar,
        KodairaType::IIIStar,
        KodairaType::IIStar,
    ]);
    out
}

/// Pivots of symmetric Gaussian elimination; all positive iff the matrix is
/// positive definite.
fn pivots(m: &[Vec<Rat>]) -> Vec<Rat> {
    let mut a = m.to_vec();
    let n = a.len();
    let mut out = Vec::new();
    for k in 0..n {
        let pivot = a[k][k].clone();
        out.push(pivot.clone());
        if pivot == Rat::zero() {
            break;
        }
        for i in k + 1..n {
            let f = &a[i][k] / &pivot;
            for j in k..n {
                let v = &a[k][j] * &f;
                a[i][j] -= v;
            }
        }
    }
    out
}

/// `-A^{-1}` inverts `-A` and is symmetric positive definite.
pub fn neg_inverse_positive(ty: KodairaType) -> Result<(), String> {
    let a = ty.intersection_matrix();
    let m = ty.neg_inverse();
    let n = a.len();
    if n + 1 != ty.components() as usize || m.len() != n {
        return Err(format!(
            "{ty}: matrix size {n} for {} components",
            ty.components()
        ));
    }
    for i in 0..n {
        for j in 0..n {
            let prod: Rat = (0..n).map(|k| Rat::from_int(-a[i][k]) * &m[k][j]).sum();
            let want = if i == j { Rat::one() } else { Rat::zero() };
            if prod != want || m[i][j] != m[j][i] {
                return Err(format!("{ty}: -A^-1 is wrong at ({i}, {j})"));
            }
        }
    }
    if !pivots(&m).iter().all(|p| *p > Rat::zero()) || pivots(&m).len() != n {
        return Err(format!("{ty}: -A^-1 is not positive definite"));
    }
    Ok(())
}
