//! Factorization of univariate polynomials over the rationals.
//!
//! Squarefree parts are factored by the Zassenhaus method: factor modulo a
//! small prime (distinct-degree then Cantor-Zassenhaus splitting), lift the
//! modular factors by linear Hensel steps past a Mignotte bound, and
//! recombine subsets by trial division over the integers.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use super::poly::QPoly;
use super::ring::Rat;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FactorError {
    #[error("cannot factor the zero polynomial")]
    Zero,
}

/// Complete factorization `p = lc * prod f_i^{m_i}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub leading: Rat,
    /// Monic irreducible factors with multiplicities, sorted by degree and
    /// then by coefficients from the top down.
    pub factors: Vec<(QPoly, u32)>,
}

impl Factorization {
    pub fn expand(&self) -> QPoly {
        self.factors
            .iter()
            .fold(QPoly::constant(self.leading.clone()), |acc, (f, m)| {
                &acc * &f.pow(*m)
            })
    }
}

pub fn factor(p: &QPoly) -> Result<Factorization, FactorError> {
    if p.is_zero() {
        return Err(FactorError::Zero);
    }
    let leading = p.lc();
    let (_, parts) = p.squarefree_decomposition();
    let mut factors = Vec::new();
    for (g, m) in parts {
        for f in factor_squarefree(&g) {
            factors.push((f, m));
        }
    }
    factors.sort_by(|a, b| a.0.canonical_cmp(&b.0).then(a.1.cmp(&b.1)));
    Ok(Factorization { leading, factors })
}

/// Monic irreducible factors of a squarefree polynomial of positive degree.
pub fn factor_squarefree(g: &QPoly) -> Vec<QPoly> {
    match g.degree() {
        None | Some(0) => return Vec::new(),
        Some(1) => return vec![g.monic()],
        _ => {}
    }
    let z = to_primitive_int(g);
    zassenhaus(z)
        .into_iter()
        .map(|f| from_int(&f).monic())
        .collect()
}

/// Rational roots of a nonzero polynomial, ascending.
pub fn rational_roots(p: &QPoly) -> Vec<Rat> {
    let mut roots: Vec<Rat> = factor(p)
        .map(|f| f.factors)
        .unwrap_or_default()
        .into_iter()
        .filter(|(f, _)| f.degree() == Some(1))
        .map(|(f, _)| -f.coeff(0))
        .collect();
    roots.sort();
    roots
}

// ---------------------------------------------------------------------------
// integer polynomials (coefficient vectors, low degree first)

type ZPoly = Vec<BigInt>;

fn ztrim(mut v: ZPoly) -> ZPoly {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

fn to_primitive_int(p: &QPoly) -> ZPoly {
    let l = p
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: ZPoly = p
        .coeffs()
        .iter()
        .map(|c| (c * Rat::from_integer(l.clone())).to_integer())
        .collect();
    let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let sign = if ints.last().is_some_and(|c| c.is_negative()) {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    ints.into_iter().map(|c| c / &content * &sign).collect()
}

fn from_int(z: &[BigInt]) -> QPoly {
    QPoly::new(z.iter().map(|c| Rat::from_integer(c.clone())).collect())
}

fn primitive_part(v: ZPoly) -> ZPoly {
    let v = ztrim(v);
    let content = v.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if content.is_zero() {
        return v;
    }
    let sign = if v.last().is_some_and(|c| c.is_negative()) {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    v.into_iter().map(|c| c / &content * &sign).collect()
}

/// Exact quotient over the integers, if `d` divides `n`.
fn zdiv_exact(n: &[BigInt], d: &[BigInt]) -> Option<ZPoly> {
    let dd = d.len() - 1;
    if n.len() < d.len() {
        return None;
    }
    let lc = &d[dd];
    let mut rem = n.to_vec();
    let mut q = vec![BigInt::zero(); n.len() - dd];
    for k in (0..q.len()).rev() {
        let (c, r) = rem[k + dd].div_rem(lc);
        if !r.is_zero() {
            return None;
        }
        if c.is_zero() {
            continue;
        }
        for (j, b) in d.iter().enumerate() {
            rem[k + j] -= &c * b;
        }
        q[k] = c;
    }
    rem.iter().all(Zero::is_zero).then_some(q)
}

// ---------------------------------------------------------------------------
// polynomials over Z/p, p an odd prime below 2^31

type Fp = Vec<u64>;

fn ftrim(mut v: Fp) -> Fp {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn fpow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn finv(a: u64, p: u64) -> u64 {
    fpow(a, p - 2, p)
}

fn fsub(a: &Fp, b: &Fp, p: u64) -> Fp {
    let n = a.len().max(b.len());
    ftrim(
        (0..n)
            .map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p)
            .collect(),
    )
}

fn fmul(a: &Fp, b: &Fp, p: u64) -> Fp {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    ftrim(out)
}

fn fdivrem(a: &Fp, b: &Fp, p: u64) -> (Fp, Fp) {
    let db = b.len() - 1;
    if a.len() < b.len() {
        return (Vec::new(), a.clone());
    }
    let inv = finv(b[db], p);
    let mut rem = a.clone();
    let mut q = vec![0u64; a.len() - db];
    for k in (0..q.len()).rev() {
        let c = rem[k + db] * inv % p;
        if c == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            rem[k + j] = (rem[k + j] + p - c * y % p) % p;
        }
        q[k] = c;
    }
    rem.truncate(db);
    (ftrim(q), ftrim(rem))
}

fn fmonic(a: &Fp, p: u64) -> Fp {
    match a.last() {
        None => Vec::new(),
        Some(&l) => {
            let inv = finv(l, p);
            a.iter().map(|c| c * inv % p).collect()
        }
    }
}

fn fgcd(a: &Fp, b: &Fp, p: u64) -> Fp {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let r = fdivrem(&a, &b, p).1;
        a = b;
        b = r;
    }
    fmonic(&a, p)
}

fn fxgcd(a: &Fp, b: &Fp, p: u64) -> (Fp, Fp, Fp) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (vec![1u64], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = fdivrem(&r0, &r1, p);
        r0 = std::mem::replace(&mut r1, r);
        let s = fsub(&s0, &fmul(&q, &s1, p), p);
        s0 = std::mem::replace(&mut s1, s);
        let t = fsub(&t0, &fmul(&q, &t1, p), p);
        t0 = std::mem::replace(&mut t1, t);
    }
    let inv = finv(*r0.last().expect("nonzero gcd"), p);
    let sc = |v: &Fp| ftrim(v.iter().map(|c| c * inv % p).collect());
    (sc(&r0), sc(&s0), sc(&t0))
}

fn fderiv(a: &Fp, p: u64) -> Fp {
    ftrim(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| c * (i as u64 % p) % p)
            .collect(),
    )
}

fn fpowmod(base: &Fp, e: &BigUint, m: &Fp, p: u64) -> Fp {
    let mut acc = vec![1u64];
    let b = fdivrem(base, m, p).1;
    for i in (0..e.bits()).rev() {
        acc = fdivrem(&fmul(&acc, &acc, p), m, p).1;
        if e.bit(i) {
            acc = fdivrem(&fmul(&acc, &b, p), m, p).1;
        }
    }
    acc
}

fn reduce_mod(z: &[BigInt], p: u64) -> Fp {
    let pb = BigInt::from(p);
    ftrim(
        z.iter()
            .map(|c| c.mod_floor(&pb).to_u64().expect("reduced"))
            .collect(),
    )
}

/// Distinct-degree factorization of a monic squarefree polynomial.
fn ddf(f: &Fp, p: u64) -> Vec<(Fp, usize)> {
    let mut out = Vec::new();
    let mut f = f.clone();
    let x: Fp = vec![0, 1];
    let mut h = x.clone();
    let pe = BigUint::from(p);
    let mut d = 1;
    while f.len() > 2 * d {
        h = fpowmod(&h, &pe, &f, p);
        let g = fgcd(&fsub(&h, &x, p), &f, p);
        if g.len() > 1 {
            f = fdivrem(&f, &g, p).0;
            h = fdivrem(&h, &f, p).1;
            out.push((g, d));
        }
        d += 1;
    }
    if f.len() > 1 {
        let deg = f.len() - 1;
        out.push((f, deg));
    }
    out
}

/// Deterministic pseudo-random stream for the splitting step.
struct SplitMix(u64);

impl SplitMix {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
}

/// Cantor-Zassenhaus equal-degree splitting.
fn edf(g: &Fp, d: usize, p: u64, rng: &mut SplitMix) -> Vec<Fp> {
    let n = g.len() - 1;
    if n == d {
        return vec![g.clone()];
    }
    let e = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
    loop {
        let a: Fp = ftrim((0..n).map(|_| rng.next() % p).collect());
        if a.len() < 2 {
            continue;
        }
        let b = fsub(&fpowmod(&a, &e, g, p), &vec![1], p);
        let c = fgcd(&b, g, p);
        if c.len() > 1 && c.len() < g.len() {
            let rest = fdivrem(g, &c, p).0;
            let mut out = edf(&c, d, p, rng);
            out.extend(edf(&fmonic(&rest, p), d, p, rng));
            return out;
        }
    }
}

fn factor_mod_p(f: &Fp, p: u64) -> Vec<Fp> {
    let mut rng = SplitMix(p);
    let mut out = Vec::new();
    for (g, d) in ddf(&fmonic(f, p), p) {
        out.extend(edf(&g, d, p, &mut rng));
    }
    out
}

const PRIMES: [u64; 30] = [
    3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
    101, 103, 107, 109, 113, 127,
];

// ---------------------------------------------------------------------------
// Hensel lifting modulo p^k

fn zmod(v: &[BigInt], m: &BigInt) -> ZPoly {
    ztrim(v.iter().map(|c| c.mod_floor(m)).collect())
}

fn zmul(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    ztrim(out)
}

fn zsub(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let n = a.len().max(b.len());
    ztrim(
        (0..n)
            .map(|i| a.get(i).cloned().unwrap_or_default() - b.get(i).cloned().unwrap_or_default())
            .collect(),
    )
}

fn fp_to_z(a: &Fp) -> ZPoly {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

/// Lifts `target = a*b (mod p)` with `a` monic to a factorization modulo
/// `modulus = p^k`.
fn hensel_two(target: &[BigInt], a: &Fp, b: &Fp, p: u64, modulus: &BigInt) -> (ZPoly, ZPoly) {
    let (g, s, t) = fxgcd(a, b, p);
    debug_assert_eq!(g, vec![1]);
    let pb = BigInt::from(p);
    let mut big_a = fp_to_z(a);
    let mut big_b = fp_to_z(b);
    // leading coefficient of b is taken exactly from the target
    let lt = target.last().expect("nonzero target").mod_floor(modulus);
    *big_b.last_mut().expect("nonzero factor") = lt;
    let mut m = pb.clone();
    while &m < modulus {
        let diff = zmod(&zsub(target, &zmul(&big_a, &big_b)), modulus);
        let e: ZPoly = diff.iter().map(|c| c / &m).collect();
        let e = reduce_mod(&e, p);
        let te = fmul(&t, &e, p);
        let a1 = fdivrem(&te, a, p).1;
        let num = fsub(&e, &fmul(&a1, b, p), p);
        let b1 = fdivrem(&num, a, p).0;
        big_a = zmod(&zsub(&big_a, &zmul(&fp_to_z(&a1), &[-m.clone()])), modulus);
        big_b = zmod(&zsub(&big_b, &zmul(&fp_to_z(&b1), &[-m.clone()])), modulus);
        m *= &pb;
        let _ = &s;
    }
    (big_a, big_b)
}

fn hensel_all(target: &[BigInt], factors: &[Fp], p: u64, modulus: &BigInt) -> Vec<ZPoly> {
    if factors.len() == 1 {
        let lc = target.last().expect("nonzero").mod_floor(modulus);
        let inv = lc.extended_gcd(modulus).x.mod_floor(modulus);
        return vec![zmod(&zmul(target, &[inv]), modulus)];
    }
    let a = &factors[0];
    let lc = reduce_mod(&[target.last().expect("nonzero").clone()], p);
    let rest = factors[1..].iter().fold(lc, |acc, f| fmul(&acc, f, p));
    let (big_a, big_b) = hensel_two(target, a, &rest, p, modulus);
    let mut out = vec![big_a];
    out.extend(hensel_all(&big_b, &factors[1..], p, modulus));
    out
}

fn symmetric(v: &[BigInt], m: &BigInt) -> ZPoly {
    let half: BigInt = m / 2;
    ztrim(
        v.iter()
            .map(|c| {
                let c = c.mod_floor(m);
                if c > half {
                    c - m
                } else {
                    c
                }
            })
            .collect(),
    )
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Irreducible factors over Z of a primitive squarefree polynomial.
fn zassenhaus(f: ZPoly) -> Vec<ZPoly> {
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f];
    }
    let lc = f[n].clone();
    // pick the prime giving the fewest modular factors among a few candidates
    let mut best: Option<(u64, Vec<Fp>)> = None;
    let mut tried = 0;
    for &p in PRIMES.iter() {
        if (&lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp = reduce_mod(&f, p);
        if fgcd(&fp, &fderiv(&fp, p), p).len() != 1 {
            continue;
        }
        let facs = factor_mod_p(&fp, p);
        if facs.len() == 1 {
            return vec![f];
        }
        if best.as_ref().is_none_or(|(_, b)| facs.len() < b.len()) {
            best = Some((p, facs));
        }
        tried += 1;
        if tried >= 5 {
            break;
        }
    }
    let (p, mut modular) = best.expect("a good prime exists for a squarefree polynomial");
    modular.sort();
    let norm1: BigInt = f.iter().map(|c| c.abs()).sum();
    let bound = BigInt::from(2) * lc.abs() * (BigInt::one() << n) * norm1 + 1;
    let pb = BigInt::from(p);
    let mut modulus = pb.clone();
    while modulus <= bound {
        modulus *= &pb;
    }
    let mut lifted = hensel_all(&f, &modular, p, &modulus);

    let mut remaining = f;
    let mut found = Vec::new();
    let mut s = 1;
    while 2 * s <= lifted.len() {
        let mut hit = None;
        let rlc = remaining.last().expect("nonzero").clone();
        for combo in combinations(lifted.len(), s) {
            let prod = combo.iter().fold(vec![rlc.clone()], |acc, &i| {
                zmod(&zmul(&acc, &lifted[i]), &modulus)
            });
            let cand = primitive_part(symmetric(&prod, &modulus));
            if cand.len() < 2 {
                continue;
            }
            if let Some(q) = zdiv_exact(&remaining, &cand) {
                hit = Some((combo, cand, q));
                break;
            }
        }
        match hit {
            Some((combo, cand, q)) => {
                found.push(cand);
                remaining = q;
                lifted = lifted
                    .into_iter()
                    .enumerate()
                    .filter(|(i, _)| !combo.contains(i))
                    .map(|(_, f)| f)
                    .collect();
            }
            None => s += 1,
        }
    }
    if remaining.len() > 1 {
        found.push(primitive_part(remaining));
    }
    found
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfield::ring::rat;

    fn p(cs: &[i64]) -> QPoly {
        QPoly::from_ints(cs)
    }

    #[test]
    fn small_examples() {
        let f = factor(&p(&[-1, 0, 1])).unwrap();
        assert_eq!(f.factors, vec![(p(&[-1, 1]), 1), (p(&[1, 1]), 1)]);
        let f = factor(&p(&[1, 0, 1])).unwrap();
        assert_eq!(f.factors, vec![(p(&[1, 0, 1]), 1)]);
        assert_eq!(factor(&QPoly::zero()), Err(FactorError::Zero));
    }

    #[test]
    fn swinnerton_dyer_like_product() {
        // (t^4 - 10t^2 + 1)(t^2 - 2)(t^3 - 3) is hard modulo every prime
        let a = p(&[1, 0, -10, 0, 1]);
        let b = p(&[-2, 0, 1]);
        let c = p(&[-3, 0, 0, 1]);
        let prod = &(&a * &b) * &(&c * &QPoly::constant(rat(6)));
        let f = factor(&prod).unwrap();
        assert_eq!(f.expand(), prod);
        assert_eq!(f.factors.len(), 3);
        assert!(f.factors.iter().all(|(g, _)| g.is_monic()));
    }

    #[test]
    fn repeated_and_linear_factors() {
        let t = QPoly::var();
        let prod = &(&t.pow(2) * &(&t - &p(&[2025])).pow(2)) * &p(&[36]);
        let f = factor(&prod).unwrap();
        assert_eq!(f.factors, vec![(p(&[-2025, 1]), 2), (t.clone(), 2)]);
        assert_eq!(f.leading, rat(36));
    }

    #[test]
    fn roots() {
        let f = &(&p(&[-1, 2]) * &p(&[3, 1])) * &p(&[1, 0, 1]);
        assert_eq!(
            rational_roots(&f),
            vec![rat(-3), Rat::new(1.into(), 2.into())]
        );
    }
}
