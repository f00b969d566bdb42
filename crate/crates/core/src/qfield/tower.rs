use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Signed;
use thiserror::Error;

use super::ring::{rat_sqrt, strip_small_squares, Field, Rat, Ring};

pub const DEFAULT_TOWER_CAP: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TowerError {
    #[error("tower overflow: adjoining sqrt({needed}) would exceed the height cap {cap}")]
    Overflow { needed: Rat, cap: usize },
    #[error("square root of zero requested")]
    Zero,
}

/// Multiquadratic extension `Q(sqrt m_1, ..., sqrt m_h)` built one generator
/// at a time. Each generator is an integer that is not a square in the field
/// generated by the earlier ones.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct QuadTower {
    gens: Vec<BigInt>,
}

impl QuadTower {
    pub fn rational() -> Self {
        QuadTower { gens: Vec::new() }
    }

    pub fn generators(&self) -> &[BigInt] {
        &self.gens
    }

    pub fn height(&self) -> usize {
        self.gens.len()
    }

    pub fn is_prefix_of(&self, other: &QuadTower) -> bool {
        other.gens.starts_with(&self.gens)
    }

    /// Element `sqrt(m_i)`.
    pub fn generator(&self, i: usize) -> TowerElem {
        let mut coords = vec![Rat::zero(); 1 << self.gens.len()];
        coords[1 << i] = Rat::one();
        TowerElem {
            gens: Arc::new(self.gens.clone()),
            coords,
        }
    }

    pub fn embed(&self, r: &Rat) -> TowerElem {
        let mut coords = vec![Rat::zero(); 1 << self.gens.len()];
        coords[0] = r.clone();
        TowerElem {
            gens: Arc::new(self.gens.clone()),
            coords,
        }
    }

    /// Square root of a nonzero rational: found inside the tower when
    /// possible, otherwise the tower grows by one generator (subject to `cap`).
    pub fn sqrt(&self, c: &Rat, cap: usize) -> Result<(QuadTower, TowerElem), TowerError> {
        if c.is_zero() {
            return Err(TowerError::Zero);
        }
        let h = self.gens.len();
        for mask in 0..(1usize << h) {
            let m: BigInt = (0..h)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| self.gens[i].clone())
                .product();
            let scaled = c * Rat::from_integer(m.clone());
            if let Some(r) = rat_sqrt(&scaled) {
                let mut coords = vec![Rat::zero(); 1 << h];
                coords[mask] = r / Rat::from_integer(m);
                return Ok((
                    self.clone(),
                    TowerElem {
                        gens: Arc::new(self.gens.clone()),
                        coords,
                    },
                ));
            }
        }
        if h >= cap {
            return Err(TowerError::Overflow {
                needed: c.clone(),
                cap,
            });
        }
        let nd = c.numer() * c.denom();
        let (core, cof) = strip_small_squares(&nd);
        let mut gens = self.gens.clone();
        gens.push(core);
        let ext = QuadTower { gens };
        let root = ext
            .generator(h)
            .scale_rat(&Rat::new(cof, c.denom().clone()));
        Ok((ext, root))
    }
}

impl fmt::Display for QuadTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.gens.is_empty() {
            return write!(f, "Q");
        }
        let names: Vec<String> = self.gens.iter().map(|m| format!("sqrt({m})")).collect();
        write!(f, "Q({})", names.join(", "))
    }
}

/// Element of a [`QuadTower`], stored as coordinates on the basis
/// `prod_{i in S} sqrt(m_i)` indexed by the bitmask `S`.
///
/// Elements of a subtower combine with elements of any tower extending it;
/// combining elements of unrelated towers is a logic error and panics.
#[derive(Clone, Debug)]
pub struct TowerElem {
    gens: Arc<Vec<BigInt>>,
    coords: Vec<Rat>,
}

impl TowerElem {
    pub fn tower(&self) -> QuadTower {
        QuadTower {
            gens: self.gens.as_ref().clone(),
        }
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    /// The rational value when the element lies in `Q`.
    pub fn as_rat(&self) -> Option<Rat> {
        self.coords[1..]
            .iter()
            .all(Ring::is_zero)
            .then(|| self.coords[0].clone())
    }

    pub fn scale_rat(&self, r: &Rat) -> Self {
        TowerElem {
            gens: self.gens.clone(),
            coords: self.coords.iter().map(|c| c * r).collect(),
        }
    }

    fn lifted(&self, gens: &Arc<Vec<BigInt>>) -> Vec<Rat> {
        let mut c = self.coords.clone();
        c.resize(1 << gens.len(), Rat::zero());
        c
    }

    fn unify(&self, rhs: &Self) -> (Arc<Vec<BigInt>>, Vec<Rat>, Vec<Rat>) {
        if self.gens.len() >= rhs.gens.len() {
            assert!(
                self.gens.starts_with(&rhs.gens),
                "tower elements from incompatible towers"
            );
            (
                self.gens.clone(),
                self.coords.clone(),
                rhs.lifted(&self.gens),
            )
        } else {
            assert!(
                rhs.gens.starts_with(&self.gens),
                "tower elements from incompatible towers"
            );
            (rhs.gens.clone(), self.lifted(&rhs.gens), rhs.coords.clone())
        }
    }

    fn basis_product(gens: &[BigInt], a: usize, b: usize) -> (usize, BigInt) {
        let common = a & b;
        let f = (0..gens.len())
            .filter(|i| common >> i & 1 == 1)
            .map(|i| gens[i].clone())
            .product();
        (a ^ b, f)
    }
}

fn mul_coords(gens: &[BigInt], a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); a.len()];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            let (k, f) = TowerElem::basis_product(gens, i, j);
            out[k] += x * y * Rat::from_integer(f);
        }
    }
    out
}

/// Inverse by conjugating away the top generator: `1/(a + b sqrt m)` equals
/// `(a - b sqrt m) / (a^2 - m b^2)` with the norm in the subtower.
fn inv_coords(gens: &[BigInt], c: &[Rat]) -> Vec<Rat> {
    if gens.is_empty() {
        assert!(!c[0].is_zero(), "inverse of zero tower element");
        return vec![c[0].recip()];
    }
    let h = gens.len() - 1;
    let half = 1 << h;
    let (a, b) = c.split_at(half);
    let sub = &gens[..h];
    let m = Rat::from_integer(gens[h].clone());
    let aa = mul_coords(sub, a, a);
    let bb = mul_coords(sub, b, b);
    let norm: Vec<Rat> = aa.iter().zip(&bb).map(|(x, y)| x - &m * y).collect();
    let ninv = inv_coords(sub, &norm);
    let mut out = mul_coords(sub, a, &ninv);
    out.extend(mul_coords(sub, b, &ninv).into_iter().map(|x| -x));
    out
}

impl PartialEq for TowerElem {
    fn eq(&self, rhs: &Self) -> bool {
        let (_, a, b) = self.unify(rhs);
        a == b
    }
}

impl Eq for TowerElem {}

impl Ring for TowerElem {
    fn zero() -> Self {
        TowerElem {
            gens: Arc::new(Vec::new()),
            coords: vec![Rat::zero()],
        }
    }
    fn one() -> Self {
        TowerElem {
            gens: Arc::new(Vec::new()),
            coords: vec![Rat::one()],
        }
    }
    fn is_zero(&self) -> bool {
        self.coords.iter().all(Ring::is_zero)
    }
    fn is_one(&self) -> bool {
        self.as_rat().is_some_and(|r| r.is_one())
    }
    fn plus(&self, rhs: &Self) -> Self {
        let (g, a, b) = self.unify(rhs);
        TowerElem {
            gens: g,
            coords: a.iter().zip(&b).map(|(x, y)| x + y).collect(),
        }
    }
    fn minus(&self, rhs: &Self) -> Self {
        let (g, a, b) = self.unify(rhs);
        TowerElem {
            gens: g,
            coords: a.iter().zip(&b).map(|(x, y)| x - y).collect(),
        }
    }
    fn times(&self, rhs: &Self) -> Self {
        let (g, a, b) = self.unify(rhs);
        let coords = mul_coords(&g, &a, &b);
        TowerElem { gens: g, coords }
    }
    fn negated(&self) -> Self {
        TowerElem {
            gens: self.gens.clone(),
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
    fn from_rat(r: &Rat) -> Self {
        TowerElem {
            gens: Arc::new(Vec::new()),
            coords: vec![r.clone()],
        }
    }
    fn split_sign(&self) -> (bool, Self) {
        let nz: Vec<&Rat> = self.coords.iter().filter(|c| !c.is_zero()).collect();
        if nz.len() == 1 && nz[0].is_negative() {
            return (true, self.negated());
        }
        (false, self.clone())
    }
    fn is_atomic(&self) -> bool {
        self.coords.iter().filter(|c| !c.is_zero()).count() <= 1
    }
}

impl Field for TowerElem {
    fn inverse(&self) -> Self {
        TowerElem {
            gens: self.gens.clone(),
            coords: inv_coords(&self.gens, &self.coords),
        }
    }
}

impl fmt::Display for TowerElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (idx, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let radical: Vec<String> = (0..self.gens.len())
                .filter(|i| idx >> i & 1 == 1)
                .map(|i| format!("sqrt({})", self.gens[i]))
                .collect();
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            match (radical.is_empty(), abs.is_one()) {
                (true, _) => write!(f, "{abs}")?,
                (false, true) => write!(f, "{}", radical.join("*"))?,
                (false, false) => write!(f, "{abs}*{}", radical.join("*"))?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
