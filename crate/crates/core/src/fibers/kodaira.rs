use std::fmt;

use crate::qfield::Rat;

use super::linalg;

/// Kodaira type of a fiber in characteristic 0. `I(n)` has `n >= 1` and
/// `IStar(n)` covers `I0*` as `n = 0`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum KodairaType {
    I0,
    I(u32),
    II,
    III,
    IV,
    IStar(u32),
    IVStar,
    IIIStar,
    IIStar,
}

impl KodairaType {
    /// Euler number of the fiber.
    pub fn euler(self) -> u32 {
        match self {
            KodairaType::I0 => 0,
            KodairaType::I(n) => n,
            KodairaType::II => 2,
            KodairaType::III => 3,
            KodairaType::IV => 4,
            KodairaType::IStar(n) => n + 6,
            KodairaType::IVStar => 8,
            KodairaType::IIIStar => 9,
            KodairaType::IIStar => 10,
        }
    }

    /// Number of irreducible components.
    pub fn components(self) -> u32 {
        match self {
            KodairaType::I0 | KodairaType::II => 1,
            KodairaType::I(n) => n,
            KodairaType::III => 2,
            KodairaType::IV => 3,
            KodairaType::IStar(n) => n + 5,
            KodairaType::IVStar => 7,
            KodairaType::IIIStar => 8,
            KodairaType::IIStar => 9,
        }
    }

    pub fn is_multiplicative(self) -> bool {
        matches!(self, KodairaType::I(_))
    }

    /// Edges of the dual graph restricted to the non-identity components,
    /// numbered `1..r`. Simple components come first: `I_n` uses the cycle
    /// order, `I_n*` puts the near simple component at 1 and the far pair at
    /// 2, 3, `IV*` its two simple components at 1, 2, `III*` at 1.
    pub fn dual_graph(self) -> Vec<(usize, usize)> {
        match self {
            KodairaType::I0 | KodairaType::II | KodairaType::III => Vec::new(),
            KodairaType::I(n) => (1..n.saturating_sub(1) as usize)
                .map(|i| (i, i + 1))
                .collect(),
            KodairaType::IV => vec![(1, 2)],
            KodairaType::IStar(m) => {
                let m = m as usize;
                let mut e = vec![(1, 4), (2, 4 + m), (3, 4 + m)];
                e.extend((0..m).map(|k| (4 + k, 5 + k)));
                e
            }
            KodairaType::IVStar => vec![(1, 4), (4, 6), (2, 5), (5, 6), (3, 6)],
            KodairaType::IIIStar => vec![(2, 3), (3, 4), (4, 5), (5, 6), (6, 1), (4, 7)],
            KodairaType::IIStar => vec![(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (5, 7), (7, 8)],
        }
    }

    /// Intersection matrix of the non-identity components.
    pub fn intersection_matrix(self) -> Vec<Vec<i64>> {
        let r = self.components() as usize - 1;
        let mut a = vec![vec![0i64; r]; r];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = -2;
        }
        for (i, j) in self.dual_graph() {
            a[i - 1][j - 1] += 1;
            a[j - 1][i - 1] += 1;
        }
        a
    }

    /// `-A^{-1}` for the intersection matrix `A`.
    pub fn neg_inverse(self) -> Vec<Vec<Rat>> {
        let a: Vec<Vec<Rat>> = self
            .intersection_matrix()
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&v| Rat::from_integer((-v).into()))
                    .collect()
            })
            .collect();
        linalg::inverse(&a).expect("fiber intersection matrices are nondegenerate")
    }

    /// Root lattice spanned by the non-identity components, e.g. `A1`, `D5`.
    pub fn root_lattice(self) -> Option<String> {
        match self {
            KodairaType::I0 | KodairaType::II | KodairaType::I(1) => None,
            KodairaType::I(n) => Some(format!("A{}", n - 1)),
            KodairaType::III => Some("A1".into()),
            KodairaType::IV => Some("A2".into()),
            KodairaType::IStar(m) => Some(format!("D{}", m + 4)),
            KodairaType::IVStar => Some("E6".into()),
            KodairaType::IIIStar => Some("E7".into()),
            KodairaType::IIStar => Some("E8".into()),
        }
    }
}

impl fmt::Display for KodairaType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KodairaType::I0 => write!(f, "I0"),
            KodairaType::I(n) => write!(f, "I{n}"),
            KodairaType::II => write!(f, "II"),
            KodairaType::III => write!(f, "III"),
            KodairaType::IV => write!(f, "IV"),
            KodairaType::IStar(n) => write!(f, "I{n}*"),
            KodairaType::IVStar => write!(f, "IV*"),
            KodairaType::IIIStar => write!(f, "III*"),
            KodairaType::IIStar => write!(f, "II*"),
        }
    }
}
