//! Small exact linear algebra over `Q`.

use num_traits::{One, Zero};

use crate::qfield::Rat;

/// Inverse by Gauss-Jordan elimination; `None` for a singular matrix.
pub fn inverse(a: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    let n = a.len();
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        let inv = m[col][col].recip();
        for v in m[col].iter_mut() {
            *v *= &inv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                let pivot_row = m[col].clone();
                for (v, p) in m[r].iter_mut().zip(pivot_row) {
                    *v -= &f * p;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn determinant(a: &[Vec<Rat>]) -> Rat {
    let n = a.len();
    let mut m = a.to_vec();
    let mut det = Rat::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rat::zero();
        };
        if pivot != col {
            m.swap(col, pivot);
            det = -det;
        }
        det *= &m[col][col];
        for r in col + 1..n {
            let f = &m[r][col] / &m[col][col];
            let pivot_row = m[col].clone();
            for (v, p) in m[r].iter_mut().zip(pivot_row) {
                *v -= &f * p;
            }
        }
    }
    det
}

/// Sylvester's criterion: all leading principal minors positive.
pub fn is_positive_definite(a: &[Vec<Rat>]) -> bool {
    (1..=a.len()).all(|k| {
        let minor: Vec<Vec<Rat>> = a[..k].iter().map(|row| row[..k].to_vec()).collect();
        determinant(&minor) > Rat::zero()
    })
}

pub fn is_symmetric(a: &[Vec<Rat>]) -> bool {
    (0..a.len()).all(|i| (0..i).all(|j| a[i][j] == a[j][i]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfield::rat;

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rat>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| rat(v)).collect())
            .collect()
    }

    #[test]
    fn inverse_and_determinant() {
        let a = m(&[&[2, -1], &[-1, 2]]);
        let inv = inverse(&a).unwrap();
        assert_eq!(determinant(&a), rat(3));
        assert_eq!(inv[0][0], Rat::new(2.into(), 3.into()));
        assert!(inverse(&m(&[&[1, 2], &[2, 4]])).is_none());
        assert!(is_positive_definite(&a));
        assert!(!is_positive_definite(&m(&[&[1, 2], &[2, 1]])));
    }
}
