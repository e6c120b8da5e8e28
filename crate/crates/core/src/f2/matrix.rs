use crate::error::{Error, Result};

use super::F2Vector;

/// An ordered list of rows sharing one ambient dimension.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct F2Matrix {
    n: usize,
    rows: Vec<F2Vector>,
}

/// Reduced row-echelon form: pivots strictly ascending, each pivot column
/// cleared in every other row, zero rows dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: F2Matrix,
    pub pivots: Vec<usize>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

impl F2Matrix {
    pub fn new(n: usize, rows: Vec<F2Vector>) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: bad.len(),
            });
        }
        Ok(Self { n, rows })
    }

    pub fn empty(n: usize) -> Self {
        Self { n, rows: Vec::new() }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            n,
            rows: (0..n).map(|i| F2Vector::unit(n, i)).collect(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[F2Vector] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<F2Vector> {
        self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rref(&self) -> Rref {
        let mut rows: Vec<F2Vector> = self.rows.iter().filter(|r| !r.is_zero()).cloned().collect();
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..self.n {
            if rank == rows.len() {
                break;
            }
            let Some(found) = (rank..rows.len()).find(|&r| rows[r].get(col)) else {
                continue;
            };
            rows.swap(rank, found);
            let pivot_row = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row.get(col) {
                    *row ^= &pivot_row;
                }
            }
            pivots.push(col);
            rank += 1;
        }
        rows.truncate(rank);
        Rref {
            matrix: F2Matrix { n: self.n, rows },
            pivots,
        }
    }

    /// Canonical basis of the row space together with the rank.
    pub fn canonicalize(&self) -> (F2Matrix, usize) {
        let r = self.rref();
        let rank = r.rank();
        (r.matrix, rank)
    }

    pub fn rank(&self) -> usize {
        self.rref().rank()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(n: usize, s: &[&str]) -> F2Matrix {
        F2Matrix::new(n, s.iter().map(|r| F2Vector::from_bitstr(r).unwrap()).collect()).unwrap()
    }

    #[test]
    fn rref_of_dependent_rows() {
        let (m, rank) = rows(4, &["1100", "0110", "1010"]).canonicalize();
        assert_eq!(rank, 2);
        assert_eq!(m, rows(4, &["1010", "0110"]));
    }

    #[test]
    fn zero_and_identity() {
        let (m, rank) = rows(3, &["000", "000"]).canonicalize();
        assert_eq!(rank, 0);
        assert!(m.is_empty());
        let (m, rank) = F2Matrix::identity(3).canonicalize();
        assert_eq!(rank, 3);
        assert_eq!(m, F2Matrix::identity(3));
    }

    #[test]
    fn mismatched_rows_rejected() {
        let err = F2Matrix::new(
            3,
            vec![F2Vector::from_bitstr("101").unwrap(), F2Vector::from_bitstr("10").unwrap()],
        )
        .unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 3, found: 2 });
    }
}
