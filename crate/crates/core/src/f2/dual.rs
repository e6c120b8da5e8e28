use crate::error::{Error, Result};

use super::{F2Matrix, F2Vector, Subspace};

/// A basis `L = (l_1, ..., l_codim)` of the dual of a subspace. The coset
/// map `x -> (<l_1,x>, ..., <l_codim,x>)` labels the cosets of the subspace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualBasis {
    for_space: Subspace,
    lines: F2Matrix,
}

impl DualBasis {
    pub fn new(for_space: Subspace, lines: F2Matrix) -> Result<Self> {
        let n = for_space.ambient_dim();
        if lines.ambient_dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: lines.ambient_dim(),
            });
        }
        if lines.len() != for_space.codim() {
            return Err(Error::InvalidDualBasis(format!(
                "{} lines given, codimension is {}",
                lines.len(),
                for_space.codim()
            )));
        }
        for (i, l) in lines.rows().iter().enumerate() {
            if let Some(b) = for_space.basis().iter().find(|b| l.dot(b)) {
                return Err(Error::InvalidDualBasis(format!(
                    "line {i} ({l}) is not orthogonal to basis vector {b}"
                )));
            }
        }
        if lines.rank() != lines.len() {
            return Err(Error::InvalidDualBasis("lines are linearly dependent".into()));
        }
        Ok(Self { for_space, lines })
    }

    /// The RREF basis of the dual space.
    pub fn canonical(space: &Subspace) -> Self {
        Self {
            for_space: space.clone(),
            lines: space.dual().basis_matrix(),
        }
    }

    pub fn space(&self) -> &Subspace {
        &self.for_space
    }

    pub fn lines(&self) -> &[F2Vector] {
        self.lines.rows()
    }

    pub fn coset_map(&self, x: &F2Vector) -> Result<F2Vector> {
        let n = self.for_space.ambient_dim();
        if x.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: x.len(),
            });
        }
        let mut out = F2Vector::zero(self.lines.len());
        for (i, l) in self.lines.rows().iter().enumerate() {
            out.set(i, l.dot(x));
        }
        Ok(out)
    }
}

/// Coset map of `space` with respect to a caller-supplied dual basis.
pub fn coset_map(space: &Subspace, lines: &F2Matrix, x: &F2Vector) -> Result<F2Vector> {
    DualBasis::new(space.clone(), lines.clone())?.coset_map(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> F2Vector {
        F2Vector::from_bitstr(s).unwrap()
    }

    #[test]
    fn coset_map_example() {
        let s = Subspace::from_bitstrs(&["10"]).unwrap();
        let l = F2Matrix::new(2, vec![v("01")]).unwrap();
        assert_eq!(coset_map(&s, &l, &v("11")).unwrap(), v("1"));
    }

    #[test]
    fn full_space_maps_to_empty_tuple() {
        let s = Subspace::full(3);
        let d = s.dual_basis();
        assert_eq!(d.coset_map(&v("101")).unwrap().len(), 0);
    }

    #[test]
    fn same_coset_same_label() {
        let s = Subspace::from_bitstrs(&["1100", "0111"]).unwrap();
        let d = s.dual_basis();
        let x = v("1010");
        for e in s.elements().unwrap() {
            assert_eq!(d.coset_map(&(&x ^ &e)).unwrap(), d.coset_map(&x).unwrap());
        }
    }

    #[test]
    fn rejects_non_dual_lines() {
        let s = Subspace::from_bitstrs(&["10"]).unwrap();
        let bad = F2Matrix::new(2, vec![v("11")]).unwrap();
        assert!(matches!(coset_map(&s, &bad, &v("11")), Err(Error::InvalidDualBasis(_))));
        let too_many = F2Matrix::new(2, vec![v("01"), v("01")]).unwrap();
        assert!(matches!(DualBasis::new(s, too_many), Err(Error::InvalidDualBasis(_))));
    }
}
