use crate::error::{cap_exceeded, Error, Result};

use super::{subspace::DEFAULT_ENUM_CAP, Subspace};

#[inline]
pub fn parity(x: u64) -> bool {
    x.count_ones() & 1 == 1
}

/// A subspace of `F_2^n` with `n <= 64`, held as `u64` masks for the
/// cube-scale loops (truth tables, distributions, coset labels).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MaskSubspace {
    pub n: usize,
    /// Canonical (RREF) basis.
    pub basis: Vec<u64>,
    /// Canonical basis of the dual; `label` uses this order.
    pub dual: Vec<u64>,
}

impl MaskSubspace {
    pub fn new(s: &Subspace) -> Result<Self> {
        if s.ambient_dim() > 64 {
            return Err(Error::InvalidParameter(format!(
                "mask view needs n <= 64, got {}",
                s.ambient_dim()
            )));
        }
        let masks = |sp: &Subspace| -> Vec<u64> {
            sp.basis().iter().map(|v| v.to_mask().expect("n <= 64")).collect()
        };
        Ok(Self {
            n: s.ambient_dim(),
            basis: masks(s),
            dual: masks(&s.dual()),
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn codim(&self) -> usize {
        self.dual.len()
    }

    #[inline]
    pub fn contains(&self, x: u64) -> bool {
        self.dual.iter().all(|&l| !parity(l & x))
    }

    /// Coset label of `x`: bit `i` is `<dual_i, x>`.
    #[inline]
    pub fn label(&self, x: u64) -> u64 {
        self.dual
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &l)| acc | ((parity(l & x) as u64) << i))
    }

    pub fn elements(&self) -> Result<Vec<u64>> {
        if self.dim() > DEFAULT_ENUM_CAP {
            return Err(cap_exceeded(
                format!("enumerating a {}-dimensional subspace", self.dim()),
                self.dim(),
                DEFAULT_ENUM_CAP,
            ));
        }
        let mut out = Vec::with_capacity(1usize << self.dim());
        let mut cur = 0u64;
        out.push(0);
        for i in 1u64..(1u64 << self.dim()) {
            cur ^= self.basis[i.trailing_zeros() as usize];
            out.push(cur);
        }
        Ok(out)
    }
}

/// Rank of a list of masks.
pub fn mask_rank(rows: impl IntoIterator<Item = u64>) -> usize {
    // basis[b] has leading bit b, or is zero
    let mut basis = [0u64; 64];
    let mut rank = 0;
    for mut r in rows {
        while r != 0 {
            let b = 63 - r.leading_zeros() as usize;
            if basis[b] == 0 {
                basis[b] = r;
                rank += 1;
                break;
            }
            r ^= basis[b];
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_agree_with_vector_coset_map() {
        let s = Subspace::from_bitstrs(&["11000", "00110"]).unwrap();
        let m = s.to_masks().unwrap();
        let d = s.dual_basis();
        for x in 0u64..32 {
            let xv = super::super::F2Vector::from_mask(5, x);
            assert_eq!(m.contains(x), s.contains(&xv));
            let label = d.coset_map(&xv).unwrap();
            assert_eq!(m.label(x), label.to_mask().unwrap());
        }
        assert_eq!(m.elements().unwrap().len(), 4);
    }

    #[test]
    fn mask_rank_basic() {
        assert_eq!(mask_rank([0b011, 0b110, 0b101]), 2);
        assert_eq!(mask_rank([0, 0]), 0);
        assert_eq!(mask_rank([1, 2, 4, 8]), 4);
    }
}
