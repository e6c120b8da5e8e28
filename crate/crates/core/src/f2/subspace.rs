use serde::{Deserialize, Serialize};

use crate::error::{cap_exceeded, Error, Result};

use super::{DualBasis, F2Matrix, F2Vector, MaskSubspace};

/// Largest dimension [`Subspace::elements`] will enumerate unless told otherwise.
pub const DEFAULT_ENUM_CAP: usize = 26;

/// A linear subspace of `F_2^n`, stored by its canonical (RREF) basis.
///
/// Two subspaces are equal exactly when their canonical bases are equal.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SubspaceJson", into = "SubspaceJson")]
pub struct Subspace {
    n: usize,
    basis: Vec<F2Vector>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(n: usize) -> Self {
        Self {
            n,
            basis: (0..n).map(|i| F2Vector::unit(n, i)).collect(),
            pivots: (0..n).collect(),
        }
    }

    /// The span of `generators`.
    pub fn span(n: usize, generators: impl IntoIterator<Item = F2Vector>) -> Result<Self> {
        let m = F2Matrix::new(n, generators.into_iter().collect())?;
        Ok(Self::from_matrix(&m))
    }

    pub fn from_matrix(m: &F2Matrix) -> Self {
        let r = m.rref();
        Self {
            n: m.ambient_dim(),
            basis: r.matrix.into_rows(),
            pivots: r.pivots,
        }
    }

    /// Span of bit strings such as `["110", "011"]`.
    pub fn from_bitstrs(rows: &[&str]) -> Result<Self> {
        let vs: Vec<F2Vector> = rows
            .iter()
            .map(|r| F2Vector::from_bitstr(r))
            .collect::<Result<_>>()?;
        let n = vs
            .first()
            .map(F2Vector::len)
            .ok_or_else(|| Error::InvalidParameter("from_bitstrs needs at least one row".into()))?;
        Self::span(n, vs)
    }

    pub fn from_masks(n: usize, masks: &[u64]) -> Self {
        Self::span(n, masks.iter().map(|&m| F2Vector::from_mask(n, m)))
            .expect("masks share n by construction")
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn codim(&self) -> usize {
        self.n - self.basis.len()
    }

    pub fn basis(&self) -> &[F2Vector] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis_matrix(&self) -> F2Matrix {
        F2Matrix::new(self.n, self.basis.clone()).expect("basis rows share n")
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.n
    }

    fn check_dim(&self, found: usize) -> Result<()> {
        if found != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found,
            });
        }
        Ok(())
    }

    /// Reduces `x` modulo the subspace. The result is zero at every pivot and
    /// is the lexicographically least element of the coset `x + S`.
    pub fn reduce(&self, x: &F2Vector) -> F2Vector {
        let mut r = x.clone();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if r.get(p) {
                r ^= row;
            }
        }
        r
    }

    pub fn contains(&self, x: &F2Vector) -> bool {
        x.len() == self.n && self.reduce(x).is_zero()
    }

    /// The orthogonal complement under the standard bilinear form.
    pub fn dual(&self) -> Subspace {
        let mut is_pivot = vec![false; self.n];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        // For each free column j: e_j + sum over rows r with row_r[j] = 1 of e_{pivot_r}.
        let rows = (0..self.n).filter(|&j| !is_pivot[j]).map(|j| {
            let mut v = F2Vector::unit(self.n, j);
            for (row, &p) in self.basis.iter().zip(&self.pivots) {
                if row.get(j) {
                    v.set(p, true);
                }
            }
            v
        });
        Self::span(self.n, rows.collect::<Vec<_>>()).expect("dual rows share n")
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_dim(other.n)?;
        Self::span(self.n, self.basis.iter().chain(&other.basis).cloned())
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_dim(other.n)?;
        // (S ∩ T)^⊥ = S^⊥ + T^⊥
        Ok(self.dual().sum(&other.dual())?.dual())
    }

    /// `S ∩ T = {0}`.
    pub fn meets_trivially(&self, other: &Subspace) -> Result<bool> {
        Ok(self.sum(other)?.dim() == self.dim() + other.dim())
    }

    /// Independence of coset maps: holds iff the duals meet only at zero,
    /// equivalently iff `S + T` is the whole space.
    pub fn independent(&self, other: &Subspace) -> Result<bool> {
        Ok(self.sum(other)?.is_full())
    }

    pub fn dual_basis(&self) -> DualBasis {
        DualBasis::canonical(self)
    }

    pub fn elements(&self) -> Result<Elements<'_>> {
        self.elements_capped(DEFAULT_ENUM_CAP)
    }

    /// All `2^dim` elements in Gray-code order; refuses when `dim > cap`.
    pub fn elements_capped(&self, cap: usize) -> Result<Elements<'_>> {
        if self.dim() > cap {
            return Err(cap_exceeded(
                format!("enumerating a {}-dimensional subspace", self.dim()),
                self.dim(),
                cap,
            ));
        }
        Ok(Elements {
            basis: &self.basis,
            current: F2Vector::zero(self.n),
            index: 0,
            end: 1u64 << self.dim(),
        })
    }

    /// Bit-mask view for cube-scale algorithms (`n <= 64`).
    pub fn to_masks(&self) -> Result<MaskSubspace> {
        MaskSubspace::new(self)
    }
}

impl std::fmt::Debug for Subspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let rows: Vec<String> = self.basis.iter().map(|r| r.to_string()).collect();
        write!(f, "Subspace(n={}, span{{{}}})", self.n, rows.join(", "))
    }
}

/// Gray-code iterator over the elements of a subspace.
pub struct Elements<'a> {
    basis: &'a [F2Vector],
    current: F2Vector,
    index: u64,
    end: u64,
}

impl Iterator for Elements<'_> {
    type Item = F2Vector;

    fn next(&mut self) -> Option<F2Vector> {
        if self.index == self.end {
            return None;
        }
        if self.index > 0 {
            let flip = self.index.trailing_zeros() as usize;
            self.current ^= &self.basis[flip];
        }
        self.index += 1;
        Some(self.current.clone())
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.end - self.index) as usize;
        (left, Some(left))
    }
}

/// `{ "n": int, "basis": [hex] }`.
#[derive(Serialize, Deserialize)]
pub struct SubspaceJson {
    pub n: usize,
    pub basis: Vec<String>,
}

impl From<Subspace> for SubspaceJson {
    fn from(s: Subspace) -> Self {
        Self {
            n: s.n,
            basis: s.basis.iter().map(F2Vector::to_hex).collect(),
        }
    }
}

impl TryFrom<SubspaceJson> for Subspace {
    type Error = Error;

    fn try_from(j: SubspaceJson) -> Result<Self> {
        let rows = j
            .basis
            .iter()
            .map(|h| F2Vector::from_hex(j.n, h))
            .collect::<Result<Vec<_>>>()?;
        Subspace::span(j.n, rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn sp(rows: &[&str]) -> Subspace {
        Subspace::from_bitstrs(rows).unwrap()
    }

    fn element_set(s: &Subspace) -> HashSet<u64> {
        s.elements().unwrap().map(|v| v.to_mask().unwrap()).collect()
    }

    #[test]
    fn dual_examples() {
        assert_eq!(Subspace::full(4).dual(), Subspace::zero(4));
        assert_eq!(Subspace::zero(4).dual(), Subspace::full(4));
        assert_eq!(sp(&["110", "011"]).dual(), sp(&["111"]));
    }

    #[test]
    fn intersection_and_sum_example() {
        let s = sp(&["1000", "0100"]);
        let t = sp(&["0100", "0010"]);
        let i = s.intersect(&t).unwrap();
        assert_eq!(i, sp(&["0100"]));
        // exhaustive oracle
        let common: HashSet<u64> = element_set(&s).intersection(&element_set(&t)).copied().collect();
        assert_eq!(common, element_set(&i));
        assert_eq!(s.dim() + t.dim(), i.dim() + s.sum(&t).unwrap().dim());
        assert_eq!(s.sum(&t).unwrap().dim(), 3);
    }

    #[test]
    fn idempotence() {
        let s = sp(&["1010", "0111"]);
        assert_eq!(s.intersect(&s).unwrap(), s);
        assert_eq!(s.sum(&s).unwrap(), s);
    }

    #[test]
    fn independence_examples() {
        assert!(sp(&["10"]).independent(&sp(&["01"])).unwrap());
        let s = sp(&["110"]);
        assert!(!s.independent(&s).unwrap());
        assert!(Subspace::full(3).independent(&sp(&["101"])).unwrap());
    }

    #[test]
    fn enumeration_is_exact_and_capped() {
        let s = sp(&["1100", "0011", "1111"]);
        let elems: Vec<F2Vector> = s.elements().unwrap().collect();
        assert_eq!(elems.len(), 4);
        assert_eq!(element_set(&s).len(), 4);
        assert!(elems.iter().all(|v| s.contains(v)));
        let err = Subspace::full(5).elements_capped(4).err().unwrap();
        assert!(matches!(err, Error::CapExceeded { .. }));
        assert!(err.to_string().contains("at least 5"));
    }

    #[test]
    fn reduce_gives_lex_least_coset_element() {
        let s = sp(&["1100", "0110"]);
        let x = F2Vector::from_bitstr("1011").unwrap();
        let r = s.reduce(&x);
        let coset: Vec<F2Vector> = s.elements().unwrap().map(|v| &v ^ &x).collect();
        let least = coset.iter().min_by(|a, b| a.lex_cmp(b)).unwrap();
        assert_eq!(&r, least);
    }

    #[test]
    fn mismatched_dimensions() {
        assert!(matches!(
            sp(&["10"]).intersect(&sp(&["100"])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let s = sp(&["1100000001", "0010000000"]);
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(text, r#"{"n":10,"basis":["0302","0400"]}"#);
        let back: Subspace = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }
}
