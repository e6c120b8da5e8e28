use serde::{Deserialize, Serialize};

use crate::error::{cap_exceeded, Error, Result};

use super::{subspace::DEFAULT_ENUM_CAP, F2Matrix, F2Vector, Subspace};

/// A coset `shift + space`. The shift is canonicalized to the
/// lexicographically least element of the coset.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "AffineJson", into = "AffineJson")]
pub struct AffineSubspace {
    space: Subspace,
    shift: F2Vector,
}

impl AffineSubspace {
    pub fn new(space: Subspace, shift: F2Vector) -> Result<Self> {
        if shift.len() != space.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: space.ambient_dim(),
                found: shift.len(),
            });
        }
        let shift = space.reduce(&shift);
        Ok(Self { space, shift })
    }

    pub fn linear(space: Subspace) -> Self {
        let n = space.ambient_dim();
        Self {
            space,
            shift: F2Vector::zero(n),
        }
    }

    pub fn point(x: F2Vector) -> Self {
        Self {
            space: Subspace::zero(x.len()),
            shift: x,
        }
    }

    /// Solution set of `<lines[i], x> = values[i]`, or `None` when inconsistent.
    pub fn from_constraints(n: usize, lines: &[F2Vector], values: &[bool]) -> Result<Option<Self>> {
        if lines.len() != values.len() {
            return Err(Error::InvalidParameter(format!(
                "{} constraint lines but {} values",
                lines.len(),
                values.len()
            )));
        }
        let mut augmented = Vec::with_capacity(lines.len());
        for (line, &value) in lines.iter().zip(values) {
            if line.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: line.len(),
                });
            }
            let mut row = F2Vector::zero(n + 1);
            for i in 0..n {
                if line.get(i) {
                    row.set(i, true);
                }
            }
            row.set(n, value);
            augmented.push(row);
        }
        let rref = F2Matrix::new(n + 1, augmented)?.rref();
        if rref.pivots.last() == Some(&n) {
            return Ok(None);
        }
        let mut shift = F2Vector::zero(n);
        for (row, &p) in rref.matrix.rows().iter().zip(&rref.pivots) {
            if row.get(n) {
                shift.set(p, true);
            }
        }
        let space = Subspace::span(n, lines.iter().cloned())?.dual();
        Ok(Some(Self::new(space, shift)?))
    }

    pub fn space(&self) -> &Subspace {
        &self.space
    }

    pub fn shift(&self) -> &F2Vector {
        &self.shift
    }

    pub fn ambient_dim(&self) -> usize {
        self.space.ambient_dim()
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn codim(&self) -> usize {
        self.space.codim()
    }

    pub fn is_linear(&self) -> bool {
        self.shift.is_zero()
    }

    pub fn contains(&self, x: &F2Vector) -> bool {
        x.len() == self.ambient_dim() && self.space.contains(&(x ^ &self.shift))
    }

    /// Defining equations: canonical dual basis of the space and the values
    /// it takes on the coset.
    pub fn constraints(&self) -> (Vec<F2Vector>, Vec<bool>) {
        let lines = self.space.dual().basis().to_vec();
        let values = lines.iter().map(|l| l.dot(&self.shift)).collect();
        (lines, values)
    }

    pub fn intersect(&self, other: &AffineSubspace) -> Result<Option<AffineSubspace>> {
        let n = self.ambient_dim();
        if other.ambient_dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: other.ambient_dim(),
            });
        }
        let (mut lines, mut values) = self.constraints();
        let (l2, v2) = other.constraints();
        lines.extend(l2);
        values.extend(v2);
        Self::from_constraints(n, &lines, &values)
    }

    pub fn meets(&self, other: &AffineSubspace) -> Result<bool> {
        Ok(self.intersect(other)?.is_some())
    }

    pub fn elements(&self) -> Result<impl Iterator<Item = F2Vector> + '_> {
        self.elements_capped(DEFAULT_ENUM_CAP)
    }

    pub fn elements_capped(&self, cap: usize) -> Result<impl Iterator<Item = F2Vector> + '_> {
        if self.dim() > cap {
            return Err(cap_exceeded(
                format!("enumerating a {}-dimensional affine subspace", self.dim()),
                self.dim(),
                cap,
            ));
        }
        Ok(self.space.elements_capped(cap)?.map(move |v| &v ^ &self.shift))
    }
}

impl std::fmt::Debug for AffineSubspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} + {:?}", self.shift, self.space)
    }
}

/// `{ "n", "basis": [hex], "shift": hex }`.
#[derive(Serialize, Deserialize)]
pub struct AffineJson {
    pub n: usize,
    pub basis: Vec<String>,
    pub shift: String,
}

impl From<AffineSubspace> for AffineJson {
    fn from(a: AffineSubspace) -> Self {
        Self {
            n: a.ambient_dim(),
            basis: a.space.basis().iter().map(F2Vector::to_hex).collect(),
            shift: a.shift.to_hex(),
        }
    }
}

impl TryFrom<AffineJson> for AffineSubspace {
    type Error = Error;

    fn try_from(j: AffineJson) -> Result<Self> {
        let rows = j
            .basis
            .iter()
            .map(|h| F2Vector::from_hex(j.n, h))
            .collect::<Result<Vec<_>>>()?;
        AffineSubspace::new(Subspace::span(j.n, rows)?, F2Vector::from_hex(j.n, &j.shift)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> F2Vector {
        F2Vector::from_bitstr(s).unwrap()
    }

    #[test]
    fn shift_is_canonical() {
        let s = Subspace::from_bitstrs(&["1000"]).unwrap();
        let a = AffineSubspace::new(s.clone(), v("1011")).unwrap();
        let b = AffineSubspace::new(s, v("0011")).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.shift(), &v("0011"));
    }

    #[test]
    fn constraints_round_trip() {
        let w = AffineSubspace::new(Subspace::from_bitstrs(&["1100", "0010"]).unwrap(), v("0101")).unwrap();
        let (lines, values) = w.constraints();
        let back = AffineSubspace::from_constraints(4, &lines, &values).unwrap().unwrap();
        assert_eq!(back, w);
        for x in w.elements().unwrap() {
            assert!(w.contains(&x));
        }
    }

    #[test]
    fn inconsistent_system_is_empty() {
        let l = v("110");
        assert!(AffineSubspace::from_constraints(3, &[l.clone(), l], &[true, false])
            .unwrap()
            .is_none());
    }

    #[test]
    fn disjoint_cosets() {
        let v1 = AffineSubspace::linear(Subspace::from_bitstrs(&["1000", "0100"]).unwrap());
        let w = AffineSubspace::new(Subspace::from_bitstrs(&["1000"]).unwrap(), v("0011")).unwrap();
        assert!(!v1.meets(&w).unwrap());
        assert!(v1.meets(&v1).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let w = AffineSubspace::new(Subspace::from_bitstrs(&["1000"]).unwrap(), v("0011")).unwrap();
        let text = serde_json::to_string(&w).unwrap();
        assert_eq!(text, r#"{"n":4,"basis":["01"],"shift":"0c"}"#);
        assert_eq!(serde_json::from_str::<AffineSubspace>(&text).unwrap(), w);
    }
}
