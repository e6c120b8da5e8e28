use serde::{Deserialize, Serialize};

use crate::error::{cap_exceeded, Error, Result};

/// Largest `n` for which subsets of the cube are stored as dense bitsets.
pub const MAX_SET_N: usize = 24;

/// A subset of `{0,1}^n` as a bitset indexed by the point mask.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PointSet {
    n: usize,
    bits: Vec<u64>,
}

impl PointSet {
    pub fn empty(n: usize) -> Result<Self> {
        if n > MAX_SET_N {
            return Err(cap_exceeded(format!("point set over {n} variables"), n, MAX_SET_N));
        }
        Ok(Self {
            n,
            bits: vec![0; ((1usize << n) + 63) / 64],
        })
    }

    pub fn full(n: usize) -> Result<Self> {
        let mut s = Self::empty(n)?;
        for x in 0..1u64 << n {
            s.insert(x);
        }
        Ok(s)
    }

    pub fn from_points(n: usize, points: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut s = Self::empty(n)?;
        for x in points {
            if x >> n != 0 {
                return Err(Error::InvalidParameter(format!("point {x:#x} outside the {n}-cube")));
            }
            s.insert(x);
        }
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn contains(&self, x: u64) -> bool {
        self.bits[(x / 64) as usize] >> (x % 64) & 1 == 1
    }

    pub fn insert(&mut self, x: u64) -> bool {
        let fresh = !self.contains(x);
        self.bits[(x / 64) as usize] |= 1 << (x % 64);
        fresh
    }

    pub fn remove(&mut self, x: u64) -> bool {
        let had = self.contains(x);
        self.bits[(x / 64) as usize] &= !(1 << (x % 64));
        had
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.bits.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as u64;
                w &= w - 1;
                Some(i as u64 * 64 + b)
            })
        })
    }

    /// Little-endian bytes in lowercase hex: point `x` is bit `x % 8` of byte `x / 8`.
    pub fn to_hex(&self) -> String {
        let bytes = (1usize << self.n).div_ceil(8);
        let mut s = String::with_capacity(2 * bytes);
        for i in 0..bytes {
            let byte = (self.bits[i / 8] >> (8 * (i % 8))) as u8;
            s.push_str(&format!("{byte:02x}"));
        }
        s
    }

    pub fn from_hex(n: usize, hex: &str) -> Result<Self> {
        let mut s = Self::empty(n)?;
        let bytes = (1usize << n).div_ceil(8);
        if hex.len() != 2 * bytes {
            return Err(Error::Parse(format!(
                "a subset of the {n}-cube needs {} hex digits, got {}",
                2 * bytes,
                hex.len()
            )));
        }
        for i in 0..bytes {
            let byte = u8::from_str_radix(&hex[2 * i..2 * i + 2], 16)
                .map_err(|e| Error::Parse(format!("bad hex byte: {e}")))?;
            s.bits[i / 8] |= (byte as u64) << (8 * (i % 8));
        }
        if n < 6 && s.bits[0] >> (1u64 << n) != 0 {
            return Err(Error::Parse("bits set beyond the cube".into()));
        }
        Ok(s)
    }
}

/// A combinatorial rectangle `A x B` in `{0,1}^n x {0,1}^n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RectangleJson", into = "RectangleJson")]
pub struct Rectangle {
    pub a: PointSet,
    pub b: PointSet,
}

#[derive(Serialize, Deserialize)]
pub struct RectangleJson {
    pub n: usize,
    #[serde(rename = "A")]
    pub a: String,
    #[serde(rename = "B")]
    pub b: String,
}

impl TryFrom<RectangleJson> for Rectangle {
    type Error = Error;
    fn try_from(j: RectangleJson) -> Result<Self> {
        Rectangle::new(PointSet::from_hex(j.n, &j.a)?, PointSet::from_hex(j.n, &j.b)?)
    }
}

impl From<Rectangle> for RectangleJson {
    fn from(r: Rectangle) -> Self {
        Self {
            n: r.n(),
            a: r.a.to_hex(),
            b: r.b.to_hex(),
        }
    }
}

impl Rectangle {
    pub fn new(a: PointSet, b: PointSet) -> Result<Self> {
        if a.n() != b.n() {
            return Err(Error::DimensionMismatch {
                expected: a.n(),
                found: b.n(),
            });
        }
        Ok(Self { a, b })
    }

    pub fn full(n: usize) -> Result<Self> {
        Self::new(PointSet::full(n)?, PointSet::full(n)?)
    }

    pub fn n(&self) -> usize {
        self.a.n()
    }

    /// `|A| * |B|`.
    pub fn size(&self) -> u128 {
        self.a.len() as u128 * self.b.len() as u128
    }

    pub fn contains(&self, x: u64, y: u64) -> bool {
        self.a.contains(x) && self.b.contains(y)
    }

    pub(crate) fn require_nonempty(&self) -> Result<()> {
        if self.a.is_empty() || self.b.is_empty() {
            return Err(Error::InvalidParameter("rectangle sides must be nonempty".into()));
        }
        Ok(())
    }
}
