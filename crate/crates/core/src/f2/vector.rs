use std::cmp::Ordering;
use std::fmt;
use std::ops::{BitXor, BitXorAssign};

use crate::error::{Error, Result};

const WORD: usize = 64;

fn word_count(n: usize) -> usize {
    n.div_ceil(WORD)
}

/// A vector in `F_2^n`, packed 64 coordinates per word.
///
/// Coordinate `x_1` is bit 0 of the first word. Bits at positions `>= n`
/// are always zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct F2Vector {
    n: usize,
    words: Vec<u64>,
}

impl F2Vector {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            words: vec![0; word_count(n)],
        }
    }

    /// The `i`-th standard basis vector (0-based).
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = Self::zero(n);
        v.set(i, true);
        v
    }

    /// Builds a vector from the low `n` bits of `mask`; `n` must be at most 64.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        assert!(n <= WORD, "from_mask needs n <= 64, got {n}");
        assert!(
            n == WORD || mask >> n == 0,
            "mask {mask:#x} has bits beyond n = {n}"
        );
        let mut v = Self::zero(n);
        if n > 0 {
            v.words[0] = mask;
        }
        v
    }

    /// Parses a coordinate string `x_1 x_2 ... x_n`, e.g. `"1100"`.
    pub fn from_bitstr(s: &str) -> Result<Self> {
        let bytes: Vec<u8> = s.bytes().filter(|b| !b.is_ascii_whitespace()).collect();
        let mut v = Self::zero(bytes.len());
        for (i, b) in bytes.iter().enumerate() {
            match b {
                b'0' => {}
                b'1' => v.set(i, true),
                _ => return Err(Error::Parse(format!("bad bit {:?} in {s:?}", *b as char))),
            }
        }
        Ok(v)
    }

    pub fn from_indices(n: usize, ones: &[usize]) -> Self {
        let mut v = Self::zero(n);
        for &i in ones {
            v.set(i, true);
        }
        v
    }

    pub fn from_words(n: usize, mut words: Vec<u64>) -> Result<Self> {
        if words.len() != word_count(n) {
            return Err(Error::Parse(format!(
                "expected {} words for n = {n}, got {}",
                word_count(n),
                words.len()
            )));
        }
        if n % WORD != 0 {
            if let Some(last) = words.last_mut() {
                if *last >> (n % WORD) != 0 {
                    return Err(Error::Parse(format!("bits set beyond n = {n}")));
                }
                *last &= (1u64 << (n % WORD)) - 1;
            }
        }
        Ok(Self { n, words })
    }

    /// Ambient dimension `n`.
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// The packed value when `n <= 64`.
    pub fn to_mask(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.n, "coordinate {i} out of range for n = {}", self.n);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, bit: bool) {
        assert!(i < self.n, "coordinate {i} out of range for n = {}", self.n);
        let m = 1u64 << (i % WORD);
        if bit {
            self.words[i / WORD] |= m;
        } else {
            self.words[i / WORD] &= !m;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.n, "coordinate {i} out of range for n = {}", self.n);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Index of the first nonzero coordinate (the pivot in echelon form).
    pub fn leading(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, w)| k * WORD + w.trailing_zeros() as usize)
    }

    /// The standard bilinear form: parity of the coordinatewise AND.
    pub fn dot(&self, other: &Self) -> bool {
        debug_assert_eq!(self.n, other.n);
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    /// Lexicographic order on the coordinate string `x_1 ... x_n`, with `0 < 1`.
    pub fn lex_cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.words.iter().zip(&other.words) {
            let diff = a ^ b;
            if diff != 0 {
                let low = diff & diff.wrapping_neg();
                return if a & low == 0 {
                    Ordering::Less
                } else {
                    Ordering::Greater
                };
            }
        }
        self.n.cmp(&other.n)
    }

    /// Little-endian hex: byte `k` packs coordinates `8k .. 8k+7`, `x_1` in the
    /// least significant bit of the first byte.
    pub fn to_hex(&self) -> String {
        let nbytes = self.n.div_ceil(8);
        let mut out = String::with_capacity(2 * nbytes);
        for k in 0..nbytes {
            let byte = (self.words[k / 8] >> (8 * (k % 8))) as u8;
            out.push_str(&format!("{byte:02x}"));
        }
        out
    }

    pub fn from_hex(n: usize, hex: &str) -> Result<Self> {
        let hex = hex.trim();
        let nbytes = n.div_ceil(8);
        if hex.len() != 2 * nbytes {
            return Err(Error::Parse(format!(
                "hex {hex:?} has {} digits, expected {} for n = {n}",
                hex.len(),
                2 * nbytes
            )));
        }
        let mut words = vec![0u64; word_count(n)];
        for k in 0..nbytes {
            let byte = u8::from_str_radix(&hex[2 * k..2 * k + 2], 16)
                .map_err(|_| Error::Parse(format!("bad hex {hex:?}")))?;
            words[k / 8] |= (byte as u64) << (8 * (k % 8));
        }
        Self::from_words(n, words)
    }
}

impl BitXorAssign<&F2Vector> for F2Vector {
    fn bitxor_assign(&mut self, rhs: &F2Vector) {
        debug_assert_eq!(self.n, rhs.n);
        for (a, b) in self.words.iter_mut().zip(&rhs.words) {
            *a ^= b;
        }
    }
}

impl BitXor<&F2Vector> for &F2Vector {
    type Output = F2Vector;

    fn bitxor(self, rhs: &F2Vector) -> F2Vector {
        let mut out = self.clone();
        out ^= rhs;
        out
    }
}

impl fmt::Display for F2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for F2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F2Vector({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bitstring_order_is_lsb_first() {
        let v = F2Vector::from_bitstr("1100").unwrap();
        assert_eq!(v.to_mask(), Some(0b0011));
        assert_eq!(v.to_string(), "1100");
        assert_eq!(v.leading(), Some(0));
    }

    #[test]
    fn hex_round_trip_and_layout() {
        let v = F2Vector::from_bitstr("1000000001").unwrap();
        assert_eq!(v.to_hex(), "0102");
        assert_eq!(F2Vector::from_hex(10, "0102").unwrap(), v);
        assert!(F2Vector::from_hex(10, "01fe").is_err());
        let wide = F2Vector::from_indices(130, &[0, 64, 129]);
        assert_eq!(F2Vector::from_hex(130, &wide.to_hex()).unwrap(), wide);
    }

    #[test]
    fn dot_is_parity_of_and() {
        let a = F2Vector::from_bitstr("111").unwrap();
        let b = F2Vector::from_bitstr("110").unwrap();
        let c = F2Vector::from_bitstr("100").unwrap();
        assert!(!a.dot(&b));
        assert!(a.dot(&c));
        let wide_a = F2Vector::from_indices(100, &[3, 70]);
        let wide_b = F2Vector::from_indices(100, &[70, 99]);
        assert!(wide_a.dot(&wide_b));
    }

    #[test]
    fn lex_order_reads_x1_first() {
        let a = F2Vector::from_bitstr("0111").unwrap();
        let b = F2Vector::from_bitstr("1000").unwrap();
        assert_eq!(a.lex_cmp(&b), Ordering::Less);
        assert_eq!(b.lex_cmp(&a), Ordering::Greater);
        assert_eq!(a.lex_cmp(&a), Ordering::Equal);
    }
}
