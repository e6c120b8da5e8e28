use num_bigint::BigInt;
use num_traits::Zero;

use super::table::PseudoBooleanFunction;
use crate::error::{cap_exceeded, Result};

pub const XOR_LIFT_MAX_N: usize = 6;

/// Rank over `Q` of the `2^n x 2^n` matrix `M[x][y] = f(x ⊕ y)`, by
/// fraction-free (Bareiss) elimination on the integer numerators.
pub fn xor_lift_rank(f: &PseudoBooleanFunction) -> Result<usize> {
    let n = f.n();
    if n > XOR_LIFT_MAX_N {
        return Err(cap_exceeded(format!("xor lift over {n} variables"), n, XOR_LIFT_MAX_N));
    }
    let size = 1usize << n;
    let v = f.raw_values();
    let mut m: Vec<Vec<BigInt>> = (0..size)
        .map(|x| (0..size).map(|y| BigInt::from(v[x ^ y])).collect())
        .collect();
    Ok(bareiss_rank(&mut m))
}

fn bareiss_rank(m: &mut [Vec<BigInt>]) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut prev = BigInt::from(1);
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        for r in rank + 1..rows {
            for c in col + 1..cols {
                let val = (&m[rank][col] * &m[r][c] - &m[r][col] * &m[rank][c]) / &prev;
                m[r][c] = val;
            }
            m[r][col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn bareiss_small() {
        assert_eq!(bareiss_rank(&mut ints(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(bareiss_rank(&mut ints(&[&[0, 1], &[1, 0]])), 2);
        assert_eq!(bareiss_rank(&mut ints(&[&[0, 0], &[0, 0]])), 0);
        assert_eq!(bareiss_rank(&mut ints(&[&[2, 3, 5], &[4, 6, 10], &[1, 0, 1]])), 2);
    }

    #[test]
    fn examples() {
        let one = PseudoBooleanFunction::constant(3, 1).unwrap();
        assert_eq!(xor_lift_rank(&one).unwrap(), 1);
        let par = PseudoBooleanFunction::parity(3, 0b111).unwrap();
        assert_eq!(xor_lift_rank(&par).unwrap(), 2);
        let big = PseudoBooleanFunction::constant(7, 1).unwrap();
        assert!(xor_lift_rank(&big).is_err());
    }
}
