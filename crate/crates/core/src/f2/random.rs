use rand::Rng;

use crate::rng;

use super::{AffineSubspace, F2Vector, Subspace};

/// A uniformly random vector of `F_2^n`.
pub fn random_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> F2Vector {
    let mut words: Vec<u64> = (0..n.div_ceil(64)).map(|_| rng.gen()).collect();
    if n % 64 != 0 {
        if let Some(last) = words.last_mut() {
            *last &= (1u64 << (n % 64)) - 1;
        }
    }
    F2Vector::from_words(n, words).expect("word count matches n")
}

/// A uniformly random `d`-dimensional subspace of `F_2^n`.
///
/// Draws uniform vectors and keeps each one that lies outside the span of
/// those already kept, until `d` are kept.
pub fn random_subspace<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> Subspace {
    assert!(d <= n, "subspace dimension {d} exceeds ambient dimension {n}");
    // echelon rows with distinct leading coordinates, sorted by leading coordinate
    let mut echelon: Vec<(usize, F2Vector)> = Vec::with_capacity(d);
    let mut chosen = Vec::with_capacity(d);
    while chosen.len() < d {
        let v = random_vector(n, rng);
        let mut r = v.clone();
        for (p, row) in &echelon {
            if r.get(*p) {
                r ^= row;
            }
        }
        let Some(lead) = r.leading() else { continue };
        let at = echelon.partition_point(|(p, _)| *p < lead);
        echelon.insert(at, (lead, r));
        chosen.push(v);
    }
    Subspace::span(n, chosen).expect("vectors share n")
}

pub fn random_subspace_seeded(n: usize, d: usize, seed: u64) -> Subspace {
    random_subspace(n, d, &mut rng::seeded(seed))
}

/// A uniform `d`-dimensional subspace shifted by a uniform vector.
pub fn random_affine<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> AffineSubspace {
    let space = random_subspace(n, d, rng);
    let shift = random_vector(n, rng);
    AffineSubspace::new(space, shift).expect("shift has length n")
}
