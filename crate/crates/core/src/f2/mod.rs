//! Bit-exact linear algebra over GF(2): vectors, matrices, subspaces and
//! their duals, cosets and coset maps, independence, and uniform sampling.

mod affine;
mod dual;
mod lemmas;
mod mask;
mod matrix;
mod random;
mod subspace;
mod vector;

pub use affine::{AffineJson, AffineSubspace};
pub use dual::{coset_map, DualBasis};
pub use lemmas::{
    affine_avoidance_check, exact_trivial_intersection_prob, trivial_intersection_prob_bound,
    Avoidance, IntersectionBound,
};
pub use mask::{mask_rank, parity, MaskSubspace};
pub use matrix::{F2Matrix, Rref};
pub use random::{random_affine, random_subspace, random_subspace_seeded, random_vector};
pub use subspace::{Elements, Subspace, SubspaceJson, DEFAULT_ENUM_CAP};
pub use vector::F2Vector;
