//! Communication-side tools for `F(x, y) = f(x ⊕ y)`: the pair sets `S_V`,
//! the hard pair distribution, coset pushforwards of rectangles and
//! distributions, the entropy-loss conjecture checks and a search for
//! candidate counterexamples.

mod conjecture;
mod mono;
mod nu;
mod projection;
mod sets;

use num_bigint::BigUint;
use serde::Serialize;

use crate::designs::SubspaceFamily;
use crate::error::Result;
use crate::fourier::union_function;
use crate::rational::{self, Rational};

pub use conjecture::{
    comm_threshold, conjecture2_check, conjecture_check, counterexample_search, far_count, CommThreshold,
    ConjectureParams, ConjectureReport, SearchConfig, SearchInit, SearchOutcome, TraceEntry, Verdict,
    ENTROPY_SLACK, SEARCH_MAX_N,
};
pub use mono::{mono_rectangle_search, MonoRectangle, MONO_MAX_N};
pub use nu::{
    corruption_rectangle_check, nu_table, sampled_one_rate, sv_membership, sv_size, xor_convolution_counts,
    NuDistribution, RectangleCorruption,
};
pub use projection::{
    appendix_chain_check, collision, coset_pushforward, coset_pushforward_set, l1_distance, l1_to_uniform,
    rectangle_analysis, ChainCheck, CosetHistogram, MemberProjection, ProjectionReport, S_SET_MAX_N,
};
pub use sets::{PointSet, Rectangle, RectangleJson, MAX_SET_N};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FamilyStats {
    /// `|∪V| / 2^n`.
    #[serde(with = "rational")]
    pub gamma: Rational,
    pub union_size: u64,
}

pub fn family_stats(fam: &SubspaceFamily) -> Result<FamilyStats> {
    let f = union_function(fam)?;
    let union_size = f.raw_values().iter().filter(|&&v| v != 0).count() as u64;
    Ok(FamilyStats {
        gamma: rational::from_biguint(&BigUint::from(union_size), &rational::pow2(fam.n())),
        union_size,
    })
}
