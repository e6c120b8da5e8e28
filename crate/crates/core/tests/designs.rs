use larclab::designs::{
    certify_dual_design_exhaustive, certify_dual_design_montecarlo, count_codim_at_most, dual_side_h, hitting_check,
    pairwise_trivial, MonteCarloOutcome, RrefSubspaces, SubspaceFamily, DEFAULT_ENUMERATION_CAP,
};
use larclab::f2::{random_affine, random_subspace, AffineSubspace, F2Vector, Subspace};
use larclab::rng;
use rand::Rng;
use proptest::prelude::*;

const CAP: u64 = DEFAULT_ENUMERATION_CAP;

fn family(n: usize, dims: &[usize], seed: u64) -> SubspaceFamily {
    let mut r = rng::seeded(seed);
    let members = dims.iter().map(|&d| random_subspace(n, d.min(n), &mut r)).collect();
    SubspaceFamily::new(n, members).unwrap()
}

fn small_family() -> impl Strategy<Value = SubspaceFamily> {
    (1usize..=5)
        .prop_flat_map(|n| (Just(n), prop::collection::vec(0..=n, 1..=4), any::<u64>()))
        .prop_map(|(n, dims, seed)| family(n, &dims, seed))
}

/// Spans of every subset of the cube, so no code is shared with the echelon
/// enumerator. Only for `n <= 3`.
fn all_subspaces(n: usize) -> Vec<Subspace> {
    assert!(n <= 3);
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for gens in 0u64..1 << (1 << n) {
        let vs: Vec<F2Vector> = (0..1u64 << n)
            .filter(|&x| gens >> x & 1 == 1)
            .map(|x| F2Vector::from_mask(n, x))
            .collect();
        let s = Subspace::span(n, vs).unwrap();
        if seen.insert(s.clone()) {
            out.push(s);
        }
    }
    out
}

/// `h` straight from the definition: members `V` with `V + W != F_2^n`.
fn brute_force_h(fam: &SubspaceFamily, s: usize) -> usize {
    let n = fam.n();
    all_subspaces(n)
        .into_iter()
        .filter(|w| w.codim() <= s)
        .map(|w| fam.members().iter().filter(|v| !v.sum(&w).unwrap().is_full()).count())
        .max()
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn two_routes_agree(fam in small_family(), s_frac in 0.0f64..=1.0) {
        let s = (s_frac * fam.n() as f64) as usize;
        let cert = certify_dual_design_exhaustive(&fam, s, CAP).unwrap();
        let (h_dual, t) = dual_side_h(&fam, s, CAP).unwrap();
        prop_assert_eq!(cert.h, h_dual);
        prop_assert!(t.dim() <= s);
        let met = fam.members().iter().filter(|v| !v.dual().meets_trivially(&t).unwrap()).count();
        prop_assert_eq!(met, h_dual);
        let w = cert.worst_witness.as_ref().unwrap();
        prop_assert!(w.codim() <= s);
        let failing = fam.members().iter().filter(|v| !v.independent(w.space()).unwrap()).count();
        prop_assert_eq!(failing, cert.h);
    }

    #[test]
    fn h_is_monotone_in_s(fam in small_family()) {
        let hs: Vec<usize> = (0..=fam.n())
            .map(|s| certify_dual_design_exhaustive(&fam, s, CAP).unwrap().h)
            .collect();
        prop_assert_eq!(hs[0], 0);
        prop_assert!(hs.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(*hs.last().unwrap() <= fam.m());
    }

    #[test]
    fn certified_families_hit(fam in small_family(), s_frac in 0.0f64..=1.0, seed: u64) {
        let n = fam.n();
        let s = (s_frac * n as f64) as usize;
        let h = certify_dual_design_exhaustive(&fam, s, CAP).unwrap().h;
        let mut r = rng::seeded(seed);
        for _ in 0..16 {
            let codim = r.gen_range(0..=s);
            let w = random_affine(n, n - codim, &mut r);
            prop_assert!(hitting_check(&fam, &w).unwrap() + h >= fam.m());
        }
    }

    #[test]
    fn montecarlo_never_beats_exhaustive(fam in small_family(), seed: u64) {
        let n = fam.n();
        let s = n / 2;
        let h = certify_dual_design_exhaustive(&fam, s, CAP).unwrap().h;
        match certify_dual_design_montecarlo(&fam, s, h, 64, seed).unwrap() {
            MonteCarloOutcome::Certified(c) => prop_assert!(c.worst_count <= h),
            MonteCarloOutcome::Violation(v) => prop_assert!(false, "violation {:?}", v),
        }
    }

    #[test]
    fn enumeration_counts_match_gaussian_binomials(n in 0usize..=7) {
        let total: usize = (0..=n).map(|k| RrefSubspaces::new(n, k).count()).sum();
        prop_assert_eq!(count_codim_at_most(n, n), total.into());
    }
}

#[test]
fn exhaustive_matches_definition_at_small_n() {
    for seed in 0..40 {
        let n = 1 + (seed % 3) as usize;
        let dims: Vec<usize> = (0..1 + seed % 4).map(|i| ((seed + i) % (n as u64 + 1)) as usize).collect();
        let fam = family(n, &dims, seed);
        for s in 0..=n {
            assert_eq!(certify_dual_design_exhaustive(&fam, s, CAP).unwrap().h, brute_force_h(&fam, s), "seed {seed} s {s}");
        }
    }
}

fn three_planes() -> SubspaceFamily {
    let sp = |r: &[&str]| Subspace::from_bitstrs(r).unwrap();
    SubspaceFamily::new(3, vec![sp(&["100", "010"]), sp(&["010", "001"]), sp(&["100", "001"])]).unwrap()
}

#[test]
fn certificate_examples() {
    let cert = certify_dual_design_exhaustive(&three_planes(), 1, CAP).unwrap();
    assert_eq!((cert.s, cert.h), (1, 1));
    assert!(cert.is_exhaustive() && cert.implies(1, 2) && cert.implies(0, 1) && !cert.implies(2, 1));
    assert_eq!(pairwise_trivial(&three_planes()).first_violation, Some((1, 2)));

    let full = SubspaceFamily::new(5, vec![Subspace::full(5)]).unwrap();
    for s in 0..=5 {
        assert_eq!(certify_dual_design_exhaustive(&full, s, CAP).unwrap().h, 0);
    }
    let zero = SubspaceFamily::new(4, vec![Subspace::zero(4)]).unwrap();
    assert_eq!(certify_dual_design_exhaustive(&zero, 0, CAP).unwrap().h, 0);
    assert_eq!(certify_dual_design_exhaustive(&zero, 1, CAP).unwrap().h, 1);

    // {110, 111}: codimension 2, met only by the first plane
    let line = AffineSubspace::new(
        Subspace::from_bitstrs(&["001"]).unwrap(),
        F2Vector::from_bitstr("110").unwrap(),
    )
    .unwrap();
    assert_eq!(hitting_check(&three_planes(), &line).unwrap(), 1);
}

#[test]
fn certificate_json_round_trip() {
    let cert = certify_dual_design_exhaustive(&three_planes(), 1, CAP).unwrap();
    let text = serde_json::to_string(&cert).unwrap();
    let back: larclab::designs::DesignCertificate = serde_json::from_str(&text).unwrap();
    assert_eq!(back, cert);
    let fam_text = serde_json::to_string(&three_planes()).unwrap();
    let fam: SubspaceFamily = serde_json::from_str(&fam_text).unwrap();
    assert_eq!(fam, three_planes());
}
