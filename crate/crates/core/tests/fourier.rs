use larclab::designs::{random_pairwise_trivial_design, SubspaceFamily, DEFAULT_REDRAWS};
use larclab::f2::{random_subspace_seeded, Subspace};
use larclab::fourier::{
    inclusion_exclusion, inclusion_exclusion_spectrum, inverse_wht, subspace_indicator, union_function, wht,
    xor_lift_rank, PseudoBooleanFunction,
};
use larclab::rational::{self, Dyadic};
use proptest::prelude::*;

fn table(n: usize) -> impl Strategy<Value = PseudoBooleanFunction> {
    prop::collection::vec(-1000i64..=1000, 1 << n).prop_map(move |v| PseudoBooleanFunction::from_ints(n, v).unwrap())
}

fn sized_table() -> impl Strategy<Value = PseudoBooleanFunction> {
    (0usize..=8).prop_flat_map(table)
}

/// Direct `2^-n sum_x f(x) (-1)^{<s, x>}`.
fn naive_coeff(f: &PseudoBooleanFunction, s: u64) -> Dyadic {
    let n = f.n();
    let sum: i128 = (0..1u64 << n)
        .map(|x| {
            let v = f.raw_values()[x as usize] as i128;
            if (s & x).count_ones() % 2 == 0 {
                v
            } else {
                -v
            }
        })
        .sum();
    Dyadic::new(sum, n as u32 + f.scale_pow2())
}

proptest! {
    #[test]
    fn inverse_undoes_transform(f in sized_table()) {
        let back = inverse_wht(&wht(&f).unwrap()).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn parseval(f in sized_table()) {
        prop_assert_eq!(wht(&f).unwrap().sum_squares(), f.mean_square());
    }

    #[test]
    fn transform_matches_definition(f in (0usize..=5).prop_flat_map(table)) {
        let spec = wht(&f).unwrap();
        for s in 0..1u64 << f.n() {
            prop_assert_eq!(spec.coeff(s), naive_coeff(&f, s));
        }
    }

    #[test]
    fn transform_is_linear(
        (f, g) in (0usize..=7).prop_flat_map(|n| (table(n), table(n)))
    ) {
        let sum: Vec<i64> = f.raw_values().iter().zip(g.raw_values()).map(|(a, b)| a + b).collect();
        let h = PseudoBooleanFunction::from_ints(f.n(), sum).unwrap();
        let (sf, sg, sh) = (wht(&f).unwrap(), wht(&g).unwrap(), wht(&h).unwrap());
        for s in 0..1u64 << f.n() {
            let lhs = sh.coeff(s).to_rational();
            prop_assert_eq!(lhs, sf.coeff(s).to_rational() + sg.coeff(s).to_rational());
        }
    }

    #[test]
    fn indicator_spectrum(n in 1usize..=10, d in 0usize..=10, seed: u64) {
        let v = random_subspace_seeded(n, d.min(n), seed);
        let (f, closed) = subspace_indicator(&v).unwrap();
        let spec = wht(&f).unwrap();
        prop_assert_eq!(&spec, &closed);
        prop_assert_eq!(spec.sparsity(), 1usize << v.codim());
        prop_assert_eq!(spec.spectral_norm(), Dyadic::new(1, 0));
        let dual = v.dual();
        for s in spec.support() {
            prop_assert!(dual.contains(&larclab::f2::F2Vector::from_mask(n, s)));
        }
    }

    #[test]
    fn rank_equals_sparsity_at_four(bits in 0u64..1 << 16) {
        let f = PseudoBooleanFunction::from_fn(4, |x| bits >> x & 1 == 1).unwrap();
        prop_assert_eq!(xor_lift_rank(&f).unwrap(), wht(&f).unwrap().sparsity());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn union_identity_and_norm(n in 8usize..=12, seed: u64, m in 1usize..=10) {
        let dim = if n >= 10 { 3 } else { 2 };
        let fam = random_pairwise_trivial_design(n, dim, m, seed, DEFAULT_REDRAWS).unwrap();
        let f = union_function(&fam).unwrap();
        prop_assert_eq!(inclusion_exclusion(&fam).unwrap(), f.clone());
        let spec = wht(&f).unwrap();
        prop_assert_eq!(&spec, &inclusion_exclusion_spectrum(&fam).unwrap());
        prop_assert!(spec.spectral_norm().to_rational() <= rational::int(2 * m as u64 - 1));
    }
}

#[test]
fn and_two_spectrum() {
    let spec = wht(&PseudoBooleanFunction::and(2).unwrap()).unwrap();
    let q = |num| Dyadic::new(num, 2);
    assert_eq!((0..4).map(|s| spec.coeff(s)).collect::<Vec<_>>(), vec![q(1), q(-1), q(-1), q(1)]);
}

#[test]
fn overlapping_union_breaks_identity() {
    let sp = |r: &[&str]| Subspace::from_bitstrs(r).unwrap();
    let fam = SubspaceFamily::new(3, vec![sp(&["100", "010"]), sp(&["010", "001"])]).unwrap();
    assert_ne!(inclusion_exclusion(&fam).unwrap(), union_function(&fam).unwrap());
}
