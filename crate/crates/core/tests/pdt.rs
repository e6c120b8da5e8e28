use larclab::designs::SubspaceFamily;
use larclab::f2::{mask_rank, random_subspace, Subspace};
use larclab::fourier::{union_function, PseudoBooleanFunction};
use larclab::pdt::{
    corruption_scan, count_trees, distributional_error, enumerate_trees, hard_distribution_mu, optimal_depth, Node,
    ParityDecisionTree, ScanVerdict, DEFAULT_SCAN_CAP,
};
use larclab::rational::{self, Rational};
use larclab::rng;
use num_bigint::BigUint;
use num_traits::Zero;
use proptest::prelude::*;
use rand::Rng;

fn random_node<R: Rng>(n: usize, depth: usize, r: &mut R) -> Node {
    if depth == 0 || r.gen_bool(0.25) {
        return Node::leaf(r.gen());
    }
    let mask = r.gen_range(1..1u64 << n);
    Node::query(mask, random_node(n, depth - 1, r), random_node(n, depth - 1, r))
}

fn random_tree(n: usize, depth: usize, seed: u64) -> ParityDecisionTree {
    ParityDecisionTree::new(n, random_node(n, depth, &mut rng::seeded(seed))).unwrap()
}

/// A random invertible matrix as the images of the unit vectors.
fn random_invertible(n: usize, seed: u64) -> Vec<u64> {
    let mut r = rng::seeded(seed);
    let mut cols: Vec<u64> = Vec::new();
    while cols.len() < n {
        let c = r.gen_range(1..1u64 << n);
        if mask_rank(cols.iter().copied().chain([c])) > cols.len() {
            cols.push(c);
        }
    }
    cols
}

fn apply(cols: &[u64], x: u64) -> u64 {
    cols.iter().enumerate().filter(|(i, _)| x >> i & 1 == 1).fold(0, |acc, (_, &c)| acc ^ c)
}

fn table(n: usize, bits: u64) -> PseudoBooleanFunction {
    PseudoBooleanFunction::from_fn(n, |x| bits >> x & 1 == 1).unwrap()
}

fn uncovered_family(n: usize, seed: u64) -> Option<SubspaceFamily> {
    let mut r = rng::seeded(seed);
    let m = r.gen_range(1..=4);
    let members: Vec<Subspace> = (0..m)
        .map(|_| {
            let d = r.gen_range(0..n);
            random_subspace(n, d, &mut r)
        })
        .collect();
    let fam = SubspaceFamily::new(n, members).unwrap();
    let f = union_function(&fam).unwrap();
    (0..1u64 << n).any(|x| !f.bit(x)).then_some(fam)
}

proptest! {
    #[test]
    fn leaves_partition_the_cube(n in 1usize..=6, depth in 0usize..=4, seed: u64) {
        let tree = random_tree(n, depth, seed);
        let regions = tree.leaf_regions().unwrap();
        let mut hits = vec![0u32; 1 << n];
        for (w, label) in &regions {
            for x in w.elements().unwrap() {
                let m = x.to_mask().unwrap();
                hits[m as usize] += 1;
                prop_assert_eq!(tree.eval(m), *label);
            }
            prop_assert!(w.codim() <= tree.depth());
        }
        prop_assert!(hits.iter().all(|&h| h == 1));
    }

    #[test]
    fn optimal_depth_is_linearly_invariant(n in 1usize..=4, bits: u64, seed: u64) {
        let bits = if n == 4 { bits & 0xffff } else { bits & ((1 << (1 << n)) - 1) };
        let f = table(n, bits);
        let a = random_invertible(n, seed);
        let g = PseudoBooleanFunction::from_fn(n, |x| f.bit(apply(&a, x))).unwrap();
        let (df, tf) = optimal_depth(&f).unwrap();
        let (dg, tg) = optimal_depth(&g).unwrap();
        prop_assert_eq!(df, dg);
        prop_assert!(tf.soundness_check(&f) && tg.soundness_check(&g));
        prop_assert_eq!(tf.depth(), df);
        prop_assert!(df <= n);
    }

    #[test]
    fn optimal_depth_matches_tree_enumeration(bits in 0u64..256) {
        let f = table(3, bits);
        let (d, _) = optimal_depth(&f).unwrap();
        let best = enumerate_trees(3, 2, 1 << 20)
            .unwrap()
            .into_iter()
            .filter(|t| t.soundness_check(&f))
            .map(|t| t.depth())
            .min();
        match best {
            Some(b) => prop_assert_eq!(d, b),
            None => prop_assert_eq!(d, 3),
        }
    }

    #[test]
    fn scan_is_monotone_and_witnesses_hold(n in 2usize..=5, seed: u64, num in 0u64..40) {
        let Some(fam) = uncovered_family(n, seed) else { return Ok(()) };
        let f = union_function(&fam).unwrap();
        let mu = hard_distribution_mu(&fam).unwrap();
        prop_assert_eq!(mu.total_mass(), rational::int(1));
        prop_assert_eq!(mu.mass_where(|x| !f.bit(x)), rational::ratio(1, 2));
        let codim_at = |eps: &Rational| match corruption_scan(&f, &mu, eps, n, DEFAULT_SCAN_CAP).unwrap() {
            r @ larclab::pdt::ScanReport { verdict: ScanVerdict::Witness(c), .. } => {
                let w = r.witness.unwrap();
                let (mut one, mut total) = (Rational::zero(), Rational::zero());
                for x in w.w.elements().unwrap() {
                    let x = x.to_mask().unwrap();
                    total += mu.mass(x);
                    if f.bit(x) {
                        one += mu.mass(x);
                    }
                }
                assert_eq!((one.clone(), total.clone()), (w.one_mass, w.total_mass));
                assert!(one <= rational::int(4) * eps * total);
                Some(c)
            }
            _ => None,
        };
        let lo = rational::ratio(num, 160);
        let hi = rational::ratio(num + 1, 160);
        match (codim_at(&lo), codim_at(&hi)) {
            (Some(a), Some(b)) => prop_assert!(b <= a),
            (Some(_), None) => prop_assert!(false, "witness lost when epsilon grew"),
            _ => {}
        }
        // the zero set is itself an affine union, so some coset of full dimension n works at 1/4
        prop_assert!(codim_at(&rational::ratio(1, 4)).is_some());
    }
}

#[test]
fn tree_counts_match_enumeration() {
    for (n, d) in [(1, 0), (1, 1), (2, 1), (3, 1), (4, 1), (2, 2)] {
        let trees = enumerate_trees(n, d, 1 << 20).unwrap();
        assert_eq!(BigUint::from(trees.len()), count_trees(n, d), "n {n} d {d}");
    }
    assert_eq!(count_trees(4, 1), BigUint::from(62u32));
}

#[test]
fn depth_one_error_on_three_planes() {
    let sp = |r: &[&str]| Subspace::from_bitstrs(r).unwrap();
    let fam = SubspaceFamily::new(3, vec![sp(&["100", "010"]), sp(&["010", "001"]), sp(&["100", "001"])]).unwrap();
    let f = union_function(&fam).unwrap();
    let mu = hard_distribution_mu(&fam).unwrap();
    let best = enumerate_trees(3, 1, 1000)
        .unwrap()
        .iter()
        .map(|t| distributional_error(t, &f, &mu))
        .min()
        .unwrap();
    assert!(best > rational::ratio(1, 96));
}
