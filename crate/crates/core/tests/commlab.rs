use larclab::commlab::{
    appendix_chain_check, collision, conjecture_check, coset_pushforward, coset_pushforward_set, far_count,
    l1_to_uniform, xor_convolution_counts, ConjectureParams, NuDistribution, PointSet, Rectangle, Verdict,
};
use larclab::designs::{certify_dual_design_exhaustive, SubspaceFamily, DEFAULT_ENUMERATION_CAP};
use larclab::distribution::CubeDistribution;
use larclab::f2::{random_affine, random_subspace, Subspace};
use larclab::rational::{self, Rational};
use larclab::rng;
use num_traits::Zero;
use proptest::prelude::*;
use rand::Rng;

fn covering_free_family(n: usize, seed: u64) -> Option<SubspaceFamily> {
    let mut r = rng::seeded(seed);
    let m = r.gen_range(1..=4);
    let members: Vec<Subspace> = (0..m)
        .map(|_| {
            let d = r.gen_range(0..n);
            random_subspace(n, d, &mut r)
        })
        .collect();
    let fam = SubspaceFamily::new(n, members).unwrap();
    NuDistribution::new(&fam).ok().map(|_| fam)
}

fn random_set<R: Rng>(n: usize, density: f64, r: &mut R) -> PointSet {
    let mut s = PointSet::from_points(n, (0..1u64 << n).filter(|_| r.gen_bool(density))).unwrap();
    if s.is_empty() {
        s.insert(r.gen_range(0..1u64 << n));
    }
    s
}

proptest! {
    #[test]
    fn nu_is_translation_invariant(n in 1usize..=5, seed: u64, t: u64) {
        let Some(fam) = covering_free_family(n, seed) else { return Ok(()) };
        let nu = NuDistribution::new(&fam).unwrap();
        let t = t & ((1 << n) - 1);
        let mut total = Rational::zero();
        for x in 0..1u64 << n {
            for y in 0..1u64 << n {
                prop_assert_eq!(nu.mass(x ^ t, y ^ t), nu.mass(x, y));
                total += nu.mass(x, y);
            }
        }
        prop_assert_eq!(total, rational::int(1));
        prop_assert_eq!(nu.zero_side_mass(), rational::ratio(1, 2));
    }

    #[test]
    fn rectangle_masses_match_pair_sums(n in 1usize..=5, seed: u64, da in 0.1f64..1.0, db in 0.1f64..1.0) {
        let Some(fam) = covering_free_family(n, seed) else { return Ok(()) };
        let nu = NuDistribution::new(&fam).unwrap();
        let mut r = rng::seeded(!seed);
        let rect = Rectangle::new(random_set(n, da, &mut r), random_set(n, db, &mut r)).unwrap();
        let (mut one, mut total) = (Rational::zero(), Rational::zero());
        let mut conv = vec![0u64; 1 << n];
        for x in rect.a.iter() {
            for y in rect.b.iter() {
                conv[(x ^ y) as usize] += 1;
                total += nu.mass(x, y);
                if nu.lift(x, y) {
                    one += nu.mass(x, y);
                }
            }
        }
        prop_assert_eq!(xor_convolution_counts(&rect), conv);
        prop_assert_eq!(nu.rectangle_masses(&rect).unwrap(), (one, total));
    }

    #[test]
    fn pushforward_is_additive_over_disjoint_sets(n in 1usize..=10, d in 0usize..=10, seed: u64) {
        let mut r = rng::seeded(seed);
        let v = random_subspace(n, d.min(n), &mut r).to_masks().unwrap();
        let all = random_set(n, 0.5, &mut r);
        let left = PointSet::from_points(n, all.iter().filter(|&x| x & 1 == 0)).unwrap();
        let right = PointSet::from_points(n, all.iter().filter(|&x| x & 1 == 1)).unwrap();
        let (h, hl, hr) = (coset_pushforward_set(&all, &v), coset_pushforward_set(&left, &v), coset_pushforward_set(&right, &v));
        for l in 0..h.counts.len() {
            prop_assert_eq!(h.counts[l], hl.counts[l] + hr.counts[l]);
        }
        prop_assert_eq!(h.total, hl.total + hr.total);
        let u = CubeDistribution::uniform_on(n, all.iter()).unwrap();
        let hu = coset_pushforward(&u, &v).unwrap();
        for l in 0..h.counts.len() as u64 {
            prop_assert_eq!(hu.mass(l), h.mass(l));
        }
    }

    #[test]
    fn chain_holds_on_random_instances(n in 2usize..=8, seed: u64, a in 1u64..=3) {
        let mut r = rng::seeded(seed);
        let alpha = rational::ratio(a, 4);
        let codim = r.gen_range(1..=n.min(4));
        let v = random_subspace(n, n - codim, &mut r).to_masks().unwrap();
        // sides concentrated on a few cosets so the premise is sometimes met
        let side = |r: &mut rng::LabRng| {
            let labels: Vec<u64> = (0..1u64 << codim).filter(|_| r.gen_bool(0.4)).collect();
            let pts = (0..1u64 << n).filter(|&x| labels.contains(&v.label(x)) && r.gen_bool(0.7));
            let mut s = PointSet::from_points(n, pts).unwrap();
            if s.is_empty() {
                s.insert(r.gen_range(0..1u64 << n));
            }
            s
        };
        let rect = Rectangle::new(side(&mut r), side(&mut r)).unwrap();
        let check = appendix_chain_check(&rect, &v, &alpha).unwrap();
        let same = rect.a.iter().map(|x| rect.b.iter().filter(|&y| v.label(x) == v.label(y)).count() as u64).sum::<u64>();
        prop_assert_eq!(check.collision.clone(), rational::ratio(same, rect.size() as u64));
        prop_assert_eq!(
            check.collision.clone(),
            collision(&coset_pushforward_set(&rect.a, &v), &coset_pushforward_set(&rect.b, &v))
        );
        prop_assert!(check.holds);
        if check.applies {
            prop_assert!(check.d_a >= alpha || check.d_b >= alpha);
        }
    }

    #[test]
    fn uniform_affine_is_far_only_from_dependent_members(n in 2usize..=6, seed: u64) {
        let Some(fam) = covering_free_family(n, seed) else { return Ok(()) };
        let mut r = rng::seeded(!seed);
        let s = r.gen_range(0..=n);
        let h = certify_dual_design_exhaustive(&fam, s, DEFAULT_ENUMERATION_CAP).unwrap().h;
        let codim = r.gen_range(0..=s);
        let w = random_affine(n, n - codim, &mut r);
        let x = CubeDistribution::uniform_affine(&w).unwrap();
        prop_assert!((x.entropy() - (n - codim) as f64).abs() < 1e-12);
        let dependent = fam.members().iter().filter(|v| !v.independent(w.space()).unwrap()).count();
        let members = fam.mask_members().unwrap();
        for v in &members {
            let d = l1_to_uniform(&coset_pushforward(&x, v).unwrap());
            prop_assert!(d.is_zero() || d >= rational::int(1));
        }
        prop_assert_eq!(far_count(&x, &members, &rational::ratio(1, 2)).unwrap(), dependent);
        prop_assert!(dependent <= h);
        let params = ConjectureParams::new(rational::ratio(1, 2), 0.1, rational::int(1), s, h).unwrap();
        prop_assert_eq!(conjecture_check(&x, &fam, &params).unwrap().verdict, Verdict::Vacuous);
    }
}

#[test]
fn point_mass_is_far_from_every_proper_member() {
    let sp = |r: &[&str]| Subspace::from_bitstrs(r).unwrap();
    let fam = SubspaceFamily::new(3, vec![sp(&["100", "010"]), sp(&["010", "001"]), sp(&["100", "001"])]).unwrap();
    let x = CubeDistribution::point_mass(3, 0b101).unwrap();
    assert_eq!(far_count(&x, &fam.mask_members().unwrap(), &rational::ratio(1, 2)).unwrap(), 3);
    let params = ConjectureParams::new(rational::ratio(1, 2), 0.1, rational::int(1), 1, 1).unwrap();
    let report = conjecture_check(&x, &fam, &params).unwrap();
    assert_eq!(report.verdict, Verdict::Consistent);
    assert_eq!(report.entropy, 0.0);
}
