use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use dplab_core::gf::{frobenius, make_field, FieldSpec};
use dplab_core::plane::{frobenius_orbit, is_general_position, ClosedPointConfig, ProjPoint};
use dplab_core::search::{brute_force, find_config, prove_nonexistence, DegreePartition, SearchOptions};
use dplab_core::surfaces::{count_points, random_model, twist, twist_parameter, ambient_count, Ambient};

/// (p, n) with p^n small enough for quick exhaustive checks.
const FIELDS: &[(u64, u32)] = &[(2, 1), (3, 1), (5, 1), (7, 1), (2, 2), (2, 3), (3, 2), (2, 4), (5, 2), (3, 3), (2, 6)];

fn field_strategy() -> impl Strategy<Value = FieldSpec> {
    prop::sample::select(FIELDS).prop_map(|(p, n)| make_field(p, n).unwrap())
}

fn field_and_elements(k: usize) -> impl Strategy<Value = (FieldSpec, Vec<u64>)> {
    field_strategy().prop_flat_map(move |f| {
        let q = f.order();
        (Just(f), prop::collection::vec(0..q, k))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn field_axioms((f, xs) in field_and_elements(3)) {
        let (a, b, c) = (xs[0], xs[1], xs[2]);
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), 0);
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        prop_assert_eq!(f.mul(a, 1), a);
        match f.inv(a) {
            Some(i) => prop_assert_eq!(f.mul(a, i), 1),
            None => prop_assert_eq!(a, 0),
        }
        // Lagrange: a^q = a
        prop_assert_eq!(f.pow(a, f.order() as u128), a);
    }

    #[test]
    fn frobenius_is_a_field_automorphism((f, xs) in field_and_elements(2), k in 0u32..8) {
        let (a, b) = (xs[0], xs[1]);
        let n = f.degree();
        let fr = |x| f.frobenius_power(x, k);
        prop_assert_eq!(fr(f.add(a, b)), f.add(fr(a), fr(b)));
        prop_assert_eq!(fr(f.mul(a, b)), f.mul(fr(a), fr(b)));
        prop_assert_eq!(fr(a), f.pow(a, (f.characteristic() as u128).pow(k)));
        prop_assert_eq!(f.frobenius_power(a, n), a);
        // The orbit of a under x -> x^p has length element_degree(a) * (prime subfield degree 1).
        let d = f.element_degree(a);
        prop_assert_eq!(n % d, 0);
        prop_assert_eq!(f.frobenius_power(a, d), a);
        prop_assert!((1..d).all(|j| f.frobenius_power(a, j) != a));
    }

    #[test]
    fn extensions_embed_homomorphically(i in 0..6usize, d in 1u32..4, xs in prop::collection::vec(any::<u64>(), 2)) {
        let base = make_field(FIELDS[i].0, FIELDS[i].1).unwrap();
        let ext = base.extension(d).unwrap();
        let (a, b) = (xs[0] % base.order(), xs[1] % base.order());
        let e = &ext.embedding;
        let big = &ext.field;
        prop_assert_eq!(e.apply(base.add(a, b)), big.add(e.apply(a), e.apply(b)));
        prop_assert_eq!(e.apply(base.mul(a, b)), big.mul(e.apply(a), e.apply(b)));
        prop_assert_eq!(e.preimage(e.apply(a)), Some(a));
        // The image is exactly the fixed field of the q-power Frobenius.
        let x = big.element(e.apply(a));
        prop_assert_eq!(frobenius(&x, &base).unwrap(), x);
    }

    #[test]
    fn field_element_text_roundtrip((f, xs) in field_and_elements(1)) {
        let x = f.element(xs[0]);
        let back = dplab_core::gf::FieldElement::parse(&x.to_string()).unwrap();
        prop_assert_eq!(back, x);
    }
}

fn random_plane_point(big: &FieldSpec, rng: &mut ChaCha8Rng) -> Option<ProjPoint> {
    let c = [big.random(rng), big.random(rng), big.random(rng)];
    ProjPoint::new(big, c).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn closed_points_are_frobenius_stable(i in 0..5usize, e in 1u32..5, seed in any::<u64>()) {
        let base = make_field(FIELDS[i].0, FIELDS[i].1).unwrap();
        let big = base.extension(e).unwrap().field;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let Some(p) = random_plane_point(&big, &mut rng) else { return Ok(()) };
        let cp = frobenius_orbit(&p, &base).unwrap();
        prop_assert_eq!(e % cp.degree, 0);
        prop_assert_eq!(cp.orbit.len() as u32, cp.degree);
        prop_assert!(cp.orbit.iter().all(|x| x.field() == cp.rep.field()));
        // Distinct conjugates.
        for (j, x) in cp.orbit.iter().enumerate() {
            prop_assert!(cp.orbit[j + 1..].iter().all(|y| y != x));
        }
        let config = ClosedPointConfig::from_reps(&base, &[cp.rep.clone()]).unwrap();
        prop_assert_eq!(config.partition(), vec![cp.degree]);
        // Frobenius permutes the orbit, so the geometric point set is unchanged.
        let points = |c: &ClosedPointConfig| {
            let (_, mut pts) = c.expand().unwrap();
            pts.sort_unstable();
            pts
        };
        prop_assert_eq!(points(&config.frobenius()), points(&config));
    }

    #[test]
    fn general_position_is_inherited_by_subsets(q_idx in 0..4usize, seed in any::<u64>(), n in 2usize..7) {
        let base = make_field(FIELDS[q_idx].0, FIELDS[q_idx].1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut reps = Vec::new();
        let mut seen = Vec::new();
        while reps.len() < n {
            let Some(p) = random_plane_point(&base, &mut rng) else { continue };
            if !seen.contains(&p) {
                seen.push(p.clone());
                reps.push(p);
            }
        }
        let full = is_general_position(&ClosedPointConfig::from_reps(&base, &reps).unwrap()).unwrap();
        if full {
            for skip in 0..n {
                let sub: Vec<ProjPoint> = reps.iter().enumerate().filter(|&(j, _)| j != skip).map(|(_, p)| p.clone()).collect();
                let c = ClosedPointConfig::from_reps(&base, &sub).unwrap();
                prop_assert!(is_general_position(&c).unwrap());
            }
        }
        // Point order does not matter.
        reps.reverse();
        prop_assert_eq!(is_general_position(&ClosedPointConfig::from_reps(&base, &reps).unwrap()).unwrap(), full);
    }

    #[test]
    fn found_configurations_are_valid(q_idx in 0..6usize, parts in prop::sample::select(vec![
        vec![1, 1, 1, 1], vec![2, 2], vec![3, 1, 1], vec![1, 1, 1, 1, 1, 2], vec![4, 2], vec![5, 1], vec![6],
    ]), seed in 0u64..1000) {
        let base = make_field(FIELDS[q_idx].0, FIELDS[q_idx].1).unwrap();
        let partition = DegreePartition::new(parts.clone()).unwrap();
        let opts = SearchOptions { seed, budget: 2_000, ..Default::default() };
        let r = find_config(&base, &partition, &opts).unwrap();
        if let Some(config) = r.config() {
            let mut got = config.partition();
            got.sort_unstable();
            let mut want = parts;
            want.sort_unstable();
            prop_assert_eq!(got, want);
            prop_assert!(is_general_position(config).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Both surfaces double-cover the same base with `q^2 + q + 1` points, so
    /// `#X + #X' = 2 (q^2 + q + 1)` and the traces satisfy `a + a' = 2`.
    #[test]
    fn twist_reflects_trace(q_idx in 0..8usize, seed in any::<u64>(), dp1 in any::<bool>()) {
        let f = make_field(FIELDS[q_idx].0, FIELDS[q_idx].1).unwrap();
        let ambient = if dp1 { Ambient::P1123 } else { Ambient::P1112 };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let Ok(s) = random_model(ambient, &f, &mut rng, 50) else { return Ok(()) };
        let t = twist(&s, twist_parameter(&f)).unwrap();
        let (a, b) = (count_points(&s).unwrap(), count_points(&t).unwrap());
        let q = f.order();
        prop_assert_eq!(a.count + b.count, 2 * (q * q + q + 1));
        prop_assert_eq!(a.trace.map(|x| 2 - x), b.trace);
        prop_assert_eq!(ambient_count(ambient, q) > q * q, true);
    }
}

/// The pruned search (normalization of the first frame, incremental tests)
/// agrees with unpruned enumeration on every small case.
#[test]
fn pruned_search_matches_brute_force() {
    let opts = SearchOptions { test_budget: u64::MAX, ..Default::default() };
    let (mut found, mut absent) = (0, 0);
    for (q, max_total) in [(2u64, 6u32), (3, 6), (4, 5)] {
        let (p, n) = dplab_core::gf::prime_power(q).unwrap();
        let base = make_field(p, n).unwrap();
        for partition in DegreePartition::all_up_to(max_total) {
            let pruned = prove_nonexistence(&base, &partition, &opts).unwrap();
            let brute = brute_force(&base, &partition, &opts).unwrap();
            assert!(!matches!(pruned.status, dplab_core::search::SearchStatus::Inconclusive { .. }));
            assert_eq!(pruned.is_found(), brute.is_found(), "q={q} [{partition}]");
            assert_eq!(pruned.is_not_found(), brute.is_not_found(), "q={q} [{partition}]");
            for config in [pruned.config(), brute.config()].into_iter().flatten() {
                assert!(is_general_position(config).unwrap());
            }
            if pruned.is_found() { found += 1 } else { absent += 1 }
        }
    }
    // Arcs in P^2(F_q) have at most q + 2 points, so both outcomes occur.
    assert!(found > 0 && absent > 0, "found {found}, absent {absent}");
}
