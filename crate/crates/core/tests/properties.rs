//! Property tests of structural invariants on randomly generated inputs.

mod common;

use common::*;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use pertopo::diagram::bottleneck_distance;
use pertopo::field::Gf2;
use pertopo::fpgroup::{todd_coxeter, word_is_trivial, Budget, Decision, Enumeration, Letter, Presentation, Word};
use pertopo::homology::{cone_pair_check, excision_check, persistent_homology_between, persistent_homology_integer, suspension_shift_check};
use pertopo::interleaving::{
    bar_family, check_interleaving, group_persistence, interleaving_distance_modules, module_from_diagram, pad_interleaving, InterleavingWitness,
};
use pertopo::intmat::{invariant_factors, smith_normal_form, IntMatrix};
use pertopo::pi1::{persistent_pi1, Pi1Persistence};
use pertopo::{Extended, Verdict};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn abelianized_pi1_matches_h1_on_components((n, d) in rips_input(6)) {
        let k = rips(n, &d, 2);
        for (u, v) in critical_pairs(&k.critical_values()) {
            let (su, sv) = (k.sublevel(&u), k.sublevel(&v));
            for comp in su.components() {
                let bp = comp[0];
                let pi = persistent_pi1(&k, &u, &v, bp).unwrap().invariants;
                let h = persistent_homology_between(&su.restrict(&su.component_of(bp)), &sv.restrict(&sv.component_of(bp)), 1, false);
                prop_assert_eq!(&pi, &h, "u={} v={} bp={}", u, v, bp);
                if su.is_connected() {
                    prop_assert_eq!(&pi, &persistent_homology_integer(&k, &u, &v, 1).invariants);
                }
            }
        }
    }

    #[test]
    fn suspension_shifts_reduced_barcodes((n, d) in rips_input(6), k in 0usize..=2) {
        let x = rips(n, &d, 3);
        let check = suspension_shift_check(&x, k);
        prop_assert_eq!(check.verdict, Verdict::Verified, "{:?}", check);
    }

    #[test]
    fn cone_pair_matches_suspension_side((n, d) in rips_input(5), k in 0usize..=2) {
        let x = rips(n, &d, 2);
        for (u, v) in critical_pairs(&x.critical_values()) {
            let c = cone_pair_check(&x, &u, &v, k);
            prop_assert_eq!(c.verdict, Verdict::Verified, "{:?}", c);
        }
    }

    #[test]
    fn excision_on_random_covers((n, d) in rips_input(6), labels in proptest::collection::vec(0u8..3, 6)) {
        let Some(cov) = random_cover(n, &d, &labels, 2) else { return Ok(()) };
        for (u, v) in critical_pairs(&cov.complex().critical_values()) {
            for k in 0..=2 {
                let c = excision_check(&cov, &u, &v, k);
                prop_assert_eq!(c.verdict, Verdict::Verified, "k={} u={} v={}: {:?}", k, u, v, c);
            }
        }
    }

    #[test]
    fn pi1_transitions_are_functorial((n, d) in rips_input(6)) {
        let k = rips(n, &d, 2);
        let p = Pi1Persistence::of_complex(&k, 0, &Budget::default()).unwrap();
        let audit = p.functoriality_audit();
        prop_assert!(audit.refuted.is_empty());
        prop_assert_eq!(audit.inconclusive, 0);
    }

    #[test]
    fn group_time_shift_interleaves((n, d) in rips_input(5), c in 1i64..=4) {
        let k = rips(n, &d, 2);
        let g = group_persistence(&k, 0, &Budget::default()).unwrap();
        let c = R::new(c, 2);
        let w = InterleavingWitness::time_shift(&g, &c).unwrap();
        let rep = check_interleaving(&g, &g.shifted(&c), &w);
        prop_assert_ne!(rep.verdict, Verdict::Refuted);
    }

    #[test]
    fn bottleneck_matches_brute_force(a in diagram_strategy(5), b in diagram_strategy(5)) {
        prop_assert_eq!(bottleneck_distance(&a, &b), brute_bottleneck(a.bars(), b.bars()));
    }

    #[test]
    fn bottleneck_is_a_metric(a in diagram_strategy(4), b in diagram_strategy(4), c in diagram_strategy(4)) {
        let (ab, ba) = (bottleneck_distance(&a, &b), bottleneck_distance(&b, &a));
        prop_assert_eq!(&ab, &ba);
        prop_assert_eq!(bottleneck_distance(&a, &a), Extended::Finite(r(0)));
        let (bc, ac) = (bottleneck_distance(&b, &c), bottleneck_distance(&a, &c));
        if let (Extended::Finite(x), Extended::Finite(y)) = (&ab, &bc) {
            let bound = Extended::Finite(x + y);
            prop_assert!(ac.total_cmp(&bound) != std::cmp::Ordering::Greater);
        }
    }

    #[test]
    fn snf_matches_minor_gcds(rows in 1usize..=4, cols in 1usize..=4, entries in proptest::collection::vec(-6i64..=6, 16)) {
        let m = IntMatrix::from_i64_rows(&(0..rows).map(|i| entries[i * 4..i * 4 + cols].to_vec()).collect::<Vec<_>>(), cols);
        let factors = invariant_factors(&m);
        let gcds = minor_gcds(&m);
        let mut prev = BigInt::from(1);
        for (k, dk) in gcds.iter().enumerate() {
            let expected = if dk.is_zero() { BigInt::zero() } else { dk / &prev };
            prop_assert_eq!(&factors[k], &expected, "k={}", k);
            if !dk.is_zero() {
                prev = dk.clone();
            }
        }
        prop_assert!(smith_normal_form(&m).verify(&m));
    }

    #[test]
    fn word_problem_is_monotone_in_budget(
        gens in 1usize..=2,
        rels in proptest::collection::vec(proptest::collection::vec((0usize..2, any::<bool>()), 1..=6), 0..=2),
        word in proptest::collection::vec((0usize..2, any::<bool>()), 0..=8),
    ) {
        let to_word = |raw: &[(usize, bool)]| Word::from_letters(raw.iter().map(|&(g, inv)| Letter::new(g % gens, inv)).collect());
        let p = Presentation::new(gens, rels.iter().map(|r| to_word(r)).collect()).unwrap();
        let w = to_word(&word);
        let budgets = [Budget::tiny(), Budget { max_word_length: 12, max_nodes: 2_000, max_cosets: 200 }, Budget::default()];
        let answers: Vec<Decision> = budgets.iter().map(|b| word_is_trivial(&p, &w, b)).collect();
        prop_assert!(!(answers.contains(&Decision::Yes) && answers.contains(&Decision::No)), "{:?}", answers);
        for pair in answers.windows(2) {
            prop_assert!(pair[0] == Decision::Unknown || pair[0] == pair[1], "{:?}", answers);
        }
    }

    #[test]
    fn module_distance_is_bottleneck(a in diagram_strategy(4), b in diagram_strategy(4)) {
        let (ma, mb) = (module_from_diagram::<R, Gf2>(&a), module_from_diagram::<R, Gf2>(&b));
        prop_assert_eq!(interleaving_distance_modules(&ma, &mb), bottleneck_distance(&a, &b));
    }

    #[test]
    fn padding_preserves_verification(a in diagram_strategy(4), shift in 0i64..=4, extra in 0i64..=4) {
        let delta = R::new(shift, 2);
        let m = module_from_diagram::<R, Gf2>(&a);
        let shifted_bars: Vec<_> = a.bars().iter().map(|b| pertopo::diagram::Bar { birth: b.birth + delta, death: match &b.death {
            Extended::Finite(d) => Extended::Finite(d + delta),
            Extended::Infinite => Extended::Infinite,
        }}).collect();
        let b = pertopo::diagram::PersistenceDiagram::new(shifted_bars).unwrap();
        let mb = module_from_diagram::<R, Gf2>(&b);
        // Bars are sorted by birth then death, so translation keeps the order.
        let diag = |k: usize, l: usize| if k == l { Gf2::one() } else { Gf2::zero() };
        let w = InterleavingWitness::new(
            bar_family((&a, &m), (&b, &mb), delta, diag).unwrap(),
            bar_family((&b, &mb), (&a, &m), delta, diag).unwrap(),
        ).unwrap();
        prop_assert_eq!(check_interleaving(&m, &mb, &w).verdict, Verdict::Verified);
        let eps = delta + R::new(extra, 2);
        let padded = pad_interleaving(&m, &mb, &w, &eps).unwrap();
        prop_assert_eq!(check_interleaving(&m, &mb, &padded).verdict, Verdict::Verified);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn module_distance_matches_interleaving_search(a in diagram_strategy(3), b in diagram_strategy(3)) {
        let (ma, mb) = (module_from_diagram::<R, Gf2>(&a), module_from_diagram::<R, Gf2>(&b));
        prop_assert_eq!(interleaving_distance_modules(&ma, &mb), brute_interleaving_distance(&a, &b));
    }
}

#[test]
fn todd_coxeter_indexes_cyclic_groups() {
    for n in 1..=12i64 {
        let p = Presentation::new(1, vec![Word::generator(0).pow(n)]).unwrap();
        match todd_coxeter(&p, &[], 1000) {
            Enumeration::Complete(t) => assert_eq!(t.index() as i64, n),
            Enumeration::Inconclusive => panic!("cyclic group of order {n} did not close"),
        }
        for d in 1..=n {
            if n % d == 0 {
                let sub = [Word::generator(0).pow(d)];
                match todd_coxeter(&p, &sub, 1000) {
                    Enumeration::Complete(t) => assert_eq!(t.index() as i64, d),
                    Enumeration::Inconclusive => panic!("index of <a^{d}> in Z/{n}"),
                }
            }
        }
    }
}
