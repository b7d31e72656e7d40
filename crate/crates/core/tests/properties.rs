mod common;

use abtriple::encoder;
use abtriple::model::{enumerate_triples, triples_with_max};
use abtriple::solver::{Budget, Decision, Solver};
use abtriple::{Coloring, Params, PartialColoring};
use proptest::prelude::*;

fn coloring_strategy(max_n: usize) -> impl Strategy<Value = Coloring> {
    (1usize..=6, 0usize..=6, 2usize..=4, 1usize..=max_n).prop_flat_map(|(a, extra, r, n)| {
        let params = Params::new(a, a + extra, r).unwrap();
        prop::collection::vec(0..r as u8, n).prop_map(move |c| Coloring::new(params, c).unwrap())
    })
}

/// Colorings with few colors over short runs, so valid ones show up often.
fn blocky_coloring(max_n: usize) -> impl Strategy<Value = Coloring> {
    (1usize..=4, 0usize..=4, 1usize..=max_n).prop_flat_map(|(a, extra, n)| {
        let params = Params::new(a, a + extra, 2).unwrap();
        prop::collection::vec((0u8..2, 1usize..8), 1..=n).prop_map(move |runs| {
            let mut colors: Vec<u8> = runs
                .iter()
                .flat_map(|&(c, len)| std::iter::repeat_n(c, len))
                .collect();
            colors.truncate(n);
            Coloring::new(params, colors).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn indexed_scan_matches_definition(c in coloring_strategy(200)) {
        let p = c.params();
        let naive = common::naive_mono_triple(p.a(), p.b(), c.colors());
        let fast = c.find_mono_triple();
        prop_assert_eq!(naive.is_some(), fast.is_some());
        if let Some(t) = fast {
            prop_assert_eq!(t.y, p.a() * t.x + t.d);
            prop_assert_eq!(t.z, p.b() * t.x + 2 * t.d);
            prop_assert!(t.x >= 1 && t.d >= 1);
            prop_assert!(c.color(t.x) == c.color(t.y) && c.color(t.y) == c.color(t.z));
            // No monochromatic triple ends below t.z.
            let prefix = c.restrict(t.z - 1);
            if let Ok(prefix) = prefix {
                prop_assert!(common::naive_mono_triple(p.a(), p.b(), prefix.colors()).is_none());
            }
        }
    }

    #[test]
    fn blocky_colorings_match_definition(c in blocky_coloring(120)) {
        let p = c.params();
        let naive = common::naive_mono_triple(p.a(), p.b(), c.colors());
        prop_assert_eq!(naive.is_none(), c.is_valid());
    }

    #[test]
    fn triples_partition_by_largest_element(a in 1usize..=6, extra in 0usize..=6, n in 1usize..=150) {
        let p = Params::new(a, a + extra, 2).unwrap();
        let all = enumerate_triples(&p, n);
        let by_max: Vec<_> = (1..=n).flat_map(|z| triples_with_max(&p, z)).collect();
        prop_assert_eq!(&all, &by_max);
        for t in &all {
            prop_assert!(t.x < t.y && t.y < t.z && t.z <= n);
            prop_assert_eq!((t.y, t.z), (a * t.x + t.d, (a + extra) * t.x + 2 * t.d));
        }
        let brute = (1..=n)
            .flat_map(|x| (1..=n).map(move |d| (x, d)))
            .filter(|&(x, d)| (a + extra) * x + 2 * d <= n)
            .count();
        prop_assert_eq!(all.len(), brute);
    }

    #[test]
    fn validity_is_invariant_under_color_permutation(c in coloring_strategy(120), seed in any::<u64>()) {
        let r = c.params().r();
        let mut perm: Vec<u8> = (0..r as u8).collect();
        // Fisher-Yates driven by the seed.
        let mut s = seed;
        for i in (1..r).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let relabeled = c.relabel(&perm).unwrap();
        prop_assert_eq!(c.is_valid(), relabeled.is_valid());
        prop_assert_eq!(
            c.find_mono_triple().map(|t| t.elements()),
            relabeled.find_mono_triple().map(|t| t.elements())
        );
    }

    #[test]
    fn restriction_preserves_validity(c in blocky_coloring(100), m in 1usize..=100) {
        let m = m.min(c.n());
        let r = c.restrict(m).unwrap();
        if c.is_valid() {
            prop_assert!(r.is_valid());
        }
        if !r.is_valid() {
            prop_assert!(!c.is_valid());
        }
    }

    #[test]
    fn partial_coloring_agrees_when_total(c in coloring_strategy(80)) {
        let pc = PartialColoring::from(&c);
        prop_assert_eq!(pc.assigned(), c.n());
        prop_assert_eq!(
            pc.find_mono_triple().map(|t| t.elements()),
            c.find_mono_triple().map(|t| t.elements())
        );
        prop_assert_eq!(pc.into_coloring().unwrap(), c);
    }

    #[test]
    fn witness_json_round_trips(c in coloring_strategy(60)) {
        prop_assert_eq!(Coloring::from_json(&c.to_json()).unwrap(), c);
    }

    #[test]
    fn encoder_round_trip(c in coloring_strategy(40)) {
        let p = *c.params();
        let doc = encoder::encode(&p, c.n()).unwrap();
        let assignment = encoder::assignment_of(&c);
        prop_assert_eq!(assignment.len(), doc.num_vars);
        prop_assert_eq!(encoder::decode(&p, c.n(), &assignment).unwrap(), c.clone());
        // The encoding fixes the color of 1 to 0; otherwise satisfied iff valid.
        let sat = doc.is_satisfied_by(&assignment);
        prop_assert_eq!(sat, c.color(1) == 0 && c.is_valid());
        let reparsed = encoder::CnfDocument::parse_dimacs(&doc.to_dimacs()).unwrap();
        prop_assert_eq!(reparsed, doc);
    }

    #[test]
    fn solver_agrees_with_exhaustion(a in 1usize..=5, extra in 0usize..=5, n in 1usize..=14) {
        let p = Params::new(a, a + extra, 2).unwrap();
        let decision = Solver::new(1).exists_valid(&p, n, &Budget::unlimited());
        let expected = common::naive_exists_2col(a, a + extra, n);
        match decision {
            Decision::Yes(w) => {
                prop_assert!(expected);
                prop_assert_eq!(w.n(), n);
                prop_assert!(common::naive_mono_triple(a, a + extra, w.colors()).is_none());
            }
            Decision::No => prop_assert!(!expected),
            Decision::Unknown => prop_assert!(false, "unbudgeted search gave up"),
        }
    }
}
