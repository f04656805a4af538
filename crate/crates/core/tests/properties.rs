use consecutive_patterns::cli::{cache_key, Cache};
use consecutive_patterns::cluster::{cluster_counts, count_clusters_oracle};
use consecutive_patterns::equivalence::{canonical_form, graphs_isomorphic};
use consecutive_patterns::graph::build_graph;
use consecutive_patterns::perm::all_permutations;
use consecutive_patterns::series::{avoidance_gf, count_distribution_oracle, BiSeries};
use consecutive_patterns::{PatternCollection, Permutation};
use num_bigint::BigInt;
use proptest::prelude::*;

fn arb_perm(lens: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Permutation> {
    lens.prop_flat_map(|l| {
        let all: Vec<Permutation> = all_permutations(l).collect();
        proptest::sample::select(all)
    })
}

fn arb_collection() -> impl Strategy<Value = PatternCollection> {
    proptest::collection::vec(arb_perm(2..=5), 1..=3)
        .prop_filter_map("not reduced", |ps| PatternCollection::new(ps).ok())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn recurrence_matches_oracle(c in arb_collection()) {
        let t = cluster_counts(&c, 9, 4).totals();
        for n in 1..=9 {
            for q in 1..=4 {
                prop_assert_eq!(t.get(n, q), count_clusters_oracle(&c, n, q), "{} n={} q={}", c, n, q);
            }
        }
    }

    #[test]
    fn occurrence_counts_match_brute_force(c in arb_collection()) {
        let a = avoidance_gf(&c, 8).unwrap();
        let dist = count_distribution_oracle(&c, 8);
        for q in 0..=8 {
            prop_assert_eq!(a.count(8, q).unwrap(), BigInt::from(dist.get(&q).copied().unwrap_or(0)));
        }
    }

    #[test]
    fn total_is_all_permutations(c in arb_collection()) {
        let a = avoidance_gf(&c, 10).unwrap();
        let ones = BiSeries::from_coeffs(10, (0..=10).map(|n| ((n, 0), BigInt::from(1).into())));
        prop_assert_eq!(a.eval_t(1), ones);
    }

    #[test]
    fn symmetries_preserve_cluster_counts(c in arb_collection()) {
        let t = cluster_counts(&c, 10, 6).totals();
        prop_assert_eq!(&cluster_counts(&c.reverse(), 10, 6).totals(), &t);
        prop_assert_eq!(&cluster_counts(&c.complement(), 10, 6).totals(), &t);
    }

    #[test]
    fn graph_invariants_ignore_pattern_order(c in arb_collection()) {
        let mut ps = c.patterns().to_vec();
        ps.reverse();
        let d = PatternCollection::new(ps).unwrap();
        let (g, h) = (build_graph(&c), build_graph(&d));
        prop_assert!(graphs_isomorphic(&g, &h).is_some());
        prop_assert_eq!(canonical_form(&g), canonical_form(&h));
        prop_assert_eq!(cache_key(&c), cache_key(&d));
    }

    #[test]
    fn equal_keys_mean_equal_counts(a in arb_perm(3..=5), b in arb_perm(3..=5)) {
        let (ca, cb) = (PatternCollection::single(a), PatternCollection::single(b));
        if cache_key(&ca) == cache_key(&cb) {
            prop_assert_eq!(cluster_counts(&ca, 11, 5).totals(), cluster_counts(&cb, 11, 5).totals());
        }
    }
}

#[test]
fn cache_hits_equal_recomputation() {
    let dir = tempfile::TempDir::new().unwrap();
    let cache = Cache::new(dir.path());
    for p in ["123", "132", "1324", "12453", "2143"] {
        let c: PatternCollection = p.parse().unwrap();
        let fresh = cluster_counts(&c, 12, 5).totals();
        assert!(cache.load(&c, 12, 5).is_none());
        assert_eq!(cache.totals(&c, 12, 5).unwrap(), fresh);
        assert_eq!(cache.load(&c, 12, 5).unwrap(), fresh);
        assert!(cache.load(&c, 12, 4).is_none());
    }
    let leftovers = std::fs::read_dir(dir.path())
        .unwrap()
        .filter(|e| e.as_ref().unwrap().file_name().to_string_lossy().ends_with(".tmp"))
        .count();
    assert_eq!(leftovers, 0);
}
