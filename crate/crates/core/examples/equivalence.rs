//! Deciding strong equivalence of collections.

use consecutive_patterns::build_graph;
use consecutive_patterns::collection::collection;
use consecutive_patterns::equivalence::{
    check_theorem13, compare_collections, graphs_isomorphic, separated_set, PatternBijection,
};
use consecutive_patterns::perm::perm;
use consecutive_patterns::PatternCollection;

fn main() {
    let (a, b) = (collection(&["143265987"]), collection(&["134265897"]));
    let phi = PatternBijection::by_position(&a, &b).unwrap();
    let report = check_theorem13(&a, &b, &phi).unwrap();
    println!("{a} vs {b}: overlap-set condition {}", report.holds());
    println!(
        "graphs isomorphic: {}",
        graphs_isomorphic(&build_graph(&a), &build_graph(&b)).is_some()
    );

    let check = compare_collections(&collection(&["12354"]), &collection(&["13254"]), 9).unwrap();
    match check.first_difference {
        Some((n, q, x, y)) => println!("12354 vs 13254 differ at n = {n}, q = {q}: {x} vs {y}"),
        None => println!("12354 vs 13254 agree through n = 9"),
    }

    // Members of one separated family are pairwise equivalent.
    let family = separated_set(&perm("12"), &perm("21"), 2);
    let singles: Vec<PatternCollection> = family.into_iter().map(PatternCollection::single).collect();
    for s in &singles[1..] {
        println!("{} ~ {}: {}", singles[0], s, compare_collections(&singles[0], s, 10).unwrap().proved());
    }
}
