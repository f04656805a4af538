//! Cluster numbers from the refined recurrence, checked against brute force.

use consecutive_patterns::cluster::{cluster_counts, count_clusters_oracle, enumerate_clusters_oracle};
use consecutive_patterns::collection::collection;

fn main() {
    let c = collection(&["1324", "2143"]);
    let table = cluster_counts(&c, 10, 4);
    let totals = table.totals();
    println!("cl_{{n,q}} for {c}");
    println!("n\tq=1\tq=2\tq=3\tq=4");
    for n in 4..=10 {
        let row: Vec<String> = (1..=4).map(|q| totals.get(n, q).to_string()).collect();
        println!("{n}\t{}", row.join("\t"));
    }
    for (n, q) in [(6, 2), (8, 3), (10, 4)] {
        assert_eq!(totals.get(n, q), count_clusters_oracle(&c, n, q));
    }
    println!("agrees with enumeration");

    for cl in enumerate_clusters_oracle(&c, 6, 2) {
        println!("  {} = {:?} at offsets {:?}", cl.sigma.compact(), cl.patterns, cl.offsets);
    }
}
