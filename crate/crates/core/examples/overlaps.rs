use consecutive_patterns::overlap::{enumerate_linkages, linkage_lengths, overlap_lengths};
use consecutive_patterns::perm::perm;

fn main() {
    let (a, b) = (perm("132"), perm("2143"));
    println!("overlap lengths of ({a}) then ({b}): {:?}", overlap_lengths(&a, &b));
    println!("linkage lengths: {:?}", linkage_lengths(&a, &b));
    for n in linkage_lengths(&a, &b) {
        let ls: Vec<String> = enumerate_linkages(&a, &b, n).unwrap().iter().map(|p| p.compact()).collect();
        println!("  n = {n}: {}", ls.join(" "));
    }
}
