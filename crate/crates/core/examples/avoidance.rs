//! Counting permutations by consecutive occurrences.

use consecutive_patterns::collection::collection;
use consecutive_patterns::series::avoidance_gf;

fn main() {
    let c = collection(&["123"]);
    let gf = avoidance_gf(&c, 12).unwrap();
    print!("{}", gf.to_alpha_n_tsv().unwrap());

    // alpha_{n,q}: permutations of length 7 with exactly q occurrences.
    for q in 0..=5 {
        println!("alpha_{{7,{q}}} = {}", gf.count(7, q).unwrap());
    }
}
