//! Standardization and consecutive occurrences.

use consecutive_patterns::perm::{divides, occurrences, perm, standardize};
use consecutive_patterns::Word;

fn main() {
    let w = Word::new(vec![5, 7, 3]).unwrap();
    println!("st[573] = ({})", standardize(&w).compact());

    let host = perm("3157264");
    for p in ["132", "231", "123"] {
        let pat = perm(p);
        println!(
            "({p}) in ({}): occurrences at {:?}, divides: {}",
            host.compact(),
            occurrences(&pat, &host),
            divides(&pat, &host)
        );
    }
}
