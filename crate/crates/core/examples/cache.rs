//! Cluster tables are cached under the digest of the canonical overlap
//! graph, so collections with isomorphic graphs share one entry.

use consecutive_patterns::cli::{cache_key, Cache};
use consecutive_patterns::collection::collection;

fn main() {
    let dir = std::env::temp_dir().join("cpat-cache-example");
    let cache = Cache::new(&dir);
    let a = collection(&["143265987"]);
    let b = collection(&["134265897"]);
    println!("key a = {}", cache_key(&a));
    println!("key b = {}", cache_key(&b));

    let t = cache.totals(&a, 20, 6).unwrap();
    let hit = cache.load(&b, 20, 6).expect("b shares a's entry");
    assert_eq!(t, hit);
    println!("cl_{{17,2}} = {}", hit.get(17, 2));
    println!("stored at {}", cache.path(&a, 20, 6).display());
}
