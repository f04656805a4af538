//! Prints the overlap graph of a collection as DOT.
//!
//! ```text
//! cargo run --example overlap_graph -- 1576243 13254 | dot -Tsvg > g.svg
//! ```

use consecutive_patterns::collection::PatternCollection;
use consecutive_patterns::graph::build_graph;

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let text = if args.is_empty() { "1576243\n13254".to_string() } else { args.join("\n") };
    let c: PatternCollection = text.parse().unwrap_or_else(|e| {
        eprintln!("{e}");
        std::process::exit(1)
    });
    let g = build_graph(&c);
    eprintln!("{} vertices, {} edges", g.vertices().len(), g.edges().len());
    print!("{}", g.to_dot());
}
