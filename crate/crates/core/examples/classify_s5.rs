use consecutive_patterns::equivalence::classify_s5;

fn main() {
    let r = classify_s5();
    println!("{} orbits, sizes {:?}", r.orbits.len(), r.orbit_sizes());
    for b in &r.buckets {
        println!("self-overlaps {:?}: {} orbits", b.overlaps, b.representatives.len());
        for class in &b.classes {
            println!("  {}", class.join(" ~ "));
        }
    }
    println!("separations (first differing cl_{{n,q}}):");
    for p in &r.pairs {
        if let Some(s) = &p.separated_by {
            println!("  {} / {}: q = {}, n = {}: {} vs {}", p.a, p.b, s.q, s.n, s.cl_a, s.cl_b);
        }
    }
}
