//! Emits the differential system of a monotone collection and checks it
//! against the series built from the recurrence.

use consecutive_patterns::catalog::{pi1, pi2, pi4};
use consecutive_patterns::monotone::{emit_ode_system, monotone_cluster_counts, monotone_witness, verify_ode};

fn main() {
    for c in [pi2(), pi4()] {
        let sys = emit_ode_system(&c).unwrap();
        println!("{c}:");
        print!("{}", sys.pretty());
        let order = 24;
        let counts = monotone_cluster_counts(&c, order, order).unwrap();
        let series: Vec<_> = (0..sys.vertices.len()).map(|v| counts.series(v, order)).collect();
        let report = verify_ode(&sys, &series, order).unwrap();
        for e in &report.equations {
            println!("  y_({}) checked through x^{}: {}", e.vertex, e.checked_through, e.passed());
        }
    }
    match monotone_witness(&pi1()) {
        Some(w) => println!("{}: {w}", pi1()),
        None => println!("{} is monotone", pi1()),
    }
}
