//! Single equations for `y_(1)` obtained by eliminating the other vertex.

use consecutive_patterns::catalog::pi4;
use consecutive_patterns::monotone::{
    monotone_cluster_counts, monotone_counts_from_edges, six_edge_elimination_corrected,
    six_edge_elimination_printed, two_vertex_elimination_corrected, two_vertex_elimination_printed,
    two_vertex_four_edge_data, ScalarOde,
};
use consecutive_patterns::series::BiSeries;

fn report(ode: &ScalarOde, y: &BiSeries) {
    let r = ode.check(y);
    match r.first_nonzero {
        None => println!("{}: zero through x^{}", ode.name, r.checked_through),
        Some((n, q, v)) => println!("{}: coefficient of x^{n} t^{q} is {v}", ode.name),
    }
}

fn main() {
    let y = monotone_cluster_counts(&pi4(), 30, 30).unwrap().series(0, 30);
    report(&six_edge_elimination_printed(), &y);
    report(&six_edge_elimination_corrected(), &y);

    let (vertices, edges) = two_vertex_four_edge_data();
    let y = monotone_counts_from_edges(&vertices, &edges, 30, 30).series(0, 30);
    report(&two_vertex_elimination_printed(), &y);
    report(&two_vertex_elimination_corrected(), &y);
}
