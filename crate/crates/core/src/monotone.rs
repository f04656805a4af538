//! Monotone collections: every realized overlap of length `k` uses only the
//! entries `1..=k` of the right-hand pattern. For them the initial values of
//! a cluster are forced, the refined recurrence collapses to one binomial per
//! edge, and the cluster generating functions of the vertices satisfy a
//! linear system of ODEs with monomial coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::cluster::{Binomials, ClusterTotals, LinkageProfile};
use crate::collection::PatternCollection;
use crate::equivalence::{check_theorem13, PatternBijection};
use crate::error::{Error, Result};
use crate::graph::{build_graph, OverlapGraph};
use crate::overlap::overlap_lengths;
use crate::perm::Permutation;
use crate::series::{factorial, BiSeries};

/// An overlap violating monotonicity: `pi` followed by `pi_prime` overlapping
/// in `k` entries, where the first `k` entries of `pi_prime` include `entry > k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonotoneWitness {
    pub pi: Permutation,
    pub pi_prime: Permutation,
    pub k: usize,
    pub entry: u8,
}

impl fmt::Display for MonotoneWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}) followed by ({}) overlap in {} entries, but the overlapped prefix contains {}",
            self.pi, self.pi_prime, self.k, self.entry
        )
    }
}

/// The first violation of monotonicity, scanning ordered pairs (self-pairs
/// included) in collection order and overlap lengths increasingly.
pub fn monotone_witness(c: &PatternCollection) -> Option<MonotoneWitness> {
    for a in c.patterns() {
        for b in c.patterns() {
            for k in overlap_lengths(a, b) {
                let entry = *b.entries()[..k].iter().max().unwrap();
                if entry as usize > k {
                    return Some(MonotoneWitness {
                        pi: a.clone(),
                        pi_prime: b.clone(),
                        k,
                        entry,
                    });
                }
            }
        }
    }
    None
}

pub fn is_monotone(c: &PatternCollection) -> bool {
    monotone_witness(c).is_none()
}

fn require_monotone(c: &PatternCollection) -> Result<()> {
    match monotone_witness(c) {
        Some(w) => Err(Error::NotMonotone(w)),
        None => Ok(()),
    }
}

/// Sufficient condition for monotone collections: `phi` preserves lengths
/// and linkage lengths, and for every overlap of length `k` between `pi`
/// and `pi'` the largest of the last `k` entries of `pi`.
pub fn check_monotone_corollary(
    pi1: &PatternCollection,
    pi2: &PatternCollection,
    phi: &PatternBijection,
) -> Result<bool> {
    require_monotone(pi1)?;
    require_monotone(pi2)?;
    let r = check_theorem13(pi1, pi2, phi)?;
    if !(r.lengths && r.linkages) {
        return Ok(false);
    }
    let tail_max = |p: &Permutation, k: usize| *p.entries()[p.len() - k..].iter().max().unwrap();
    for p in pi1.patterns() {
        for pp in pi1.patterns() {
            let q = phi.image(p);
            if overlap_lengths(p, pp).into_iter().any(|k| tail_max(p, k) != tail_max(q, k)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Recurrence data of one edge `source -> target`: the pattern length `l`,
/// the target length `k`, and `m`, the largest entry among the first
/// `|source|` and last `k` entries of the pattern.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonotoneEdge {
    pub source: usize,
    pub target: usize,
    pub l: usize,
    pub k: usize,
    pub m: usize,
}

pub fn monotone_recurrence_data(g: &OverlapGraph) -> Result<Vec<MonotoneEdge>> {
    require_monotone(g.collection())?;
    Ok(g.edges()
        .iter()
        .map(|e| MonotoneEdge {
            source: e.source,
            target: e.target,
            l: e.label.l,
            k: e.k_prime,
            m: LinkageProfile::for_edge(g, e).max_value() as usize,
        })
        .collect())
}

/// Per-vertex totals `cl_{v,n,q}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexCounts {
    pub vertices: Vec<Permutation>,
    pub per_vertex: Vec<ClusterTotals>,
}

impl VertexCounts {
    pub fn totals(&self) -> &ClusterTotals {
        &self.per_vertex[0]
    }

    /// `y_v = sum cl_{v,n,q} x^n t^q / n!` through `x^order`, including the
    /// 0-cluster term `x` at the distinguished vertex.
    pub fn series(&self, vertex: usize, order: usize) -> BiSeries {
        let counts = self.per_vertex[vertex]
            .counts
            .iter()
            .map(|(&k, c)| (k, BigInt::from(c.clone())));
        BiSeries::from_counts(order, counts)
    }
}

/// `cl_{v,n,q} = sum_j C(n - m_j, l_j - m_j) cl_{v_j, n - l_j + k_j, q - 1}`
/// over the edges `v -> v_j`, from `cl_{(1),1,0} = 1`.
pub fn monotone_counts_from_edges(
    vertices: &[Permutation],
    edges: &[MonotoneEdge],
    n_max: usize,
    q_max: usize,
) -> VertexCounts {
    let nv = vertices.len();
    let binom = Binomials::new(n_max);
    let mut cur: Vec<Vec<BigUint>> = vec![vec![BigUint::zero(); n_max + 1]; nv];
    let mut per_vertex: Vec<BTreeMap<(usize, usize), BigUint>> = vec![BTreeMap::new(); nv];
    if n_max >= 1 {
        cur[0][1] = BigUint::one();
        per_vertex[0].insert((1, 0), BigUint::one());
    }
    for q in 1..=q_max {
        let mut next = vec![vec![BigUint::zero(); n_max + 1]; nv];
        for e in edges {
            for n in 1..=n_max {
                let Some(n_prev) = (n + e.k).checked_sub(e.l) else { continue };
                if n_prev == 0 || cur[e.target][n_prev].is_zero() {
                    continue;
                }
                let b = binom.get(n as i64 - e.m as i64, e.l as i64 - e.m as i64);
                if !b.is_zero() {
                    next[e.source][n] += b * &cur[e.target][n_prev];
                }
            }
        }
        for (v, row) in next.iter().enumerate() {
            for (n, c) in row.iter().enumerate() {
                if !c.is_zero() {
                    per_vertex[v].insert((n, q), c.clone());
                }
            }
        }
        cur = next;
    }
    VertexCounts {
        vertices: vertices.to_vec(),
        per_vertex: per_vertex
            .into_iter()
            .map(|counts| ClusterTotals {
                n_max,
                q_max,
                counts,
            })
            .collect(),
    }
}

pub fn monotone_cluster_counts(c: &PatternCollection, n_max: usize, q_max: usize) -> Result<VertexCounts> {
    let g = build_graph(c);
    let edges = monotone_recurrence_data(&g)?;
    Ok(monotone_counts_from_edges(g.vertices(), &edges, n_max, q_max))
}

/// The operator `y -> d^a/dx^a ( x^b / b! * d^c/dx^c y_target )`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OdeTerm {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub target: usize,
}

impl OdeTerm {
    pub fn apply(&self, y: &BiSeries) -> BiSeries {
        let inner = y.derivative_n(self.c).mul_x_pow(self.b);
        let inv = BigRational::new(BigInt::one(), BigInt::from(factorial(self.b)));
        inner.scale(&inv).derivative_n(self.a)
    }
}

/// `d^{lhs_order} y_vertex = t * sum(rhs)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OdeEquation {
    pub vertex: usize,
    pub lhs_order: usize,
    pub rhs: Vec<OdeTerm>,
}

/// Initial coefficients `cl_{v,n,q}` for `n < lhs_order`, which the equation
/// leaves undetermined.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryData {
    pub vertex: usize,
    pub counts: Vec<(usize, usize, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OdeSystem {
    pub vertices: Vec<Permutation>,
    pub equations: Vec<OdeEquation>,
    pub boundary: Vec<BoundaryData>,
}

/// One equation per vertex, with `m_v` the largest `m` over the outgoing
/// edges of `v` and one term `(m_v - m, l - m, k, target)` per edge.
pub fn emit_ode_system(c: &PatternCollection) -> Result<OdeSystem> {
    let g = build_graph(c);
    let edges = monotone_recurrence_data(&g)?;
    system_from_edges(g.vertices(), &edges)
}

/// As [`emit_ode_system`] for an explicit list of edges.
pub fn system_from_edges(vertices: &[Permutation], edges: &[MonotoneEdge]) -> Result<OdeSystem> {
    if edges.is_empty() {
        return Err(Error::Config("the overlap graph has no edges".into()));
    }
    let mut equations = Vec::new();
    let mut max_order = 0;
    for v in 0..vertices.len() {
        let out: Vec<&MonotoneEdge> = edges.iter().filter(|e| e.source == v).collect();
        let Some(m_v) = out.iter().map(|e| e.m).max() else { continue };
        let mut rhs: Vec<OdeTerm> = out
            .iter()
            .map(|e| OdeTerm {
                a: m_v - e.m,
                b: e.l - e.m,
                c: e.k,
                target: e.target,
            })
            .collect();
        rhs.sort();
        max_order = max_order.max(m_v);
        equations.push(OdeEquation {
            vertex: v,
            lhs_order: m_v,
            rhs,
        });
    }
    let counts = monotone_counts_from_edges(vertices, edges, max_order, max_order);
    let boundary = equations
        .iter()
        .map(|eq| BoundaryData {
            vertex: eq.vertex,
            counts: counts.per_vertex[eq.vertex]
                .counts
                .iter()
                .filter(|((n, _), _)| *n < eq.lhs_order)
                .map(|(&(n, q), c)| (n, q, c.to_string()))
                .collect(),
        })
        .collect();
    Ok(OdeSystem {
        vertices: vertices.to_vec(),
        equations,
        boundary,
    })
}

/// The single equation for a monotone pattern, with `y(0) = 0`, `y'(0) = 1`
/// and vanishing higher initial derivatives below the equation's order.
pub fn emit_single_pattern_ode(pattern: &Permutation) -> Result<OdeSystem> {
    let c = PatternCollection::single(pattern.clone());
    let full = emit_ode_system(&c)?;
    let ks = overlap_lengths(pattern, pattern);
    let l = pattern.len();
    let m_of = |k: usize| *pattern.entries()[l - k..].iter().max().unwrap() as usize;
    let m = ks.iter().map(|&k| m_of(k)).max().unwrap();
    let mut rhs: Vec<OdeTerm> = ks
        .iter()
        .map(|&k| OdeTerm {
            a: m - m_of(k),
            b: l - m_of(k),
            c: k,
            target: 0,
        })
        .collect();
    rhs.sort();
    Ok(OdeSystem {
        vertices: vec![Permutation::one()],
        equations: vec![OdeEquation {
            vertex: 0,
            lhs_order: m,
            rhs,
        }],
        boundary: vec![BoundaryData {
            vertex: 0,
            counts: full.boundary[0].counts.clone(),
        }],
    })
}

fn vertex_name(v: &Permutation) -> String {
    format!("y_({})", v.compact())
}

fn render_term(t: &OdeTerm, vertices: &[Permutation]) -> String {
    let mut s = vertex_name(&vertices[t.target]);
    if t.c > 0 {
        s = format!("{s}^({})", t.c);
    }
    s = match t.b {
        0 => s,
        1 => format!("x {s}"),
        b => format!("x^{b}/{b}! {s}"),
    };
    if t.a > 0 {
        s = format!("({s})^({})", t.a);
    }
    s
}

impl OdeSystem {
    /// Plain-text rendering, one equation per line.
    pub fn pretty(&self) -> String {
        let mut out = String::new();
        for eq in &self.equations {
            let terms: Vec<String> = eq.rhs.iter().map(|t| render_term(t, &self.vertices)).collect();
            out.push_str(&format!(
                "{}^({}) = t ({})\n",
                vertex_name(&self.vertices[eq.vertex]),
                eq.lhs_order,
                terms.join(" + ")
            ));
        }
        out
    }

    pub fn max_lhs_order(&self) -> usize {
        self.equations.iter().map(|e| e.lhs_order).max().unwrap_or(0)
    }

    pub fn max_monomial_degree(&self) -> usize {
        self.equations
            .iter()
            .flat_map(|e| e.rhs.iter().map(|t| t.b))
            .max()
            .unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub n: usize,
    pub q: usize,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquationCheck {
    pub vertex: String,
    pub checked_through: usize,
    pub first_mismatch: Option<Mismatch>,
    pub boundary_ok: bool,
}

impl EquationCheck {
    pub fn passed(&self) -> bool {
        self.first_mismatch.is_none() && self.boundary_ok
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OdeReport {
    pub equations: Vec<EquationCheck>,
}

impl OdeReport {
    pub fn passed(&self) -> bool {
        self.equations.iter().all(EquationCheck::passed)
    }
}

fn first_mismatch(lhs: &BiSeries, rhs: &BiSeries) -> Option<Mismatch> {
    let diff = lhs - rhs;
    let ((n, q), _) = diff.terms().next()?;
    Some(Mismatch {
        n,
        q,
        lhs: lhs.coeff(n, q).to_string(),
        rhs: rhs.coeff(n, q).to_string(),
    })
}

/// Expands both sides of every equation with exact arithmetic and compares
/// them through `x^(order - m_v)`; also compares the boundary data with
/// the series. `series[v]` must be known through `x^order`.
pub fn verify_ode(system: &OdeSystem, series: &[BiSeries], order: usize) -> Result<OdeReport> {
    let needed = system.max_lhs_order() + system.max_monomial_degree();
    if order < needed {
        return Err(Error::InsufficientOrder {
            needed,
            available: order,
        });
    }
    if let Some(s) = series.iter().find(|s| s.order() < order) {
        return Err(Error::InsufficientOrder {
            needed: order,
            available: s.order(),
        });
    }
    let mut checks = Vec::new();
    for eq in &system.equations {
        let through = order - eq.lhs_order;
        let lhs = series[eq.vertex].derivative_n(eq.lhs_order).truncate(through);
        let mut rhs = BiSeries::zero(through);
        for t in &eq.rhs {
            rhs = &rhs + &t.apply(&series[t.target]).truncate(through);
        }
        let rhs = rhs.mul_t_pow(1);
        let boundary_ok = system
            .boundary
            .iter()
            .filter(|b| b.vertex == eq.vertex)
            .flat_map(|b| b.counts.iter())
            .all(|(n, q, c)| {
                series[eq.vertex]
                    .count(*n, *q)
                    .is_ok_and(|v| v.to_string() == *c)
            });
        checks.push(EquationCheck {
            vertex: system.vertices[eq.vertex].compact(),
            checked_through: through,
            first_mismatch: first_mismatch(&lhs, &rhs),
            boundary_ok,
        });
    }
    Ok(OdeReport { equations: checks })
}

/// `coeff * t^t_pow * x^x_pow * d^a/dx^a ( x^b * d^c/dx^c y )`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScalarTerm {
    pub coeff: (i64, i64),
    pub t_pow: usize,
    pub x_pow: usize,
    pub a: usize,
    pub b: usize,
    pub c: usize,
}

const fn term(coeff: (i64, i64), t_pow: usize, x_pow: usize, a: usize, b: usize, c: usize) -> ScalarTerm {
    ScalarTerm {
        coeff,
        t_pow,
        x_pow,
        a,
        b,
        c,
    }
}

/// A single linear ODE `sum terms = 0` for one generating function.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScalarOde {
    pub name: String,
    pub terms: Vec<ScalarTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScalarOdeCheck {
    pub checked_through: usize,
    /// First nonzero coefficient `(n, q, value)` of the left-hand side.
    pub first_nonzero: Option<(usize, usize, String)>,
}

impl ScalarOdeCheck {
    pub fn passed(&self) -> bool {
        self.first_nonzero.is_none()
    }
}

impl ScalarOde {
    /// Evaluates the left-hand side on `y` and reports its first nonzero
    /// coefficient within the range where every term is known.
    pub fn check(&self, y: &BiSeries) -> ScalarOdeCheck {
        let n = y.order();
        let through = self
            .terms
            .iter()
            .map(|t| (n + t.b + t.x_pow).saturating_sub(t.c + t.a))
            .min()
            .unwrap_or(n);
        let mut acc = BiSeries::zero(through);
        for t in &self.terms {
            let c = BigRational::new(BigInt::from(t.coeff.0), BigInt::from(t.coeff.1));
            let s = y
                .derivative_n(t.c)
                .mul_x_pow(t.b)
                .derivative_n(t.a)
                .mul_x_pow(t.x_pow)
                .mul_t_pow(t.t_pow)
                .scale(&c);
            acc = &acc + &s.truncate(through);
        }
        let first_nonzero = acc.terms().next().map(|((n, q), v)| (n, q, v.to_string()));
        ScalarOdeCheck {
            checked_through: through,
            first_nonzero,
        }
    }
}

/// Hand elimination of `y_(132)` from the system of `{1576243, 13254}`
/// when only the four edges `({1},{3};7)`, `({1},{4};5)`, `({1},{2,3,4};7)`,
/// `({1,2,3},{4};5)` are kept, written as
/// `6(x^3 y^(5) - 3x^2 y^(4) - t x^3 (x^4/4! y')'' + 3t x^2 (x^4/4! y')'
/// - t x^3 (x y')' + 3t x^3 y') - t x^7 y' = 0`.
pub fn two_vertex_elimination_printed() -> ScalarOde {
    ScalarOde {
        name: "two-vertex elimination, t x^7 y' form".into(),
        terms: vec![
            term((6, 1), 0, 3, 0, 0, 5),
            term((-18, 1), 0, 2, 0, 0, 4),
            term((-6, 24), 1, 3, 2, 4, 1),
            term((18, 24), 1, 2, 1, 4, 1),
            term((-6, 1), 1, 3, 1, 1, 1),
            term((18, 1), 1, 3, 0, 0, 1),
            term((-1, 1), 1, 7, 0, 0, 1),
        ],
    }
}

/// The same elimination with the last term `t^2 x^7 y'`, which is what
/// dividing by `x^3/3!`, differentiating and substituting actually gives.
pub fn two_vertex_elimination_corrected() -> ScalarOde {
    let mut ode = two_vertex_elimination_printed();
    ode.name = "two-vertex elimination, t^2 x^7 y' form".into();
    ode.terms[6].t_pow = 2;
    ode
}

/// Elimination for `{12354, 132465}` written as
/// `y^(9) - t(xy')^(5) - t y^(6) - t(xy')^(4) + t^2(xy')''' - t^2(xy')''
/// + t^3(xy')' - t^2(xy')' = 0`.
pub fn six_edge_elimination_printed() -> ScalarOde {
    ScalarOde {
        name: "six-edge elimination, eight-term form".into(),
        terms: vec![
            term((1, 1), 0, 0, 9, 0, 0),
            term((-1, 1), 1, 0, 5, 1, 1),
            term((-1, 1), 1, 0, 6, 0, 0),
            term((-1, 1), 1, 0, 4, 1, 1),
            term((1, 1), 2, 0, 3, 1, 1),
            term((-1, 1), 2, 0, 2, 1, 1),
            term((1, 1), 3, 0, 1, 1, 1),
            term((-1, 1), 2, 0, 1, 1, 1),
        ],
    }
}

/// `u^(8) - t(xu)^(5) - t(xu)^(4) - t u^(5) = 0` with `u = y'`.
pub fn six_edge_elimination_corrected() -> ScalarOde {
    ScalarOde {
        name: "six-edge elimination, four-term form".into(),
        terms: vec![
            term((1, 1), 0, 0, 9, 0, 0),
            term((-1, 1), 1, 0, 5, 1, 1),
            term((-1, 1), 1, 0, 4, 1, 1),
            term((-1, 1), 1, 0, 6, 0, 0),
        ],
    }
}

/// The four-edge system of `{1576243, 13254}` that omits the edges ending in
/// the final subword `254` of `13254`.
pub fn two_vertex_four_edge_data() -> (Vec<Permutation>, Vec<MonotoneEdge>) {
    let e = |source, target, l, k, m| MonotoneEdge {
        source,
        target,
        l,
        k,
        m,
    };
    (
        vec![Permutation::one(), crate::perm::perm("132")],
        vec![e(0, 0, 7, 1, 3), e(0, 0, 5, 1, 4), e(0, 1, 7, 3, 4), e(1, 0, 5, 1, 4)],
    )
}
