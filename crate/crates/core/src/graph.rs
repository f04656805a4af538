//! The labeled overlap graph of a pattern collection.
//!
//! Vertices are the standardized proper overlaps occurring between pairs of
//! patterns, always including the distinguished vertex `(1)`. For each pattern
//! `pi` and each initial subword of length `k` and final subword of length
//! `k'` whose standardizations are vertices, there is an edge from the first
//! to the second labeled by the two entry sets and the length of `pi`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use serde::Serialize;

use crate::collection::PatternCollection;
use crate::perm::Permutation;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct EdgeLabel {
    pub mu_i: BTreeSet<u8>,
    pub mu_f: BTreeSet<u8>,
    pub l: usize,
}

impl EdgeLabel {
    /// Sort key `(l, mu_i, mu_f)`.
    pub fn key(&self) -> (usize, &BTreeSet<u8>, &BTreeSet<u8>) {
        (self.l, &self.mu_i, &self.mu_f)
    }
}

fn write_set(f: &mut impl fmt::Write, s: &BTreeSet<u8>) -> fmt::Result {
    f.write_char('{')?;
    for (i, v) in s.iter().enumerate() {
        if i > 0 {
            f.write_char(',')?;
        }
        write!(f, "{v}")?;
    }
    f.write_char('}')
}

impl fmt::Display for EdgeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_char('(')?;
        write_set(f, &self.mu_i)?;
        f.write_str(", ")?;
        write_set(f, &self.mu_f)?;
        write!(f, "; {})", self.l)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    pub label: EdgeLabel,
    /// Index of the originating pattern in the collection.
    pub pattern: usize,
    /// Length of the initial subword (the source vertex length).
    pub k: usize,
    /// Length of the final subword (the target vertex length).
    pub k_prime: usize,
}

#[derive(Clone, Debug)]
pub struct OverlapGraph {
    collection: PatternCollection,
    vertices: Vec<Permutation>,
    index: BTreeMap<Permutation, usize>,
    edges: Vec<Edge>,
}

fn vertex_order(a: &Permutation, b: &Permutation) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

pub fn build_graph(collection: &PatternCollection) -> OverlapGraph {
    let pats = collection.patterns();
    let mut vset: BTreeSet<Permutation> = BTreeSet::new();
    vset.insert(Permutation::one());
    for a in pats {
        for b in pats {
            for k in 1..a.len().min(b.len()) {
                let v = b.prefix(k);
                if a.suffix(k) == v {
                    vset.insert(v);
                }
            }
        }
    }
    let mut vertices: Vec<Permutation> = vset.into_iter().collect();
    vertices.sort_by(vertex_order);
    let index: BTreeMap<Permutation, usize> = vertices
        .iter()
        .enumerate()
        .map(|(i, v)| (v.clone(), i))
        .collect();

    let mut edges = Vec::new();
    for (pi_idx, pi) in pats.iter().enumerate() {
        let l = pi.len();
        let e = pi.entries();
        for k in 1..l {
            let Some(&source) = index.get(&pi.prefix(k)) else { continue };
            for kp in 1..l {
                let Some(&target) = index.get(&pi.suffix(kp)) else { continue };
                edges.push(Edge {
                    source,
                    target,
                    label: EdgeLabel {
                        mu_i: e[..k].iter().copied().collect(),
                        mu_f: e[l - kp..].iter().copied().collect(),
                        l,
                    },
                    pattern: pi_idx,
                    k,
                    k_prime: kp,
                });
            }
        }
    }
    edges.sort_by(|a, b| {
        (a.source, a.target, a.label.key(), a.pattern, a.k, a.k_prime).cmp(&(
            b.source,
            b.target,
            b.label.key(),
            b.pattern,
            b.k,
            b.k_prime,
        ))
    });
    OverlapGraph {
        collection: collection.clone(),
        vertices,
        index,
        edges,
    }
}

impl OverlapGraph {
    pub fn collection(&self) -> &PatternCollection {
        &self.collection
    }

    /// Vertex labels sorted by length, then lexicographically. Index 0 is `(1)`.
    pub fn vertices(&self) -> &[Permutation] {
        &self.vertices
    }

    pub fn vertex(&self, id: usize) -> &Permutation {
        &self.vertices[id]
    }

    pub fn vertex_id(&self, v: &Permutation) -> Option<usize> {
        self.index.get(v).copied()
    }

    /// The id of `(1)`.
    pub fn distinguished(&self) -> usize {
        0
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn out_edges(&self, v: usize) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(move |e| e.source == v)
    }

    pub fn edge_pattern(&self, e: &Edge) -> &Permutation {
        self.collection.get(e.pattern)
    }

    /// Deterministic DOT rendering; nodes are named by their labels.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph overlap {\n");
        for v in &self.vertices {
            let _ = writeln!(s, "  \"{v}\";");
        }
        for e in &self.edges {
            let _ = writeln!(
                s,
                "  \"{}\" -> \"{}\" [label=\"{}\"];",
                self.vertices[e.source], self.vertices[e.target], e.label
            );
        }
        s.push_str("}\n");
        s
    }
}

pub fn graph_to_dot(g: &OverlapGraph) -> String {
    g.to_dot()
}
