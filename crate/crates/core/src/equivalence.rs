//! Strong c-Wilf equivalence: the overlap-set sufficient condition, overlap
//! graph isomorphism, direct comparison of generating functions, separated
//! pattern families, and the classification of length-5 patterns.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use crate::cluster::{cluster_counts_single_pattern, ClusterTotals};
use crate::collection::PatternCollection;
use crate::error::{Error, Result};
use crate::graph::{EdgeLabel, OverlapGraph};
use crate::overlap::{linkage_lengths, overlap_lengths, self_overlaps};
use crate::perm::{all_permutations, divides, Permutation};
use crate::series::avoidance_gf;

/// A bijection between the patterns of two collections.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PatternBijection {
    pub mapping: Vec<(Permutation, Permutation)>,
}

impl PatternBijection {
    pub fn new(
        pi1: &PatternCollection,
        pi2: &PatternCollection,
        mapping: Vec<(Permutation, Permutation)>,
    ) -> Result<Self> {
        if pi1.len() != pi2.len() || mapping.len() != pi1.len() {
            return Err(Error::InvalidBijection(format!(
                "collections of sizes {} and {} with {} pairs",
                pi1.len(),
                pi2.len(),
                mapping.len()
            )));
        }
        let dom: BTreeSet<&Permutation> = mapping.iter().map(|(a, _)| a).collect();
        let cod: BTreeSet<&Permutation> = mapping.iter().map(|(_, b)| b).collect();
        let want_dom: BTreeSet<&Permutation> = pi1.patterns().iter().collect();
        let want_cod: BTreeSet<&Permutation> = pi2.patterns().iter().collect();
        if dom != want_dom || cod != want_cod {
            return Err(Error::InvalidBijection(
                "mapping is not a bijection between the two collections".into(),
            ));
        }
        Ok(PatternBijection { mapping })
    }

    /// Pairs the i-th pattern of `pi1` with the i-th pattern of `pi2`.
    pub fn by_position(pi1: &PatternCollection, pi2: &PatternCollection) -> Result<Self> {
        let mapping = pi1
            .patterns()
            .iter()
            .cloned()
            .zip(pi2.patterns().iter().cloned())
            .collect();
        PatternBijection::new(pi1, pi2, mapping)
    }

    pub fn image(&self, p: &Permutation) -> &Permutation {
        &self.mapping.iter().find(|(a, _)| a == p).unwrap().1
    }
}

/// Outcome of the three checks, with a description of every failure.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Theorem13Report {
    pub lengths: bool,
    pub linkages: bool,
    pub overlap_sets: bool,
    pub failures: Vec<String>,
}

impl Theorem13Report {
    pub fn holds(&self) -> bool {
        self.lengths && self.linkages && self.overlap_sets
    }
}

fn entry_set(e: &[u8]) -> BTreeSet<u8> {
    e.iter().copied().collect()
}

/// Checks that `phi` preserves lengths, linkage lengths of every ordered
/// pair (self-pairs included), and for every overlap of length `k` the sets
/// of the last `k` entries of the left pattern and the first `k` entries of
/// the right one.
pub fn check_theorem13(
    pi1: &PatternCollection,
    pi2: &PatternCollection,
    phi: &PatternBijection,
) -> Result<Theorem13Report> {
    PatternBijection::new(pi1, pi2, phi.mapping.clone())?;
    let mut r = Theorem13Report {
        lengths: true,
        linkages: true,
        overlap_sets: true,
        failures: Vec::new(),
    };
    for (a, b) in &phi.mapping {
        if a.len() != b.len() {
            r.lengths = false;
            r.failures.push(format!("({a}) has length {}, its image ({b}) {}", a.len(), b.len()));
        }
    }
    if !r.lengths {
        return Ok(r);
    }
    for p in pi1.patterns() {
        for pp in pi1.patterns() {
            let (q, qq) = (phi.image(p), phi.image(pp));
            let (la, lb) = (linkage_lengths(p, pp), linkage_lengths(q, qq));
            if la != lb {
                r.linkages = false;
                r.failures.push(format!(
                    "linkage lengths of (({p}), ({pp})) are {la:?} but of (({q}), ({qq})) are {lb:?}"
                ));
            }
            let l = p.len();
            for k in overlap_lengths(p, pp) {
                let fin = entry_set(&p.entries()[l - k..]);
                let fin_img = entry_set(&q.entries()[l - k..]);
                let ini = entry_set(&pp.entries()[..k]);
                let ini_img = entry_set(&qq.entries()[..k]);
                if fin != fin_img || ini != ini_img {
                    r.overlap_sets = false;
                    r.failures.push(format!(
                        "{k}-overlap of (({p}), ({pp})): entry sets {fin:?}/{ini:?} map to {fin_img:?}/{ini_img:?}"
                    ));
                }
            }
        }
    }
    Ok(r)
}

/// Searches all bijections between the collections for one passing
/// [`check_theorem13`].
pub fn find_theorem13_bijection(
    pi1: &PatternCollection,
    pi2: &PatternCollection,
) -> Option<PatternBijection> {
    if pi1.len() != pi2.len() {
        return None;
    }
    fn search(
        pi1: &PatternCollection,
        pi2: &PatternCollection,
        used: &mut Vec<bool>,
        cur: &mut Vec<(Permutation, Permutation)>,
    ) -> Option<PatternBijection> {
        let i = cur.len();
        if i == pi1.len() {
            let phi = PatternBijection {
                mapping: cur.clone(),
            };
            return check_theorem13(pi1, pi2, &phi).ok()?.holds().then_some(phi);
        }
        let a = pi1.get(i);
        for (j, b) in pi2.patterns().iter().enumerate() {
            if used[j] || a.len() != b.len() || self_overlaps(a) != self_overlaps(b) {
                continue;
            }
            used[j] = true;
            cur.push((a.clone(), b.clone()));
            if let Some(found) = search(pi1, pi2, used, cur) {
                return Some(found);
            }
            cur.pop();
            used[j] = false;
        }
        None
    }
    search(pi1, pi2, &mut vec![false; pi2.len()], &mut Vec::new())
}

type LabelBag = BTreeMap<EdgeLabel, usize>;

fn edge_bags(g: &OverlapGraph) -> BTreeMap<(usize, usize), LabelBag> {
    let mut bags: BTreeMap<(usize, usize), LabelBag> = BTreeMap::new();
    for e in g.edges() {
        *bags
            .entry((e.source, e.target))
            .or_default()
            .entry(e.label.clone())
            .or_default() += 1;
    }
    bags
}

/// Isomorphism-invariant description of a vertex: its labeled out-, in- and
/// loop edges.
fn vertex_signature(g: &OverlapGraph, v: usize) -> (bool, Vec<EdgeLabel>, Vec<EdgeLabel>, Vec<EdgeLabel>) {
    let mut out = Vec::new();
    let mut inn = Vec::new();
    let mut loops = Vec::new();
    for e in g.edges() {
        if e.source == v {
            out.push(e.label.clone());
        }
        if e.target == v {
            inn.push(e.label.clone());
        }
        if e.source == v && e.target == v {
            loops.push(e.label.clone());
        }
    }
    out.sort();
    inn.sort();
    loops.sort();
    (v != g.distinguished(), out, inn, loops)
}

/// A vertex bijection `map[v1] = v2` fixing the distinguished vertex and
/// carrying the labeled edge multiset of `g1` onto that of `g2`. Vertex
/// labels are ignored.
pub fn graphs_isomorphic(g1: &OverlapGraph, g2: &OverlapGraph) -> Option<Vec<usize>> {
    let n = g1.vertices().len();
    if n != g2.vertices().len() || g1.edges().len() != g2.edges().len() {
        return None;
    }
    let sig1: Vec<_> = (0..n).map(|v| vertex_signature(g1, v)).collect();
    let sig2: Vec<_> = (0..n).map(|v| vertex_signature(g2, v)).collect();
    let (b1, b2) = (edge_bags(g1), edge_bags(g2));
    let empty = LabelBag::new();

    fn extend(
        v: usize,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        ctx: &(
            &[(bool, Vec<EdgeLabel>, Vec<EdgeLabel>, Vec<EdgeLabel>)],
            &[(bool, Vec<EdgeLabel>, Vec<EdgeLabel>, Vec<EdgeLabel>)],
            &BTreeMap<(usize, usize), LabelBag>,
            &BTreeMap<(usize, usize), LabelBag>,
            &LabelBag,
        ),
    ) -> bool {
        let (sig1, sig2, b1, b2, empty) = *ctx;
        let n = sig1.len();
        if v == n {
            return true;
        }
        for w in 0..n {
            if used[w] || sig1[v] != sig2[w] || (v == 0) != (w == 0) {
                continue;
            }
            map[v] = w;
            let consistent = (0..=v).all(|u| {
                let fwd = b1.get(&(v, u)).unwrap_or(empty) == b2.get(&(w, map[u])).unwrap_or(empty);
                let back = b1.get(&(u, v)).unwrap_or(empty) == b2.get(&(map[u], w)).unwrap_or(empty);
                fwd && back
            });
            if consistent {
                used[w] = true;
                if extend(v + 1, map, used, ctx) {
                    return true;
                }
                used[w] = false;
            }
        }
        false
    }

    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    extend(0, &mut map, &mut used, &(&sig1, &sig2, &b1, &b2, &empty)).then_some(map)
}

/// A text form of the graph that depends only on its isomorphism class:
/// the lexicographically least edge listing over all vertex numberings that
/// put the distinguished vertex first and respect vertex signatures.
pub fn canonical_form(g: &OverlapGraph) -> String {
    let n = g.vertices().len();
    let sigs: Vec<_> = (0..n).map(|v| vertex_signature(g, v)).collect();
    let mut classes: BTreeMap<_, Vec<usize>> = BTreeMap::new();
    for (v, s) in sigs.iter().enumerate() {
        classes.entry(s.clone()).or_default().push(v);
    }
    let classes: Vec<Vec<usize>> = classes.into_values().collect();

    let encode = |pos: &[usize]| -> String {
        let mut edges: Vec<(usize, usize, String)> = g
            .edges()
            .iter()
            .map(|e| (pos[e.source], pos[e.target], e.label.to_string()))
            .collect();
        edges.sort();
        let mut s = format!("vertices={n};");
        for (a, b, l) in edges {
            s.push_str(&format!("{a}>{b}:{l};"));
        }
        s
    };

    // Enumerate orderings class by class; positions are assigned in class order.
    fn walk(
        classes: &[Vec<usize>],
        ci: usize,
        next_pos: usize,
        pos: &mut Vec<usize>,
        best: &mut Option<String>,
        encode: &dyn Fn(&[usize]) -> String,
    ) {
        if ci == classes.len() {
            let s = encode(pos);
            if best.as_ref().is_none_or(|b| s < *b) {
                *best = Some(s);
            }
            return;
        }
        let mut members = classes[ci].clone();
        members.sort_unstable();
        loop {
            for (i, &v) in members.iter().enumerate() {
                pos[v] = next_pos + i;
            }
            walk(classes, ci + 1, next_pos + members.len(), pos, best, encode);
            if !next_perm(&mut members) {
                break;
            }
        }
    }
    fn next_perm(v: &mut [usize]) -> bool {
        let n = v.len();
        if n < 2 {
            return false;
        }
        let mut i = n - 1;
        while i > 0 && v[i - 1] >= v[i] {
            i -= 1;
        }
        if i == 0 {
            return false;
        }
        let mut j = n - 1;
        while v[j] <= v[i - 1] {
            j -= 1;
        }
        v.swap(i - 1, j);
        v[i..].reverse();
        true
    }

    let mut pos = vec![0; n];
    let mut best = None;
    walk(&classes, 0, 0, &mut pos, &mut best, &encode);
    best.unwrap()
}

/// Result of comparing two collections' occurrence generating functions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivalenceCheck {
    /// Order through which the generating functions were compared.
    pub order: usize,
    pub equal_to_order: bool,
    /// First `(n, q)` where the counts differ, with both counts.
    pub first_difference: Option<(usize, usize, String, String)>,
    pub theorem13: bool,
    pub graphs_isomorphic: bool,
}

impl EquivalenceCheck {
    /// Whether equivalence is proved rather than observed to finite order.
    pub fn proved(&self) -> bool {
        self.equal_to_order && (self.theorem13 || self.graphs_isomorphic)
    }
}

/// Compares `alpha_{n,q}` of the two collections for all `n <= order`.
pub fn verify_strong_equivalence(
    pi1: &PatternCollection,
    pi2: &PatternCollection,
    order: usize,
) -> Result<bool> {
    Ok(compare_collections(pi1, pi2, order)?.equal_to_order)
}

pub fn compare_collections(
    pi1: &PatternCollection,
    pi2: &PatternCollection,
    order: usize,
) -> Result<EquivalenceCheck> {
    let (a, b) = rayon::join(|| avoidance_gf(pi1, order), || avoidance_gf(pi2, order));
    let (a, b) = (a?, b?);
    let ca = a.counts()?;
    let cb = b.counts()?;
    let keys: BTreeSet<_> = ca.keys().chain(cb.keys()).copied().collect();
    let first_difference = keys.into_iter().find_map(|k| {
        let (x, y) = (ca.get(&k).cloned().unwrap_or_default(), cb.get(&k).cloned().unwrap_or_default());
        (x != y).then(|| (k.0, k.1, x.to_string(), y.to_string()))
    });
    let g1 = crate::graph::build_graph(pi1);
    let g2 = crate::graph::build_graph(pi2);
    Ok(EquivalenceCheck {
        order,
        equal_to_order: first_difference.is_none(),
        first_difference,
        theorem13: find_theorem13_bijection(pi1, pi2).is_some(),
        graphs_isomorphic: graphs_isomorphic(&g1, &g2).is_some(),
    })
}

/// `beta` avoids `(alpha, k+1)` and `alpha` avoids `(k'+1, beta)`, where
/// `k`, `k'` are the lengths of `alpha`, `beta`.
pub fn separation_property(alpha: &Permutation, beta: &Permutation) -> bool {
    let k = alpha.len();
    let kp = beta.len();
    let mut a = alpha.entries().to_vec();
    a.push(k as u8 + 1);
    let mut b = vec![kp as u8 + 1];
    b.extend_from_slice(beta.entries());
    let a = Permutation::new(a).unwrap();
    let b = Permutation::new(b).unwrap();
    !divides(&a, beta) && !divides(&b, alpha)
}

/// The patterns of length `k + l + k'` made of `1..=k` arranged like
/// `alpha`, then any arrangement of the `l` largest values, then
/// `k+1..=k+k'` arranged like `beta`. Lexicographic order.
pub fn separated_set(alpha: &Permutation, beta: &Permutation, l: usize) -> Vec<Permutation> {
    let (k, kp) = (alpha.len(), beta.len());
    let top = (k + kp) as u8;
    all_permutations(l)
        .map(|mid| {
            let mut e: Vec<u8> = alpha.entries().to_vec();
            e.extend(mid.entries().iter().map(|&m| m + top));
            e.extend(beta.entries().iter().map(|&b| b + k as u8));
            Permutation::new(e).unwrap()
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Orbit {
    pub representative: String,
    pub members: Vec<String>,
    /// Nontrivial self-overlap lengths (`k >= 2`).
    pub overlaps: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Bucket {
    pub overlaps: Vec<usize>,
    pub representatives: Vec<String>,
    /// Classes of representatives proved equivalent; singletons included.
    pub classes: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairVerdict {
    pub a: String,
    pub b: String,
    pub equivalent: bool,
    /// Orbit members `(a', b')` for which the overlap-set condition holds.
    pub proof: Option<(String, String)>,
    /// Smallest `(q, n)` with `cl_{n,q}` different, and the two counts.
    pub separated_by: Option<Separation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Separation {
    pub n: usize,
    pub q: usize,
    pub cl_a: String,
    pub cl_b: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct S5Report {
    pub orbits: Vec<Orbit>,
    pub buckets: Vec<Bucket>,
    /// Every pair of representatives within a bucket.
    pub pairs: Vec<PairVerdict>,
    /// Range searched for separating cluster counts.
    pub n_max: usize,
    pub q_max: usize,
}

impl S5Report {
    pub fn orbit_sizes(&self) -> BTreeMap<usize, usize> {
        let mut m = BTreeMap::new();
        for o in &self.orbits {
            *m.entry(o.members.len()).or_insert(0) += 1;
        }
        m
    }

    pub fn bucket(&self, overlaps: &[usize]) -> Option<&Bucket> {
        self.buckets.iter().find(|b| b.overlaps == overlaps)
    }
}

/// The symmetry orbits of `S_n`, each listed from its lexicographically
/// least member.
pub fn symmetry_orbits(n: usize) -> Vec<Vec<Permutation>> {
    let mut seen = BTreeSet::new();
    let mut orbits = Vec::new();
    for p in all_permutations(n) {
        if seen.contains(&p) {
            continue;
        }
        let o = p.symmetry_orbit();
        seen.extend(o.iter().cloned());
        orbits.push(o.into_iter().collect());
    }
    orbits
}

/// Smallest `(q, n)` with `2 <= q <= q_max`, `n <= n_max` where the cluster
/// counts differ.
pub fn first_separation(a: &ClusterTotals, b: &ClusterTotals, n_max: usize, q_max: usize) -> Option<Separation> {
    (2..=q_max).find_map(|q| {
        (1..=n_max).find_map(|n| {
            let (x, y): (BigUint, BigUint) = (a.get(n, q), b.get(n, q));
            (x != y).then(|| Separation {
                n,
                q,
                cl_a: x.to_string(),
                cl_b: y.to_string(),
            })
        })
    })
}

/// Orbits of `S_5` under reverse and complement, bucketed by nontrivial
/// self-overlap lengths. Within a bucket, a pair is reported equivalent
/// when some members of the two orbits satisfy the overlap-set condition,
/// and separated when some cluster count `cl_{n,q}` (`n <= 13`, `q <= 4`)
/// differs.
pub fn classify_s5() -> S5Report {
    const N: usize = 13;
    const Q: usize = 4;
    let orbits = symmetry_orbits(5);
    let info: Vec<Orbit> = orbits
        .iter()
        .map(|o| Orbit {
            representative: o[0].compact(),
            members: o.iter().map(Permutation::compact).collect(),
            overlaps: self_overlaps(&o[0]).into_iter().filter(|&k| k >= 2).collect(),
        })
        .collect();
    let totals: Vec<ClusterTotals> = orbits
        .par_iter()
        .map(|o| cluster_counts_single_pattern(&o[0], N, Q).totals())
        .collect();

    let mut by_profile: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for (i, o) in info.iter().enumerate() {
        by_profile.entry(o.overlaps.clone()).or_default().push(i);
    }

    let pair_list: Vec<(usize, usize)> = by_profile
        .values()
        .flat_map(|idx| {
            idx.iter()
                .enumerate()
                .flat_map(move |(x, &i)| idx[x + 1..].iter().map(move |&j| (i, j)))
        })
        .collect();
    let pairs: Vec<PairVerdict> = pair_list
        .par_iter()
        .map(|&(i, j)| {
            let proof = orbits[i].iter().find_map(|a| {
                orbits[j].iter().find_map(|b| {
                    let (ca, cb) = (PatternCollection::single(a.clone()), PatternCollection::single(b.clone()));
                    let phi = PatternBijection::by_position(&ca, &cb).ok()?;
                    check_theorem13(&ca, &cb, &phi)
                        .ok()?
                        .holds()
                        .then(|| (a.compact(), b.compact()))
                })
            });
            PairVerdict {
                a: info[i].representative.clone(),
                b: info[j].representative.clone(),
                equivalent: proof.is_some(),
                proof,
                separated_by: first_separation(&totals[i], &totals[j], N, Q),
            }
        })
        .collect();

    let buckets = by_profile
        .into_iter()
        .map(|(overlaps, idx)| {
            let reps: Vec<String> = idx.iter().map(|&i| info[i].representative.clone()).collect();
            // Union-find over proved pairs.
            let mut parent: BTreeMap<String, String> = reps.iter().map(|r| (r.clone(), r.clone())).collect();
            fn root(p: &BTreeMap<String, String>, mut x: String) -> String {
                while p[&x] != x {
                    x = p[&x].clone();
                }
                x
            }
            let members: BTreeSet<String> = reps.iter().cloned().collect();
            for pv in pairs.iter().filter(|p| p.equivalent && members.contains(&p.a)) {
                let (ra, rb) = (root(&parent, pv.a.clone()), root(&parent, pv.b.clone()));
                if ra != rb {
                    let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
                    parent.insert(hi, lo);
                }
            }
            let mut classes: BTreeMap<String, Vec<String>> = BTreeMap::new();
            for r in &reps {
                classes.entry(root(&parent, r.clone())).or_default().push(r.clone());
            }
            Bucket {
                overlaps,
                representatives: reps,
                classes: classes.into_values().collect(),
            }
        })
        .collect();

    S5Report {
        orbits: info,
        buckets,
        pairs,
        n_max: N,
        q_max: Q,
    }
}
