//! Cluster counting.
//!
//! A q-cluster of length n is a permutation together with q marked pattern
//! occurrences, ordered by position, such that consecutive occurrences overlap
//! and together they cover the whole permutation. The recurrence builds a
//! q-cluster by placing a pattern in front of a (q-1)-cluster, tracking the
//! actual values `p_1..p_k` of the first `k` entries, where `k` is the length
//! of the source vertex of the edge used.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::collection::PatternCollection;
use crate::error::{Error, Result};
use crate::graph::{build_graph, Edge, OverlapGraph};
use crate::overlap::self_overlaps;
use crate::perm::Permutation;
use crate::poset::WindowConstraints;

/// A cluster: `sigma` with the marked occurrences `patterns[j]` at 1-based
/// offsets `offsets[j]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Cluster {
    pub sigma: Permutation,
    pub patterns: Vec<Permutation>,
    pub offsets: Vec<usize>,
}

impl Cluster {
    pub fn new(
        collection: &PatternCollection,
        sigma: Permutation,
        patterns: Vec<Permutation>,
        offsets: Vec<usize>,
    ) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidCluster(m));
        if patterns.is_empty() || patterns.len() != offsets.len() {
            return bad("need one offset per marked pattern".into());
        }
        if offsets[0] != 1 {
            return bad(format!("first offset is {}, not 1", offsets[0]));
        }
        let s = sigma.entries();
        for (j, (p, &d)) in patterns.iter().zip(&offsets).enumerate() {
            if !collection.patterns().contains(p) {
                return bad(format!("({p}) is not in the collection"));
            }
            if d == 0 || d - 1 + p.len() > s.len() || !p.matches(&s[d - 1..d - 1 + p.len()]) {
                return bad(format!("no occurrence of ({p}) at offset {d}"));
            }
            if j > 0 {
                let (pd, pl) = (offsets[j - 1], patterns[j - 1].len());
                if d <= pd || d >= pd + pl {
                    return bad(format!("occurrences at {pd} and {d} are not linked"));
                }
            }
        }
        let last = offsets.len() - 1;
        if offsets[last] + patterns[last].len() - 1 != s.len() {
            return bad("marked occurrences do not cover sigma".into());
        }
        Ok(Cluster {
            sigma,
            patterns,
            offsets,
        })
    }

    pub fn size(&self) -> usize {
        self.patterns.len()
    }
}

/// Precomputed data for one edge `v -> v'` built from a pattern `pi` of
/// length `l`, an initial subword of length `k` and a final one of length `k'`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinkageProfile {
    pub l: usize,
    pub k: usize,
    pub k_prime: usize,
    /// Inverse of the standardization of the first `k` and last `k'` entries,
    /// present when the two subwords are disjoint (`l > k + k'`).
    pub psi: Option<Permutation>,
    /// 1-based positions of the first `k` and last `k'` entries of `pi`,
    /// listed by increasing value.
    pub psi_bar: Vec<usize>,
    /// `pi(psi_bar(j))`, strictly increasing.
    pub values: Vec<u8>,
}

impl LinkageProfile {
    pub fn new(pi: &Permutation, k: usize, k_prime: usize) -> Self {
        let l = pi.len();
        let mut positions: Vec<usize> = (1..=k).chain(l - k_prime + 1..=l).collect();
        positions.sort_unstable();
        positions.dedup();
        let psi = (l > k + k_prime).then(|| {
            let sub: Vec<u8> = positions.iter().map(|&i| pi.at(i)).collect();
            crate::perm::standardize_slice(&sub).inverse()
        });
        let mut psi_bar = positions;
        psi_bar.sort_unstable_by_key(|&i| pi.at(i));
        let values = psi_bar.iter().map(|&i| pi.at(i)).collect();
        LinkageProfile {
            l,
            k,
            k_prime,
            psi,
            psi_bar,
            values,
        }
    }

    pub fn for_edge(graph: &OverlapGraph, edge: &Edge) -> Self {
        LinkageProfile::new(graph.edge_pattern(edge), edge.k, edge.k_prime)
    }

    /// Largest entry among the first `k` and last `k'` entries.
    pub fn max_value(&self) -> u8 {
        *self.values.last().unwrap()
    }
}

/// Pascal triangle of big integers with `C(n, m) = 0` outside `0 <= m <= n`.
#[derive(Clone, Debug)]
pub struct Binomials {
    rows: Vec<Vec<BigUint>>,
}

impl Binomials {
    pub fn new(n_max: usize) -> Self {
        let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(n_max + 1);
        for n in 0..=n_max {
            let mut row = vec![BigUint::one(); n + 1];
            for m in 1..n {
                row[m] = &rows[n - 1][m - 1] + &rows[n - 1][m];
            }
            rows.push(row);
        }
        Binomials { rows }
    }

    pub fn get(&self, n: i64, m: i64) -> BigUint {
        if n < 0 || m < 0 || m > n {
            return BigUint::zero();
        }
        self.rows[n as usize][m as usize].clone()
    }

    fn get_ref(&self, n: usize, m: usize) -> &BigUint {
        &self.rows[n][m]
    }
}

/// A cell of the refined table: clusters at `vertex` of length `n` whose
/// first `|vertex|` entries are exactly `word`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellKey {
    pub vertex: usize,
    pub n: usize,
    pub word: Vec<u8>,
}

pub type Level = BTreeMap<CellKey, BigUint>;

/// Refined cluster counts `cl_{v,n,q}[p]` for `n <= n_max`, `q <= q_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterTable {
    vertices: Vec<Permutation>,
    n_max: usize,
    q_max: usize,
    levels: Vec<Level>,
}

impl ClusterTable {
    pub fn vertices(&self) -> &[Permutation] {
        &self.vertices
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn q_max(&self) -> usize {
        self.q_max
    }

    /// Nonzero refined cells at cluster size `q`.
    pub fn level(&self, q: usize) -> &Level {
        &self.levels[q]
    }

    pub fn refined(&self, vertex: usize, n: usize, q: usize, word: &[u8]) -> BigUint {
        self.levels
            .get(q)
            .and_then(|lv| {
                lv.get(&CellKey {
                    vertex,
                    n,
                    word: word.to_vec(),
                })
            })
            .cloned()
            .unwrap_or_default()
    }

    /// `cl_{v,n,q}`, the sum of the refined cells over all words.
    pub fn vertex_total(&self, vertex: usize, n: usize, q: usize) -> BigUint {
        let Some(lv) = self.levels.get(q) else {
            return BigUint::zero();
        };
        let lo = CellKey {
            vertex,
            n,
            word: Vec::new(),
        };
        lv.range(lo..)
            .take_while(|(key, _)| key.vertex == vertex && key.n == n)
            .map(|(_, c)| c)
            .sum()
    }

    /// `cl_{n,q}`, the count at the distinguished vertex.
    pub fn total(&self, n: usize, q: usize) -> BigUint {
        self.vertex_total(0, n, q)
    }

    pub fn totals(&self) -> ClusterTotals {
        self.vertex_totals(0)
    }

    pub fn vertex_totals(&self, vertex: usize) -> ClusterTotals {
        let mut counts = BTreeMap::new();
        for (q, lv) in self.levels.iter().enumerate() {
            for (key, c) in lv {
                if key.vertex == vertex {
                    *counts.entry((key.n, q)).or_insert_with(BigUint::zero) += c;
                }
            }
        }
        ClusterTotals {
            n_max: self.n_max,
            q_max: self.q_max,
            counts,
        }
    }
}

pub fn table_totals(table: &ClusterTable) -> ClusterTotals {
    table.totals()
}

/// Aggregated counts `cl_{n,q}` on the grid `1..=n_max` by `0..=q_max`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterTotals {
    pub n_max: usize,
    pub q_max: usize,
    /// Nonzero entries only.
    pub counts: BTreeMap<(usize, usize), BigUint>,
}

impl ClusterTotals {
    pub fn get(&self, n: usize, q: usize) -> BigUint {
        self.counts.get(&(n, q)).cloned().unwrap_or_default()
    }

    /// Tab-separated `n`, `q`, `cl` rows over the full grid, sorted by `(n, q)`.
    pub fn to_tsv(&self) -> String {
        let mut s = String::from("n\tq\tcl\n");
        for n in 1..=self.n_max {
            for q in 0..=self.q_max {
                let _ = writeln!(s, "{n}\t{q}\t{}", self.get(n, q));
            }
        }
        s
    }

    pub fn from_tsv(text: &str) -> Result<Self> {
        let mut counts = BTreeMap::new();
        let (mut n_max, mut q_max) = (0, 0);
        for (i, line) in text.lines().enumerate() {
            if i == 0 || line.trim().is_empty() {
                continue;
            }
            let err = |m: &str| Error::Parse {
                line: i + 1,
                message: m.to_string(),
            };
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 3 {
                return Err(err("expected three tab-separated columns"));
            }
            let n: usize = cols[0].parse().map_err(|_| err("bad n"))?;
            let q: usize = cols[1].parse().map_err(|_| err("bad q"))?;
            let c: BigUint = cols[2].parse().map_err(|_| err("bad count"))?;
            n_max = n_max.max(n);
            q_max = q_max.max(q);
            if !c.is_zero() {
                counts.insert((n, q), c);
            }
        }
        Ok(ClusterTotals {
            n_max,
            q_max,
            counts,
        })
    }
}

/// Everything the forward step needs about one edge.
struct Step {
    target: usize,
    l: usize,
    k: usize,
    k_prime: usize,
    pi: Vec<u8>,
    /// Ranks of the last `k'` entries among themselves.
    tail_ranks: Vec<u8>,
    /// 0-based positions of the first `k` and last `k'` entries, by value.
    order: Vec<usize>,
}

impl Step {
    fn new(pi: &Permutation, k: usize, k_prime: usize, target: usize) -> Self {
        let profile = LinkageProfile::new(pi, k, k_prime);
        Step {
            target,
            l: pi.len(),
            k,
            k_prime,
            pi: pi.entries().to_vec(),
            tail_ranks: pi.suffix(k_prime).entries().to_vec(),
            order: profile.psi_bar.iter().map(|&i| i - 1).collect(),
        }
    }

    /// Adds to `out` the contributions of placing the pattern in front of
    /// the `count` clusters of length `n_prev` starting with `word_prev`.
    #[allow(clippy::too_many_arguments)]
    fn apply(
        &self,
        n_prev: usize,
        word_prev: &[u8],
        count: &BigUint,
        n_max: usize,
        binom: &Binomials,
        out: &mut HashMap<(usize, Vec<u8>), BigUint>,
    ) {
        let n = n_prev + self.l - self.k_prime;
        if n > n_max {
            return;
        }
        let mut fixed = vec![0u8; self.l];
        for j in 0..self.k_prime {
            let pos = self.l - self.k_prime + j;
            fixed[pos] = word_prev[j] + self.pi[pos] - self.tail_ranks[j];
        }
        let mut assign = vec![0u8; self.l];
        self.dfs(0, 0, 0, n, &fixed, &mut assign, BigUint::one(), binom, &mut |word, w| {
            *out.entry((n, word.to_vec())).or_insert_with(BigUint::zero) += w * count;
        });
    }

    #[allow(clippy::too_many_arguments)]
    fn dfs(
        &self,
        idx: usize,
        last_val: usize,
        last_pi: usize,
        n: usize,
        fixed: &[u8],
        assign: &mut [u8],
        weight: BigUint,
        binom: &Binomials,
        emit: &mut dyn FnMut(&[u8], BigUint),
    ) {
        if idx == self.order.len() {
            if n - last_val < self.l - last_pi {
                return;
            }
            let w = weight * binom.get_ref(n - last_val, self.l - last_pi);
            emit(&assign[..self.k], w);
            return;
        }
        let pos = self.order[idx];
        let pv = self.pi[pos] as usize;
        let h = pv - last_pi - 1;
        let hi = n - (self.l - pv);
        let (lo, top) = if fixed[pos] != 0 {
            (fixed[pos] as usize, fixed[pos] as usize)
        } else {
            (last_val + 1 + h, hi)
        };
        for val in lo..=top.min(hi) {
            if val <= last_val || val - last_val - 1 < h {
                continue;
            }
            assign[pos] = val as u8;
            let w = &weight * binom.get_ref(val - last_val - 1, h);
            self.dfs(idx + 1, val, pv, n, fixed, assign, w, binom, emit);
        }
    }
}

/// Fills the refined table for every vertex of `G(collection)` by induction
/// on `q`, in parallel over source vertices.
pub fn cluster_counts(collection: &PatternCollection, n_max: usize, q_max: usize) -> ClusterTable {
    cluster_counts_for_graph(&build_graph(collection), n_max, q_max)
}

pub fn cluster_counts_for_graph(graph: &OverlapGraph, n_max: usize, q_max: usize) -> ClusterTable {
    let nv = graph.vertices().len();
    let binom = Binomials::new(n_max);
    let mut by_source: Vec<Vec<Step>> = (0..nv).map(|_| Vec::new()).collect();
    for e in graph.edges() {
        by_source[e.source].push(Step::new(graph.edge_pattern(e), e.k, e.k_prime, e.target));
    }

    let mut levels = vec![base_level(n_max)];
    for q in 1..=q_max {
        let prev = &levels[q - 1];
        let mut prev_by_vertex: Vec<Vec<(&CellKey, &BigUint)>> = vec![Vec::new(); nv];
        for (key, c) in prev {
            prev_by_vertex[key.vertex].push((key, c));
        }
        let parts: Vec<Level> = (0..nv)
            .into_par_iter()
            .map(|v| {
                let mut out = HashMap::new();
                for step in &by_source[v] {
                    for (key, c) in &prev_by_vertex[step.target] {
                        step.apply(key.n, &key.word, c, n_max, &binom, &mut out);
                    }
                }
                collect_level(v, out)
            })
            .collect();
        let mut level: Level = parts.into_iter().flatten().collect();
        if q == 1 {
            seed_unit_patterns(graph.collection(), n_max, &mut level);
        }
        levels.push(level);
    }
    ClusterTable {
        vertices: graph.vertices().to_vec(),
        n_max,
        q_max,
        levels,
    }
}

fn base_level(n_max: usize) -> Level {
    let mut lv = Level::new();
    if n_max >= 1 {
        lv.insert(
            CellKey {
                vertex: 0,
                n: 1,
                word: vec![1],
            },
            BigUint::one(),
        );
    }
    lv
}

/// The pattern `(1)` has no proper prefixes; its only cluster is itself.
fn seed_unit_patterns(c: &PatternCollection, n_max: usize, level: &mut Level) {
    if n_max >= 1 && c.patterns().iter().any(|p| p.len() == 1) {
        level.insert(
            CellKey {
                vertex: 0,
                n: 1,
                word: vec![1],
            },
            BigUint::one(),
        );
    }
}

fn collect_level(vertex: usize, out: HashMap<(usize, Vec<u8>), BigUint>) -> Level {
    out.into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|((n, word), c)| (CellKey { vertex, n, word }, c))
        .collect()
}

/// The single-pattern recurrence. Every q-cluster with `q >= 1` begins with
/// the pattern itself, so one table indexed by the first `k_d` entries (the
/// longest self-overlap) serves all vertices; the cells for shorter vertices
/// are its marginals.
pub fn cluster_counts_single_pattern(pattern: &Permutation, n_max: usize, q_max: usize) -> ClusterTable {
    if pattern.len() == 1 {
        return cluster_counts(&PatternCollection::single(pattern.clone()), n_max, q_max);
    }
    let ks = self_overlaps(pattern);
    let big_k = *ks.last().unwrap();
    let binom = Binomials::new(n_max);
    let steps: Vec<Step> = ks
        .iter()
        .enumerate()
        .map(|(s, &kp)| Step::new(pattern, big_k, kp, s))
        .collect();

    type Flat = HashMap<(usize, Vec<u8>), BigUint>;
    let marginal = |flat: &Flat, k: usize| -> Flat {
        let mut m = Flat::new();
        for ((n, word), c) in flat {
            *m.entry((*n, word[..k].to_vec())).or_insert_with(BigUint::zero) += c;
        }
        m
    };

    let mut flats: Vec<Flat> = vec![Flat::new()];
    for q in 1..=q_max {
        let out = steps
            .par_iter()
            .map(|step| {
                let mut out = Flat::new();
                if q == 1 {
                    if step.k_prime == 1 && n_max >= 1 {
                        step.apply(1, &[1], &BigUint::one(), n_max, &binom, &mut out);
                    }
                } else {
                    for ((n, word), c) in marginal(&flats[q - 1], step.k_prime) {
                        step.apply(n, &word, &c, n_max, &binom, &mut out);
                    }
                }
                out
            })
            .reduce(Flat::new, |mut a, b| {
                for (key, c) in b {
                    *a.entry(key).or_insert_with(BigUint::zero) += c;
                }
                a
            });
        flats.push(out);
    }

    let mut levels = vec![base_level(n_max)];
    for flat in flats.iter().skip(1) {
        let mut level = Level::new();
        for (s, &k) in ks.iter().enumerate() {
            level.extend(collect_level(s, marginal(flat, k)));
        }
        levels.push(level);
    }
    ClusterTable {
        vertices: ks.iter().map(|&k| pattern.prefix(k)).collect(),
        n_max,
        q_max,
        levels,
    }
}

type Structure = Vec<(usize, usize)>;

/// All sequences of (pattern index, 0-based offset) that can carry a
/// q-cluster of length n, checking only that adjacent windows agree on
/// their common positions.
fn cluster_structures(c: &PatternCollection, n: usize, q: usize) -> Vec<Structure> {
    fn grow(c: &PatternCollection, n: usize, q: usize, cur: &mut Structure, out: &mut Vec<Structure>) {
        let (pi, start) = *cur.last().unwrap();
        let l = c.get(pi).len();
        if cur.len() == q {
            if start + l == n {
                out.push(cur.clone());
            }
            return;
        }
        for next in start + 1..start + l {
            for (pj, p) in c.patterns().iter().enumerate() {
                if next + p.len() > n {
                    continue;
                }
                let end = (start + l).min(next + p.len());
                let a = crate::perm::standardize_slice(&c.get(pi).entries()[next - start..end - start]);
                let b = crate::perm::standardize_slice(&p.entries()[..end - next]);
                if a == b {
                    cur.push((pj, next));
                    grow(c, n, q, cur, out);
                    cur.pop();
                }
            }
        }
    }
    let mut out = Vec::new();
    if q == 0 {
        return out;
    }
    for (pi, p) in c.patterns().iter().enumerate() {
        if p.len() <= n {
            let mut cur = vec![(pi, 0)];
            grow(c, n, q, &mut cur, &mut out);
        }
    }
    out
}

fn constraints(c: &PatternCollection, n: usize, s: &Structure) -> WindowConstraints {
    let mut w = WindowConstraints::new(n);
    for &(pi, start) in s {
        w.add_window(start, c.get(pi));
    }
    w
}

/// Every q-cluster of length n, found by enumerating the marked-occurrence
/// structures and then all permutations realizing each. Sorted by
/// `(sigma, patterns, offsets)`.
pub fn enumerate_clusters_oracle(c: &PatternCollection, n: usize, q: usize) -> Vec<Cluster> {
    let mut out: Vec<Cluster> = cluster_structures(c, n, q)
        .par_iter()
        .flat_map_iter(|s| {
            let patterns: Vec<Permutation> = s.iter().map(|&(pi, _)| c.get(pi).clone()).collect();
            let offsets: Vec<usize> = s.iter().map(|&(_, d)| d + 1).collect();
            constraints(c, n, s).list().into_iter().map(move |sigma| Cluster {
                sigma,
                patterns: patterns.clone(),
                offsets: offsets.clone(),
            })
        })
        .collect();
    out.sort();
    out
}

/// The number of q-clusters of length n, by the same structure-first search
/// as [`enumerate_clusters_oracle`] without listing them.
pub fn count_clusters_oracle(c: &PatternCollection, n: usize, q: usize) -> BigUint {
    cluster_structures(c, n, q)
        .par_iter()
        .map(|s| BigUint::from(constraints(c, n, s).count()))
        .sum()
}
