//! Permutations, words and consecutive occurrences.
//!
//! Entries are stored as `u8` values `1..=n`, so a permutation has at most 255
//! entries. Every position exposed by this module is 1-based.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A sequence containing each of `1..=n` exactly once, `n >= 1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<u8>);

/// A sequence of pairwise distinct positive integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word(Vec<u64>);

impl Word {
    pub fn new(entries: Vec<u64>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for &e in &entries {
            if e == 0 {
                return Err(Error::InvalidWordEntry(e));
            }
            if !seen.insert(e) {
                return Err(Error::RepeatedEntry(e));
            }
        }
        if entries.is_empty() {
            return Err(Error::EmptyPermutation);
        }
        Ok(Word(entries))
    }

    pub fn entries(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Reverses the word.
    pub fn reverse(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    /// Complements the word within its own value set: the i-th smallest
    /// entry becomes the i-th largest.
    pub fn complement(&self) -> Word {
        let mut sorted = self.0.clone();
        sorted.sort_unstable();
        let m = sorted.len();
        Word(
            self.0
                .iter()
                .map(|e| sorted[m - 1 - sorted.binary_search(e).unwrap()])
                .collect(),
        )
    }
}

impl From<&Permutation> for Word {
    fn from(p: &Permutation) -> Self {
        Word(p.0.iter().map(|&e| e as u64).collect())
    }
}

/// The unique permutation with the same relative order as `word`.
pub fn standardize(word: &Word) -> Permutation {
    let mut order: Vec<usize> = (0..word.len()).collect();
    order.sort_unstable_by_key(|&i| word.0[i]);
    let mut out = vec![0u8; word.len()];
    for (rank, &i) in order.iter().enumerate() {
        out[i] = (rank + 1) as u8;
    }
    Permutation(out)
}

/// Standardizes a slice of distinct small integers. Used on windows of
/// permutations, where distinctness holds by construction.
pub fn standardize_slice(values: &[u8]) -> Permutation {
    let mut out = vec![0u8; values.len()];
    for (i, &v) in values.iter().enumerate() {
        out[i] = 1 + values.iter().filter(|&&w| w < v).count() as u8;
    }
    Permutation(out)
}

impl Permutation {
    pub fn new(entries: Vec<u8>) -> Result<Self> {
        let n = entries.len();
        if n == 0 {
            return Err(Error::EmptyPermutation);
        }
        let mut seen = vec![false; n + 1];
        for &e in &entries {
            let e = e as usize;
            if e == 0 || e > n || seen[e] {
                return Err(Error::InvalidPermutation {
                    entries: entries.iter().map(|&e| e as u32).collect(),
                    len: n,
                });
            }
            seen[e] = true;
        }
        Ok(Permutation(entries))
    }

    pub fn from_u32s(entries: &[u32]) -> Result<Self> {
        if entries.len() > 255 {
            return Err(Error::TooLong(entries.len()));
        }
        if entries.iter().any(|&e| e == 0 || e as usize > entries.len()) {
            return Err(Error::InvalidPermutation {
                entries: entries.to_vec(),
                len: entries.len(),
            });
        }
        Permutation::new(entries.iter().map(|&e| e as u8).collect())
    }

    pub fn identity(n: usize) -> Self {
        assert!((1..=255).contains(&n));
        Permutation((1..=n as u8).collect())
    }

    /// The trivial permutation `(1)`.
    pub fn one() -> Self {
        Permutation(vec![1])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false; kept for the `len`/`is_empty` convention.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn entries(&self) -> &[u8] {
        &self.0
    }

    /// Entry at 1-based position `i`.
    pub fn at(&self, i: usize) -> u8 {
        self.0[i - 1]
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u8; self.len()];
        for (i, &v) in self.0.iter().enumerate() {
            inv[v as usize - 1] = (i + 1) as u8;
        }
        Permutation(inv)
    }

    pub fn reverse(&self) -> Permutation {
        Permutation(self.0.iter().rev().copied().collect())
    }

    pub fn complement(&self) -> Permutation {
        let n = self.len() as u8;
        Permutation(self.0.iter().map(|&v| n + 1 - v).collect())
    }

    /// Standardization of the first `k` entries.
    pub fn prefix(&self, k: usize) -> Permutation {
        standardize_slice(&self.0[..k])
    }

    /// Standardization of the last `k` entries.
    pub fn suffix(&self, k: usize) -> Permutation {
        standardize_slice(&self.0[self.len() - k..])
    }

    /// Whether `window` is order-isomorphic to this permutation.
    pub fn matches(&self, window: &[u8]) -> bool {
        debug_assert_eq!(window.len(), self.len());
        let inv = self.inverse();
        inv.0
            .windows(2)
            .all(|w| window[w[0] as usize - 1] < window[w[1] as usize - 1])
    }

    /// Digit-string form such as `1342765`, only defined when every entry is
    /// at most 9; falls back to the separated form otherwise.
    pub fn compact(&self) -> String {
        if self.len() <= 9 {
            self.0.iter().map(|d| char::from(b'0' + d)).collect()
        } else {
            self.to_string()
        }
    }

    /// The orbit under the group generated by reversal and complement.
    pub fn symmetry_orbit(&self) -> BTreeSet<Permutation> {
        let r = self.reverse();
        let c = self.complement();
        let rc = r.complement();
        [self.clone(), r, c, rc].into_iter().collect()
    }
}

/// Matches a pattern against windows of many hosts without recomputing the
/// pattern's inverse.
#[derive(Clone, Debug)]
pub struct Matcher {
    order: Vec<usize>,
}

impl Matcher {
    pub fn new(pattern: &Permutation) -> Self {
        Matcher {
            order: pattern.inverse().0.iter().map(|&i| i as usize - 1).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    #[inline]
    pub fn matches(&self, window: &[u8]) -> bool {
        self.order
            .windows(2)
            .all(|w| window[w[0]] < window[w[1]])
    }

    /// Number of windows of `host` order-isomorphic to the pattern.
    #[inline]
    pub fn count_in(&self, host: &[u8]) -> usize {
        let l = self.order.len();
        if l > host.len() {
            return 0;
        }
        (0..=host.len() - l)
            .filter(|&i| self.matches(&host[i..i + l]))
            .count()
    }
}

/// All 1-based positions `i` where `host[i..i+l-1]` standardizes to `pattern`.
pub fn occurrences(pattern: &Permutation, host: &Permutation) -> Vec<usize> {
    let l = pattern.len();
    let n = host.len();
    if l > n {
        return Vec::new();
    }
    let m = Matcher::new(pattern);
    (0..=n - l)
        .filter(|&i| m.matches(&host.0[i..i + l]))
        .map(|i| i + 1)
        .collect()
}

pub fn divides(pattern: &Permutation, host: &Permutation) -> bool {
    !occurrences(pattern, host).is_empty()
}

pub fn left_divides(pattern: &Permutation, host: &Permutation) -> bool {
    pattern.len() <= host.len() && pattern.matches(&host.0[..pattern.len()])
}

pub fn right_divides(pattern: &Permutation, host: &Permutation) -> bool {
    pattern.len() <= host.len() && pattern.matches(&host.0[host.len() - pattern.len()..])
}

/// Advances `v` to the next permutation in lexicographic order. Returns
/// false (leaving `v` sorted ascending) after the last one.
pub fn next_permutation(v: &mut [u8]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        v.reverse();
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

/// Lexicographic iterator over `S_n`.
pub struct Permutations {
    current: Vec<u8>,
    done: bool,
}

impl Iterator for Permutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        if self.done {
            return None;
        }
        let out = Permutation(self.current.clone());
        self.done = !next_permutation(&mut self.current);
        Some(out)
    }
}

pub fn all_permutations(n: usize) -> Permutations {
    Permutations {
        current: (1..=n as u8).collect(),
        done: n == 0,
    }
}

/// Calls `f` on every permutation of `1..=n` whose first entry is `first`,
/// in lexicographic order, reusing one buffer.
pub fn for_each_with_first(n: usize, first: u8, mut f: impl FnMut(&[u8])) {
    let mut buf: Vec<u8> = std::iter::once(first)
        .chain((1..=n as u8).filter(|&v| v != first))
        .collect();
    loop {
        f(&buf);
        if !next_permutation(&mut buf[1..]) {
            break;
        }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.compact())
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Accepts whitespace- or comma-separated integers, or a compact digit
    /// string such as `1342765`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = |msg: String| Error::Parse {
            line: 1,
            message: msg,
        };
        let tokens: Vec<&str> = s
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .collect();
        let values: Vec<u32> = if tokens.len() == 1 && tokens[0].len() > 1 {
            tokens[0]
                .chars()
                .map(|c| {
                    c.to_digit(10)
                        .ok_or_else(|| bad(format!("invalid digit {c:?} in {s:?}")))
                })
                .collect::<Result<_>>()?
        } else {
            tokens
                .iter()
                .map(|t| {
                    t.parse::<u32>()
                        .map_err(|_| bad(format!("invalid entry {t:?} in {s:?}")))
                })
                .collect::<Result<_>>()?
        };
        if values.is_empty() {
            return Err(Error::EmptyPermutation);
        }
        Permutation::from_u32s(&values)
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<u8>::deserialize(d)?;
        Permutation::new(v).map_err(serde::de::Error::custom)
    }
}

/// Shorthand for tests and examples: `perm("132")`.
///
/// Panics on malformed input.
pub fn perm(s: &str) -> Permutation {
    s.parse().unwrap_or_else(|e| panic!("bad permutation {s:?}: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn standardize_examples() {
        let w = Word::new(vec![5, 7, 3]).unwrap();
        assert_eq!(standardize(&w), perm("231"));
        assert_eq!(standardize(&Word::new(vec![1, 2, 3]).unwrap()), perm("123"));
        assert_eq!(standardize(&Word::new(vec![9, 4, 1]).unwrap()), perm("321"));
    }

    #[test]
    fn word_rejects_repeats_and_zero() {
        assert!(matches!(Word::new(vec![3, 1, 3]), Err(Error::RepeatedEntry(3))));
        assert!(Word::new(vec![0, 1]).is_err());
        assert!(Word::new(vec![]).is_err());
    }

    #[test]
    fn permutation_validation() {
        assert!(Permutation::new(vec![]).is_err());
        assert!(Permutation::new(vec![1, 1]).is_err());
        assert!(Permutation::new(vec![2, 3]).is_err());
        assert_eq!(Permutation::new(vec![1]).unwrap(), Permutation::one());
    }

    #[test]
    fn parsing_forms() {
        assert_eq!(perm("1342765").entries(), &[1, 3, 4, 2, 7, 6, 5]);
        assert_eq!(perm("1, 3 ,2").entries(), &[1, 3, 2]);
        assert_eq!(perm("10 1 2 3 4 5 6 7 8 9").len(), 10);
        assert_eq!(perm("1"), Permutation::one());
        assert!("1 2 2".parse::<Permutation>().is_err());
        assert!("12a".parse::<Permutation>().is_err());
        assert!("".parse::<Permutation>().is_err());
        assert_eq!(perm("3 1 2").to_string(), "3 1 2");
    }

    #[test]
    fn occurrence_examples() {
        assert_eq!(occurrences(&perm("123"), &perm("1234")), vec![1, 2]);
        assert_eq!(occurrences(&perm("123"), &perm("321")), Vec::<usize>::new());
        // (5,7,3) standardizes to (2,3,1); embed it at the start of a host.
        let host = standardize(&Word::new(vec![5, 7, 3, 1, 9]).unwrap());
        assert!(occurrences(&perm("231"), &host).contains(&1));
        assert!(occurrences(&perm("12345"), &perm("123")).is_empty());
    }

    #[test]
    fn divisor_examples() {
        for p in all_permutations(4) {
            assert!(divides(&Permutation::one(), &p));
        }
        assert!(left_divides(&perm("12"), &perm("132")));
        assert!(!right_divides(&perm("12"), &perm("132")));
        assert!(right_divides(&perm("21"), &perm("132")));
    }

    #[test]
    fn symmetries() {
        assert_eq!(perm("12345").reverse(), perm("54321"));
        assert_eq!(perm("14325").complement(), perm("52341"));
        assert_eq!(perm("12345").symmetry_orbit().len(), 2);
        assert_eq!(perm("13452").symmetry_orbit().len(), 4);
    }

    #[test]
    fn permutation_iteration() {
        assert_eq!(all_permutations(5).count(), 120);
        let all: Vec<_> = all_permutations(3).map(|p| p.compact()).collect();
        assert_eq!(all, ["123", "132", "213", "231", "312", "321"]);
        let mut n = 0;
        for_each_with_first(5, 3, |p| {
            assert_eq!(p[0], 3);
            n += 1;
        });
        assert_eq!(n, 24);
    }

    #[test]
    fn windows_partition_exhaustively() {
        for n in 1..=6 {
            for l in 1..=n {
                let pats: Vec<_> = all_permutations(l).collect();
                for host in all_permutations(n) {
                    let total: usize = pats.iter().map(|p| occurrences(p, &host).len()).sum();
                    assert_eq!(total, n - l + 1);
                }
            }
        }
    }

    fn arb_word() -> impl Strategy<Value = Word> {
        proptest::collection::btree_set(1u64..1000, 1..12)
            .prop_flat_map(|set| Just(set.into_iter().collect::<Vec<_>>()).prop_shuffle())
            .prop_map(|v| Word::new(v).unwrap())
    }

    fn arb_perm() -> impl Strategy<Value = Permutation> {
        (1usize..10)
            .prop_flat_map(|n| Just((1..=n as u8).collect::<Vec<_>>()).prop_shuffle())
            .prop_map(|v| Permutation::new(v).unwrap())
    }

    proptest! {
        #[test]
        fn standardize_is_idempotent(w in arb_word()) {
            let s = standardize(&w);
            prop_assert_eq!(standardize(&Word::from(&s)), s);
        }

        #[test]
        fn standardize_commutes_with_symmetries(w in arb_word()) {
            prop_assert_eq!(standardize(&w.reverse()), standardize(&w).reverse());
            prop_assert_eq!(standardize(&w.complement()), standardize(&w).complement());
        }

        #[test]
        fn symmetries_are_commuting_involutions(p in arb_perm()) {
            prop_assert_eq!(p.reverse().reverse(), p.clone());
            prop_assert_eq!(p.complement().complement(), p.clone());
            prop_assert_eq!(p.reverse().complement(), p.complement().reverse());
            prop_assert_eq!(p.inverse().inverse(), p.clone());
        }

        #[test]
        fn occurrences_are_increasing_and_in_range(host in arb_perm(), pat in arb_perm()) {
            let occ = occurrences(&pat, &host);
            prop_assert!(occ.windows(2).all(|w| w[0] < w[1]));
            if pat.len() <= host.len() {
                prop_assert!(occ.iter().all(|&i| i >= 1 && i <= host.len() - pat.len() + 1));
            } else {
                prop_assert!(occ.is_empty());
            }
            prop_assert_eq!(left_divides(&pat, &host), occ.first() == Some(&1));
        }

        #[test]
        fn text_form_round_trips(p in arb_perm()) {
            prop_assert_eq!(p.to_string().parse::<Permutation>().unwrap(), p);
        }
    }
}
