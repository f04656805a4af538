//! Permutations constrained to be order-isomorphic to given patterns on
//! given windows, counted and listed as linear extensions.

use crate::perm::Permutation;

/// Order constraints on the positions `0..n` of an unknown permutation.
/// `preds[x]` is the bitmask of positions whose value must be below `x`'s.
#[derive(Clone, Debug)]
pub(crate) struct WindowConstraints {
    n: usize,
    preds: Vec<u64>,
}

impl WindowConstraints {
    pub(crate) fn new(n: usize) -> Self {
        assert!(n <= 40, "window constraints support at most 40 positions");
        WindowConstraints {
            n,
            preds: vec![0; n],
        }
    }

    /// Requires positions `start..start+l` (0-based) to standardize to `pattern`.
    pub(crate) fn add_window(&mut self, start: usize, pattern: &Permutation) {
        let inv = pattern.inverse();
        for w in inv.entries().windows(2) {
            let lo = start + w[0] as usize - 1;
            let hi = start + w[1] as usize - 1;
            self.preds[hi] |= 1 << lo;
        }
    }

    /// Number of permutations meeting every constraint.
    pub(crate) fn count(&self) -> u128 {
        let n = self.n;
        assert!(n <= 24, "counting supports at most 24 positions");
        let full = (1usize << n) - 1;
        let mut dp = vec![0u128; full + 1];
        dp[0] = 1;
        for mask in 0..full {
            let c = dp[mask];
            if c == 0 {
                continue;
            }
            for x in 0..n {
                let bit = 1usize << x;
                if mask & bit == 0 && (self.preds[x] as usize) & !mask == 0 {
                    dp[mask | bit] += c;
                }
            }
        }
        dp[full]
    }

    /// Every permutation meeting the constraints, in lexicographic order.
    pub(crate) fn list(&self) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut values = vec![0u8; self.n];
        self.extend(0, 0, &mut values, &mut out);
        out.sort();
        out
    }

    fn extend(&self, placed: u64, next: u8, values: &mut [u8], out: &mut Vec<Permutation>) {
        if next as usize == self.n {
            out.push(Permutation::new(values.to_vec()).expect("linear extension"));
            return;
        }
        for x in 0..self.n {
            let bit = 1u64 << x;
            if placed & bit == 0 && self.preds[x] & !placed == 0 {
                values[x] = next + 1;
                self.extend(placed | bit, next + 1, values, out);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::{all_permutations, perm};

    #[test]
    fn unconstrained_counts_factorial() {
        assert_eq!(WindowConstraints::new(5).count(), 120);
        assert_eq!(WindowConstraints::new(4).list().len(), 24);
    }

    #[test]
    fn matches_filtered_scan() {
        let cases = [
            (5, vec![(0, "132"), (2, "213")]),
            (6, vec![(0, "1342"), (3, "231")]),
            (4, vec![(0, "123"), (1, "321")]),
        ];
        for (n, windows) in cases {
            let mut c = WindowConstraints::new(n);
            for (s, p) in &windows {
                c.add_window(*s, &perm(p));
            }
            let expected: Vec<Permutation> = all_permutations(n)
                .filter(|s| {
                    windows.iter().all(|(st, p)| {
                        let p = perm(p);
                        p.matches(&s.entries()[*st..*st + p.len()])
                    })
                })
                .collect();
            assert_eq!(c.list(), expected);
            assert_eq!(c.count(), expected.len() as u128);
        }
    }
}
