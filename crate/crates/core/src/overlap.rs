//! Overlaps and linkages of ordered pattern pairs.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::poset::WindowConstraints;

/// Whether the last `k` entries of `pi` and the first `k` entries of
/// `pi_prime` have the same standardization. Requires `1 <= k <= min(l, l')`.
pub fn k_overlaps(pi: &Permutation, pi_prime: &Permutation, k: usize) -> Result<bool> {
    let max = pi.len().min(pi_prime.len());
    if k == 0 || k > max {
        return Err(Error::OverlapOutOfRange { k, max });
    }
    Ok(pi.suffix(k) == pi_prime.prefix(k))
}

/// The proper overlap lengths `1 <= k < min(l, l')`, increasing.
pub fn overlap_lengths(pi: &Permutation, pi_prime: &Permutation) -> Vec<usize> {
    let max = pi.len().min(pi_prime.len());
    (1..max)
        .filter(|&k| pi.suffix(k) == pi_prime.prefix(k))
        .collect()
}

/// Self-overlap lengths of a single pattern, including the trivial `k = 1`.
pub fn self_overlaps(pi: &Permutation) -> Vec<usize> {
    overlap_lengths(pi, pi)
}

/// Lengths `n = l + l' - k` of all linkages of the ordered pair; each lies
/// strictly between `max(l, l')` and `l + l'`.
pub fn linkage_lengths(pi: &Permutation, pi_prime: &Permutation) -> BTreeSet<usize> {
    let total = pi.len() + pi_prime.len();
    overlap_lengths(pi, pi_prime)
        .into_iter()
        .map(|k| total - k)
        .collect()
}

/// Every `sigma` of length `n` starting with an occurrence of `pi` and ending
/// with an occurrence of `pi_prime`, built from the window constraints.
pub fn enumerate_linkages(
    pi: &Permutation,
    pi_prime: &Permutation,
    n: usize,
) -> Result<Vec<Permutation>> {
    let (l, lp) = (pi.len(), pi_prime.len());
    let min = l.max(lp);
    if n < min || n >= l + lp {
        return Err(Error::LinkageOutOfRange {
            n,
            min,
            max_exclusive: l + lp,
        });
    }
    let mut c = WindowConstraints::new(n);
    c.add_window(0, pi);
    c.add_window(n - lp, pi_prime);
    Ok(c.list())
}
