//! Truncated bivariate power series in `x` and `t` with exact rational
//! coefficients, and the cluster-method identities built on them.
//!
//! A series of order `N` stores the coefficients of `x^0..=x^N`; each
//! `x^n` slice is a dense polynomial in `t`. Generating functions here are
//! exponential in `x`, so the count attached to `x^n t^q` is `n!` times the
//! stored coefficient.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::cluster::{cluster_counts, ClusterTable, ClusterTotals};
use crate::collection::PatternCollection;
use crate::error::{Error, Result};
use crate::perm::{for_each_with_first, Matcher};

#[derive(Clone, Debug)]
pub struct BiSeries {
    order: usize,
    slices: Vec<Vec<BigRational>>,
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n as u64).map(BigUint::from).product()
}

fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn trim(p: &mut Vec<BigRational>) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

fn poly_add(a: &mut Vec<BigRational>, b: &[BigRational], scale: &BigRational) {
    if a.len() < b.len() {
        a.resize(b.len(), BigRational::zero());
    }
    for (x, y) in a.iter_mut().zip(b) {
        *x += y * scale;
    }
    trim(a);
}

impl BiSeries {
    pub fn zero(order: usize) -> Self {
        BiSeries {
            order,
            slices: vec![Vec::new(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = BiSeries::zero(order);
        s.slices[0] = vec![BigRational::one()];
        s
    }

    /// Builds a series from `(n, q) -> coefficient`, dropping `n > order`.
    pub fn from_coeffs(order: usize, coeffs: impl IntoIterator<Item = ((usize, usize), BigRational)>) -> Self {
        let mut s = BiSeries::zero(order);
        for ((n, q), c) in coeffs {
            if n <= order {
                s.add_to(n, q, &c);
            }
        }
        s
    }

    /// Builds an EGF from integer counts `a_{n,q}`, storing `a_{n,q} / n!`.
    pub fn from_counts(order: usize, counts: impl IntoIterator<Item = ((usize, usize), BigInt)>) -> Self {
        BiSeries::from_coeffs(
            order,
            counts.into_iter().map(|((n, q), a)| {
                ((n, q), BigRational::new(a, BigInt::from(factorial(n))))
            }),
        )
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeff(&self, n: usize, q: usize) -> BigRational {
        self.slices
            .get(n)
            .and_then(|s| s.get(q))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// The polynomial in `t` multiplying `x^n`, without trailing zeros.
    pub fn slice(&self, n: usize) -> &[BigRational] {
        &self.slices[n]
    }

    pub fn add_to(&mut self, n: usize, q: usize, c: &BigRational) {
        let s = &mut self.slices[n];
        if s.len() <= q {
            s.resize(q + 1, BigRational::zero());
        }
        s[q] += c;
        trim(s);
    }

    /// Nonzero coefficients in `(n, q)` order.
    pub fn terms(&self) -> impl Iterator<Item = ((usize, usize), &BigRational)> {
        self.slices.iter().enumerate().flat_map(|(n, s)| {
            s.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(move |(q, c)| ((n, q), c))
        })
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order);
        BiSeries {
            order,
            slices: self.slices[..=order].to_vec(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = self.clone();
        for s in &mut out.slices {
            for v in s.iter_mut() {
                *v *= c;
            }
            trim(s);
        }
        out
    }

    /// The substitution `t -> t + delta`.
    pub fn shift_t(&self, delta: i64) -> Self {
        let d = rat(delta);
        let mut out = BiSeries::zero(self.order);
        for (n, s) in self.slices.iter().enumerate() {
            let deg = s.len();
            let mut p = vec![BigRational::zero(); deg];
            for (q, c) in s.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                // (t + d)^q = sum_j C(q, j) d^(q - j) t^j
                let mut binom = BigInt::one();
                for j in (0..=q).rev() {
                    let term = c * BigRational::from_integer(binom.clone()) * pow(&d, q - j);
                    p[j] += term;
                    binom = binom * BigInt::from(j) / BigInt::from(q - j + 1);
                }
            }
            trim(&mut p);
            out.slices[n] = p;
        }
        out
    }

    /// The multiplicative inverse, computed slice by slice in `x`.
    /// Requires the `x^0` slice to be exactly `1`.
    pub fn reciprocal(&self) -> Result<Self> {
        if self.slices[0].len() != 1 || !self.slices[0][0].is_one() {
            return Err(Error::BadConstantTerm);
        }
        let mut r = BiSeries::one(self.order);
        for n in 1..=self.order {
            let mut acc = Vec::new();
            for i in 1..=n {
                let prod = poly_mul(&self.slices[i], &r.slices[n - i]);
                poly_add(&mut acc, &prod, &rat(-1));
            }
            r.slices[n] = acc;
        }
        Ok(r)
    }

    /// `d/dx`; the result is known one order less.
    pub fn derivative(&self) -> Self {
        if self.order == 0 {
            return BiSeries::zero(0);
        }
        let mut out = BiSeries::zero(self.order - 1);
        for n in 0..self.order {
            out.slices[n] = self.slices[n + 1]
                .iter()
                .map(|c| c * rat(n as i64 + 1))
                .collect();
            trim(&mut out.slices[n]);
        }
        out
    }

    pub fn derivative_n(&self, a: usize) -> Self {
        (0..a).fold(self.clone(), |s, _| s.derivative())
    }

    /// Multiplication by `x^b`; the result is known `b` orders further.
    pub fn mul_x_pow(&self, b: usize) -> Self {
        let mut out = BiSeries::zero(self.order + b);
        for (n, s) in self.slices.iter().enumerate() {
            out.slices[n + b] = s.clone();
        }
        out
    }

    /// Multiplication by `t^e`.
    pub fn mul_t_pow(&self, e: usize) -> Self {
        let mut out = self.clone();
        for s in &mut out.slices {
            if !s.is_empty() {
                let mut p = vec![BigRational::zero(); e];
                p.append(s);
                *s = p;
            }
        }
        out
    }

    /// Substitutes a value for `t`, leaving a series in `x` alone (stored in
    /// the `t^0` coefficients).
    pub fn eval_t(&self, value: i64) -> Self {
        let v = rat(value);
        let mut out = BiSeries::zero(self.order);
        for (n, s) in self.slices.iter().enumerate() {
            let mut acc = BigRational::zero();
            for c in s.iter().rev() {
                acc = acc * &v + c;
            }
            if !acc.is_zero() {
                out.slices[n] = vec![acc];
            }
        }
        out
    }

    /// The integer count `n! * c_{n,q}`.
    pub fn count(&self, n: usize, q: usize) -> Result<BigInt> {
        let v = self.coeff(n, q) * BigRational::from_integer(BigInt::from(factorial(n)));
        if !v.is_integer() {
            return Err(Error::NonIntegral { n, q });
        }
        Ok(v.to_integer())
    }

    /// All counts `n! * c_{n,q}`, checking that each is an integer.
    pub fn counts(&self) -> Result<BTreeMap<(usize, usize), BigInt>> {
        let mut out = BTreeMap::new();
        for ((n, q), _) in self.terms() {
            out.insert((n, q), self.count(n, q)?);
        }
        Ok(out)
    }

    /// `n, q, alpha` rows for `0 <= q <= n <= order`.
    pub fn to_alpha_tsv(&self) -> Result<String> {
        let mut s = String::from("n\tq\talpha\n");
        for n in 0..=self.order {
            for q in 0..=n.max(self.slices[n].len().saturating_sub(1)) {
                let _ = writeln!(s, "{n}\t{q}\t{}", self.count(n, q)?);
            }
        }
        Ok(s)
    }

    /// `n, alpha` rows of the `t = 0` specialization.
    pub fn to_alpha_n_tsv(&self) -> Result<String> {
        let mut s = String::from("n\talpha\n");
        for n in 0..=self.order {
            let _ = writeln!(s, "{n}\t{}", self.count(n, 0)?);
        }
        Ok(s)
    }

    /// Parses the output of [`Self::to_alpha_tsv`].
    pub fn from_alpha_tsv(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        let mut order = 0;
        for (i, line) in text.lines().enumerate().skip(1) {
            if line.trim().is_empty() {
                continue;
            }
            let err = || Error::Parse {
                line: i + 1,
                message: format!("expected `n<TAB>q<TAB>alpha`, found {line:?}"),
            };
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 3 {
                return Err(err());
            }
            let n: usize = cols[0].parse().map_err(|_| err())?;
            let q: usize = cols[1].parse().map_err(|_| err())?;
            let a: BigInt = cols[2].parse().map_err(|_| err())?;
            order = order.max(n);
            rows.push(((n, q), a));
        }
        Ok(BiSeries::from_counts(order, rows))
    }

    /// `n, q, coeff` rows for the nonzero coefficients, preceded by an
    /// `# order` line so that truncation survives the round trip.
    pub fn to_coeff_tsv(&self) -> String {
        let mut s = format!("# order {}\nn\tq\tcoeff\n", self.order);
        for ((n, q), c) in self.terms() {
            let _ = writeln!(s, "{n}\t{q}\t{c}");
        }
        s
    }

    pub fn from_coeff_tsv(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let order = lines
            .next()
            .and_then(|(_, l)| l.strip_prefix("# order "))
            .and_then(|o| o.trim().parse().ok())
            .ok_or_else(|| Error::Parse {
                line: 1,
                message: "expected `# order N`".into(),
            })?;
        let mut s = BiSeries::zero(order);
        for (i, line) in lines.skip(1) {
            if line.trim().is_empty() {
                continue;
            }
            let err = || Error::Parse {
                line: i + 1,
                message: format!("expected `n<TAB>q<TAB>coeff`, found {line:?}"),
            };
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 3 {
                return Err(err());
            }
            let n: usize = cols[0].parse().map_err(|_| err())?;
            let q: usize = cols[1].parse().map_err(|_| err())?;
            let c: BigRational = cols[2].parse().map_err(|_| err())?;
            if n > order {
                return Err(err());
            }
            s.add_to(n, q, &c);
        }
        Ok(s)
    }

    /// Nonzero coefficients of `self - other` through the common order.
    pub fn differences(&self, other: &BiSeries) -> Vec<((usize, usize), BigRational)> {
        let d = self - other;
        d.terms().map(|(k, c)| (k, c.clone())).collect()
    }
}

fn pow(b: &BigRational, e: usize) -> BigRational {
    (0..e).fold(BigRational::one(), |acc, _| acc * b)
}

impl PartialEq for BiSeries {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.slices == other.slices
    }
}

impl Eq for BiSeries {}

impl Add for &BiSeries {
    type Output = BiSeries;

    fn add(self, rhs: &BiSeries) -> BiSeries {
        let order = self.order.min(rhs.order);
        let mut out = self.truncate(order);
        for n in 0..=order {
            poly_add(&mut out.slices[n], &rhs.slices[n], &BigRational::one());
        }
        out
    }
}

impl Sub for &BiSeries {
    type Output = BiSeries;

    fn sub(self, rhs: &BiSeries) -> BiSeries {
        let order = self.order.min(rhs.order);
        let mut out = self.truncate(order);
        for n in 0..=order {
            poly_add(&mut out.slices[n], &rhs.slices[n], &rat(-1));
        }
        out
    }
}

impl Neg for &BiSeries {
    type Output = BiSeries;

    fn neg(self) -> BiSeries {
        self.scale(&rat(-1))
    }
}

impl Mul for &BiSeries {
    type Output = BiSeries;

    fn mul(self, rhs: &BiSeries) -> BiSeries {
        let order = self.order.min(rhs.order);
        let mut out = BiSeries::zero(order);
        for i in 0..=order {
            if self.slices[i].is_empty() {
                continue;
            }
            for j in 0..=order - i {
                let prod = poly_mul(&self.slices[i], &rhs.slices[j]);
                poly_add(&mut out.slices[i + j], &prod, &BigRational::one());
            }
        }
        out
    }
}

/// `x + sum cl_{n,q} x^n t^q / n!` over `n >= 1, q >= 1`, truncated at `x^order`.
pub fn cluster_gf(table: &ClusterTable, order: usize) -> Result<BiSeries> {
    cluster_gf_from_totals(&table.totals(), order)
}

/// As [`cluster_gf`], from aggregated counts. Clusters of size `q` have
/// length at least `q + 1`, so `q_max >= order - 1` suffices.
pub fn cluster_gf_from_totals(totals: &ClusterTotals, order: usize) -> Result<BiSeries> {
    if totals.n_max < order {
        return Err(Error::InsufficientOrder {
            needed: order,
            available: totals.n_max,
        });
    }
    if totals.q_max + 1 < order {
        return Err(Error::InsufficientOrder {
            needed: order.saturating_sub(1),
            available: totals.q_max,
        });
    }
    let mut s = BiSeries::zero(order);
    if order >= 1 {
        s.add_to(1, 0, &BigRational::one());
    }
    let counts = totals
        .counts
        .iter()
        .filter(|&(&(n, q), _)| q >= 1 && n <= order)
        .map(|(&k, c)| (k, BigInt::from(c.clone())));
    Ok(&s + &BiSeries::from_counts(order, counts))
}

/// `1 / (1 - C(x, t - 1))` for a cluster series `C`.
pub fn avoidance_from_cluster_gf(cl: &BiSeries) -> Result<BiSeries> {
    (&BiSeries::one(cl.order()) - &cl.shift_t(-1)).reciprocal()
}

/// The occurrence-counting EGF `sum alpha_{n,q} x^n t^q / n!` through `x^order`.
pub fn avoidance_gf(collection: &PatternCollection, order: usize) -> Result<BiSeries> {
    let table = cluster_counts(collection, order, order);
    avoidance_from_cluster_gf(&cluster_gf(&table, order)?)
}

/// For every permutation of length `n`, the total number of consecutive
/// occurrences of patterns from the collection; returns how many
/// permutations have each total.
pub fn count_distribution_oracle(collection: &PatternCollection, n: usize) -> BTreeMap<usize, u64> {
    if n == 0 {
        return BTreeMap::from([(0, 1)]);
    }
    let matchers: Vec<Matcher> = collection.patterns().iter().map(Matcher::new).collect();
    (1..=n as u8)
        .into_par_iter()
        .map(|first| {
            let mut hist = vec![0u64; n + 1];
            for_each_with_first(n, first, |s| {
                let occ: usize = matchers.iter().map(|m| m.count_in(s)).sum();
                hist[occ] += 1;
            });
            hist
        })
        .reduce(
            || vec![0u64; n + 1],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        )
        .into_iter()
        .enumerate()
        .filter(|&(_, c)| c > 0)
        .collect()
}

/// Whether every coefficient is a nonnegative integer count.
pub fn has_nonnegative_integer_counts(s: &BiSeries) -> bool {
    s.counts().is_ok_and(|c| c.values().all(|v| !v.is_negative()))
}
