//! Reduced pattern collections and their text form.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{divides, Permutation};

/// A nonempty list of distinct patterns, none of which divides another.
///
/// Insertion order is preserved; bijections between collections refer to it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PatternCollection {
    patterns: Vec<Permutation>,
}

impl PatternCollection {
    /// Validates `patterns` as given. Use [`reduce_collection`] to drop
    /// redundant patterns instead of rejecting them.
    pub fn new(patterns: Vec<Permutation>) -> Result<Self> {
        if patterns.is_empty() {
            return Err(Error::EmptyCollection);
        }
        for (i, a) in patterns.iter().enumerate() {
            for (j, b) in patterns.iter().enumerate() {
                if i == j {
                    continue;
                }
                if a == b {
                    return Err(Error::DuplicatePattern(a.clone()));
                }
                if divides(a, b) {
                    return Err(Error::NotReduced {
                        divisor: a.clone(),
                        multiple: b.clone(),
                    });
                }
            }
        }
        Ok(PatternCollection { patterns })
    }

    pub fn single(pattern: Permutation) -> Self {
        PatternCollection {
            patterns: vec![pattern],
        }
    }

    pub fn patterns(&self) -> &[Permutation] {
        &self.patterns
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn get(&self, i: usize) -> &Permutation {
        &self.patterns[i]
    }

    pub fn max_len(&self) -> usize {
        self.patterns.iter().map(Permutation::len).max().unwrap()
    }

    pub fn min_len(&self) -> usize {
        self.patterns.iter().map(Permutation::len).min().unwrap()
    }

    pub fn reverse(&self) -> Self {
        PatternCollection {
            patterns: self.patterns.iter().map(Permutation::reverse).collect(),
        }
    }

    pub fn complement(&self) -> Self {
        PatternCollection {
            patterns: self.patterns.iter().map(Permutation::complement).collect(),
        }
    }

    /// Parses one pattern per line. Blank lines and text after `#` are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut patterns = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let p = line.parse::<Permutation>().map_err(|e| Error::Parse {
                line: i + 1,
                message: match e {
                    Error::Parse { message, .. } => message,
                    other => other.to_string(),
                },
            })?;
            patterns.push(p);
        }
        PatternCollection::new(patterns)
    }

    /// One pattern per line in separated form; parses back with [`Self::parse`].
    pub fn to_text(&self) -> String {
        self.patterns.iter().map(|p| format!("{p}\n")).collect()
    }
}

impl FromStr for PatternCollection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PatternCollection::parse(s)
    }
}

impl<'de> Deserialize<'de> for PatternCollection {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            patterns: Vec<Permutation>,
        }
        let raw = Raw::deserialize(d)?;
        PatternCollection::new(raw.patterns).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for PatternCollection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, p) in self.patterns.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "({p})")?;
        }
        f.write_str("}")
    }
}

/// Removes duplicates and every pattern divisible by another one.
pub fn reduce_collection(patterns: Vec<Permutation>) -> Result<PatternCollection> {
    if patterns.is_empty() {
        return Err(Error::EmptyCollection);
    }
    let mut unique: Vec<Permutation> = Vec::new();
    for p in patterns {
        if !unique.contains(&p) {
            unique.push(p);
        }
    }
    let kept: Vec<Permutation> = unique
        .iter()
        .filter(|b| !unique.iter().any(|a| a != *b && divides(a, b)))
        .cloned()
        .collect();
    PatternCollection::new(kept)
}

/// Shorthand for tests and examples: `collection(&["123", "132"])`.
///
/// Panics on malformed or non-reduced input.
pub fn collection(patterns: &[&str]) -> PatternCollection {
    PatternCollection::new(patterns.iter().map(|s| crate::perm::perm(s)).collect())
        .unwrap_or_else(|e| panic!("bad collection {patterns:?}: {e}"))
}
