//! Words over the positive integers, entrywise dominance, and factor scanning.
//!
//! A word `w` has a length `|w|` (number of letters) and a weight `‖w‖`
//! (sum of letters). A window of `w` dominates a pattern `u` when it has the
//! same length and is at least `u` in every position.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite sequence of positive integers.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Word(Vec<u32>);

impl Word {
    pub fn new(entries: Vec<u32>) -> Result<Self> {
        if entries.contains(&0) {
            return Err(Error::NonPositiveEntry(0));
        }
        Ok(Word(entries))
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn max_entry(&self) -> Option<u32> {
        self.0.iter().copied().max()
    }

    pub fn reverse(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    /// The word `1u`.
    pub fn prepend_one(&self) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(1);
        v.extend_from_slice(&self.0);
        Word(v)
    }

    /// The word `u⁺`: every entry increased by one.
    pub fn plus_one(&self) -> Word {
        Word(self.0.iter().map(|&e| e + 1).collect())
    }

    pub(crate) fn require_nonempty(&self) -> Result<()> {
        if self.0.is_empty() {
            Err(Error::EmptyPattern)
        } else {
            Ok(())
        }
    }
}

impl TryFrom<Vec<u32>> for Word {
    type Error = Error;

    fn try_from(v: Vec<u32>) -> Result<Self> {
        Word::new(v)
    }
}

impl From<Word> for Vec<u32> {
    fn from(w: Word) -> Self {
        w.0
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Accepts either a compact digit string (`"3123"`) or comma-separated
    /// decimals (`"10,1,2,3"`). The empty string is the empty word.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = |reason: &str| Error::ParseWord {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        if s.is_empty() {
            return Ok(Word::empty());
        }
        let entries = if s.contains(',') {
            s.split(',')
                .map(|part| {
                    let part = part.trim();
                    part.parse::<u32>()
                        .map_err(|_| bad(&format!("{part:?} is not a decimal integer")))
                })
                .collect::<Result<Vec<_>>>()?
        } else {
            s.chars()
                .map(|c| {
                    c.to_digit(10)
                        .ok_or_else(|| bad(&format!("{c:?} is not a digit")))
                })
                .collect::<Result<Vec<_>>>()?
        };
        if entries.contains(&0) {
            return Err(bad("entries must be at least 1"));
        }
        Ok(Word(entries))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&e| e <= 9) {
            for e in &self.0 {
                write!(f, "{e}")?;
            }
        } else {
            let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
            write!(f, "{}", parts.join(","))?;
        }
        Ok(())
    }
}

/// A weakly decreasing sequence of positive parts.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::NonPositiveEntry(0));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Precondition(format!(
                "partition parts must be weakly decreasing: {parts:?}"
            )));
        }
        Ok(Partition(parts))
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// True iff `|v| = |u|` and `v_i ≥ u_i` for every position.
pub fn dominates(v: &Word, u: &Word) -> bool {
    v.len() == u.len() && v.0.iter().zip(&u.0).all(|(a, b)| a >= b)
}

/// 1-based start indices of the windows of `w` that dominate `u`.
pub fn em_set(u: &Word, w: &Word) -> Result<Vec<usize>> {
    u.require_nonempty()?;
    let k = u.len();
    if w.len() < k {
        return Ok(Vec::new());
    }
    Ok((0..=w.len() - k)
        .filter(|&i| w.0[i..i + k].iter().zip(&u.0).all(|(a, b)| a >= b))
        .map(|i| i + 1)
        .collect())
}

/// Number of windows of `w` that dominate `u`.
pub fn occurrence_count(u: &Word, w: &Word) -> Result<usize> {
    em_set(u, w).map(|s| s.len())
}

/// The entries of `u` sorted into weakly decreasing order.
pub fn partition_of(u: &Word) -> Result<Partition> {
    u.require_nonempty()?;
    let mut parts = u.0.clone();
    parts.sort_unstable_by(|a, b| b.cmp(a));
    Ok(Partition(parts))
}
