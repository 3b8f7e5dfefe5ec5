//! Pre-clusters, minimal clusters, and the minimal-cluster generating
//! function `M_u(x, y, z)`.
//!
//! An `m`-pre-cluster of a length-`k` pattern is a stack of `m` copies of the
//! pattern at offsets `0 = o₁ < o₂ < … < o_m` with consecutive gaps in
//! `[1, k−1]`. Taking column maxima of the instantiated stack gives the
//! unique minimal cluster for that marking; recording which pattern indices
//! meet in each column gives the symbolic cluster.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::series::{Series, Truncation, YPolynomial};
use crate::words::Word;

pub const MAX_PATTERN_LEN: usize = 32;

/// A nonempty subset of `{1, …, k}`, stored as a bitmask (bit `i−1` for `i`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct IndexSet(u32);

impl IndexSet {
    pub fn from_indices(indices: &[usize]) -> Self {
        IndexSet(indices.iter().fold(0, |acc, &i| acc | (1 << (i - 1))))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn size(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, i: usize) -> bool {
        i >= 1 && self.0 & (1 << (i - 1)) != 0
    }

    /// Members in increasing order, 1-based.
    pub fn indices(self) -> Vec<usize> {
        (1..=32).filter(|&i| self.contains(i)).collect()
    }

    /// `u_I = max{u_i : i ∈ I}`.
    pub fn value_in(self, u: &Word) -> u32 {
        self.indices()
            .into_iter()
            .map(|i| u.entries()[i - 1])
            .max()
            .unwrap_or(0)
    }

    /// Every nonempty subset of `{1..k}`, ordered by size then lexicographically.
    pub fn all_nonempty(k: usize) -> Vec<IndexSet> {
        let mut sets: Vec<IndexSet> = (1u32..(1u32 << k)).map(IndexSet).collect();
        sets.sort();
        sets
    }
}

impl PartialOrd for IndexSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for IndexSet {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.size(), self.indices()).cmp(&(other.size(), other.indices()))
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.indices().iter().map(usize::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PreCluster {
    k: usize,
    offsets: Vec<usize>,
}

impl PreCluster {
    pub fn new(k: usize, offsets: Vec<usize>) -> Result<Self> {
        let valid = k >= 1
            && offsets.first() == Some(&0)
            && offsets.windows(2).all(|w| w[1] > w[0] && w[1] - w[0] < k);
        if !valid {
            return Err(Error::Precondition(format!(
                "offsets {offsets:?} do not form a pre-cluster for k = {k}"
            )));
        }
        Ok(PreCluster { k, offsets })
    }

    fn from_gaps(k: usize, gaps: &[usize]) -> Self {
        let mut offsets = Vec::with_capacity(gaps.len() + 1);
        offsets.push(0);
        let mut o = 0;
        for g in gaps {
            o += g;
            offsets.push(o);
        }
        PreCluster { k, offsets }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    /// Number of rows.
    pub fn m(&self) -> usize {
        self.offsets.len()
    }

    pub fn length(&self) -> usize {
        self.offsets.last().copied().unwrap_or(0) + self.k
    }
}

/// Calls `f` on every gap tuple of `parts` entries from `[1, max_gap]`,
/// optionally with a fixed sum, in lexicographic order.
fn for_each_gaps(parts: usize, max_gap: usize, sum: Option<usize>, f: &mut dyn FnMut(&[usize])) {
    fn rec(
        gaps: &mut Vec<usize>,
        parts: usize,
        max_gap: usize,
        remaining: Option<usize>,
        f: &mut dyn FnMut(&[usize]),
    ) {
        let left = parts - gaps.len();
        if left == 0 {
            if remaining.is_none_or(|r| r == 0) {
                f(gaps);
            }
            return;
        }
        for g in 1..=max_gap {
            let next = match remaining {
                Some(r) => {
                    // every later gap needs between 1 and max_gap
                    if g > r || r - g < left - 1 || r - g > (left - 1) * max_gap {
                        continue;
                    }
                    Some(r - g)
                }
                None => None,
            };
            gaps.push(g);
            rec(gaps, parts, max_gap, next, f);
            gaps.pop();
        }
    }
    rec(&mut Vec::with_capacity(parts), parts, max_gap, sum, f);
}

/// All `m`-pre-clusters of a length-`k` pattern, in lexicographic gap order.
pub fn enumerate_preclusters(k: usize, m: usize) -> Vec<PreCluster> {
    let mut out = Vec::new();
    if k == 0 || m == 0 {
        return out;
    }
    for_each_gaps(m - 1, k - 1, None, &mut |g| {
        out.push(PreCluster::from_gaps(k, g))
    });
    out
}

/// The `m`-pre-clusters of total length `length`.
pub fn enumerate_preclusters_by_length(k: usize, m: usize, length: usize) -> Vec<PreCluster> {
    let mut out = Vec::new();
    if k == 0 || m == 0 || length < k {
        return out;
    }
    for_each_gaps(m - 1, k - 1, Some(length - k), &mut |g| {
        out.push(PreCluster::from_gaps(k, g))
    });
    out
}

/// Column `p` (1-based) holds `{p − o_t : o_t < p ≤ o_t + k}`.
pub fn symbolic_cluster(pre: &PreCluster) -> Vec<IndexSet> {
    let mut columns = vec![0u32; pre.length()];
    for &o in &pre.offsets {
        for j in 0..pre.k {
            columns[o + j] |= 1 << j;
        }
    }
    columns.into_iter().map(IndexSet).collect()
}

/// The minimal cluster word: column maxima of the instantiated pre-cluster.
pub fn cluster_word(u: &Word, pre: &PreCluster) -> Result<Word> {
    if u.len() != pre.k {
        return Err(Error::LengthMismatch {
            expected: pre.k,
            got: u.len(),
        });
    }
    let e = u.entries();
    let mut word = vec![0u32; pre.length()];
    for &o in &pre.offsets {
        for (j, &v) in e.iter().enumerate() {
            word[o + j] = word[o + j].max(v);
        }
    }
    Word::new(word)
}

/// True iff every marked window of `c` dominates `u`.
pub fn marked_factors_dominate(u: &Word, pre: &PreCluster, c: &Word) -> bool {
    c.len() == pre.length()
        && pre.offsets.iter().all(|&o| {
            c.entries()[o..o + pre.k]
                .iter()
                .zip(u.entries())
                .all(|(a, b)| a >= b)
        })
}

/// True iff lowering any single entry of the cluster word by one breaks at
/// least one marked factor.
pub fn is_minimal(u: &Word, pre: &PreCluster, c: &Word) -> bool {
    (0..c.len()).all(|p| {
        let v = c.entries()[p];
        if v == 1 {
            // 0 is not a letter.
            return true;
        }
        let mut lowered = c.entries().to_vec();
        lowered[p] = v - 1;
        let lowered = Word::new(lowered).expect("entries stay positive");
        !marked_factors_dominate(u, pre, &lowered)
    })
}

fn check_pattern(u: &Word) -> Result<()> {
    u.require_nonempty()?;
    if u.len() > MAX_PATTERN_LEN {
        return Err(Error::PatternTooLong(u.len()));
    }
    Ok(())
}

/// `M_u` truncated at `trunc`: `Σ z^m x^L y^{‖c‖}` over pre-clusters whose
/// minimal cluster `c` has weight at most `W`.
///
/// Rows are appended depth-first with the cluster weight maintained
/// incrementally; appending a row never lowers the weight, so a branch is
/// cut as soon as it exceeds `W`.
pub fn minimal_cluster_gf(u: &Word, trunc: Truncation) -> Result<Series> {
    check_pattern(u)?;
    let w = trunc.max_weight();
    let mut acc: BTreeMap<(u32, u32, u32), u64> = BTreeMap::new();
    let base = u.weight();
    if base <= w {
        extend_clusters(u, u.entries().to_vec(), 0, 1, base, w, &mut acc);
    }
    Ok(Series::from_terms(
        trunc,
        acc.into_iter()
            .map(|((a, b, c), n)| (a, b, c, BigInt::from(n))),
    ))
}

fn extend_clusters(
    u: &Word,
    word: Vec<u32>,
    last_offset: usize,
    rows: u32,
    weight: u32,
    cap: u32,
    acc: &mut BTreeMap<(u32, u32, u32), u64>,
) {
    *acc.entry((word.len() as u32, weight, rows)).or_default() += 1;
    let e = u.entries();
    let k = e.len();
    for gap in 1..k {
        let o = last_offset + gap;
        let mut next = word.clone();
        let mut next_weight = weight;
        for (j, &v) in e.iter().enumerate() {
            let p = o + j;
            if p < next.len() {
                if v > next[p] {
                    next_weight += v - next[p];
                    next[p] = v;
                }
            } else {
                next.push(v);
                next_weight += v;
            }
        }
        if next_weight <= cap {
            extend_clusters(u, next, o, rows + 1, next_weight, cap, acc);
        }
    }
}

/// `[xⁿ z^m] M_u` as an exact polynomial in `y`.
pub fn mu_coefficient_poly(u: &Word, n: usize, m: usize) -> Result<YPolynomial> {
    check_pattern(u)?;
    let mut poly = YPolynomial::zero();
    for pre in enumerate_preclusters_by_length(u.len(), m, n) {
        let weight = cluster_word(u, &pre)?.weight();
        poly.add_monomial(weight as usize, 1);
    }
    Ok(poly)
}

/// Occurrence counts of each column subset among all symbolic
/// `m`-clusters, grouped by cluster length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chart {
    pub k: usize,
    pub m: usize,
    pub rows: Vec<ChartRow>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartRow {
    pub length: usize,
    pub preclusters: usize,
    pub counts: BTreeMap<IndexSet, u64>,
}

impl Chart {
    pub fn count(&self, length: usize, set: IndexSet) -> u64 {
        self.rows
            .iter()
            .find(|r| r.length == length)
            .and_then(|r| r.counts.get(&set).copied())
            .unwrap_or(0)
    }

    pub fn row(&self, length: usize) -> Option<&ChartRow> {
        self.rows.iter().find(|r| r.length == length)
    }

    /// Tabular text: one row per length, one column per subset ordered by
    /// size then lexicographically, blank cells for zero.
    pub fn to_text(&self) -> String {
        let columns = IndexSet::all_nonempty(self.k);
        let labels: Vec<String> = columns.iter().map(|c| format!("u{c}")).collect();
        let widths: Vec<usize> = labels
            .iter()
            .zip(&columns)
            .map(|(l, c)| {
                let widest = self
                    .rows
                    .iter()
                    .map(|r| r.counts.get(c).map_or(0, |n| n.to_string().len()))
                    .max()
                    .unwrap_or(0);
                l.len().max(widest)
            })
            .collect();
        let mut out = String::new();
        let render = |cells: Vec<String>, out: &mut String, first: &str| {
            out.push_str(&format!("{first:>6} |"));
            let mut size = 1;
            for ((cell, width), col) in cells.iter().zip(&widths).zip(&columns) {
                if col.size() != size {
                    out.push_str(" |");
                    size = col.size();
                }
                out.push_str(&format!(" {cell:>width$}"));
            }
            out.push('\n');
        };
        render(labels.clone(), &mut out, "length");
        for row in &self.rows {
            let cells = columns
                .iter()
                .map(|c| row.counts.get(c).map_or(String::new(), u64::to_string))
                .collect();
            render(cells, &mut out, &row.length.to_string());
        }
        out
    }

    pub fn to_json_value(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let mut counts = Map::new();
                for (set, n) in &r.counts {
                    counts.insert(set.to_string(), json!(n));
                }
                json!({ "length": r.length, "counts": counts })
            })
            .collect();
        json!({ "k": self.k, "m": self.m, "rows": rows })
    }
}

pub fn chart(k: usize, m: usize) -> Result<Chart> {
    if !(2..=MAX_PATTERN_LEN).contains(&k) || m == 0 {
        return Err(Error::Precondition(format!(
            "chart needs 2 <= k <= {MAX_PATTERN_LEN} and m >= 1, got k = {k}, m = {m}"
        )));
    }
    let mut rows: BTreeMap<usize, ChartRow> = BTreeMap::new();
    for pre in enumerate_preclusters(k, m) {
        let row = rows.entry(pre.length()).or_insert_with(|| ChartRow {
            length: pre.length(),
            preclusters: 0,
            counts: BTreeMap::new(),
        });
        row.preclusters += 1;
        for col in symbolic_cluster(&pre) {
            *row.counts.entry(col).or_default() += 1;
        }
    }
    Ok(Chart {
        k,
        m,
        rows: rows.into_values().collect(),
    })
}
