//! Recovering a pattern's sorted letters from its minimal-cluster series.
//!
//! For a pattern of length `k` and `1 ≤ i ≤ k−1`, the quantity
//!
//! ```text
//! d/dy ( [x^{2k+i−2} z^k] − Σ_{n=2k−2}^{2k+i−3} [xⁿ z^{k−1}] ) M_u  at y = 1
//! ```
//!
//! expands, column by column, into a signed multiset of subset maxima
//! `u_I`. After cancellation every size class `|I| = h` carries one common
//! nonnegative multiplicity `c_h`, and `Σ_{|I|=h} u_I = Σ_j C(k−j, h−1) λ_j`
//! turns the multiset into a lower-triangular integer system in the sorted
//! letters `λ₁ ≥ … ≥ λ_k`. The last part comes from `‖u‖`, the smallest
//! y-exponent of `M_u`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::clusters::{
    enumerate_preclusters_by_length, mu_coefficient_poly, symbolic_cluster, IndexSet,
    MAX_PATTERN_LEN,
};
use crate::error::{Error, Result};
use crate::series::{binomial_table, YPolynomial};
use crate::words::{Partition, Word};

/// Net signed count of each subset `I` in the expansion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedSubsetMultiset {
    pub k: usize,
    pub i: usize,
    counts: BTreeMap<IndexSet, i64>,
}

impl SignedSubsetMultiset {
    pub fn multiplicity(&self, set: IndexSet) -> i64 {
        self.counts.get(&set).copied().unwrap_or(0)
    }

    /// Nonzero entries, ordered by size then lexicographically.
    pub fn iter(&self) -> impl Iterator<Item = (IndexSet, i64)> + '_ {
        self.counts.iter().map(|(s, n)| (*s, *n))
    }

    /// `Σ_I multiplicity(I) · u_I` for a concrete pattern.
    pub fn evaluate(&self, u: &Word) -> BigInt {
        self.counts
            .iter()
            .map(|(s, n)| BigInt::from(*n) * BigInt::from(s.value_in(u)))
            .sum()
    }

    /// The common multiplicity of each size class, failing loudly if any
    /// class is not uniform or any multiplicity is negative.
    pub fn size_class_multiplicities(&self) -> Result<BTreeMap<usize, i64>> {
        let mut out = BTreeMap::new();
        for (set, n) in &self.counts {
            if *n < 0 {
                return Err(Error::NegativeMultiplicity {
                    k: self.k,
                    i: self.i,
                    subset: set.to_string(),
                    found: *n,
                });
            }
            out.entry(set.size()).or_insert(*n);
        }
        for set in IndexSet::all_nonempty(self.k) {
            let expected = out.get(&set.size()).copied().unwrap_or(0);
            let found = self.multiplicity(set);
            if found != expected {
                return Err(Error::NonUniform {
                    k: self.k,
                    i: self.i,
                    subset: set.to_string(),
                    found,
                    expected,
                });
            }
        }
        Ok(out)
    }
}

fn check_range(k: usize, i: usize) -> Result<()> {
    if !(2..=MAX_PATTERN_LEN).contains(&k) || i == 0 || i >= k {
        return Err(Error::IndexOutOfRange {
            k,
            i,
            max: k.saturating_sub(1),
        });
    }
    Ok(())
}

/// Lengths `2k−2 ..= 2k+i−3` of the subtracted `(k−1)`-row terms.
fn subtracted_lengths(k: usize, i: usize) -> std::ops::RangeInclusive<usize> {
    2 * k - 2..=2 * k + i - 3
}

/// Symbolic expansion: +1 per column of each `k`-row pre-cluster of length
/// `2k+i−2`, −1 per column of each `(k−1)`-row pre-cluster of lengths
/// `2k−2 ..= 2k+i−3`.
pub fn ddagger_symbolic(k: usize, i: usize) -> Result<SignedSubsetMultiset> {
    check_range(k, i)?;
    let mut counts: BTreeMap<IndexSet, i64> = BTreeMap::new();
    for pre in enumerate_preclusters_by_length(k, k, 2 * k + i - 2) {
        for col in symbolic_cluster(&pre) {
            *counts.entry(col).or_default() += 1;
        }
    }
    for length in subtracted_lengths(k, i) {
        for pre in enumerate_preclusters_by_length(k, k - 1, length) {
            for col in symbolic_cluster(&pre) {
                *counts.entry(col).or_default() -= 1;
            }
        }
    }
    counts.retain(|_, n| *n != 0);
    Ok(SignedSubsetMultiset { k, i, counts })
}

/// Lower-triangular system: row `i` (1-based) holds the coefficients of
/// `λ₁ … λ_i` in the `i`-th expansion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecoveryMatrix {
    pub k: usize,
    pub rows: Vec<Vec<u64>>,
    /// Per row, the common multiplicity of each subset size present.
    pub class_multiplicities: Vec<BTreeMap<usize, i64>>,
}

impl RecoveryMatrix {
    pub fn entry(&self, i: usize, j: usize) -> u64 {
        self.rows[i - 1][j - 1]
    }
}

pub fn recovery_matrix(k: usize) -> Result<RecoveryMatrix> {
    if !(1..=MAX_PATTERN_LEN).contains(&k) {
        return Err(Error::PatternTooLong(k));
    }
    let binom = binomial_table(k);
    let mut rows = Vec::with_capacity(k.saturating_sub(1));
    let mut class_multiplicities = Vec::with_capacity(k.saturating_sub(1));
    for i in 1..k {
        let classes = ddagger_symbolic(k, i)?.size_class_multiplicities()?;
        let mut row = Vec::with_capacity(i);
        for j in 1..=k {
            let coeff: BigInt = classes
                .iter()
                .filter(|(&h, _)| h - 1 <= k - j)
                .map(|(&h, &c)| BigInt::from(c) * &binom[k - j][h - 1])
                .sum();
            if j > i {
                if !coeff.is_zero() {
                    return Err(Error::NotTriangular { k, i, j });
                }
                continue;
            }
            row.push(coeff.to_u64().expect("nonnegative and small"));
        }
        if row[i - 1] == 0 {
            return Err(Error::InconsistentOracle(format!(
                "zero diagonal entry at k = {k}, i = {i}"
            )));
        }
        rows.push(row);
        class_multiplicities.push(classes);
    }
    Ok(RecoveryMatrix {
        k,
        rows,
        class_multiplicities,
    })
}

/// Source of minimal-cluster coefficients `[xⁿ z^m] M_u`.
pub trait MuOracle {
    /// The smallest x-exponent of `M_u`, i.e. the pattern length.
    fn pattern_length(&self) -> usize;

    fn coefficient(&self, n: usize, m: usize) -> Result<YPolynomial>;

    /// The smallest y-exponent of `M_u`.
    fn min_y_exponent(&self) -> Result<u64> {
        let k = self.pattern_length();
        self.coefficient(k, 1)?
            .valuation()
            .map(|v| v as u64)
            .ok_or_else(|| Error::InconsistentOracle("no single-row cluster".into()))
    }
}

/// Coefficients read off the clusters of a known pattern.
pub struct ClusterMuOracle {
    u: Word,
}

impl ClusterMuOracle {
    pub fn new(u: Word) -> Result<Self> {
        u.require_nonempty()?;
        Ok(ClusterMuOracle { u })
    }
}

impl MuOracle for ClusterMuOracle {
    fn pattern_length(&self) -> usize {
        self.u.len()
    }

    fn coefficient(&self, n: usize, m: usize) -> Result<YPolynomial> {
        mu_coefficient_poly(&self.u, n, m)
    }
}

/// Numeric value of the `i`-th expansion for the series behind `mu`.
pub fn ddagger_numeric(mu: &dyn MuOracle, i: usize) -> Result<BigInt> {
    let k = mu.pattern_length();
    check_range(k, i)?;
    let mut poly = mu.coefficient(2 * k + i - 2, k)?;
    for length in subtracted_lengths(k, i) {
        poly = poly.sub(&mu.coefficient(length, k - 1)?);
    }
    Ok(poly.deriv_y_at_1())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Recovery {
    pub k: usize,
    pub lambda: Vec<u32>,
    pub matrix: Vec<Vec<u64>>,
    pub ddagger: Vec<String>,
}

impl Recovery {
    pub fn partition(&self) -> Partition {
        Partition::new(self.lambda.clone()).expect("validated during recovery")
    }

    /// `{"k":…,"lambda":[…],"matrix":[[…]],"ddagger":[…]}`.
    pub fn to_json_value(&self) -> serde_json::Value {
        let ddagger: Vec<serde_json::Value> = self
            .ddagger
            .iter()
            .map(|d| match d.parse::<i64>() {
                Ok(n) => serde_json::json!(n),
                Err(_) => serde_json::json!(d),
            })
            .collect();
        serde_json::json!({
            "k": self.k,
            "lambda": self.lambda,
            "matrix": self.matrix,
            "ddagger": ddagger,
        })
    }
}

/// Solves for `λ` with a precomputed matrix (must match the oracle's `k`).
pub fn recover_with_matrix(mu: &dyn MuOracle, matrix: &RecoveryMatrix) -> Result<Recovery> {
    let k = mu.pattern_length();
    if k == 0 || matrix.k != k {
        return Err(Error::InconsistentOracle(format!(
            "matrix built for k = {}, oracle reports k = {k}",
            matrix.k
        )));
    }
    let total = BigInt::from(mu.min_y_exponent()?);
    let mut lambda: Vec<BigInt> = Vec::with_capacity(k);
    let mut ddagger = Vec::with_capacity(k - 1);
    for i in 1..k {
        let d = ddagger_numeric(mu, i)?;
        let row = &matrix.rows[i - 1];
        let mut rest = d.clone();
        for (j, l) in lambda.iter().enumerate() {
            rest -= BigInt::from(row[j]) * l;
        }
        let diag = BigInt::from(row[i - 1]);
        if !(&rest % &diag).is_zero() {
            return Err(Error::InconsistentOracle(format!(
                "lambda_{i} = {rest}/{diag} is not an integer"
            )));
        }
        lambda.push(rest / diag);
        ddagger.push(d.to_string());
    }
    let last = total - lambda.iter().sum::<BigInt>();
    lambda.push(last);

    let mut parts = Vec::with_capacity(k);
    for (idx, l) in lambda.iter().enumerate() {
        if !l.is_positive() {
            return Err(Error::InconsistentOracle(format!(
                "lambda_{} = {l} is not positive",
                idx + 1
            )));
        }
        parts.push(l.to_u32().ok_or_else(|| {
            Error::InconsistentOracle(format!("lambda_{} = {l} is too large", idx + 1))
        })?);
    }
    if parts.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::InconsistentOracle(format!(
            "recovered parts {parts:?} are not weakly decreasing"
        )));
    }
    Ok(Recovery {
        k,
        lambda: parts,
        matrix: matrix.rows.clone(),
        ddagger,
    })
}

pub fn recover(mu: &dyn MuOracle) -> Result<Recovery> {
    let matrix = recovery_matrix(mu.pattern_length())?;
    recover_with_matrix(mu, &matrix)
}

/// The sorted letters of the pattern behind `mu`, using only its
/// minimal-cluster coefficients.
pub fn recover_partition(mu: &dyn MuOracle) -> Result<Partition> {
    Ok(recover(mu)?.partition())
}
