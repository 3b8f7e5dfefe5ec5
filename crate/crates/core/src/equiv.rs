//! Wilf and strong Wilf classification at a truncation horizon, plus checks
//! of the known equivalences and closed forms.
//!
//! Every equality reported here means "indistinguishable through weight W".
//! An inequality at any W is a definite non-equivalence.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::clusters::minimal_cluster_gf;
use crate::error::{Error, Result};
use crate::genfun::{avoidance_gf, full_gf, plus_transform, prepend_transform, unplus_transform};
use crate::oracle::enumerate_words;
use crate::series::{Series, Truncation};
use crate::words::{partition_of, Partition, Word};

/// Canonical text of `A_u(x, y, 0)`.
pub fn wilf_key(u: &Word, trunc: Truncation) -> Result<String> {
    Ok(avoidance_gf(u, trunc)?.canonical_serialize())
}

/// Canonical text of `A_u(x, y, z)`.
pub fn strong_key(u: &Word, trunc: Truncation) -> Result<String> {
    Ok(full_gf(u, trunc)?.canonical_serialize())
}

/// True when `W < ‖u‖`, so the series carry no information about `u`.
pub fn is_vacuous(u: &Word, trunc: Truncation) -> bool {
    u.weight() > trunc.max_weight()
}

/// Hex SHA-256 of a key, for compact reporting.
pub fn key_hash(key: &str) -> String {
    hex::encode(Sha256::digest(key.as_bytes()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivalenceClass {
    #[serde(serialize_with = "words_as_text")]
    pub members: Vec<Word>,
    #[serde(serialize_with = "partition_as_parts")]
    pub partition: Partition,
    pub wilf_hash: String,
    /// `None` when the Wilf class splits into several strong classes.
    pub strong_hash: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WilfStrongMismatch {
    pub wilf_hash: String,
    #[serde(serialize_with = "groups_as_text")]
    pub strong_classes: Vec<Vec<Word>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RearrangementViolation {
    pub wilf_hash: String,
    #[serde(serialize_with = "words_as_text")]
    pub members: Vec<Word>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    #[serde(rename = "W")]
    pub max_weight: u32,
    pub max_factor_weight: u32,
    pub classes: Vec<EquivalenceClass>,
    pub wilf_strong_mismatches: Vec<WilfStrongMismatch>,
    pub rearrangement_violations: Vec<RearrangementViolation>,
}

impl EquivalenceReport {
    pub fn is_clean(&self) -> bool {
        self.wilf_strong_mismatches.is_empty() && self.rearrangement_violations.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report is serializable")
    }

    pub fn class_of(&self, u: &Word) -> Option<&EquivalenceClass> {
        self.classes.iter().find(|c| c.members.contains(u))
    }
}

fn words_as_text<S: serde::Serializer>(
    words: &[Word],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(words.iter().map(Word::to_string))
}

fn groups_as_text<S: serde::Serializer>(
    groups: &[Vec<Word>],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(
        groups
            .iter()
            .map(|g| g.iter().map(Word::to_string).collect::<Vec<_>>()),
    )
}

fn partition_as_parts<S: serde::Serializer>(
    p: &Partition,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(p.parts())
}

/// Buckets every pattern of weight at most `max_factor_weight` by its Wilf
/// and strong keys at `trunc`. Runs on the current rayon pool; the report
/// does not depend on the number of workers.
pub fn classify(max_factor_weight: u32, trunc: Truncation) -> Result<EquivalenceReport> {
    if max_factor_weight > trunc.max_weight() {
        return Err(Error::Precondition(format!(
            "max factor weight {max_factor_weight} exceeds the truncation {}",
            trunc.max_weight()
        )));
    }
    let patterns: Vec<Word> = enumerate_words(max_factor_weight)
        .filter(|w| !w.is_empty())
        .collect();
    classify_patterns(&patterns, trunc, max_factor_weight)
}

/// Classification over an explicit population (order of `patterns` is the
/// order members are listed in).
pub fn classify_patterns(
    patterns: &[Word],
    trunc: Truncation,
    max_factor_weight: u32,
) -> Result<EquivalenceReport> {
    let keyed: Vec<(String, String)> = patterns
        .par_iter()
        .map(|u| Ok((wilf_key(u, trunc)?, strong_key(u, trunc)?)))
        .collect::<Result<_>>()?;

    // Wilf key -> members in population order
    let mut order: Vec<String> = Vec::new();
    let mut wilf: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for (idx, (wk, _)) in keyed.iter().enumerate() {
        wilf.entry(wk.clone())
            .or_insert_with(|| {
                order.push(wk.clone());
                Vec::new()
            })
            .push(idx);
    }

    let mut classes = Vec::new();
    let mut mismatches = Vec::new();
    let mut violations = Vec::new();
    for wk in order {
        let idxs = &wilf[&wk];
        let members: Vec<Word> = idxs.iter().map(|&i| patterns[i].clone()).collect();
        let wilf_hash = key_hash(&wk);

        let mut strong_groups: Vec<(String, Vec<Word>)> = Vec::new();
        for &i in idxs {
            let sk = &keyed[i].1;
            match strong_groups.iter_mut().find(|(k, _)| k == sk) {
                Some((_, g)) => g.push(patterns[i].clone()),
                None => strong_groups.push((sk.clone(), vec![patterns[i].clone()])),
            }
        }
        let strong_hash = if strong_groups.len() == 1 {
            Some(key_hash(&strong_groups[0].0))
        } else {
            mismatches.push(WilfStrongMismatch {
                wilf_hash: wilf_hash.clone(),
                strong_classes: strong_groups.into_iter().map(|(_, g)| g).collect(),
            });
            None
        };

        let partition = partition_of(&members[0])?;
        let rearranged = members
            .iter()
            .all(|m| partition_of(m).map(|p| p == partition).unwrap_or(false));
        if !rearranged {
            violations.push(RearrangementViolation {
                wilf_hash: wilf_hash.clone(),
                members: members.clone(),
            });
        }
        classes.push(EquivalenceClass {
            members,
            partition,
            wilf_hash,
            strong_hash,
        });
    }

    Ok(EquivalenceReport {
        max_weight: trunc.max_weight(),
        max_factor_weight,
        classes,
        wilf_strong_mismatches: mismatches,
        rearrangement_violations: violations,
    })
}

/// A closed form `N(x, y) / D(x, y)` for an avoidance series, with `D`
/// given as a product of factors. Terms are `(x-exponent, y-exponent, coeff)`.
#[derive(Clone, Debug)]
pub struct RationalFixture {
    pub name: &'static str,
    pub pattern: Word,
    pub numerator: Vec<(u32, u32, i64)>,
    pub denominator_factors: Vec<Vec<(u32, u32, i64)>>,
}

impl RationalFixture {
    fn poly(terms: &[(u32, u32, i64)], trunc: Truncation) -> Series {
        Series::from_terms(trunc, terms.iter().map(|&(a, b, c)| (a, b, 0, c)))
    }

    pub fn numerator_series(&self, trunc: Truncation) -> Series {
        Self::poly(&self.numerator, trunc)
    }

    pub fn denominator_series(&self, trunc: Truncation) -> Result<Series> {
        self.denominator_factors
            .iter()
            .try_fold(Series::one(trunc), |acc, f| acc.mul(&Self::poly(f, trunc)))
    }

    pub fn denominator_y_degree(&self) -> u32 {
        self.denominator_factors
            .iter()
            .map(|f| f.iter().map(|t| t.1).max().unwrap_or(0))
            .sum()
    }
}

/// `A_122(x, y, 0)`.
pub fn fixture_122() -> RationalFixture {
    RationalFixture {
        name: "A_122",
        pattern: Word::new(vec![1, 2, 2]).expect("valid"),
        // 1 − 2y + (1+x)y² − xy³ + x²y⁴
        numerator: vec![
            (0, 0, 1),
            (0, 1, -2),
            (0, 2, 1),
            (1, 2, 1),
            (1, 3, -1),
            (2, 4, 1),
        ],
        // 1 − (2+x)y + (1+2x)y² − (x+x²)y³ + x²y⁴
        denominator_factors: vec![vec![
            (0, 0, 1),
            (0, 1, -2),
            (1, 1, -1),
            (0, 2, 1),
            (1, 2, 2),
            (1, 3, -1),
            (2, 3, -1),
            (2, 4, 1),
        ]],
    }
}

/// `A_212(x, y, 0)`.
pub fn fixture_212() -> RationalFixture {
    RationalFixture {
        name: "A_212",
        pattern: Word::new(vec![2, 1, 2]).expect("valid"),
        // 1 − 2y + (1+x)y² − (x−x²)y³ + x³y⁵
        numerator: vec![
            (0, 0, 1),
            (0, 1, -2),
            (0, 2, 1),
            (1, 2, 1),
            (1, 3, -1),
            (2, 3, 1),
            (3, 5, 1),
        ],
        // (1 − y + x²y³)(1 − (1+x)y + xy² − x²y³)
        denominator_factors: vec![
            vec![(0, 0, 1), (0, 1, -1), (2, 3, 1)],
            vec![(0, 0, 1), (0, 1, -1), (1, 1, -1), (1, 2, 1), (2, 3, -1)],
        ],
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalCheck {
    pub holds: bool,
    pub checked_through_y_degree: u32,
    /// First `(a, b)` where `D·S` and `N` differ, in `(b, a)` order.
    pub first_mismatch: Option<(u32, u32)>,
}

/// Checks `D · series ≡ N` on every monomial of y-degree at most
/// `max_y_degree` (which must not exceed the series truncation).
pub fn verify_rational_against(
    fixture: &RationalFixture,
    series: &Series,
    max_y_degree: u32,
) -> Result<RationalCheck> {
    let trunc = series.truncation();
    if max_y_degree > trunc.max_weight() {
        return Err(Error::Precondition(format!(
            "cannot check through y-degree {max_y_degree} with truncation {}",
            trunc.max_weight()
        )));
    }
    let product = fixture.denominator_series(trunc)?.mul(series)?;
    let diff = product
        .sub(&fixture.numerator_series(trunc))?
        .filter(|m| m.b <= max_y_degree);
    let first_mismatch = diff.lowest_term().map(|(m, _)| (m.a, m.b));
    Ok(RationalCheck {
        holds: first_mismatch.is_none(),
        checked_through_y_degree: max_y_degree,
        first_mismatch,
    })
}

/// Checks the fixture against the cluster-route avoidance series of its own
/// pattern, through y-degree `W − deg_y(D)`.
pub fn verify_rational(fixture: &RationalFixture, trunc: Truncation) -> Result<RationalCheck> {
    let series = avoidance_gf(&fixture.pattern, trunc)?;
    let bound = trunc
        .max_weight()
        .saturating_sub(fixture.denominator_y_degree());
    verify_rational_against(fixture, &series, bound)
}

/// Outcome of the reversal / prepend / plus identities for one pattern.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub pattern: String,
    pub reverse: bool,
    pub prepend_one: bool,
    pub plus_one: bool,
    pub minus_one: bool,
    pub pair: Option<PairReport>,
}

impl IdentityReport {
    pub fn all_hold(&self) -> bool {
        self.reverse
            && self.prepend_one
            && self.plus_one
            && self.minus_one
            && self.pair.as_ref().is_none_or(PairReport::consistent)
    }
}

/// Equivalence transfer between `u`, `v` and their `1·` and `⁺` images.
/// Each implication is checked at the truncation where it is exact.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairReport {
    pub other: String,
    pub strong_equal: bool,
    pub wilf_equal: bool,
    /// `M_u = M_v` (at W) ⇒ `M_{1u} = M_{1v}` (at W), and the converse at W−1.
    pub prepend_strong: bool,
    pub prepend_wilf: bool,
    /// `M_u = M_v` ⇒ `M_{u⁺} = M_{v⁺}`, and the converse on `a + b ≤ W`.
    pub plus_strong: bool,
    pub plus_wilf: bool,
}

impl PairReport {
    pub fn consistent(&self) -> bool {
        self.prepend_strong && self.prepend_wilf && self.plus_strong && self.plus_wilf
    }
}

fn implies(p: bool, q: bool) -> bool {
    !p || q
}

fn pair_report(u: &Word, v: &Word, trunc: Truncation) -> Result<PairReport> {
    let w = trunc.max_weight();
    let mu = |x: &Word, t: Truncation| minimal_cluster_gf(x, t);
    let lower = Truncation::new(w.saturating_sub(1).max(1))?;

    let (mu_u, mu_v) = (mu(u, trunc)?, mu(v, trunc)?);
    let (m1u, m1v) = (mu(&u.prepend_one(), trunc)?, mu(&v.prepend_one(), trunc)?);
    let (mpu, mpv) = (mu(&u.plus_one(), trunc)?, mu(&v.plus_one(), trunc)?);
    let (lo_u, lo_v) = (mu(u, lower)?, mu(v, lower)?);
    let small = |m: &Series| m.filter(|t| t.a + t.b <= w);

    let check = |f: &dyn Fn(&Series) -> Series| -> (bool, bool, bool) {
        let base = f(&mu_u) == f(&mu_v);
        let prepend =
            implies(base, f(&m1u) == f(&m1v)) && implies(f(&m1u) == f(&m1v), f(&lo_u) == f(&lo_v));
        let plus = implies(base, f(&mpu) == f(&mpv))
            && implies(f(&mpu) == f(&mpv), small(&f(&mu_u)) == small(&f(&mu_v)));
        (base, prepend, plus)
    };
    let (strong_equal, prepend_strong, plus_strong) = check(&|m: &Series| m.clone());
    let (wilf_equal, prepend_wilf, plus_wilf) = check(&|m: &Series| m.eval_z(-1));
    Ok(PairReport {
        other: v.to_string(),
        strong_equal,
        wilf_equal,
        prepend_strong,
        prepend_wilf,
        plus_strong,
        plus_wilf,
    })
}

/// Checks `M_{uʳ} = M_u`, `M_{1u} = xyM_u/(1−M_u)`, `M_{u⁺}(x,y,z) = M_u(xy,y,z)`
/// and `M_u(x,y,z) = M_{u⁺}(x/y,y,z)` as truncated series, and with `v`,
/// how equivalence of `u` and `v` transfers to `1u, 1v` and `u⁺, v⁺`.
pub fn check_prop_we1(u: &Word, v: Option<&Word>, trunc: Truncation) -> Result<IdentityReport> {
    u.require_nonempty()?;
    let w = trunc.max_weight();
    let mu_u = minimal_cluster_gf(u, trunc)?;
    let mu_plus = minimal_cluster_gf(&u.plus_one(), trunc)?;
    let reverse = minimal_cluster_gf(&u.reverse(), trunc)? == mu_u;
    let prepend_one = minimal_cluster_gf(&u.prepend_one(), trunc)? == prepend_transform(&mu_u)?;
    let plus_one = mu_plus == plus_transform(&mu_u)?;
    let minus_one = unplus_transform(&mu_plus)? == mu_u.filter(|m| m.a + m.b <= w);
    let pair = v.map(|v| pair_report(u, v, trunc)).transpose()?;
    Ok(IdentityReport {
        pattern: u.to_string(),
        reverse,
        prepend_one,
        plus_one,
        minus_one,
        pair,
    })
}

/// Strong-key equality of `a1b2c` and `a2b1c` (requires `a, b, c ≥ 2`).
pub fn check_theorem_we3(a: u32, b: u32, c: u32, trunc: Truncation) -> Result<bool> {
    if a < 2 || b < 2 || c < 2 {
        return Err(Error::Precondition(format!(
            "a, b, c must all be at least 2, got ({a}, {b}, {c})"
        )));
    }
    check_axbyc(a, 1, b, 2, c, trunc)
}

/// Strong-key equality of `axbyc` and `aybxc` (requires `a, b, c ≥ x, y ≥ 1`).
pub fn check_axbyc(a: u32, x: u32, b: u32, y: u32, c: u32, trunc: Truncation) -> Result<bool> {
    let low = x.max(y);
    if x == 0 || y == 0 || a < low || b < low || c < low {
        return Err(Error::Precondition(format!(
            "need a, b, c >= x, y >= 1, got a = {a}, x = {x}, b = {b}, y = {y}, c = {c}"
        )));
    }
    let left = Word::new(vec![a, x, b, y, c])?;
    let right = Word::new(vec![a, y, b, x, c])?;
    Ok(strong_key(&left, trunc)? == strong_key(&right, trunc)?)
}
