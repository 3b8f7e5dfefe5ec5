//! Truncated trivariate formal power series over the integers.
//!
//! Variables: `x` marks length, `y` marks weight, `z` marks occurrences.
//! A series is truncated at a single bound `W`: terms with any exponent
//! above `W` are dropped. Since every letter has weight at least one and
//! every occurrence needs at least one letter, the dropped set is closed
//! under multiplication by anything with nonnegative exponents, so ring
//! operations on truncated series are exact below the cap.
//!
//! Coefficients are arbitrary-precision integers; zero coefficients are
//! never stored.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Truncation horizon: every exponent is kept at or below `max_weight`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Truncation {
    max_weight: u32,
}

impl Truncation {
    pub fn new(max_weight: u32) -> Result<Self> {
        if max_weight == 0 {
            return Err(Error::ZeroTruncation);
        }
        Ok(Truncation { max_weight })
    }

    pub fn max_weight(self) -> u32 {
        self.max_weight
    }

    pub fn admits(self, a: u32, b: u32, c: u32) -> bool {
        a <= self.max_weight && b <= self.max_weight && c <= self.max_weight
    }

    fn side(self) -> usize {
        self.max_weight as usize + 1
    }
}

/// Exponent triple of `x^a y^b z^c`, ordered by `(b, a, c)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub a: u32,
    pub b: u32,
    pub c: u32,
}

impl Monomial {
    pub fn new(a: u32, b: u32, c: u32) -> Self {
        Monomial { a, b, c }
    }

    fn key(&self) -> (u32, u32, u32) {
        (self.b, self.a, self.c)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key().cmp(&other.key())
    }
}

/// Dense scratch space indexed in `(b, a, c)` order, so draining it yields
/// canonically sorted terms.
struct Dense {
    side: usize,
    cells: Vec<BigInt>,
}

impl Dense {
    fn new(trunc: Truncation) -> Self {
        let side = trunc.side();
        Dense {
            side,
            cells: vec![BigInt::zero(); side * side * side],
        }
    }

    fn slot(&mut self, a: u32, b: u32, c: u32) -> &mut BigInt {
        let s = self.side;
        &mut self.cells[(b as usize * s + a as usize) * s + c as usize]
    }

    fn into_terms(self) -> BTreeMap<Monomial, BigInt> {
        let s = self.side;
        self.cells
            .into_iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(idx, v)| {
                let c = idx % s;
                let a = (idx / s) % s;
                let b = idx / (s * s);
                (Monomial::new(a as u32, b as u32, c as u32), v)
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    trunc: Truncation,
    terms: BTreeMap<Monomial, BigInt>,
}

impl Series {
    pub fn zero(trunc: Truncation) -> Self {
        Series {
            trunc,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(trunc: Truncation) -> Self {
        Self::monomial(trunc, 0, 0, 0, BigInt::one())
    }

    /// `coeff · x^a y^b z^c`, or zero if the monomial is beyond the cap.
    pub fn monomial(trunc: Truncation, a: u32, b: u32, c: u32, coeff: impl Into<BigInt>) -> Self {
        let mut s = Self::zero(trunc);
        s.add_term(Monomial::new(a, b, c), coeff.into());
        s
    }

    /// Builds a series from `(a, b, c, coeff)` terms, summing repeats and
    /// dropping anything beyond the cap.
    pub fn from_terms<I, C>(trunc: Truncation, terms: I) -> Self
    where
        I: IntoIterator<Item = (u32, u32, u32, C)>,
        C: Into<BigInt>,
    {
        let mut s = Self::zero(trunc);
        for (a, b, c, coeff) in terms {
            s.add_term(Monomial::new(a, b, c), coeff.into());
        }
        s
    }

    /// The letter generating function `xy/(1−y)` = `Σ_{b≥1} x y^b`.
    pub fn letter(trunc: Truncation) -> Self {
        Self::from_terms(trunc, (1..=trunc.max_weight).map(|b| (1, b, 0, 1)))
    }

    pub(crate) fn add_term(&mut self, m: Monomial, coeff: BigInt) {
        if coeff.is_zero() || !self.trunc.admits(m.a, m.b, m.c) {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn truncation(&self) -> Truncation {
        self.trunc
    }

    pub fn max_weight(&self) -> u32 {
        self.trunc.max_weight
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Nonzero terms in canonical `(b, a, c)` order.
    pub fn terms(&self) -> impl Iterator<Item = (Monomial, &BigInt)> + '_ {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    fn check_same(&self, other: &Series) -> Result<()> {
        if self.trunc != other.trunc {
            return Err(Error::TruncationMismatch {
                left: self.trunc.max_weight,
                right: other.trunc.max_weight,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Series) -> Result<Series> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Series) -> Result<Series> {
        self.add(&other.negate())
    }

    pub fn negate(&self) -> Series {
        Series {
            trunc: self.trunc,
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }

    pub fn scalar_mul(&self, k: &BigInt) -> Series {
        if k.is_zero() {
            return Series::zero(self.trunc);
        }
        Series {
            trunc: self.trunc,
            terms: self.terms.iter().map(|(m, c)| (*m, c * k)).collect(),
        }
    }

    pub fn mul(&self, other: &Series) -> Result<Series> {
        self.check_same(other)?;
        let w = self.trunc.max_weight;
        let mut acc = Dense::new(self.trunc);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                // Terms are sorted by y-degree first.
                if m1.b + m2.b > w {
                    break;
                }
                let (a, c) = (m1.a + m2.a, m1.c + m2.c);
                if a > w || c > w {
                    continue;
                }
                *acc.slot(a, m1.b + m2.b, c) += c1 * c2;
            }
        }
        Ok(Series {
            trunc: self.trunc,
            terms: acc.into_terms(),
        })
    }

    /// `1 / (1 − f) = Σ_{n≥0} fⁿ`, truncated.
    ///
    /// Requires every term of `f` to have positive y-degree, which makes the
    /// sum finite below the cap. Solved degree by degree in `y` from
    /// `g = 1 + f·g`.
    pub fn quasi_inverse(&self) -> Result<Series> {
        if let Some((m, _)) = self.terms.iter().find(|(m, _)| m.b == 0) {
            return Err(Error::NotQuasiInvertible {
                a: m.a,
                b: m.b,
                c: m.c,
            });
        }
        let w = self.trunc.max_weight;
        let side = self.trunc.side();
        // layers[b] holds the (a, c, coeff) terms of g at y-degree b.
        let mut layers: Vec<Vec<(u32, u32, BigInt)>> = Vec::with_capacity(side);
        layers.push(vec![(0, 0, BigInt::one())]);
        let mut scratch = vec![BigInt::zero(); side * side];
        for b in 1..=w {
            for (fm, fc) in &self.terms {
                if fm.b > b {
                    break;
                }
                for (ga, gc, gv) in &layers[(b - fm.b) as usize] {
                    let (a, c) = (ga + fm.a, gc + fm.c);
                    if a > w || c > w {
                        continue;
                    }
                    scratch[a as usize * side + c as usize] += fc * gv;
                }
            }
            let mut layer = Vec::new();
            for (idx, v) in scratch.iter_mut().enumerate() {
                if !v.is_zero() {
                    layer.push(((idx / side) as u32, (idx % side) as u32, std::mem::take(v)));
                }
            }
            layers.push(layer);
        }
        let mut terms = BTreeMap::new();
        for (b, layer) in layers.into_iter().enumerate() {
            for (a, c, v) in layer {
                terms.insert(Monomial::new(a, b as u32, c), v);
            }
        }
        Ok(Series {
            trunc: self.trunc,
            terms,
        })
    }

    /// Replaces `x` by `x/(1−y)`: each `x^a y^b z^c` becomes
    /// `x^a y^b z^c · Σ_t C(t+a−1, a−1) y^t`.
    pub fn substitute_x_geometric(&self) -> Series {
        let w = self.trunc.max_weight as usize;
        let binom = binomial_table(2 * w + 1);
        let mut acc = Dense::new(self.trunc);
        for (m, coeff) in &self.terms {
            if m.a == 0 {
                *acc.slot(m.a, m.b, m.c) += coeff;
                continue;
            }
            let a = m.a as usize;
            for t in 0..=(w - m.b as usize) {
                *acc.slot(m.a, m.b + t as u32, m.c) += coeff * &binom[t + a - 1][a - 1];
            }
        }
        Series {
            trunc: self.trunc,
            terms: acc.into_terms(),
        }
    }

    /// Replaces `x` by `x·y^shift`. A negative shift must not push any
    /// y-exponent below zero.
    pub fn scale_x_by_y_power(&self, shift: i32) -> Result<Series> {
        let mut out = Series::zero(self.trunc);
        for (m, coeff) in &self.terms {
            let b = m.b as i64 + shift as i64 * m.a as i64;
            if b < 0 {
                return Err(Error::NegativeExponent {
                    a: m.a,
                    b: m.b,
                    shift,
                });
            }
            if b <= self.trunc.max_weight as i64 {
                out.terms
                    .insert(Monomial::new(m.a, b as u32, m.c), coeff.clone());
            }
        }
        Ok(out)
    }

    /// Replaces `z` by `z + v`, expanding each `(z+v)^c` binomially.
    pub fn shift_z(&self, v: i64) -> Series {
        let w = self.trunc.max_weight as usize;
        let binom = binomial_table(w);
        let v = BigInt::from(v);
        let mut acc = Dense::new(self.trunc);
        for (m, coeff) in &self.terms {
            let c = m.c as usize;
            let mut vpow = BigInt::one();
            // j = number of factors contributing v
            for (j, choose) in binom[c].iter().take(c + 1).enumerate() {
                let term = coeff * choose * &vpow;
                *acc.slot(m.a, m.b, (c - j) as u32) += term;
                vpow *= &v;
            }
        }
        Series {
            trunc: self.trunc,
            terms: acc.into_terms(),
        }
    }

    /// `z ↦ z − 1`.
    pub fn shift_z_minus_one(&self) -> Series {
        self.shift_z(-1)
    }

    /// Substitutes the integer `v` for `z`; the result has no `z`.
    pub fn eval_z(&self, v: i64) -> Series {
        let v = BigInt::from(v);
        let mut out = Series::zero(self.trunc);
        for (m, coeff) in &self.terms {
            let value = coeff * num_traits::pow(v.clone(), m.c as usize);
            out.add_term(Monomial::new(m.a, m.b, 0), value);
        }
        out
    }

    fn check_cap(&self, a: u32, b: u32, c: u32) -> Result<()> {
        if !self.trunc.admits(a, b, c) {
            return Err(Error::OutOfCap {
                a,
                b,
                c,
                cap: self.trunc.max_weight,
            });
        }
        Ok(())
    }

    /// `[x^a y^b z^c]`. Reads beyond the cap are errors, not zero.
    pub fn coefficient(&self, a: u32, b: u32, c: u32) -> Result<BigInt> {
        self.check_cap(a, b, c)?;
        Ok(self
            .terms
            .get(&Monomial::new(a, b, c))
            .cloned()
            .unwrap_or_default())
    }

    /// `[x^a z^c]` as a polynomial in `y` (exact only through y-degree `W`).
    pub fn slice_xz(&self, a: u32, c: u32) -> Result<YPolynomial> {
        self.check_cap(a, 0, c)?;
        let mut coeffs = vec![BigInt::zero(); self.trunc.side()];
        for (m, v) in &self.terms {
            if m.a == a && m.c == c {
                coeffs[m.b as usize] = v.clone();
            }
        }
        Ok(YPolynomial::new(coeffs))
    }

    /// Keeps only the terms satisfying `keep`.
    pub fn filter(&self, keep: impl Fn(Monomial) -> bool) -> Series {
        Series {
            trunc: self.trunc,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(**m))
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Re-truncates at a smaller (or equal) bound.
    pub fn truncate_to(&self, trunc: Truncation) -> Result<Series> {
        if trunc.max_weight > self.trunc.max_weight {
            return Err(Error::Precondition(format!(
                "cannot widen truncation from {} to {}",
                self.trunc.max_weight, trunc.max_weight
            )));
        }
        let mut out = Series::zero(trunc);
        for (m, c) in &self.terms {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    /// Smallest term in `(b, a, c)` order.
    pub fn lowest_term(&self) -> Option<(Monomial, &BigInt)> {
        self.terms.iter().next().map(|(m, c)| (*m, c))
    }

    /// One line per term, `coeff*x^a*y^b*z^c`, sorted by `(b, a, c)`.
    pub fn canonical_serialize(&self) -> String {
        let lines: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| format!("{}*x^{}*y^{}*z^{}", c, m.a, m.b, m.c))
            .collect();
        lines.join("\n")
    }

    /// Inverse of [`Series::canonical_serialize`].
    pub fn parse_canonical(text: &str, trunc: Truncation) -> Result<Series> {
        let mut out = Series::zero(trunc);
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let bad = || Error::ParseSeries(format!("malformed term {line:?}"));
            let mut parts = line.split('*');
            let coeff: BigInt = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
            let mut exps = [0u32; 3];
            for (slot, var) in exps.iter_mut().zip(["x^", "y^", "z^"]) {
                let part = parts.next().ok_or_else(bad)?;
                *slot = part
                    .strip_prefix(var)
                    .ok_or_else(bad)?
                    .parse()
                    .map_err(|_| bad())?;
            }
            if parts.next().is_some() {
                return Err(bad());
            }
            let [a, b, c] = exps;
            out.check_cap(a, b, c)?;
            if out.terms.contains_key(&Monomial::new(a, b, c)) {
                return Err(Error::ParseSeries(format!("repeated monomial in {line:?}")));
            }
            out.add_term(Monomial::new(a, b, c), coeff);
        }
        Ok(out)
    }

    pub fn to_json_value(&self) -> SeriesJson {
        SeriesJson {
            max_weight: self.trunc.max_weight,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.a, m.b, m.c, c.to_string()))
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("series JSON is always serializable")
    }

    pub fn from_json(text: &str) -> Result<Series> {
        let parsed: SeriesJson =
            serde_json::from_str(text).map_err(|e| Error::ParseSeries(e.to_string()))?;
        Series::try_from(parsed)
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_serialize())
    }
}

/// Wire form: `{"max_weight": W, "terms": [[a, b, c, "coeff"], …]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub max_weight: u32,
    pub terms: Vec<(u32, u32, u32, String)>,
}

impl TryFrom<SeriesJson> for Series {
    type Error = Error;

    fn try_from(j: SeriesJson) -> Result<Series> {
        let trunc = Truncation::new(j.max_weight)?;
        let mut out = Series::zero(trunc);
        for (a, b, c, coeff) in j.terms {
            out.check_cap(a, b, c)?;
            let v: BigInt = coeff
                .parse()
                .map_err(|_| Error::ParseSeries(format!("bad coefficient {coeff:?}")))?;
            out.add_term(Monomial::new(a, b, c), v);
        }
        Ok(out)
    }
}

/// An exact polynomial in `y`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct YPolynomial {
    coeffs: Vec<BigInt>,
}

impl YPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        YPolynomial { coeffs }
    }

    pub fn zero() -> Self {
        YPolynomial::default()
    }

    pub fn monomial(degree: usize, coeff: impl Into<BigInt>) -> Self {
        let mut coeffs = vec![BigInt::zero(); degree + 1];
        coeffs[degree] = coeff.into();
        YPolynomial::new(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coefficient(&self, degree: usize) -> BigInt {
        self.coeffs.get(degree).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Lowest degree with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Adds `coeff · y^degree` in place.
    pub fn add_monomial(&mut self, degree: usize, coeff: impl Into<BigInt>) {
        if self.coeffs.len() <= degree {
            self.coeffs.resize(degree + 1, BigInt::zero());
        }
        self.coeffs[degree] += coeff.into();
        *self = YPolynomial::new(std::mem::take(&mut self.coeffs));
    }

    pub fn add(&self, other: &YPolynomial) -> YPolynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        YPolynomial::new(
            (0..n)
                .map(|i| self.coefficient(i) + other.coefficient(i))
                .collect(),
        )
    }

    pub fn sub(&self, other: &YPolynomial) -> YPolynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        YPolynomial::new(
            (0..n)
                .map(|i| self.coefficient(i) - other.coefficient(i))
                .collect(),
        )
    }

    pub fn mul(&self, other: &YPolynomial) -> YPolynomial {
        if self.is_zero() || other.is_zero() {
            return YPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, p) in self.coeffs.iter().enumerate() {
            for (j, q) in other.coeffs.iter().enumerate() {
                out[i + j] += p * q;
            }
        }
        YPolynomial::new(out)
    }

    /// `p(1)`.
    pub fn eval_at_one(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    /// `p′(1) = Σ_b b·p_b`.
    pub fn deriv_y_at_1(&self) -> BigInt {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(b, c)| c * BigInt::from(b))
            .sum()
    }

    pub fn has_negative_coefficient(&self) -> bool {
        self.coeffs.iter().any(Signed::is_negative)
    }
}

/// Pascal's triangle rows `0..=n`.
pub(crate) fn binomial_table(n: usize) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(n + 1);
    for r in 0..=n {
        let mut row = vec![BigInt::one(); r + 1];
        for k in 1..r {
            row[k] = &rows[r - 1][k - 1] + &rows[r - 1][k];
        }
        rows.push(row);
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn tr(w: u32) -> Truncation {
        Truncation::new(w).unwrap()
    }

    fn s(w: u32, terms: &[(u32, u32, u32, i64)]) -> Series {
        Series::from_terms(tr(w), terms.iter().copied())
    }

    #[test]
    fn truncation_rejects_zero() {
        assert_eq!(Truncation::new(0), Err(Error::ZeroTruncation));
    }

    #[test]
    fn ring_examples() {
        let xy = s(5, &[(1, 1, 0, 1)]);
        assert_eq!(xy.mul(&xy).unwrap(), s(5, &[(2, 2, 0, 1)]));
        assert!(xy.add(&xy.negate()).unwrap().is_zero());
        let p = s(5, &[(0, 0, 0, 1), (0, 1, 0, 1)]);
        let q = s(5, &[(0, 0, 0, 1), (0, 1, 0, -1)]);
        assert_eq!(p.mul(&q).unwrap(), s(5, &[(0, 0, 0, 1), (0, 2, 0, -1)]));
        assert!(matches!(
            xy.add(&s(6, &[])),
            Err(Error::TruncationMismatch { .. })
        ));
    }

    #[test]
    fn products_drop_terms_beyond_cap() {
        let t = s(3, &[(1, 2, 1, 1)]);
        assert!(t.mul(&t).unwrap().is_zero());
        assert!(Series::monomial(tr(3), 0, 4, 0, 1).is_zero());
    }

    #[test]
    fn quasi_inverse_examples() {
        let geometric = s(4, &[(1, 1, 0, 1)]).quasi_inverse().unwrap();
        assert_eq!(
            geometric,
            s(
                4,
                &[
                    (0, 0, 0, 1),
                    (1, 1, 0, 1),
                    (2, 2, 0, 1),
                    (3, 3, 0, 1),
                    (4, 4, 0, 1)
                ]
            )
        );
        assert_eq!(
            Series::zero(tr(4)).quasi_inverse().unwrap(),
            Series::one(tr(4))
        );
        // Compositions of weight ≤ 3 by length and weight.
        let words = Series::letter(tr(3)).quasi_inverse().unwrap();
        let expected = s(
            3,
            &[
                (0, 0, 0, 1),
                (1, 1, 0, 1),
                (1, 2, 0, 1),
                (1, 3, 0, 1),
                (2, 2, 0, 1),
                (2, 3, 0, 2),
                (3, 3, 0, 1),
            ],
        );
        assert_eq!(words, expected);
    }

    #[test]
    fn quasi_inverse_rejects_weightless_terms() {
        assert!(matches!(
            s(4, &[(0, 0, 0, 1)]).quasi_inverse(),
            Err(Error::NotQuasiInvertible { .. })
        ));
        assert!(matches!(
            s(4, &[(1, 0, 1, 1)]).quasi_inverse(),
            Err(Error::NotQuasiInvertible { .. })
        ));
    }

    #[test]
    fn geometric_substitution_examples() {
        assert_eq!(
            s(4, &[(1, 1, 0, 1)]).substitute_x_geometric(),
            s(4, &[(1, 1, 0, 1), (1, 2, 0, 1), (1, 3, 0, 1), (1, 4, 0, 1)])
        );
        assert_eq!(
            Series::one(tr(4)).substitute_x_geometric(),
            Series::one(tr(4))
        );
        assert_eq!(
            s(4, &[(2, 2, 0, 1)]).substitute_x_geometric(),
            s(4, &[(2, 2, 0, 1), (2, 3, 0, 2), (2, 4, 0, 3)])
        );
    }

    #[test]
    fn scale_examples() {
        assert_eq!(
            s(9, &[(1, 2, 0, 1)]).scale_x_by_y_power(1).unwrap(),
            s(9, &[(1, 3, 0, 1)])
        );
        assert_eq!(
            s(9, &[(3, 6, 0, 1)]).scale_x_by_y_power(-1).unwrap(),
            s(9, &[(3, 3, 0, 1)])
        );
        assert!(matches!(
            s(9, &[(3, 2, 0, 1)]).scale_x_by_y_power(-1),
            Err(Error::NegativeExponent { .. })
        ));
        assert!(s(9, &[(3, 8, 0, 1)])
            .scale_x_by_y_power(1)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn z_shift_examples() {
        assert_eq!(
            s(5, &[(0, 0, 2, 1)]).shift_z_minus_one(),
            s(5, &[(0, 0, 2, 1), (0, 0, 1, -2), (0, 0, 0, 1)])
        );
        assert_eq!(
            s(5, &[(0, 0, 3, 1)]).shift_z_minus_one(),
            s(
                5,
                &[(0, 0, 3, 1), (0, 0, 2, -3), (0, 0, 1, 3), (0, 0, 0, -1)]
            )
        );
        let flat = s(5, &[(1, 2, 0, 7)]);
        assert_eq!(flat.shift_z_minus_one(), flat);
    }

    #[test]
    fn eval_and_reads() {
        let p = s(5, &[(0, 0, 2, 1), (0, 0, 1, -2), (0, 0, 0, 1)]);
        assert!(p.eval_z(1).is_zero());
        assert_eq!(p.eval_z(3), s(5, &[(0, 0, 0, 4)]));
        let q = s(5, &[(1, 1, 0, 1), (2, 3, 0, 2)]);
        assert_eq!(q.coefficient(2, 3, 0).unwrap(), BigInt::from(2));
        assert_eq!(q.coefficient(2, 4, 0).unwrap(), BigInt::zero());
        assert!(matches!(
            q.coefficient(2, 6, 0),
            Err(Error::OutOfCap { .. })
        ));
        assert!(matches!(q.slice_xz(6, 0), Err(Error::OutOfCap { .. })));
        let sl = q.slice_xz(2, 0).unwrap();
        assert_eq!(sl, YPolynomial::monomial(3, 2));
    }

    #[test]
    fn derivative_at_one() {
        assert_eq!(YPolynomial::monomial(7, 1).deriv_y_at_1(), BigInt::from(7));
        assert_eq!(YPolynomial::zero().deriv_y_at_1(), BigInt::zero());
        let p = YPolynomial::monomial(3, 1).add(&YPolynomial::monomial(5, 2));
        assert_eq!(p.deriv_y_at_1(), BigInt::from(13));
        assert_eq!(p.valuation(), Some(3));
        assert_eq!(p.degree(), Some(5));
    }

    #[test]
    fn canonical_text() {
        let p = s(3, &[(1, 1, 0, 1), (0, 0, 0, 1)]);
        assert_eq!(p.canonical_serialize(), "1*x^0*y^0*z^0\n1*x^1*y^1*z^0");
        assert_eq!(
            Series::parse_canonical(&p.canonical_serialize(), tr(3)).unwrap(),
            p
        );
        assert_eq!(Series::zero(tr(3)).canonical_serialize(), "");
        assert!(Series::parse_canonical("1*x^1*y^9*z^0", tr(3)).is_err());
        assert!(Series::parse_canonical("1*x^1*y^1", tr(3)).is_err());
        assert!(Series::parse_canonical("1*x^1*y^1*z^0\n2*x^1*y^1*z^0", tr(3)).is_err());
    }

    #[test]
    fn json_form() {
        let p = s(3, &[(1, 1, 0, 1), (0, 0, 0, -4)]);
        assert_eq!(
            p.to_json(),
            r#"{"max_weight":3,"terms":[[0,0,0,"-4"],[1,1,0,"1"]]}"#
        );
        assert_eq!(Series::from_json(&p.to_json()).unwrap(), p);
        assert!(Series::from_json(r#"{"max_weight":3,"terms":[[0,5,0,"1"]]}"#).is_err());
        assert!(Series::from_json(r#"{"max_weight":3,"terms":[[0,1,0,"one"]]}"#).is_err());
    }

    #[test]
    fn coefficients_do_not_overflow() {
        let big = s(4, &[(0, 1, 0, i64::MAX)]);
        let sq = big.mul(&big).unwrap();
        let expected = BigInt::from(i64::MAX) * BigInt::from(i64::MAX);
        assert_eq!(sq.coefficient(0, 2, 0).unwrap(), expected);
    }

    const W: u32 = 5;

    fn arb_series(positive_weight: bool) -> impl Strategy<Value = Series> {
        let lo = if positive_weight { 1 } else { 0 };
        prop::collection::vec((0..=W, lo..=W, 0..=W, -3i64..=3), 0..8)
            .prop_map(|terms| Series::from_terms(tr(W), terms))
    }

    proptest! {
        #[test]
        fn ring_axioms(p in arb_series(false), q in arb_series(false), r in arb_series(false)) {
            prop_assert_eq!(p.mul(&q).unwrap(), q.mul(&p).unwrap());
            prop_assert_eq!(p.add(&q).unwrap(), q.add(&p).unwrap());
            prop_assert_eq!(
                p.mul(&q).unwrap().mul(&r).unwrap(),
                p.mul(&q.mul(&r).unwrap()).unwrap()
            );
            prop_assert_eq!(
                p.mul(&q.add(&r).unwrap()).unwrap(),
                p.mul(&q).unwrap().add(&p.mul(&r).unwrap()).unwrap()
            );
        }

        #[test]
        fn quasi_inverse_inverts(f in arb_series(true)) {
            let g = f.quasi_inverse().unwrap();
            let one_minus_f = Series::one(tr(W)).sub(&f).unwrap();
            prop_assert_eq!(g.mul(&one_minus_f).unwrap(), Series::one(tr(W)));
        }

        #[test]
        fn geometric_substitution_matches_powers(p in arb_series(false)) {
            // (1/(1−y))^a as explicit products
            let inv = Series::from_terms(tr(W), (0..=W).map(|b| (0, b, 0, 1)));
            let mut expected = Series::zero(tr(W));
            for (m, c) in p.terms() {
                let mut term = Series::monomial(tr(W), m.a, m.b, m.c, c.clone());
                for _ in 0..m.a {
                    term = term.mul(&inv).unwrap();
                }
                expected = expected.add(&term).unwrap();
            }
            prop_assert_eq!(p.substitute_x_geometric(), expected);
        }

        #[test]
        fn z_shifts_compose(p in arb_series(false)) {
            prop_assert_eq!(p.shift_z_minus_one().shift_z_minus_one(), p.shift_z(-2));
        }

        #[test]
        fn scale_round_trip(p in arb_series(false)) {
            let up = p.scale_x_by_y_power(1).unwrap();
            let back = up.scale_x_by_y_power(-1).unwrap();
            prop_assert_eq!(back, p.filter(|m| m.a + m.b <= W));
        }

        #[test]
        fn text_and_json_round_trip(p in arb_series(false)) {
            prop_assert_eq!(Series::parse_canonical(&p.canonical_serialize(), tr(W)).unwrap(), p.clone());
            prop_assert_eq!(Series::from_json(&p.to_json()).unwrap(), p);
        }

        #[test]
        fn derivative_leibniz(
            p in prop::collection::vec(-5i64..=5, 0..6),
            q in prop::collection::vec(-5i64..=5, 0..6),
        ) {
            let p = YPolynomial::new(p.into_iter().map(BigInt::from).collect());
            let q = YPolynomial::new(q.into_iter().map(BigInt::from).collect());
            prop_assert_eq!(
                p.mul(&q).deriv_y_at_1(),
                p.deriv_y_at_1() * q.eval_at_one() + p.eval_at_one() * q.deriv_y_at_1()
            );
        }
    }
}
