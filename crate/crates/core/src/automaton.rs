//! Occurrence counting by a deterministic dominance-matching automaton.
//!
//! The infinite alphabet is compressed into letter classes: maximal intervals
//! of letters that dominate exactly the same pattern positions. A state is
//! the set of partial-match lengths `j` (the last `j` letters dominate
//! `u_1 … u_j`), always containing `0`. Reading a letter extends each
//! partial match it is compatible with; a completed window is emitted on the
//! transition rather than stored.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::series::{Series, Truncation};
use crate::words::Word;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LetterClass {
    pub lo: u32,
    /// `None` for the unbounded top class.
    pub hi: Option<u32>,
    /// `profile[j]` is true iff every letter in the class is `≥ u_{j+1}`.
    pub profile: Vec<bool>,
}

impl LetterClass {
    /// Weights of the class's letters, cut off at `cap`.
    fn weights(&self, cap: u32) -> std::ops::RangeInclusive<u32> {
        self.lo..=self.hi.map_or(cap, |h| h.min(cap))
    }
}

pub fn letter_classes(u: &Word) -> Result<Vec<LetterClass>> {
    u.require_nonempty()?;
    let mut thresholds: Vec<u32> = u.entries().to_vec();
    thresholds.sort_unstable();
    thresholds.dedup();
    let mut bounds = Vec::new();
    if thresholds[0] > 1 {
        bounds.push((1, Some(thresholds[0] - 1)));
    }
    for (i, &t) in thresholds.iter().enumerate() {
        bounds.push((t, thresholds.get(i + 1).map(|n| n - 1)));
    }
    Ok(bounds
        .into_iter()
        .map(|(lo, hi)| LetterClass {
            lo,
            hi,
            profile: u.entries().iter().map(|&e| lo >= e).collect(),
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Transition {
    pub target: usize,
    pub emit: bool,
}

#[derive(Clone, Debug)]
pub struct DominanceAutomaton {
    k: usize,
    classes: Vec<LetterClass>,
    /// Bitmask of partial-match lengths; state 0 is the start state `{0}`.
    states: Vec<u32>,
    /// `transitions[state][class]`.
    transitions: Vec<Vec<Transition>>,
}

impl DominanceAutomaton {
    pub fn new(u: &Word) -> Result<Self> {
        let k = u.len();
        if k > 32 {
            return Err(Error::PatternTooLong(k));
        }
        let classes = letter_classes(u)?;
        let step = |state: u32, class: &LetterClass| -> (u32, bool) {
            let mut next = 1u32;
            for j in 0..k {
                if state & (1 << j) == 0 || !class.profile[j] {
                    continue;
                }
                if j + 1 < k {
                    next |= 1 << (j + 1);
                }
            }
            let emit = state & (1 << (k - 1)) != 0 && class.profile[k - 1];
            (next, emit)
        };

        let mut seen: HashSet<u32> = HashSet::from([1u32]);
        let mut queue = VecDeque::from([1u32]);
        let mut raw: Vec<(u32, Vec<(u32, bool)>)> = Vec::new();
        while let Some(s) = queue.pop_front() {
            let row: Vec<(u32, bool)> = classes.iter().map(|c| step(s, c)).collect();
            for &(t, _) in &row {
                if seen.insert(t) {
                    queue.push_back(t);
                }
            }
            raw.push((s, row));
        }

        // sorted subsets; {0} (bitmask 1) sorts first
        let members = |s: u32| -> Vec<usize> { (0..k).filter(|j| s & (1 << j) != 0).collect() };
        let mut states: Vec<u32> = raw.iter().map(|(s, _)| *s).collect();
        states.sort_by_key(|&s| members(s));
        let index: HashMap<u32, usize> = states.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let mut transitions = vec![Vec::new(); states.len()];
        for (s, row) in raw {
            transitions[index[&s]] = row
                .into_iter()
                .map(|(t, emit)| Transition {
                    target: index[&t],
                    emit,
                })
                .collect();
        }
        Ok(DominanceAutomaton {
            k,
            classes,
            states,
            transitions,
        })
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn classes(&self) -> &[LetterClass] {
        &self.classes
    }

    /// Partial-match lengths of state `i`, ascending.
    pub fn state_members(&self, i: usize) -> Vec<usize> {
        (0..self.k)
            .filter(|j| self.states[i] & (1 << j) != 0)
            .collect()
    }

    pub fn transition(&self, state: usize, class: usize) -> Transition {
        self.transitions[state][class]
    }

    /// Runs the automaton on a concrete word, returning the number of emits.
    pub fn count_occurrences(&self, w: &Word) -> usize {
        let mut state = 0;
        let mut count = 0;
        for &letter in w.entries() {
            let class = self
                .classes
                .iter()
                .rposition(|c| c.lo <= letter)
                .expect("classes cover every positive integer");
            let t = self.transitions[state][class];
            count += usize::from(t.emit);
            state = t.target;
        }
        count
    }

    pub fn to_json_value(&self) -> Value {
        let classes: Vec<Value> = self
            .classes
            .iter()
            .map(|c| json!({ "lo": c.lo, "hi": c.hi, "profile": c.profile }))
            .collect();
        let states: Vec<Value> = (0..self.states.len())
            .map(|i| json!(self.state_members(i)))
            .collect();
        let transitions: Vec<Value> = self
            .transitions
            .iter()
            .map(|row| {
                Value::Array(
                    row.iter()
                        .map(|t| json!({ "target": t.target, "emit": t.emit }))
                        .collect(),
                )
            })
            .collect();
        json!({
            "k": self.k,
            "classes": classes,
            "states": states,
            "transitions": transitions,
        })
    }

    /// Length-by-length transfer over the automaton. With `count_occurrences`
    /// false, emitting transitions are dropped, leaving the avoiders.
    pub fn generating_function(&self, trunc: Truncation, count_occurrences: bool) -> Series {
        let w = trunc.max_weight() as usize;
        let side = w + 1;
        // layer[state][b * side + c]
        let mut layer: Vec<Vec<BigInt>> =
            vec![vec![BigInt::zero(); side * side]; self.states.len()];
        layer[0][0] = BigInt::from(1);
        let mut terms: BTreeMap<(u32, u32, u32), BigInt> = BTreeMap::new();
        for n in 0..=w {
            for cells in &layer {
                for (idx, v) in cells.iter().enumerate() {
                    if !v.is_zero() {
                        let key = (n as u32, (idx / side) as u32, (idx % side) as u32);
                        *terms.entry(key).or_default() += v;
                    }
                }
            }
            if n == w {
                break;
            }
            let mut next: Vec<Vec<BigInt>> =
                vec![vec![BigInt::zero(); side * side]; self.states.len()];
            for (s, cells) in layer.iter().enumerate() {
                if cells.iter().all(Zero::is_zero) {
                    continue;
                }
                for (class, t) in self.classes.iter().zip(&self.transitions[s]) {
                    if t.emit && !count_occurrences {
                        continue;
                    }
                    let dz = usize::from(t.emit);
                    for (idx, v) in cells.iter().enumerate() {
                        if v.is_zero() {
                            continue;
                        }
                        let (b, c) = (idx / side, idx % side);
                        if c + dz > w {
                            continue;
                        }
                        for weight in class.weights(w as u32) {
                            let nb = b + weight as usize;
                            if nb > w {
                                break;
                            }
                            next[t.target][nb * side + c + dz] += v;
                        }
                    }
                }
            }
            layer = next;
        }
        Series::from_terms(trunc, terms.into_iter().map(|((a, b, c), v)| (a, b, c, v)))
    }
}

/// `A_u(x,y,z)` (or `A_u(x,y,0)` when `count_occurrences` is false) by the
/// automaton route.
pub fn automaton_gf(u: &Word, trunc: Truncation, count_occurrences: bool) -> Result<Series> {
    Ok(DominanceAutomaton::new(u)?.generating_function(trunc, count_occurrences))
}
