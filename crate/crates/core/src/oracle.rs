//! Brute-force ground truth: every word of bounded weight, tallied straight
//! from the definitions.

use std::collections::HashMap;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::error::Result;
use crate::series::{Series, Truncation};
use crate::words::{occurrence_count, Word};

/// Streams every word with `‖w‖ ≤ max_weight` exactly once, ordered by
/// weight, then length, then lexicographically. Starts with the empty word.
pub fn enumerate_words(max_weight: u32) -> Words {
    Words {
        max_weight,
        weight: 0,
        current: Some(Vec::new()),
    }
}

pub struct Words {
    max_weight: u32,
    weight: u32,
    current: Option<Vec<u32>>,
}

impl Words {
    /// Lexicographic successor among compositions of the same weight and
    /// length, or the first composition of the next (weight, length) pair.
    fn advance(&mut self, cur: &[u32]) -> Option<Vec<u32>> {
        let len = cur.len();
        // bump the rightmost part whose suffix still has slack
        let mut suffix = 0u32;
        for i in (0..len).rev() {
            let after = (len - i - 1) as u32;
            if i + 1 < len && suffix > after {
                let mut next = cur[..=i].to_vec();
                next[i] += 1;
                let rest = suffix - 1;
                next.extend(std::iter::repeat_n(1, len - i - 2));
                next.push(rest - (after - 1));
                return Some(next);
            }
            suffix += cur[i];
        }
        // next length at this weight, then next weight
        let (mut weight, mut len) = (self.weight, len + 1);
        if len as u32 > weight {
            weight += 1;
            len = 1;
        }
        if weight > self.max_weight {
            return None;
        }
        self.weight = weight;
        let mut first = vec![1u32; len];
        first[len - 1] = weight - (len as u32 - 1);
        Some(first)
    }
}

impl Iterator for Words {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        let cur = self.current.take()?;
        self.current = self.advance(&cur);
        Some(Word::new(cur).expect("compositions have positive parts"))
    }
}

type Tally = HashMap<(u32, u32, u32), u64>;

fn tally_from(prefix: &mut Vec<u32>, weight: u32, cap: u32, u: &Word, tally: &mut Tally) {
    let w = Word::new(prefix.clone()).expect("positive parts");
    let occ = occurrence_count(u, &w).expect("pattern is nonempty") as u32;
    *tally.entry((prefix.len() as u32, weight, occ)).or_default() += 1;
    for letter in 1..=cap - weight {
        prefix.push(letter);
        tally_from(prefix, weight + letter, cap, u, tally);
        prefix.pop();
    }
}

/// `Σ x^{|w|} y^{‖w‖} z^{occ(u, w)}` over every word of weight at most `W`,
/// split by first letter across the current rayon pool.
pub fn brute_force_gf(u: &Word, trunc: Truncation) -> Result<Series> {
    u.require_nonempty()?;
    let cap = trunc.max_weight();
    let parts: Vec<Tally> = (1..=cap)
        .into_par_iter()
        .map(|first| {
            let mut tally = Tally::new();
            tally_from(&mut vec![first], first, cap, u, &mut tally);
            tally
        })
        .collect();
    let mut total = Tally::new();
    total.insert((0, 0, 0), 1);
    for part in parts {
        for (key, n) in part {
            *total.entry(key).or_default() += n;
        }
    }
    Ok(Series::from_terms(
        trunc,
        total
            .into_iter()
            .map(|((a, b, c), n)| (a, b, c, BigInt::from(n))),
    ))
}
