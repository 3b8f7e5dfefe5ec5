//! Reference fixtures with known answers, reported as a pass/fail table.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use gfo::automaton::automaton_gf;
use gfo::clusters::{chart, enumerate_preclusters, IndexSet};
use gfo::equiv::{
    check_prop_we1, check_theorem_we3, classify, fixture_122, fixture_212, verify_rational_against,
};
use gfo::genfun::{avoidance_gf, full_gf};
use gfo::oracle::brute_force_gf;
use gfo::recovery::{recover, recovery_matrix, ClusterMuOracle};
use gfo::words::partition_of;
use gfo::{Series, Truncation, Word};

pub const DEFAULT_SEED: u64 = 20_240_601;

type Check = Result<String, String>;
/// Rows of (length, counts in column order) for one m.
type ChartRows = &'static [(usize, [u64; 15])];
type NamedCheck = (&'static str, Box<dyn Fn() -> Check>);

fn tr(w: u32) -> Truncation {
    Truncation::new(w).expect("positive")
}

fn word(s: &str) -> Word {
    s.parse().expect("valid word")
}

fn err(e: gfo::Error) -> String {
    e.to_string()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn coefficients() -> Check {
    let t = tr(8);
    for (p, want) in [("122", 13), ("212", 12)] {
        let u = word(p);
        let want = BigInt::from(want);
        let routes = [
            ("cluster", avoidance_gf(&u, t).map_err(err)?),
            ("automaton", automaton_gf(&u, t, false).map_err(err)?),
            ("oracle", brute_force_gf(&u, t).map_err(err)?.eval_z(0)),
        ];
        for (name, s) in routes {
            let got = s.coefficient(4, 7, 0).map_err(err)?;
            ensure(got == want, || {
                format!("{p} via {name}: {got}, want {want}")
            })?;
        }
    }
    Ok("[x^4 y^7] A_122 = 13, A_212 = 12 on all routes".into())
}

fn rational() -> Check {
    let t = tr(16);
    for f in [fixture_122(), fixture_212()] {
        let s = avoidance_gf(&f.pattern, t).map_err(err)?;
        let check = verify_rational_against(&f, &s, 11).map_err(err)?;
        ensure(check.holds, || {
            format!("{} first differs at {:?}", f.name, check.first_mismatch)
        })?;
    }
    Ok("D * A = N through y^11 for 122 and 212".into())
}

/// Columns u1..u4, u12..u34, u123..u234, u1234.
const CHARTS: [(usize, ChartRows); 3] = [
    (
        2,
        &[
            (5, [1, 0, 0, 1, 1, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0]),
            (6, [1, 1, 1, 1, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0]),
            (7, [1, 2, 2, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0]),
        ],
    ),
    (
        3,
        &[
            (6, [1, 0, 0, 1, 1, 0, 0, 0, 0, 1, 1, 0, 0, 1, 0]),
            (7, [2, 1, 1, 2, 1, 1, 0, 2, 1, 1, 0, 1, 1, 0, 0]),
            (8, [3, 3, 3, 3, 2, 2, 2, 2, 2, 2, 0, 0, 0, 0, 0]),
            (9, [2, 4, 4, 2, 0, 2, 2, 0, 2, 0, 0, 0, 0, 0, 0]),
            (10, [1, 3, 3, 1, 0, 0, 2, 0, 0, 0, 0, 0, 0, 0, 0]),
        ],
    ),
    (
        4,
        &[
            (7, [1, 0, 0, 1, 1, 0, 0, 0, 0, 1, 1, 0, 0, 1, 1]),
            (8, [3, 1, 1, 3, 2, 1, 0, 2, 1, 2, 2, 2, 2, 2, 0]),
            (9, [6, 4, 4, 6, 5, 4, 3, 5, 4, 5, 2, 2, 2, 2, 0]),
            (10, [7, 9, 9, 7, 4, 7, 6, 6, 7, 4, 0, 2, 2, 0, 0]),
            (11, [6, 12, 12, 6, 3, 6, 9, 3, 6, 3, 0, 0, 0, 0, 0]),
            (12, [3, 9, 9, 3, 0, 3, 6, 0, 3, 0, 0, 0, 0, 0, 0]),
            (13, [1, 4, 4, 1, 0, 0, 3, 0, 0, 0, 0, 0, 0, 0, 0]),
        ],
    ),
];

fn charts() -> Check {
    let columns = IndexSet::all_nonempty(4);
    for (m, rows) in CHARTS {
        let ch = chart(4, m).map_err(err)?;
        ensure(ch.rows.len() == rows.len(), || {
            format!("m = {m}: {} rows", ch.rows.len())
        })?;
        for &(length, cells) in rows {
            for (col, want) in columns.iter().zip(cells) {
                let got = ch.count(length, *col);
                ensure(got == want, || {
                    format!("m = {m}, length {length}, u{col}: {got} vs {want}")
                })?;
            }
        }
    }
    Ok("k = 4, m = 2..4 match cell for cell".into())
}

fn counts() -> Check {
    let got: Vec<usize> = (2..=4).map(|m| enumerate_preclusters(4, m).len()).collect();
    ensure(got == [3, 9, 27], || format!("got {got:?}"))?;
    Ok("3, 9, 27 pre-clusters for k = 4, m = 2..4".into())
}

fn ddagger_k4() -> Check {
    let m = recovery_matrix(4).map_err(err)?;
    ensure(m.rows == [vec![1], vec![3, 1], vec![6, 3, 1]], || {
        format!("matrix {:?}", m.rows)
    })?;
    let u = word("3123");
    let r = recover(&ClusterMuOracle::new(u.clone()).map_err(err)?).map_err(err)?;
    let (l1, l2, l3) = (3, 3, 2);
    let want = [l1, 3 * l1 + l2, 6 * l1 + 3 * l2 + l3].map(|v: i64| v.to_string());
    ensure(r.ddagger == want, || format!("3123 values {:?}", r.ddagger))?;
    ensure(r.partition() == partition_of(&u).map_err(err)?, || {
        "3123 not recovered".into()
    })?;
    Ok("rows (1), (3,1), (6,3,1); 3123 gives 3, 12, 29".into())
}

fn identities() -> Check {
    let t = tr(12);
    let mut n = 0;
    for p in ["1", "2", "11", "12", "122", "212", "3123", "2113"] {
        let r = check_prop_we1(&word(p), None, t).map_err(err)?;
        ensure(r.all_hold(), || format!("{p}: {r:?}"))?;
        n += 1;
    }
    let pair = check_prop_we1(&word("1212"), Some(&word("2121")), t).map_err(err)?;
    ensure(pair.all_hold(), || format!("1212 / 2121: {pair:?}"))?;
    Ok(format!(
        "reverse, 1u, u+, x -> x/y for {n} patterns and one pair"
    ))
}

fn we3() -> Check {
    let t = tr(14);
    for (a, b, c) in [(2, 2, 2), (2, 3, 2), (3, 2, 3), (3, 3, 2)] {
        let ok = check_theorem_we3(a, b, c, t).map_err(err)?;
        ensure(ok, || format!("fails at ({a}, {b}, {c})"))?;
    }
    Ok("a1b2c ~ a2b1c at four (a, b, c) with W = 14".into())
}

fn three_way(seed: u64) -> Check {
    let t = tr(10);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sample = Vec::new();
    for _ in 0..8 {
        let len = rng.gen_range(1..=4);
        let u = Word::new((0..len).map(|_| rng.gen_range(1..=3)).collect()).map_err(err)?;
        let c = full_gf(&u, t).map_err(err)?;
        let a = automaton_gf(&u, t, true).map_err(err)?;
        let b = brute_force_gf(&u, t).map_err(err)?;
        ensure(c == a && c == b, || format!("{u} disagrees"))?;
        // round trip the canonical encodings on the way
        let back = Series::parse_canonical(&c.canonical_serialize(), t).map_err(err)?;
        ensure(
            back == c && Series::from_json(&c.to_json()).map_err(err)? == c,
            || format!("{u} serialization round trip"),
        )?;
        sample.push(u.to_string());
    }
    Ok(format!("seed {seed}: {}", sample.join(" ")))
}

fn classification() -> Check {
    let report = classify(4, tr(10)).map_err(err)?;
    ensure(report.is_clean(), || {
        "mismatch or rearrangement violation".into()
    })?;
    Ok(format!(
        "F = 4, W = 10: {} classes, clean",
        report.classes.len()
    ))
}

pub fn run(seed: u64) -> bool {
    let checks: Vec<NamedCheck> = vec![
        ("coefficients 122 / 212", Box::new(coefficients)),
        ("rational closed forms", Box::new(rational)),
        ("k = 4 cluster charts", Box::new(charts)),
        ("pre-cluster counts", Box::new(counts)),
        ("recovery values k = 4", Box::new(ddagger_k4)),
        ("series identities", Box::new(identities)),
        ("a1b2c ~ a2b1c", Box::new(we3)),
        (
            "three-way agreement sample",
            Box::new(move || three_way(seed)),
        ),
        ("classification smoke", Box::new(classification)),
    ];
    let mut failures = 0;
    for (name, check) in checks {
        match check() {
            Ok(detail) => println!("PASS  {name:<28} {detail}"),
            Err(detail) => {
                failures += 1;
                println!("FAIL  {name:<28} {detail}");
            }
        }
    }
    if failures == 0 {
        println!("all checks passed");
    } else {
        println!("{failures} checks failed");
    }
    failures == 0
}
