//! Acceptance suite: one line per criterion, nonzero exit on any failure.
//!
//! Run with `cargo test -p gfo-core --test acceptance`.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use gfo::automaton::automaton_gf;
use gfo::clusters::{
    chart, cluster_word, enumerate_preclusters, enumerate_preclusters_by_length, is_minimal,
    marked_factors_dominate, IndexSet,
};
use gfo::equiv::{
    check_axbyc, check_prop_we1, check_theorem_we3, classify, fixture_122, fixture_212,
    verify_rational, verify_rational_against,
};
use gfo::genfun::{all_words_gf, avoidance_gf, full_gf};
use gfo::oracle::{brute_force_gf, enumerate_words};
use gfo::recovery::{ddagger_symbolic, recover_with_matrix, recovery_matrix, ClusterMuOracle};
use gfo::words::partition_of;
use gfo::{Truncation, Word};

const SEED: u64 = 0x6f72_6465_7231;

type Outcome = Result<String, String>;
/// Per m: rows of (length, counts in column order).
type ChartTable = Vec<(usize, Vec<(usize, [u64; 15])>)>;
type Criterion = (&'static str, fn() -> Outcome);

fn tr(w: u32) -> Truncation {
    Truncation::new(w).expect("positive")
}

fn word(s: &str) -> Word {
    s.parse().expect("valid word")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || {
        format!("took {elapsed:?}, limit {limit:?}")
    })
}

fn err(e: gfo::Error) -> String {
    e.to_string()
}

/// Every pattern of weight at most `max` (nonempty).
fn patterns_up_to_weight(max: u32) -> Vec<Word> {
    enumerate_words(max).filter(|w| !w.is_empty()).collect()
}

/// Every word of length 1..=max_len over letters 1..=max_letter.
fn patterns_by_shape(max_len: usize, max_letter: u32) -> Vec<Word> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<u32>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for a in 1..=max_letter {
                let mut v = w.clone();
                v.push(a);
                next.push(v);
            }
        }
        out.extend(next.iter().map(|v| Word::new(v.clone()).expect("positive")));
        layer = next;
    }
    out
}

fn random_pattern(rng: &mut ChaCha8Rng, max_len: usize, max_letter: u32) -> Word {
    let len = rng.gen_range(1..=max_len);
    Word::new((0..len).map(|_| rng.gen_range(1..=max_letter)).collect()).expect("positive")
}

fn coefficient_fixtures() -> Outcome {
    let start = Instant::now();
    let t = tr(8);
    for (p, expected) in [("122", 13), ("212", 12)] {
        let u = word(p);
        let expected = BigInt::from(expected);
        let routes = [
            ("cluster avoidance", avoidance_gf(&u, t).map_err(err)?),
            ("cluster full, z=0", full_gf(&u, t).map_err(err)?.eval_z(0)),
            ("automaton", automaton_gf(&u, t, false).map_err(err)?),
            ("brute force", brute_force_gf(&u, t).map_err(err)?.eval_z(0)),
        ];
        for (name, series) in routes {
            let got = series.coefficient(4, 7, 0).map_err(err)?;
            ensure(got == expected, || {
                format!("{p} via {name}: got {got}, want {expected}")
            })?;
        }
    }
    within(start.elapsed(), Duration::from_secs(10))?;
    Ok("[x^4 y^7] = 13 for 122 and 12 for 212 on every route".into())
}

fn rational_cross_multiplication() -> Outcome {
    let start = Instant::now();
    let t = tr(16);
    for fixture in [fixture_122(), fixture_212()] {
        let series = avoidance_gf(&fixture.pattern, t).map_err(err)?;
        let check = verify_rational_against(&fixture, &series, 11).map_err(err)?;
        ensure(check.holds, || {
            format!("{} differs at {:?}", fixture.name, check.first_mismatch)
        })?;
        let default = verify_rational(&fixture, t).map_err(err)?;
        ensure(default.holds, || {
            format!("{} fails the default bound", fixture.name)
        })?;
    }
    // a fixture must not match the wrong pattern
    let wrong = avoidance_gf(&word("212"), t).map_err(err)?;
    let check = verify_rational_against(&fixture_122(), &wrong, 11).map_err(err)?;
    ensure(!check.holds, || {
        "A_122 closed form matched the 212 series".into()
    })?;
    within(start.elapsed(), Duration::from_secs(10))?;
    Ok("D*A = N through y-degree 11 at W = 16 for A_122 and A_212".into())
}

/// Column order u1..u4, u12 u13 u14 u23 u24 u34, u123 u124 u134 u234, u1234.
fn chart_columns() -> Vec<IndexSet> {
    IndexSet::all_nonempty(4)
}

fn expected_charts() -> ChartTable {
    vec![
        (
            2,
            vec![
                (5, [1, 0, 0, 1, 1, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0]),
                (6, [1, 1, 1, 1, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0]),
                (7, [1, 2, 2, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0]),
            ],
        ),
        (
            3,
            vec![
                (6, [1, 0, 0, 1, 1, 0, 0, 0, 0, 1, 1, 0, 0, 1, 0]),
                (7, [2, 1, 1, 2, 1, 1, 0, 2, 1, 1, 0, 1, 1, 0, 0]),
                (8, [3, 3, 3, 3, 2, 2, 2, 2, 2, 2, 0, 0, 0, 0, 0]),
                (9, [2, 4, 4, 2, 0, 2, 2, 0, 2, 0, 0, 0, 0, 0, 0]),
                (10, [1, 3, 3, 1, 0, 0, 2, 0, 0, 0, 0, 0, 0, 0, 0]),
            ],
        ),
        (
            4,
            vec![
                (7, [1, 0, 0, 1, 1, 0, 0, 0, 0, 1, 1, 0, 0, 1, 1]),
                (8, [3, 1, 1, 3, 2, 1, 0, 2, 1, 2, 2, 2, 2, 2, 0]),
                (9, [6, 4, 4, 6, 5, 4, 3, 5, 4, 5, 2, 2, 2, 2, 0]),
                (10, [7, 9, 9, 7, 4, 7, 6, 6, 7, 4, 0, 2, 2, 0, 0]),
                (11, [6, 12, 12, 6, 3, 6, 9, 3, 6, 3, 0, 0, 0, 0, 0]),
                (12, [3, 9, 9, 3, 0, 3, 6, 0, 3, 0, 0, 0, 0, 0, 0]),
                (13, [1, 4, 4, 1, 0, 0, 3, 0, 0, 0, 0, 0, 0, 0, 0]),
            ],
        ),
    ]
}

fn charts() -> Outcome {
    let columns = chart_columns();
    for (m, rows) in expected_charts() {
        let ch = chart(4, m).map_err(err)?;
        let lengths: Vec<usize> = ch.rows.iter().map(|r| r.length).collect();
        let want: Vec<usize> = rows.iter().map(|r| r.0).collect();
        ensure(lengths == want, || {
            format!("m = {m}: lengths {lengths:?}, want {want:?}")
        })?;
        for (length, cells) in rows {
            for (col, &want) in columns.iter().zip(cells.iter()) {
                let got = ch.count(length, *col);
                ensure(got == want, || {
                    format!("m = {m}, length {length}, u_{{{col}}}: got {got}, want {want}")
                })?;
            }
        }
    }
    Ok("k = 4 charts for m = 2, 3, 4 match cell for cell".into())
}

fn cluster_counts() -> Outcome {
    for (m, want) in [(2, 3), (3, 9), (4, 27)] {
        let got = enumerate_preclusters(4, m).len();
        ensure(got == want, || {
            format!("m = {m}: {got} pre-clusters, want {want}")
        })?;
    }
    Ok("k = 4 pre-cluster counts 3, 9, 27".into())
}

fn recovery_matrix_k4() -> Outcome {
    let m = recovery_matrix(4).map_err(err)?;
    let want = vec![vec![1], vec![3, 1], vec![6, 3, 1]];
    ensure(m.rows == want, || format!("got {:?}", m.rows))?;
    Ok("k = 4 rows (1), (3,1), (6,3,1)".into())
}

fn recovery_round_trip() -> Outcome {
    let start = Instant::now();
    let matrices: Vec<_> = (1..=6)
        .map(recovery_matrix)
        .collect::<Result<_, _>>()
        .map_err(err)?;
    let mut population = patterns_by_shape(5, 4);
    ensure(population.len() == 1364, || {
        format!("{} exhaustive patterns", population.len())
    })?;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    population.extend((0..500).map(|_| random_pattern(&mut rng, 6, 6)));
    let mut failures = Vec::new();
    for u in &population {
        let mu = ClusterMuOracle::new(u.clone()).map_err(err)?;
        let got = recover_with_matrix(&mu, &matrices[u.len() - 1]).map(|r| r.partition());
        let want = partition_of(u).map_err(err)?;
        if got.as_ref() != Ok(&want) {
            failures.push(format!("{u}: {got:?}"));
        }
    }
    ensure(failures.is_empty(), || {
        format!("{} failures, first {:?}", failures.len(), failures.first())
    })?;
    within(start.elapsed(), Duration::from_secs(300))?;
    Ok(format!(
        "{} patterns recovered (seed {SEED:#x})",
        population.len()
    ))
}

fn three_way_agreement() -> Outcome {
    let start = Instant::now();
    let t = tr(12);
    let patterns = patterns_up_to_weight(6);
    let mut mismatches = Vec::new();
    for u in &patterns {
        let cluster = full_gf(u, t).map_err(err)?;
        let automaton = automaton_gf(u, t, true).map_err(err)?;
        let brute = brute_force_gf(u, t).map_err(err)?;
        if cluster != automaton || cluster != brute {
            mismatches.push(u.to_string());
        }
    }
    ensure(mismatches.is_empty(), || {
        format!("mismatched patterns {mismatches:?}")
    })?;
    within(start.elapsed(), Duration::from_secs(300))?;
    Ok(format!(
        "{} patterns agree on all three routes at W = 12",
        patterns.len()
    ))
}

fn identity_suite() -> Outcome {
    let t = tr(16);
    let patterns = patterns_up_to_weight(5);
    for u in &patterns {
        let r = check_prop_we1(u, None, t).map_err(err)?;
        ensure(r.all_hold(), || format!("{u}: {r:?}"))?;
    }
    Ok(format!(
        "reverse, 1u, u+ and x -> x/y identities for {} patterns at W = 16",
        patterns.len()
    ))
}

fn we3_and_generalization() -> Outcome {
    let t = tr(18);
    let mut checked = 0;
    for a in 2..=3 {
        for b in 2..=3 {
            for c in 2..=3 {
                let ok = check_theorem_we3(a, b, c, t).map_err(err)?;
                ensure(ok, || format!("a1b2c vs a2b1c fails at ({a}, {b}, {c})"))?;
                checked += 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 0x9);
    let mut tuples = Vec::new();
    while tuples.len() < 10 {
        let x = rng.gen_range(1..=3);
        let y = rng.gen_range(1..=3);
        if x == y {
            continue;
        }
        let low = x.max(y);
        let (a, b, c) = (
            rng.gen_range(low..=4),
            rng.gen_range(low..=4),
            rng.gen_range(low..=4),
        );
        tuples.push((a, x, b, y, c));
    }
    for &(a, x, b, y, c) in &tuples {
        let ok = check_axbyc(a, x, b, y, c, t).map_err(err)?;
        ensure(ok, || {
            format!("axbyc vs aybxc fails at {:?}", (a, x, b, y, c))
        })?;
        checked += 1;
    }
    Ok(format!(
        "{checked} strong equalities at W = 18 (seed {:#x})",
        SEED ^ 0x9
    ))
}

fn conjecture_scan() -> Outcome {
    let start = Instant::now();
    let report = classify(6, tr(14)).map_err(err)?;
    ensure(report.wilf_strong_mismatches.is_empty(), || {
        format!("mismatches: {:?}", report.wilf_strong_mismatches)
    })?;
    ensure(report.rearrangement_violations.is_empty(), || {
        format!("violations: {:?}", report.rearrangement_violations)
    })?;
    within(start.elapsed(), Duration::from_secs(1800))?;
    let nontrivial = report
        .classes
        .iter()
        .filter(|c| c.members.len() > 1)
        .count();
    Ok(format!(
        "{} classes ({nontrivial} with several members), no mismatches or violations",
        report.classes.len()
    ))
}

fn structural_invariants() -> Outcome {
    // z = 1 collapse
    let t = tr(12);
    let all = all_words_gf(t);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 0x11);
    for _ in 0..50 {
        let u = random_pattern(&mut rng, 5, 4);
        ensure(full_gf(&u, t).map_err(err)?.eval_z(1) == all, || {
            format!("z = 1 collapse fails for {u}")
        })?;
    }

    // minimality of every generated cluster
    let mut clusters_checked = 0usize;
    for u in patterns_up_to_weight(5) {
        let k = u.len();
        for m in 1..=12 {
            for length in k..=12 {
                for pre in enumerate_preclusters_by_length(k, m, length) {
                    let c = cluster_word(&u, &pre).map_err(err)?;
                    ensure(
                        marked_factors_dominate(&u, &pre, &c) && is_minimal(&u, &pre, &c),
                        || {
                            format!(
                                "{u} at offsets {:?} is not a minimal cluster",
                                pre.offsets()
                            )
                        },
                    )?;
                    clusters_checked += 1;
                }
            }
        }
    }

    // symbolic expansion structure
    for k in 2..=6 {
        for i in 1..k {
            let sym = ddagger_symbolic(k, i).map_err(err)?;
            let classes = sym.size_class_multiplicities().map_err(err)?;
            if i >= 2 {
                ensure(classes.get(&(k - 1)) == Some(&1), || {
                    format!(
                        "k = {k}, i = {i}: size {} multiplicity {:?}",
                        k - 1,
                        classes.get(&(k - 1))
                    )
                })?;
            }
            if i >= 3 {
                ensure(classes.keys().all(|&h| h > k - i), || {
                    format!(
                        "k = {k}, i = {i}: sizes {:?} go below {}",
                        classes.keys(),
                        k - i + 1
                    )
                })?;
            }
        }
    }
    Ok(format!(
        "z = 1 collapse (50 patterns), {clusters_checked} minimal clusters, expansion structure for k <= 6"
    ))
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("AC1 coefficient fixtures", coefficient_fixtures),
        (
            "AC2 rational cross-multiplication",
            rational_cross_multiplication,
        ),
        ("AC3 k = 4 charts", charts),
        ("AC4 pre-cluster counts", cluster_counts),
        ("AC5 recovery matrix k = 4", recovery_matrix_k4),
        ("AC6 recovery round trip", recovery_round_trip),
        ("AC7 three-way agreement", three_way_agreement),
        ("AC8 series identities", identity_suite),
        (
            "AC9 a1b2c ~ a2b1c and axbyc ~ aybxc",
            we3_and_generalization,
        ),
        ("AC10 equivalence scan", conjecture_scan),
        ("AC11 structural invariants", structural_invariants),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  {name:<40} {secs:>8.2}s  {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name:<40} {secs:>8.2}s  {detail}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}
