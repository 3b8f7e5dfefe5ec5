use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use gfo::automaton::{automaton_gf, DominanceAutomaton};
use gfo::clusters::{chart, minimal_cluster_gf, MAX_PATTERN_LEN};
use gfo::equiv::classify;
use gfo::genfun::{avoidance_gf, full_gf};
use gfo::oracle::brute_force_gf;
use gfo::recovery::{recover, ClusterMuOracle};
use gfo::{Series, Truncation, Word};

mod verify;

#[derive(Parser)]
#[command(
    name = "gfo",
    version,
    about = "Generating functions for the generalized factor order"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Trivariate generating function A_P(x, y, z) truncated at weight W.
    Gf {
        #[arg(long, value_parser = parse_pattern)]
        pattern: Word,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        max_weight: u32,
        #[arg(long, value_enum, default_value_t = Method::Cluster)]
        method: Method,
        /// Keep only the z^0 part (words avoiding P).
        #[arg(long)]
        z0: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Worker threads for the oracle method (0 = all cores).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// Minimal-cluster series M_P(x, y, z).
    Mu {
        #[arg(long, value_parser = parse_pattern)]
        pattern: Word,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        max_weight: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Symbolic cluster chart for m copies of a length-k pattern.
    Chart {
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..=MAX_PATTERN_LEN as u64))]
        k: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        m: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Recover the sorted letters of P from its minimal-cluster series.
    Recover {
        #[arg(long, value_parser = parse_pattern)]
        pattern: Word,
    },
    /// Group all patterns of weight at most F by their truncated series.
    Classify {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        max_factor_weight: u32,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        max_word_weight: u32,
        /// Worker threads (0 = all cores).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// Run the reference fixture suite and print a pass/fail table.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::Paper)]
        suite: Suite,
        /// Seed for the randomly sampled checks.
        #[arg(long, default_value_t = verify::DEFAULT_SEED)]
        seed: u64,
    },
    /// Dump the dominance automaton of P as JSON.
    AutomatonDump {
        #[arg(long, value_parser = parse_pattern)]
        pattern: Word,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Cluster,
    Automaton,
    Oracle,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Paper,
}

fn parse_pattern(s: &str) -> Result<Word, String> {
    let w: Word = s.parse().map_err(|e: gfo::Error| e.to_string())?;
    if w.is_empty() {
        return Err("pattern must be nonempty".into());
    }
    if w.len() > MAX_PATTERN_LEN {
        return Err(format!("pattern longer than {MAX_PATTERN_LEN} letters"));
    }
    Ok(w)
}

fn truncation(w: u32) -> Truncation {
    Truncation::new(w).expect("clap enforces W >= 1")
}

fn warn_if_light(u: &Word, w: u32) {
    if w < u.weight() {
        eprintln!(
            "warning: max weight {w} is below the pattern weight {}; no occurrences fit",
            u.weight()
        );
    }
}

fn with_jobs<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> T {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .expect("thread pool");
    pool.install(f)
}

fn render(series: &Series, format: Format) -> String {
    match format {
        Format::Text => series.canonical_serialize(),
        Format::Json => series.to_json(),
    }
}

fn run(command: Command) -> gfo::Result<ExitCode> {
    match command {
        Command::Gf {
            pattern,
            max_weight,
            method,
            z0,
            format,
            jobs,
        } => {
            warn_if_light(&pattern, max_weight);
            let t = truncation(max_weight);
            let series = match method {
                Method::Cluster if z0 => avoidance_gf(&pattern, t)?,
                Method::Cluster => full_gf(&pattern, t)?,
                Method::Automaton => automaton_gf(&pattern, t, !z0)?,
                Method::Oracle => {
                    let full = with_jobs(jobs, || brute_force_gf(&pattern, t))?;
                    if z0 {
                        full.eval_z(0)
                    } else {
                        full
                    }
                }
            };
            println!("{}", render(&series, format));
        }
        Command::Mu {
            pattern,
            max_weight,
            format,
        } => {
            warn_if_light(&pattern, max_weight);
            let series = minimal_cluster_gf(&pattern, truncation(max_weight))?;
            println!("{}", render(&series, format));
        }
        Command::Chart { k, m, format } => {
            let ch = chart(k as usize, m as usize)?;
            match format {
                Format::Text => print!("{}", ch.to_text()),
                Format::Json => println!("{}", ch.to_json_value()),
            }
        }
        Command::Recover { pattern } => {
            let r = recover(&ClusterMuOracle::new(pattern)?)?;
            println!("{}", r.to_json_value());
        }
        Command::Classify {
            max_factor_weight,
            max_word_weight,
            jobs,
        } => {
            let t = truncation(max_word_weight);
            let report = with_jobs(jobs, || classify(max_factor_weight, t))?;
            println!("{}", report.to_json());
        }
        Command::Verify {
            suite: Suite::Paper,
            seed,
        } => {
            return Ok(if verify::run(seed) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            });
        }
        Command::AutomatonDump { pattern } => {
            println!("{}", DominanceAutomaton::new(&pattern)?.to_json_value());
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
