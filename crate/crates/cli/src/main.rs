use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use cluster_core::matrix::ExchangeMatrix;
use cluster_core::quiver::build_unfolding;
use cluster_core::verify::{Registry, VerifyParams};

/// Relative `--out` paths are resolved against this directory when set.
const OUT_DIR_VAR: &str = "CLUSTER_UNFOLD_OUT_DIR";

#[derive(Parser)]
#[command(name = "cluster-unfold", version, about = "Exchange matrix mutation, unfolding and verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mutate a matrix along a sequence of 1-based directions.
    Mutate {
        file: PathBuf,
        /// Directions, e.g. `1 2 1` or `"1 2 1"`.
        seq: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the truncated covering quiver as a snapshot.
    Unfold {
        file: PathBuf,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
        depth: u64,
        /// Append a DOT rendering after the snapshot.
        #[arg(long)]
        dot: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a named verifier; exit code 1 if it finds a counterexample.
    Verify(VerifyArgs),
    /// List the registered verifiers.
    Verifiers,
}

#[derive(Args)]
struct VerifyArgs {
    kind: String,
    file: PathBuf,
    /// Fixed truncation depth; defaults to sequence length + 2.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    depth: Option<u64>,
    #[arg(long, default_value_t = 5)]
    max_len: usize,
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Every sequence up to this length is tried before the random ones.
    #[arg(long, default_value_t = 3)]
    exhaustive_len: usize,
    /// Largest polynomial product, in term pairs, attempted per mutation.
    #[arg(long, default_value_t = 1_000_000)]
    max_work: u64,
    /// Work over Z[y^{±1}] instead of Z[y].
    #[arg(long)]
    invert_coeffs: bool,
    #[arg(long)]
    json: bool,
    /// Report elapsed_ms as 0 so that reruns are byte-identical.
    #[arg(long)]
    no_timing: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn read_matrix(path: &Path) -> Result<ExchangeMatrix> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    ExchangeMatrix::parse(&text).with_context(|| format!("parsing {}", path.display()))
}

fn parse_seq(words: &[String], n: usize) -> Result<Vec<usize>> {
    let mut seq = Vec::new();
    for tok in words.iter().flat_map(|w| w.split(|c: char| c.is_whitespace() || c == ',')) {
        if tok.is_empty() {
            continue;
        }
        let k: usize = tok.parse().with_context(|| format!("bad direction {tok:?}"))?;
        if k == 0 || k > n {
            return Err(cluster_core::error::Error::IndexOutOfRange { index: k, bound: n }.into());
        }
        seq.push(k - 1);
    }
    Ok(seq)
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        None => print!("{text}"),
        Some(path) => {
            let path = match std::env::var_os(OUT_DIR_VAR) {
                Some(dir) if path.is_relative() => Path::new(&dir).join(path),
                _ => path.to_path_buf(),
            };
            fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Mutate { file, seq, out } => {
            let b = read_matrix(&file)?;
            let seq = parse_seq(&seq, b.n())?;
            emit(&b.mutate_seq(&seq).to_text(), out.as_deref())?;
        }
        Command::Unfold { file, depth, dot, out } => {
            let b = read_matrix(&file)?;
            let q = build_unfolding(&b, depth as usize)?;
            let mut text = q.to_snapshot();
            if dot {
                text.push_str(&q.to_dot());
            }
            emit(&text, out.as_deref())?;
        }
        Command::Verify(args) => {
            let registry = Registry::builtin();
            let verifier = registry.get(&args.kind)?;
            let b = read_matrix(&args.file)?;
            let params = VerifyParams {
                depth: args.depth.map(|d| d as usize),
                max_len: args.max_len,
                trials: args.trials as usize,
                prng_seed: args.seed,
                invert_coeffs: args.invert_coeffs,
                exhaustive_len: args.exhaustive_len,
                max_work: args.max_work,
            };
            let mut report = verifier.run(&b, &params)?;
            if args.no_timing {
                report.elapsed_ms = 0;
            }
            let text = if args.json { report.to_json() + "\n" } else { report.to_text() };
            emit(&text, args.out.as_deref())?;
            if report.unverified() > 0 {
                eprintln!(
                    "warning: {} item(s) were not checked: over --max-work {} or beyond what the truncation depth decides",
                    report.unverified(),
                    args.max_work
                );
            }
            if !report.passed() {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Verifiers => {
            for v in Registry::builtin().iter() {
                println!("{:<12}{}", v.name(), v.summary());
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
