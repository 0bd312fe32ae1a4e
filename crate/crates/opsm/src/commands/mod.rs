use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use opsm_core::{Direction, ExpressionMatrix};

use opsm::{load_clusters, load_matrix, ClusterRecord, LoadReport, MissingPolicy, Universe};

mod eval;
mod mining;
mod synth;

#[derive(Debug, Parser)]
#[command(name = "opsm", version, about = "Order-preserving submatrix mining and cluster evaluation")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Mine clusters with the top-k, width-w beam search.
    Cluster(mining::ClusterArgs),
    /// Enumerate clusters exhaustively (small matrices only).
    Oracle(mining::OracleArgs),
    /// Write a random matrix, optionally with planted clusters.
    Synth(synth::SynthArgs),
    /// Dump each row's column order.
    Sequences(mining::SequencesArgs),
    /// Cluster size and length distribution and within-cluster correlation.
    Summarize(eval::SummarizeArgs),
    /// Probe pairs of the same gene inside clusters, against random clusters.
    EvalProbes(eval::ProbesArgs),
    /// Over-represented experiment annotation terms, against random clusters.
    EvalAnnotations(eval::AnnotationsArgs),
    /// Contamination by negative-control rows, against random clusters.
    EvalNegatives(eval::NegativesArgs),
    /// Shared promoter labels among cluster members, against random clusters.
    EvalSimilarity(eval::SimilarityArgs),
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Cluster(a) => mining::cluster(a),
        Command::Oracle(a) => mining::oracle(a),
        Command::Synth(a) => synth::synth(a),
        Command::Sequences(a) => mining::sequences(a),
        Command::Summarize(a) => eval::summarize(a),
        Command::EvalProbes(a) => eval::probes(a),
        Command::EvalAnnotations(a) => eval::annotations(a),
        Command::EvalNegatives(a) => eval::negatives(a),
        Command::EvalSimilarity(a) => eval::similarity(a),
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DirectionArg {
    Forward,
    Both,
}

impl From<DirectionArg> for Direction {
    fn from(d: DirectionArg) -> Self {
        match d {
            DirectionArg::Forward => Direction::Forward,
            DirectionArg::Both => Direction::Both,
        }
    }
}

#[derive(Debug, Args)]
struct MatrixInput {
    /// Expression matrix (TSV with a header row).
    #[arg(long)]
    input: PathBuf,
    /// What to do with missing or non-numeric cells.
    #[arg(long, value_enum, default_value_t = MissingPolicy::Reject)]
    missing: MissingPolicy,
}

impl MatrixInput {
    fn load(&self) -> Result<(ExpressionMatrix, LoadReport)> {
        load_input(&self.input, self.missing)
    }
}

fn load_input(path: &Path, missing: MissingPolicy) -> Result<(ExpressionMatrix, LoadReport)> {
    let (m, report) = load_matrix(path, missing).with_context(|| format!("reading {}", path.display()))?;
    if !report.dropped.is_empty() {
        warn(&format!("dropped {} rows with missing values: {}", report.dropped.len(), report.dropped.join(",")));
    }
    Ok((m, report))
}

fn policy_name(p: MissingPolicy) -> &'static str {
    match p {
        MissingPolicy::Reject => "reject",
        MissingPolicy::DropRows => "drop-rows",
    }
}

fn warn(msg: &str) {
    eprintln!("opsm: warning: {msg}");
}

/// Writes through `f`, either to `path` or to stdout.
fn write_to(path: Option<&Path>, f: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> Result<()> {
    match path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?);
            f(&mut w).and_then(|_| w.flush()).with_context(|| format!("writing {}", p.display()))
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            f(&mut w).and_then(|_| w.flush()).context("writing to standard output")
        }
    }
}

fn write_text(path: Option<&Path>, text: &str) -> Result<()> {
    write_to(path, |w| w.write_all(text.as_bytes()))
}

fn read_cluster_file(path: &Path) -> Result<Vec<ClusterRecord>> {
    load_clusters(path).with_context(|| format!("reading {}", path.display()))
}

/// The label space for an evaluation: the matrix when given, otherwise
/// every label named by the clusters and the auxiliary file.
fn universe(
    input: Option<&Path>,
    missing: MissingPolicy,
    records: &[ClusterRecord],
    extra_rows: Vec<String>,
    extra_cols: Vec<String>,
) -> Result<(Universe, Option<ExpressionMatrix>)> {
    match input {
        Some(path) => {
            let (m, _) = load_input(path, missing)?;
            Ok((Universe::from_matrix(&m), Some(m)))
        }
        None => {
            let (rows, cols) = Universe::of_records(records);
            let u = Universe::from_labels(rows.into_iter().chain(extra_rows), cols.into_iter().chain(extra_cols));
            warn(&format!(
                "no --input given; random clusters are drawn from the {} genes and {} experiments named in the input files",
                u.n_rows(),
                u.n_cols()
            ));
            Ok((u, None))
        }
    }
}
