use std::path::PathBuf;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::Args;
use opsm_core::miner::search;
use opsm_core::oracle::tuple_count;
use opsm_core::{exact_mine, to_sequence_db, MiningParams};

use opsm::report::RunReport;
use opsm::spill::{SpillSink, DEFAULT_CAP};
use opsm::{write_clusters, Invocation};

use super::{policy_name, write_text, write_to, DirectionArg, MatrixInput};

#[derive(Debug, Args)]
pub struct ClusterArgs {
    #[command(flatten)]
    input: MatrixInput,
    /// Beam width: patterns kept per level.
    #[arg(long)]
    k: usize,
    /// Largest gap, in sequence positions, between consecutive pattern elements.
    #[arg(long)]
    w: usize,
    /// Minimum supporting genes.
    #[arg(long)]
    min_genes: usize,
    /// Minimum pattern length.
    #[arg(long)]
    min_exps: usize,
    #[arg(long, value_enum)]
    direction: DirectionArg,
    /// Worker threads for the search.
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Emitted clusters held in memory before levels spill to disk.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    spill_cap: usize,
    #[arg(long)]
    output: PathBuf,
    #[arg(long)]
    report: Option<PathBuf>,
}

fn params(k: usize, w: usize, min_genes: usize, min_exps: usize, d: DirectionArg) -> MiningParams {
    MiningParams { k, w, min_rows: min_genes, min_cols: min_exps, direction: d.into() }
}

pub fn cluster(a: ClusterArgs) -> Result<()> {
    anyhow::ensure!(a.threads >= 1, "threads must be at least 1");
    let start = Instant::now();
    let (matrix, load) = a.input.load()?;
    let p = params(a.k, a.w, a.min_genes, a.min_exps, a.direction);
    p.validate(matrix.n_cols())?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(a.threads).build()?;
    let (clusters, search_report, stats) = pool.install(|| -> Result<_> {
        let db = to_sequence_db(&matrix);
        let mut sink = SpillSink::new(a.spill_cap);
        let report = search(&db, &p, &mut sink).map_err(|e| anyhow::anyhow!("{e}"))?;
        let (clusters, stats) = sink.finish(p.direction, &db).context("spill files")?;
        Ok((clusters, report, stats))
    })?;

    let header = Invocation::new("cluster")
        .opt("input", a.input.input.display())
        .opt("missing", policy_name(a.input.missing))
        .opt("k", p.k)
        .opt("w", p.w)
        .opt("min-genes", p.min_rows)
        .opt("min-exps", p.min_cols)
        .opt("direction", p.direction)
        .header();
    write_to(Some(&a.output), |w| write_clusters(w, &clusters, matrix.row_ids(), matrix.col_ids(), &header))?;
    if let Some(path) = &a.report {
        let text = RunReport {
            header: &header,
            load: &load,
            search: &search_report,
            retained: clusters.len(),
            anti_correlated: clusters.iter().filter(|c| c.anti_correlated).count(),
            spill_cap: a.spill_cap,
            spilled_levels: stats.spilled_levels,
            threads: a.threads,
            wall: start.elapsed(),
        }
        .render();
        write_text(Some(path), &text)?;
    }
    Ok(())
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    input: MatrixInput,
    #[arg(long)]
    w: usize,
    #[arg(long)]
    min_genes: usize,
    #[arg(long)]
    min_exps: usize,
    #[arg(long, value_enum)]
    direction: DirectionArg,
    #[arg(long)]
    output: PathBuf,
    #[arg(long)]
    report: Option<PathBuf>,
}

pub fn oracle(a: OracleArgs) -> Result<()> {
    let start = Instant::now();
    let (matrix, _) = a.input.load()?;
    let p = params(1, a.w, a.min_genes, a.min_exps, a.direction);
    let out = exact_mine(&to_sequence_db(&matrix), &p)?;
    let header = Invocation::new("oracle")
        .opt("input", a.input.input.display())
        .opt("missing", policy_name(a.input.missing))
        .opt("w", p.w)
        .opt("min-genes", p.min_rows)
        .opt("min-exps", p.min_cols)
        .opt("direction", p.direction)
        .header();
    write_to(Some(&a.output), |w| write_clusters(w, &out.clusters, matrix.row_ids(), matrix.col_ids(), &header))?;
    if let Some(path) = &a.report {
        let text = format!(
            "{header}matrix\t{} rows x {} columns\nordered_tuples\t{}\nenumerated\t{}\nclusters\t{}\nwall_seconds\t{:.3}\n",
            matrix.n_rows(),
            matrix.n_cols(),
            tuple_count(matrix.n_cols(), p.min_cols),
            out.enumerated,
            out.clusters.len(),
            start.elapsed().as_secs_f64()
        );
        write_text(Some(path), &text)?;
    }
    Ok(())
}

#[derive(Debug, Args)]
pub struct SequencesArgs {
    #[command(flatten)]
    input: MatrixInput,
    /// Defaults to standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

pub fn sequences(a: SequencesArgs) -> Result<()> {
    let (matrix, _) = a.input.load()?;
    let db = to_sequence_db(&matrix);
    let header = Invocation::new("sequences")
        .opt("input", a.input.input.display())
        .opt("missing", policy_name(a.input.missing))
        .header();
    write_to(a.output.as_deref(), |w| {
        w.write_all(header.as_bytes())?;
        writeln!(w, "# gene\tties\tcolumns in ascending order")?;
        for (r, id) in matrix.row_ids().iter().enumerate() {
            let cols: Vec<&str> = db.seq(r).iter().map(|&c| matrix.col_ids()[c as usize].as_str()).collect();
            writeln!(w, "{id}\t{}\t{}", db.tie_count(r), cols.join(","))?;
        }
        Ok(())
    })
}
