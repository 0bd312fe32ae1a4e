use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use opsm_core::eval::{
    annotation_enrichment, default_alpha_grid, negative_control_analysis, promoter_similarity,
    redundant_probe_analysis, summarize as summarize_clusters, Annotations, BhScope, EnrichmentParams,
    LabelSet,
};
use opsm_core::miner::support_check;
use opsm_core::stats::ks_permutation;
use opsm_core::{to_sequence_db, Cluster};

use opsm::inputs::{load_annotations, load_label_sets, load_negatives, load_probe_map};
use opsm::{Invocation, MissingPolicy, Universe};

use super::{load_input, policy_name, read_cluster_file, universe, warn, write_text};

#[derive(Debug, Args)]
struct ClusterInput {
    /// Cluster file written by `cluster` or `oracle`.
    #[arg(long)]
    clusters: PathBuf,
    /// Expression matrix the clusters came from. Without it the gene and
    /// experiment universe is taken from the input files.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = MissingPolicy::Reject)]
    missing: MissingPolicy,
    /// Report destination; defaults to standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

impl ClusterInput {
    fn invocation(&self, command: &'static str) -> Invocation {
        Invocation::new(command)
            .opt("clusters", self.clusters.display())
            .opt_if("input", self.input.as_ref().map(|p| p.display()))
            .opt_if("missing", self.input.as_ref().map(|_| policy_name(self.missing)))
    }

    /// Reads the clusters and resolves them against the universe.
    fn load(&self, extra_rows: Vec<String>, extra_cols: Vec<String>) -> Result<(Vec<Cluster>, Universe)> {
        let records = read_cluster_file(&self.clusters)?;
        let (u, _) = universe(self.input.as_deref(), self.missing, &records, extra_rows, extra_cols)?;
        let clusters = u.resolve(&records, None).with_context(|| format!("reading {}", self.clusters.display()))?;
        Ok((clusters, u))
    }
}

fn unmatched(kind: &str, ids: impl Iterator<Item = String>) {
    let missing: Vec<String> = ids.collect();
    if !missing.is_empty() {
        let shown = missing.iter().take(10).cloned().collect::<Vec<_>>().join(",");
        let more = if missing.len() > 10 { ",..." } else { "" };
        warn(&format!("{} {kind} not in the matrix: {shown}{more}", missing.len()));
    }
}

#[derive(Debug, Args)]
pub struct SummarizeArgs {
    #[arg(long)]
    clusters: PathBuf,
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = MissingPolicy::Reject)]
    missing: MissingPolicy,
    /// Density table, `n_genes,n_exps,count`.
    #[arg(long)]
    density: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
}

pub fn summarize(a: SummarizeArgs) -> Result<()> {
    let (matrix, _) = load_input(&a.input, a.missing)?;
    let db = to_sequence_db(&matrix);
    let records = read_cluster_file(&a.clusters)?;
    let u = Universe::from_matrix(&matrix);
    let clusters = u.resolve(&records, Some(&db)).with_context(|| format!("reading {}", a.clusters.display()))?;
    for c in &clusters {
        for s in &c.supporters {
            if support_check(c.pattern.cols(), s.row as usize, &db, matrix.n_cols(), s.orientation).is_none() {
                bail!(
                    "cluster {}: gene {} does not order the pattern as listed",
                    c.id,
                    matrix.row_ids()[s.row as usize]
                );
            }
        }
    }
    let s = summarize_clusters(&clusters, &matrix);
    let header = Invocation::new("summarize")
        .opt("clusters", a.clusters.display())
        .opt("input", a.input.display())
        .opt("missing", policy_name(a.missing))
        .header();

    let mut density = header.clone();
    density.push_str("n_genes,n_exps,count\n");
    for ((g, e), n) in &s.density {
        let _ = writeln!(density, "{g},{e},{n}");
    }
    write_text(Some(&a.density), &density)?;

    let defined: Vec<f64> = s.mean_pearson.iter().flatten().copied().collect();
    let mean_r = if defined.is_empty() { f64::NAN } else { defined.iter().sum::<f64>() / defined.len() as f64 };
    let mut out = header;
    let _ = writeln!(out, "clusters\t{}", s.n_clusters);
    let _ = writeln!(out, "genes_per_cluster\tmean={} min={} max={}", s.genes.mean, s.genes.min, s.genes.max);
    let _ = writeln!(out, "exps_per_cluster\tmean={} min={} max={}", s.exps.mean, s.exps.min, s.exps.max);
    let _ = writeln!(out, "mean_pairwise_pearson\t{mean_r}");
    let _ = writeln!(out, "fraction_r_above_0.95\t{}", s.fraction_r_above_095);
    let _ = writeln!(out, "# cluster_id\tmean_pairwise_pearson");
    for (c, r) in clusters.iter().zip(&s.mean_pearson) {
        let r = r.map_or("NA".to_string(), |r| r.to_string());
        let _ = writeln!(out, "{}\t{r}", c.id);
    }
    write_text(a.output.as_deref(), &out)
}

#[derive(Debug, Args)]
pub struct ProbesArgs {
    #[command(flatten)]
    common: ClusterInput,
    /// `probe<TAB>gene` lines.
    #[arg(long)]
    probe_map: PathBuf,
    #[arg(long)]
    permutations: usize,
    #[arg(long)]
    seed: u64,
}

pub fn probes(a: ProbesArgs) -> Result<()> {
    let map = load_probe_map(&a.probe_map).with_context(|| format!("reading {}", a.probe_map.display()))?;
    let (clusters, u) = a.common.load(map.keys().cloned().collect(), Vec::new())?;
    if a.common.input.is_some() {
        unmatched("probes", map.keys().filter(|p| u.row(p).is_none()).cloned());
    }
    let mut genes: HashMap<&str, u32> = HashMap::new();
    let gene_of_row: Vec<Option<u32>> = u
        .row_ids()
        .iter()
        .map(|r| {
            map.get(r).map(|g| {
                let next = genes.len() as u32;
                *genes.entry(g.as_str()).or_insert(next)
            })
        })
        .collect();
    let r = redundant_probe_analysis(&clusters, &gene_of_row, u.n_cols(), a.permutations, a.seed)?;

    let mut out = a
        .common
        .invocation("eval-probes")
        .opt("probe-map", a.probe_map.display())
        .opt("permutations", a.permutations)
        .seed(a.seed)
        .header();
    let _ = writeln!(out, "clusters\t{}", clusters.len());
    let _ = writeln!(out, "genes_in_universe\t{}", u.n_rows());
    let _ = writeln!(out, "unmapped_rows\t{}", r.unmapped_rows);
    let _ = writeln!(out, "mean_redundant_pairs\t{}", r.mean_pairs);
    let _ = writeln!(out, "random_mean_redundant_pairs\t{}", r.random_mean_pairs);
    let _ = writeln!(out, "p_mean\t{}", r.p_mean);
    let _ = writeln!(out, "clusters_with_redundant_pair\t{}", r.clusters_with_pair);
    let _ = writeln!(out, "fraction_with_redundant_pair\t{}", r.fraction_with_pair);
    let _ = writeln!(out, "random_fraction_with_redundant_pair\t{}", r.random_fraction_with_pair);
    let _ = writeln!(out, "p_fraction\t{}", r.p_fraction);
    let _ = writeln!(out, "# n_genes\tclusters\tobserved_mean_pairs\trandom_mean_pairs");
    for row in &r.by_size {
        let _ = writeln!(out, "{}\t{}\t{}\t{}", row.n_genes, row.clusters, row.observed_mean, row.random_mean);
    }
    let _ = writeln!(out, "# cluster_id\tredundant_pairs");
    for (c, n) in clusters.iter().zip(&r.per_cluster) {
        let _ = writeln!(out, "{}\t{n}", c.id);
    }
    write_text(a.common.output.as_deref(), &out)
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ScopeArg {
    Cluster,
    Global,
}

#[derive(Debug, Args)]
pub struct AnnotationsArgs {
    #[command(flatten)]
    common: ClusterInput,
    /// `experiment<TAB>category<TAB>value` lines.
    #[arg(long)]
    annotations: PathBuf,
    /// Only terms of this category (`tissue` or `tissue:*`).
    #[arg(long)]
    category: Option<String>,
    #[arg(long, default_value_t = 2)]
    min_genes: usize,
    #[arg(long, default_value_t = 50)]
    min_exps: usize,
    #[arg(long, value_enum, default_value_t = ScopeArg::Cluster)]
    bh_scope: ScopeArg,
    /// Comma-separated significance levels for the curve.
    #[arg(long, value_delimiter = ',')]
    alpha_grid: Option<Vec<f64>>,
    /// Seeds the matched random cluster set.
    #[arg(long)]
    seed: u64,
    /// Permutation KS p-value with this many shuffles instead of the
    /// asymptotic one; meant for small cluster counts.
    #[arg(long)]
    ks_permutations: Option<usize>,
    /// Per-test table.
    #[arg(long)]
    results: Option<PathBuf>,
    /// Significance curve as CSV.
    #[arg(long)]
    curve: Option<PathBuf>,
}

pub fn annotations(a: AnnotationsArgs) -> Result<()> {
    let ann = load_annotations(&a.annotations).with_context(|| format!("reading {}", a.annotations.display()))?;
    let (clusters, u) = a.common.load(Vec::new(), ann.keys().cloned().collect())?;
    if a.common.input.is_some() {
        unmatched("annotated experiments", ann.keys().filter(|e| u.col(e).is_none()).cloned());
    }
    let mut terms = Annotations::new(u.n_cols());
    for (exp, set) in &ann {
        if let Some(c) = u.col(exp) {
            for t in set {
                terms.add(c as usize, t);
            }
        }
    }
    let category = a.category.as_deref().map(|c| c.trim_end_matches(":*").to_string());
    if let Some(cat) = &category {
        terms = terms.restricted_to_category(cat);
    }
    if terms.is_empty() {
        bail!("no annotation terms apply to the experiments in use");
    }
    let mut alpha_grid = a.alpha_grid.clone().unwrap_or_else(default_alpha_grid);
    alpha_grid.sort_by(f64::total_cmp);
    if let Some(bad) = alpha_grid.iter().find(|x| !(0.0..=1.0).contains(*x)) {
        bail!("alpha {bad} is outside [0, 1]");
    }
    let params = EnrichmentParams {
        min_genes: a.min_genes,
        min_exps: a.min_exps,
        alpha_grid,
        bh_scope: match a.bh_scope {
            ScopeArg::Cluster => BhScope::Cluster,
            ScopeArg::Global => BhScope::Global,
        },
    };
    let mut r = annotation_enrichment(&clusters, &terms, u.n_rows(), &params, a.seed)?;
    let observed: Vec<f64> = r.min_adjusted.iter().map(|x| x.1).collect();
    if let Some(perms) = a.ks_permutations {
        r.ks = ks_permutation(&observed, &r.random_min_adjusted, perms, a.seed);
    }

    let grid_text = params.alpha_grid.iter().map(f64::to_string).collect::<Vec<_>>().join(",");
    let header = a
        .common
        .invocation("eval-annotations")
        .opt("annotations", a.annotations.display())
        .opt_if("category", category.as_deref())
        .opt("min-genes", a.min_genes)
        .opt("min-exps", a.min_exps)
        .opt("bh-scope", if params.bh_scope == BhScope::Cluster { "cluster" } else { "global" })
        .opt("alpha-grid", &grid_text)
        .opt_if("ks-permutations", a.ks_permutations)
        .seed(a.seed)
        .header();

    let mut out = header.clone();
    let _ = writeln!(out, "clusters\t{}", clusters.len());
    let _ = writeln!(out, "eligible_clusters\t{}", r.min_adjusted.len());
    let _ = writeln!(out, "terms\t{}", terms.terms().len());
    let _ = writeln!(out, "tests\t{}", r.results.len());
    let _ = writeln!(out, "ks_d\t{}", r.ks.d);
    let _ = writeln!(out, "ks_p\t{}", r.ks.p);
    let _ = writeln!(out, "ks_method\t{}", if a.ks_permutations.is_some() { "permutation" } else { "asymptotic" });
    let _ = writeln!(out, "# alpha\tobserved_fraction\trandom_fraction");
    for p in &r.curve {
        let _ = writeln!(out, "{}\t{}\t{}", p.alpha, p.observed_fraction, p.random_fraction);
    }
    let _ = writeln!(out, "# cluster_id\tmin_adjusted_p");
    for (id, p) in &r.min_adjusted {
        let _ = writeln!(out, "{id}\t{p}");
    }
    write_text(a.common.output.as_deref(), &out)?;

    if let Some(path) = &a.results {
        let mut t = header.clone();
        t.push_str("cluster_id\tterm\tin_with\tin_without\tout_with\tout_without\traw_p\tadjusted_p\n");
        for e in &r.results {
            let [x, y, z, w] = e.table;
            let _ = writeln!(t, "{}\t{}\t{x}\t{y}\t{z}\t{w}\t{}\t{}", e.cluster_id, e.term, e.raw_p, e.adjusted_p);
        }
        write_text(Some(path), &t)?;
    }
    if let Some(path) = &a.curve {
        let mut t = header;
        t.push_str("alpha,observed_fraction,random_fraction\n");
        for p in &r.curve {
            let _ = writeln!(t, "{},{},{}", p.alpha, p.observed_fraction, p.random_fraction);
        }
        write_text(Some(path), &t)?;
    }
    Ok(())
}

#[derive(Debug, Args)]
pub struct NegativesArgs {
    #[command(flatten)]
    common: ClusterInput,
    /// One negative-control row id per line.
    #[arg(long)]
    negatives: PathBuf,
    #[arg(long)]
    permutations: usize,
    #[arg(long)]
    seed: u64,
    /// Per-(size, length) table as CSV.
    #[arg(long)]
    breakdown: Option<PathBuf>,
}

pub fn negatives(a: NegativesArgs) -> Result<()> {
    let neg = load_negatives(&a.negatives).with_context(|| format!("reading {}", a.negatives.display()))?;
    let (clusters, u) = a.common.load(neg.iter().cloned().collect(), Vec::new())?;
    if a.common.input.is_some() {
        unmatched("negative controls", neg.iter().filter(|n| u.row(n).is_none()).cloned());
    }
    let is_negative: Vec<bool> = u.row_ids().iter().map(|r| neg.contains(r)).collect();
    let r = negative_control_analysis(&clusters, &is_negative, u.n_cols(), a.permutations, a.seed)?;
    let header = a
        .common
        .invocation("eval-negatives")
        .opt("negatives", a.negatives.display())
        .opt("permutations", a.permutations)
        .seed(a.seed)
        .header();
    let mut out = header.clone();
    let _ = writeln!(out, "clusters\t{}", clusters.len());
    let _ = writeln!(out, "negatives_in_universe\t{}", is_negative.iter().filter(|&&x| x).count());
    let _ = writeln!(out, "mean_negative_fraction\t{}", r.mean_fraction);
    let _ = writeln!(out, "random_mean_negative_fraction\t{}", r.random_mean_fraction);
    let _ = writeln!(out, "p\t{}", r.p);
    let _ = writeln!(out, "# n_genes\tn_exps\tclusters\tmean_negative_fraction");
    for c in &r.breakdown {
        let _ = writeln!(out, "{}\t{}\t{}\t{}", c.n_genes, c.n_exps, c.clusters, c.mean_fraction);
    }
    let _ = writeln!(out, "# cluster_id\tnegative_fraction");
    for (c, f) in clusters.iter().zip(&r.per_cluster) {
        let _ = writeln!(out, "{}\t{f}", c.id);
    }
    write_text(a.common.output.as_deref(), &out)?;
    if let Some(path) = &a.breakdown {
        let mut t = header;
        t.push_str("n_genes,n_exps,clusters,mean_negative_fraction\n");
        for c in &r.breakdown {
            let _ = writeln!(t, "{},{},{},{}", c.n_genes, c.n_exps, c.clusters, c.mean_fraction);
        }
        write_text(Some(path), &t)?;
    }
    Ok(())
}

#[derive(Debug, Args)]
pub struct SimilarityArgs {
    #[command(flatten)]
    common: ClusterInput,
    /// `gene<TAB>label` lines.
    #[arg(long)]
    labels: PathBuf,
    /// Matched random cluster sets.
    #[arg(long)]
    random: usize,
    #[arg(long)]
    seed: u64,
    /// Per-size and per-length means as CSV.
    #[arg(long)]
    breakdown: Option<PathBuf>,
}

pub fn similarity(a: SimilarityArgs) -> Result<()> {
    let sets = load_label_sets(&a.labels).with_context(|| format!("reading {}", a.labels.display()))?;
    let (clusters, u) = a.common.load(sets.keys().cloned().collect(), Vec::new())?;
    if a.common.input.is_some() {
        unmatched("labelled genes", sets.keys().filter(|g| u.row(g).is_none()).cloned());
    }
    let mut ids: HashMap<&str, u32> = HashMap::new();
    let empty = BTreeSet::new();
    let labels: Vec<LabelSet> = u
        .row_ids()
        .iter()
        .map(|r| {
            sets.get(r)
                .unwrap_or(&empty)
                .iter()
                .map(|l| {
                    let next = ids.len() as u32;
                    *ids.entry(l.as_str()).or_insert(next)
                })
                .collect()
        })
        .collect();
    let r = promoter_similarity(&clusters, &labels, u.n_rows(), u.n_cols(), a.random, a.seed)?;
    for id in &r.skipped {
        warn(&format!("cluster {id} has fewer than two genes; skipped"));
    }
    let header = a
        .common
        .invocation("eval-similarity")
        .opt("labels", a.labels.display())
        .opt("random", a.random)
        .seed(a.seed)
        .header();
    let mut out = header.clone();
    let _ = writeln!(out, "clusters\t{}", clusters.len());
    let _ = writeln!(out, "scored_clusters\t{}", r.per_cluster.len());
    let _ = writeln!(out, "skipped_clusters\t{}", r.skipped.len());
    let _ = writeln!(out, "mean_similarity\t{}", r.mean);
    let _ = writeln!(out, "random_mean_similarity\t{}", r.random_mean);
    let _ = writeln!(out, "random_clusters\t{}", r.random_scores.len());
    let _ = writeln!(out, "rank_sum_u\t{}", r.rank_sum.u);
    let _ = writeln!(out, "rank_sum_p\t{}", r.rank_sum.p);
    let _ = writeln!(out, "rank_sum_method\t{}", if r.rank_sum.exact { "exact" } else { "normal" });
    let mut table = String::new();
    for (kind, cells) in [("n_genes", &r.by_size), ("n_exps", &r.by_length)] {
        for c in cells {
            let _ = writeln!(
                table,
                "{kind},{},{},{},{},{}",
                c.key, c.clusters, c.observed_mean, c.random_clusters, c.random_mean
            );
        }
    }
    let _ = writeln!(out, "# by,value,clusters,observed_mean,random_clusters,random_mean");
    out.push_str(&table);
    let _ = writeln!(out, "# cluster_id\tsimilarity");
    for (id, s) in &r.per_cluster {
        let _ = writeln!(out, "{id}\t{s}");
    }
    write_text(a.common.output.as_deref(), &out)?;
    if let Some(path) = &a.breakdown {
        let mut t = header;
        t.push_str("by,value,clusters,observed_mean,random_clusters,random_mean\n");
        t.push_str(&table);
        write_text(Some(path), &t)?;
    }
    Ok(())
}

