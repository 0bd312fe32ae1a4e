use alloc::string::{String, ToString};
use alloc::vec::Vec;

use hashbrown::HashMap;

use crate::miner::Cluster;
use crate::stats::{
    bh_adjust, cluster_shapes, fisher_exact, ks_two_sample, random_clusters_with, seeded_rng,
    Infeasible, KsResult,
};

/// Experiment annotation terms, each `category:value`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Annotations {
    terms: Vec<String>,
    index: HashMap<String, u32>,
    /// Sorted, deduplicated term ids per experiment.
    by_col: Vec<Vec<u32>>,
}

impl Annotations {
    pub fn new(n_cols: usize) -> Self {
        Self {
            terms: Vec::new(),
            index: HashMap::new(),
            by_col: alloc::vec![Vec::new(); n_cols],
        }
    }

    pub fn n_cols(&self) -> usize {
        self.by_col.len()
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Attaches `term` to experiment `col`. Panics if `col` is out of range.
    pub fn add(&mut self, col: usize, term: &str) {
        let id = match self.index.get(term) {
            Some(&id) => id,
            None => {
                let id = self.terms.len() as u32;
                self.terms.push(term.to_string());
                self.index.insert(term.to_string(), id);
                id
            }
        };
        let list = &mut self.by_col[col];
        if let Err(at) = list.binary_search(&id) {
            list.insert(at, id);
        }
    }

    pub fn terms_of(&self, col: usize) -> impl Iterator<Item = &str> {
        self.by_col[col].iter().map(|&t| self.terms[t as usize].as_str())
    }

    /// Only the terms of `category` (the part before the first `:`).
    pub fn restricted_to_category(&self, category: &str) -> Self {
        let mut out = Self::new(self.n_cols());
        for col in 0..self.n_cols() {
            for term in self.terms_of(col) {
                if term.split(':').next() == Some(category) {
                    out.add(col, term);
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BhScope {
    /// Each cluster's terms form one family.
    #[default]
    Cluster,
    /// All cluster-by-term tests form one family.
    Global,
}

/// Decades from 1e-10 to 1e-1, plus 0.05.
pub fn default_alpha_grid() -> Vec<f64> {
    let mut grid: Vec<f64> = (1..=10).rev().map(|e| libm::pow(10.0, -(e as f64))).collect();
    grid.push(0.05);
    grid
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnrichmentParams {
    pub min_genes: usize,
    pub min_exps: usize,
    pub alpha_grid: Vec<f64>,
    pub bh_scope: BhScope,
}

impl Default for EnrichmentParams {
    fn default() -> Self {
        Self {
            min_genes: 2,
            min_exps: 50,
            alpha_grid: default_alpha_grid(),
            bh_scope: BhScope::Cluster,
        }
    }
}

/// One cluster-by-term test. The table is
/// `[[a, b], [c, d]]` = `[[in cluster with term, in cluster without],
/// [outside with term, outside without]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct EnrichmentResult {
    pub cluster_id: u32,
    pub term: String,
    pub table: [u64; 4],
    pub raw_p: f64,
    pub adjusted_p: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub alpha: f64,
    pub observed_fraction: f64,
    pub random_fraction: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnrichmentReport {
    pub results: Vec<EnrichmentResult>,
    /// `(cluster_id, minimum adjusted p)` per eligible cluster; 1 when no
    /// term was testable.
    pub min_adjusted: Vec<(u32, f64)>,
    pub random_min_adjusted: Vec<f64>,
    pub curve: Vec<CurvePoint>,
    pub ks: KsResult,
    pub seed: u64,
}

struct Tested {
    term: u32,
    table: [u64; 4],
    raw_p: f64,
}

/// Over-representation tests for one experiment set. Terms absent from the
/// set, or carried by every experiment, cannot be over-represented and are
/// reported with p = 1 outside any correction family.
fn test_cluster(cols: &[u32], annotations: &Annotations, term_totals: &[u64]) -> (Vec<Tested>, Vec<Tested>) {
    let n = annotations.n_cols() as u64;
    let len = cols.len() as u64;
    let mut hits: HashMap<u32, u64> = HashMap::new();
    for &c in cols {
        for &t in &annotations.by_col[c as usize] {
            *hits.entry(t).or_default() += 1;
        }
    }
    let mut hits: Vec<(u32, u64)> = hits.into_iter().collect();
    hits.sort_unstable();
    let (mut family, mut trivial) = (Vec::new(), Vec::new());
    for (term, a) in hits {
        let total = term_totals[term as usize];
        let table = [a, len - a, total - a, n - total - (len - a)];
        if total == n {
            trivial.push(Tested { term, table, raw_p: 1.0 });
        } else {
            let raw_p = fisher_exact(table[0], table[1], table[2], table[3]);
            family.push(Tested { term, table, raw_p });
        }
    }
    (family, trivial)
}

/// Minimum adjusted p per experiment set, plus all results.
fn run(
    sets: &[(u32, &[u32])],
    annotations: &Annotations,
    scope: BhScope,
) -> (Vec<EnrichmentResult>, Vec<f64>) {
    let mut totals = alloc::vec![0u64; annotations.terms.len()];
    for col in &annotations.by_col {
        for &t in col {
            totals[t as usize] += 1;
        }
    }
    let tested: Vec<(Vec<Tested>, Vec<Tested>)> = sets
        .iter()
        .map(|(_, cols)| test_cluster(cols, annotations, &totals))
        .collect();

    let adjusted: Vec<Vec<f64>> = match scope {
        BhScope::Cluster => tested
            .iter()
            .map(|(f, _)| bh_adjust(&f.iter().map(|t| t.raw_p).collect::<Vec<_>>()))
            .collect(),
        BhScope::Global => {
            let all: Vec<f64> = tested.iter().flat_map(|(f, _)| f.iter().map(|t| t.raw_p)).collect();
            let mut adj = bh_adjust(&all).into_iter();
            tested
                .iter()
                .map(|(f, _)| adj.by_ref().take(f.len()).collect())
                .collect()
        }
    };

    let mut results = Vec::new();
    let mut mins = Vec::with_capacity(sets.len());
    for (((id, _), (family, trivial)), adj) in sets.iter().zip(tested).zip(adjusted) {
        mins.push(adj.iter().copied().fold(1.0, f64::min));
        let mut rows: Vec<EnrichmentResult> = family
            .into_iter()
            .zip(adj)
            .chain(trivial.into_iter().map(|t| (t, 1.0)))
            .map(|(t, adjusted_p)| EnrichmentResult {
                cluster_id: *id,
                term: annotations.terms[t.term as usize].clone(),
                table: t.table,
                raw_p: t.raw_p,
                adjusted_p,
            })
            .collect();
        rows.sort_by(|a, b| a.term.cmp(&b.term));
        results.extend(rows);
    }
    (results, mins)
}

fn fraction_at(mins: &[f64], alpha: f64) -> f64 {
    if mins.is_empty() {
        return 0.0;
    }
    mins.iter().filter(|&&p| p <= alpha).count() as f64 / mins.len() as f64
}

/// Fisher over-representation of experiment terms in each eligible cluster,
/// compared against one matched random cluster set drawn from `seed`.
pub fn annotation_enrichment(
    clusters: &[Cluster],
    annotations: &Annotations,
    n_rows: usize,
    params: &EnrichmentParams,
    seed: u64,
) -> Result<EnrichmentReport, Infeasible> {
    let eligible: Vec<Cluster> = clusters
        .iter()
        .filter(|c| c.support() >= params.min_genes && c.pattern.len() >= params.min_exps)
        .cloned()
        .collect();
    let sets: Vec<(u32, &[u32])> = eligible.iter().map(|c| (c.id, c.pattern.cols())).collect();
    let (results, mins) = run(&sets, annotations, params.bh_scope);

    let random = random_clusters_with(
        &cluster_shapes(&eligible),
        n_rows,
        annotations.n_cols(),
        &mut seeded_rng(seed),
    )?;
    let random_sets: Vec<(u32, &[u32])> =
        random.iter().enumerate().map(|(i, rc)| (i as u32 + 1, rc.cols.as_slice())).collect();
    let (_, random_mins) = run(&random_sets, annotations, params.bh_scope);

    let curve = params
        .alpha_grid
        .iter()
        .map(|&alpha| CurvePoint {
            alpha,
            observed_fraction: fraction_at(&mins, alpha),
            random_fraction: fraction_at(&random_mins, alpha),
        })
        .collect();
    Ok(EnrichmentReport {
        results,
        min_adjusted: sets.iter().map(|(id, _)| *id).zip(mins.iter().copied()).collect(),
        ks: ks_two_sample(&mins, &random_mins),
        random_min_adjusted: random_mins,
        curve,
        seed,
    })
}
