//! Plain-text run report for a mining run.

use std::fmt::Write;
use std::time::Duration;

use opsm_core::miner::SearchReport;

use crate::matrix_tsv::LoadReport;

pub struct RunReport<'a> {
    pub header: &'a str,
    pub load: &'a LoadReport,
    pub search: &'a SearchReport,
    pub retained: usize,
    pub anti_correlated: usize,
    pub spill_cap: usize,
    pub spilled_levels: usize,
    pub threads: usize,
    pub wall: Duration,
}

impl RunReport<'_> {
    pub fn render(&self) -> String {
        let s = self.search;
        let p = &s.params;
        let mut out = String::from(self.header);
        let _ = writeln!(out, "matrix\t{} rows x {} columns", s.n_rows, s.n_cols);
        let _ = writeln!(out, "data_lines\t{}", self.load.data_lines);
        let _ = writeln!(out, "dropped_rows\t{}", self.load.dropped.len());
        if !self.load.dropped.is_empty() {
            let _ = writeln!(out, "dropped\t{}", self.load.dropped.join(","));
        }
        let _ = writeln!(
            out,
            "params\tk={} w={} min-genes={} min-exps={} direction={}",
            p.k, p.w, p.min_rows, p.min_cols, p.direction
        );
        let _ = writeln!(
            out,
            "ties\trows_with_ties={} tied_pairs={} max_in_row={}",
            s.ties.rows_with_ties, s.ties.tied_pairs, s.ties.max_in_row
        );
        let _ = writeln!(out, "level\tcandidates\tbeam\temitted");
        for l in &s.levels {
            let _ = writeln!(out, "{}\t{}\t{}\t{}", l.length, l.candidates, l.beam, l.emitted);
        }
        let _ = writeln!(out, "emitted\t{}", s.emitted);
        let _ = writeln!(out, "redundant_removed\t{}", s.emitted - self.retained);
        let _ = writeln!(out, "clusters\t{}", self.retained);
        let _ = writeln!(out, "anti_correlated\t{}", self.anti_correlated);
        let _ = writeln!(out, "spill_cap\t{}", self.spill_cap);
        let _ = writeln!(out, "spilled_levels\t{}", self.spilled_levels);
        let _ = writeln!(out, "threads\t{}", self.threads);
        let _ = writeln!(out, "wall_seconds\t{:.3}", self.wall.as_secs_f64());
        out
    }
}
