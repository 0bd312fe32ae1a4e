use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use clap::Args;
use opsm_core::synthgen::{random_matrix, Plant, Planter};

use opsm::{write_matrix, Invocation};

use super::write_to;

/// `rows=0,1,2;cols=3,1,4;reversed=2`, zero-based indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlantSpec(Plant);

fn indices(s: &str) -> Result<Vec<usize>> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|x| x.trim().parse::<usize>().with_context(|| format!("bad index {x:?}")))
        .collect()
}

impl FromStr for PlantSpec {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut plant = Plant::default();
        let (mut rows, mut cols) = (false, false);
        for part in s.split(';').filter(|p| !p.trim().is_empty()) {
            let (key, value) = part.split_once('=').with_context(|| format!("expected key=value, got {part:?}"))?;
            match key.trim() {
                "rows" => (plant.rows, rows) = (indices(value)?, true),
                "cols" => (plant.cols, cols) = (indices(value)?, true),
                "reversed" => plant.reversed = indices(value)?,
                other => bail!("unknown plant key {other:?}"),
            }
        }
        if !(rows && cols) {
            bail!("plant needs both rows= and cols=");
        }
        Ok(Self(plant))
    }
}

impl std::fmt::Display for PlantSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let join = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
        write!(f, "rows={};cols={};reversed={}", join(&self.0.rows), join(&self.0.cols), join(&self.0.reversed))
    }
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long)]
    rows: usize,
    #[arg(long)]
    cols: usize,
    #[arg(long)]
    seed: u64,
    /// Planted cluster; repeat for several. Indices are zero-based.
    #[arg(long, value_parser = PlantSpec::from_str)]
    plant: Vec<PlantSpec>,
    /// Step between consecutive planted values.
    #[arg(long, default_value_t = 1.0)]
    sep: f64,
    #[arg(long)]
    output: PathBuf,
    /// Planted clusters with gene and experiment labels.
    #[arg(long)]
    manifest: Option<PathBuf>,
}

pub fn synth(a: SynthArgs) -> Result<()> {
    let base = random_matrix(a.rows, a.cols, a.seed)?;
    let mut planter = Planter::new(base, a.sep)?;
    for (i, p) in a.plant.iter().enumerate() {
        planter.plant(p.0.clone()).with_context(|| format!("plant {}", i + 1))?;
    }
    let (matrix, plants) = planter.into_parts();
    let mut inv = Invocation::new("synth").opt("rows", a.rows).opt("cols", a.cols);
    for p in &a.plant {
        inv = inv.opt("plant", format!("'{p}'"));
    }
    let header = inv.opt("sep", a.sep).seed(a.seed).header();
    write_to(Some(&a.output), |w| write_matrix(w, &matrix, &header))?;
    if let Some(path) = &a.manifest {
        let label = |ids: &[String], xs: &[usize]| {
            if xs.is_empty() {
                "-".to_string()
            } else {
                xs.iter().map(|&x| ids[x].as_str()).collect::<Vec<_>>().join(",")
            }
        };
        write_to(Some(path), |w| {
            w.write_all(header.as_bytes())?;
            writeln!(w, "# plant\tgenes\tpattern\treversed")?;
            for (i, p) in plants.iter().enumerate() {
                writeln!(
                    w,
                    "{}\t{}\t{}\t{}",
                    i + 1,
                    label(matrix.row_ids(), &p.rows),
                    label(matrix.col_ids(), &p.cols),
                    label(matrix.row_ids(), &p.reversed)
                )?;
            }
            Ok(())
        })?;
    }
    Ok(())
}
