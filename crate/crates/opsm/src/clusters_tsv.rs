//! Cluster files: one cluster per line,
//! `id  n_genes  n_exps  anti(0|1)  pattern-labels  row:+,row:-`.

use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;

use opsm_core::Cluster;
use opsm_core::Orientation;
use thiserror::Error;

pub const COLUMNS: &str = "cluster_id\tn_genes\tn_exps\tanti_correlated\tpattern\tgenes";

pub fn write_clusters<W: Write>(
    mut w: W,
    clusters: &[Cluster],
    row_ids: &[String],
    col_ids: &[String],
    header: &str,
) -> io::Result<()> {
    w.write_all(header.as_bytes())?;
    writeln!(w, "# {COLUMNS}")?;
    for c in clusters {
        let pattern: Vec<&str> = c.pattern.cols().iter().map(|&j| col_ids[j as usize].as_str()).collect();
        let genes: Vec<String> = c
            .supporters
            .iter()
            .map(|s| format!("{}:{}", row_ids[s.row as usize], s.orientation.sign()))
            .collect();
        writeln!(
            w,
            "{}\t{}\t{}\t{}\t{}\t{}",
            c.id,
            c.support(),
            c.pattern.len(),
            u8::from(c.anti_correlated),
            pattern.join(","),
            genes.join(",")
        )?;
    }
    w.flush()
}

/// A cluster as written, with labels instead of indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterRecord {
    pub id: u32,
    pub anti_correlated: bool,
    pub pattern: Vec<String>,
    pub genes: Vec<(String, Orientation)>,
}

#[derive(Debug, Error)]
pub enum ClusterFileError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
}

fn malformed(line: usize, reason: impl Into<String>) -> ClusterFileError {
    ClusterFileError::Malformed { line, reason: reason.into() }
}

pub fn read_clusters<R: BufRead>(reader: R) -> Result<Vec<ClusterRecord>, ClusterFileError> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let no = i + 1;
        let line = line?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let f: Vec<&str> = line.split('\t').collect();
        if f.len() != 6 {
            return Err(malformed(no, format!("expected 6 fields, found {}", f.len())));
        }
        let num = |s: &str, what: &str| s.parse::<usize>().map_err(|_| malformed(no, format!("bad {what} {s:?}")));
        let id = num(f[0], "cluster id")? as u32;
        let (n_genes, n_exps) = (num(f[1], "gene count")?, num(f[2], "experiment count")?);
        let anti_correlated = match f[3] {
            "0" => false,
            "1" => true,
            other => return Err(malformed(no, format!("bad anti-correlation flag {other:?}"))),
        };
        let pattern: Vec<String> = f[4].split(',').map(str::to_string).collect();
        let genes = f[5]
            .split(',')
            .map(|g| {
                let (id, sign) = g.rsplit_once(':').ok_or_else(|| malformed(no, format!("bad gene {g:?}")))?;
                let o = match sign {
                    "+" => Orientation::Forward,
                    "-" => Orientation::Backward,
                    _ => return Err(malformed(no, format!("bad orientation in {g:?}"))),
                };
                Ok((id.to_string(), o))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if pattern.len() != n_exps || genes.len() != n_genes {
            return Err(malformed(no, "counts disagree with the listed pattern or genes"));
        }
        out.push(ClusterRecord { id, anti_correlated, pattern, genes });
    }
    Ok(out)
}

pub fn load_clusters(path: &Path) -> Result<Vec<ClusterRecord>, ClusterFileError> {
    read_clusters(BufReader::new(File::open(path)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use opsm_core::miner::{OrientedSupport, Pattern};

    #[test]
    fn write_then_read() {
        let c = Cluster {
            id: 7,
            pattern: Pattern::new(vec![2, 0]).unwrap(),
            supporters: vec![
                OrientedSupport { row: 0, orientation: Orientation::Forward, frontier: 3 },
                OrientedSupport { row: 2, orientation: Orientation::Backward, frontier: 0 },
            ],
            anti_correlated: true,
        };
        let rows: Vec<String> = ["g1", "g2", "g3"].map(String::from).to_vec();
        let cols: Vec<String> = ["A", "B", "C"].map(String::from).to_vec();
        let mut buf = Vec::new();
        write_clusters(&mut buf, &[c], &rows, &cols, "# test\n").unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.ends_with("7\t2\t2\t1\tC,A\tg1:+,g3:-\n"), "{text}");
        let back = read_clusters(text.as_bytes()).unwrap();
        assert_eq!(
            back,
            vec![ClusterRecord {
                id: 7,
                anti_correlated: true,
                pattern: vec!["C".into(), "A".into()],
                genes: vec![("g1".into(), Orientation::Forward), ("g3".into(), Orientation::Backward)],
            }]
        );
    }

    #[test]
    fn rejects_inconsistent_lines() {
        assert!(read_clusters("1\t2\t2\t0\tA,B\tg1:+\n".as_bytes()).is_err());
        assert!(read_clusters("1\t1\t2\t0\tA,B\tg1:x\n".as_bytes()).is_err());
        assert!(read_clusters("1\t1\t2\t2\tA,B\tg1:+\n".as_bytes()).is_err());
    }
}
