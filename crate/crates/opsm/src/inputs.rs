//! Auxiliary evaluation inputs: probe map, experiment annotations, negative
//! controls and per-gene label sets. All are tab-separated, `#` comments and
//! blank lines allowed.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::{self, BufRead, BufReader};
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum InputError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("line {line}: expected {expected} tab-separated fields, found {found}")]
    Fields { line: usize, expected: usize, found: usize },
    #[error("line {line}: empty field")]
    Empty { line: usize },
    #[error("probe {probe} is mapped to both {first} and {second}")]
    ConflictingProbe { probe: String, first: String, second: String },
    #[error("no usable lines")]
    NoLines,
}

fn records<R: BufRead>(reader: R, width: usize) -> Result<Vec<Vec<String>>, InputError> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let f: Vec<String> = line.split('\t').map(|s| s.trim().to_string()).collect();
        if f.len() != width {
            return Err(InputError::Fields { line: i + 1, expected: width, found: f.len() });
        }
        if f.iter().any(String::is_empty) {
            return Err(InputError::Empty { line: i + 1 });
        }
        out.push(f);
    }
    if out.is_empty() {
        return Err(InputError::NoLines);
    }
    Ok(out)
}

fn open(path: &Path) -> Result<BufReader<File>, InputError> {
    Ok(BufReader::new(File::open(path)?))
}

/// `probe<TAB>gene` lines.
pub fn read_probe_map<R: BufRead>(reader: R) -> Result<BTreeMap<String, String>, InputError> {
    let mut map: BTreeMap<String, String> = BTreeMap::new();
    for mut r in records(reader, 2)? {
        let gene = r.pop().unwrap();
        let probe = r.pop().unwrap();
        match map.get(&probe) {
            Some(g) if *g != gene => {
                return Err(InputError::ConflictingProbe { probe, first: g.clone(), second: gene })
            }
            _ => {
                map.insert(probe, gene);
            }
        }
    }
    Ok(map)
}

/// `experiment<TAB>category<TAB>value` lines, joined as `category:value`.
pub fn read_annotations<R: BufRead>(reader: R) -> Result<BTreeMap<String, BTreeSet<String>>, InputError> {
    let mut map: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for r in records(reader, 3)? {
        map.entry(r[0].clone()).or_default().insert(format!("{}:{}", r[1], r[2]));
    }
    Ok(map)
}

/// One row id per line.
pub fn read_negatives<R: BufRead>(reader: R) -> Result<BTreeSet<String>, InputError> {
    Ok(records(reader, 1)?.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

/// `gene<TAB>label` lines; repeated labels count once.
pub fn read_label_sets<R: BufRead>(reader: R) -> Result<BTreeMap<String, BTreeSet<String>>, InputError> {
    let mut map: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for mut r in records(reader, 2)? {
        let label = r.pop().unwrap();
        let gene = r.pop().unwrap();
        map.entry(gene).or_default().insert(label);
    }
    Ok(map)
}

pub fn load_probe_map(path: &Path) -> Result<BTreeMap<String, String>, InputError> {
    read_probe_map(open(path)?)
}

pub fn load_annotations(path: &Path) -> Result<BTreeMap<String, BTreeSet<String>>, InputError> {
    read_annotations(open(path)?)
}

pub fn load_negatives(path: &Path) -> Result<BTreeSet<String>, InputError> {
    read_negatives(open(path)?)
}

pub fn load_label_sets(path: &Path) -> Result<BTreeMap<String, BTreeSet<String>>, InputError> {
    read_label_sets(open(path)?)
}
