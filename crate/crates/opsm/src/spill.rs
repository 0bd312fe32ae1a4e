//! Level sink that moves emitted levels to temporary files once the number
//! of emitted clusters passes a cap, then filters them back one level at a
//! time, longest first.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::PathBuf;

use opsm_core::miner::{finalize, LevelSink, OrientedSupport, Pattern, SubsumptionIndex};
use opsm_core::{Cluster, Direction, Orientation, SequenceDatabase};
use tempfile::TempDir;

pub const DEFAULT_CAP: usize = 10_000_000;

#[derive(Debug)]
enum Level {
    Memory(Vec<Cluster>),
    Disk(PathBuf),
}

#[derive(Debug)]
pub struct SpillSink {
    cap: usize,
    emitted: usize,
    levels: Vec<(usize, Level)>,
    dir: Option<TempDir>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SpillStats {
    pub emitted: usize,
    pub spilled_levels: usize,
}

fn put(w: &mut impl Write, x: u32) -> io::Result<()> {
    w.write_all(&x.to_le_bytes())
}

fn get(r: &mut impl Read) -> io::Result<u32> {
    let mut b = [0; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn write_level(path: &PathBuf, clusters: &[Cluster]) -> io::Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    put(&mut w, clusters.len() as u32)?;
    for c in clusters {
        put(&mut w, c.pattern.len() as u32)?;
        for &col in c.pattern.cols() {
            put(&mut w, col)?;
        }
        put(&mut w, c.supporters.len() as u32)?;
        for s in &c.supporters {
            put(&mut w, s.row)?;
            put(&mut w, u32::from(s.orientation == Orientation::Backward))?;
            put(&mut w, s.frontier)?;
        }
    }
    w.flush()
}

fn read_level(path: &PathBuf) -> io::Result<Vec<Cluster>> {
    let mut r = BufReader::new(File::open(path)?);
    let n = get(&mut r)? as usize;
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let len = get(&mut r)? as usize;
        let cols = (0..len).map(|_| get(&mut r)).collect::<io::Result<Vec<u32>>>()?;
        let n_sup = get(&mut r)? as usize;
        let mut supporters = Vec::with_capacity(n_sup);
        for _ in 0..n_sup {
            let row = get(&mut r)?;
            let orientation = if get(&mut r)? == 1 { Orientation::Backward } else { Orientation::Forward };
            supporters.push(OrientedSupport { row, orientation, frontier: get(&mut r)? });
        }
        out.push(Cluster {
            id: 0,
            pattern: Pattern::new(cols).ok_or_else(|| io::Error::new(io::ErrorKind::InvalidData, "corrupt spill file"))?,
            anti_correlated: opsm_core::miner::has_mixed_orientation(&supporters),
            supporters,
        });
    }
    Ok(out)
}

impl SpillSink {
    pub fn new(cap: usize) -> Self {
        Self { cap, emitted: 0, levels: Vec::new(), dir: None }
    }

    fn spill(&mut self, length: usize, clusters: &[Cluster]) -> io::Result<Level> {
        let dir = match &self.dir {
            Some(d) => d,
            None => self.dir.insert(tempfile::Builder::new().prefix("opsm-spill").tempdir()?),
        };
        let path = dir.path().join(format!("level-{length}.bin"));
        write_level(&path, clusters)?;
        Ok(Level::Disk(path))
    }

    /// Redundancy removal over all levels, longest first, then the final
    /// orientation and numbering pass.
    pub fn finish(mut self, direction: Direction, db: &SequenceDatabase) -> io::Result<(Vec<Cluster>, SpillStats)> {
        let stats = SpillStats {
            emitted: self.emitted,
            spilled_levels: self.levels.iter().filter(|(_, l)| matches!(l, Level::Disk(_))).count(),
        };
        self.levels.sort_by_key(|(length, _)| std::cmp::Reverse(*length));
        let mut index = SubsumptionIndex::new(direction);
        for (_, level) in std::mem::take(&mut self.levels) {
            let clusters = match level {
                Level::Memory(c) => c,
                Level::Disk(path) => read_level(&path)?,
            };
            index.absorb_level(clusters);
        }
        let mut clusters = index.into_clusters();
        finalize(&mut clusters, db);
        Ok((clusters, stats))
    }
}

impl LevelSink for SpillSink {
    type Error = io::Error;

    fn accept(&mut self, length: usize, clusters: Vec<Cluster>) -> io::Result<()> {
        self.emitted += clusters.len();
        if self.emitted > self.cap {
            // Everything still in memory goes out too.
            for (l, level) in std::mem::take(&mut self.levels) {
                let level = match level {
                    Level::Memory(c) => self.spill(l, &c)?,
                    disk => disk,
                };
                self.levels.push((l, level));
            }
            let level = self.spill(length, &clusters)?;
            self.levels.push((length, level));
        } else {
            self.levels.push((length, Level::Memory(clusters)));
        }
        Ok(())
    }
}
