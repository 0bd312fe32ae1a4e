//! Comment headers written at the top of every output file.

use std::fmt::Write;

use opsm_core::stats::RNG_ALGORITHM;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// The normalized invocation of one subcommand: its name and every option
/// that can change the result, in a fixed order. Output paths and the
/// thread count are left out so that they never change output bytes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Invocation {
    command: &'static str,
    options: Vec<(&'static str, String)>,
    seed: Option<u64>,
}

impl Invocation {
    pub fn new(command: &'static str) -> Self {
        Self { command, options: Vec::new(), seed: None }
    }

    pub fn opt(mut self, name: &'static str, value: impl ToString) -> Self {
        self.options.push((name, value.to_string()));
        self
    }

    pub fn opt_if(self, name: &'static str, value: Option<impl ToString>) -> Self {
        match value {
            Some(v) => self.opt(name, v),
            None => self,
        }
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self.opt("seed", seed)
    }

    pub fn command_line(&self) -> String {
        let mut s = format!("opsm {}", self.command);
        for (k, v) in &self.options {
            let _ = write!(s, " --{k} {v}");
        }
        s
    }

    /// `#`-prefixed header lines, newline-terminated.
    pub fn header(&self) -> String {
        let mut s = format!("# opsm {VERSION}\n# invocation: {}\n", self.command_line());
        match self.seed {
            Some(seed) => {
                let _ = writeln!(s, "# seed: {seed}\n# rng: {RNG_ALGORITHM}");
            }
            None => s.push_str("# seed: none (deterministic)\n"),
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_lines() {
        let h = Invocation::new("eval-probes").opt("permutations", 10).seed(3).header();
        let lines: Vec<&str> = h.lines().collect();
        assert_eq!(lines[0], format!("# opsm {VERSION}"));
        assert_eq!(lines[1], "# invocation: opsm eval-probes --permutations 10 --seed 3");
        assert_eq!(lines[2], "# seed: 3");
        assert!(lines[3].starts_with("# rng: ChaCha8"));
        assert!(h.ends_with('\n'));
    }
}
