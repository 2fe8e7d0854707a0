//! Versioned plain-text table of golden pass thresholds.

use std::path::Path;

use crate::error::{Error, Result};

const BUILTIN: &str = include_str!("../../golden/thresholds.txt");

/// Environment variable naming an alternative table.
pub const GOLDEN_ENV: &str = "PWLAB_GOLDEN";

#[derive(Debug, Clone, PartialEq)]
pub struct GoldenEntry {
    pub name: String,
    pub orbit_n: usize,
    pub grid: usize,
    pub threshold: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GoldenTable {
    entries: Vec<GoldenEntry>,
}

impl Default for GoldenTable {
    fn default() -> Self {
        Self::builtin()
    }
}

impl GoldenTable {
    pub fn builtin() -> Self {
        Self::parse(BUILTIN).expect("built-in golden table parses")
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Table named by `PWLAB_GOLDEN`, or the built-in one.
    pub fn from_env() -> Result<Self> {
        match std::env::var_os(GOLDEN_ENV) {
            Some(p) => Self::from_path(Path::new(&p)),
            None => Ok(Self::builtin()),
        }
    }

    /// Whitespace-separated `name N grid threshold`; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split_whitespace().collect();
            let err = |what: &str| Error::Parse(format!("golden table line {}: {what}", lineno + 1));
            let [name, n, grid, thr] = cols[..] else {
                return Err(err("expected `name N grid threshold`"));
            };
            let threshold: f64 = thr.parse().map_err(|_| err("bad threshold"))?;
            if !(threshold.is_finite() && threshold >= 0.0) {
                return Err(err("threshold must be finite and >= 0"));
            }
            entries.push(GoldenEntry {
                name: name.to_string(),
                orbit_n: n.parse().map_err(|_| err("bad N"))?,
                grid: grid.parse().map_err(|_| err("bad grid size"))?,
                threshold,
            });
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[GoldenEntry] {
        &self.entries
    }

    /// Entry with this name and the largest `N' ≤ orbit_n`, preferring an
    /// exact grid match.
    pub fn lookup(&self, name: &str, orbit_n: usize, grid: usize) -> Option<&GoldenEntry> {
        let candidates = || {
            self.entries
                .iter()
                .filter(move |e| e.name == name && e.orbit_n <= orbit_n)
        };
        candidates()
            .filter(|e| e.grid == grid)
            .max_by_key(|e| e.orbit_n)
            .or_else(|| candidates().max_by_key(|e| e.orbit_n))
    }
}
