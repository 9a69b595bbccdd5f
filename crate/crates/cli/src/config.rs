//! Runtime configuration with flat key=value files.
//!
//! Precedence, lowest to highest: built-in defaults, the --config file, the
//! HLB_THREADS environment variable, command line flags. The effective values
//! are echoed into every report header so output is self describing.

use crate::render::Cell;
use hlb_core::OptConfig;
use std::fs;
use std::path::Path;

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    /// Coarse sphere grid size; odd so t = 0 and t = +-1 are sampled.
    pub grid: usize,
    /// Abscissa tolerance of the local sup-norm refinement.
    pub tol: f64,
    /// Iteration cap per refinement bracket.
    pub refine_iters: usize,
    /// Simplex restarts in parameter searches.
    pub multistart: usize,
    /// Seed for every randomized component.
    pub seed: u64,
    /// Worker thread cap; 0 keeps the machine default.
    pub threads: usize,
}

impl Default for Config {
    fn default() -> Self {
        let opt = OptConfig::default();
        Self {
            grid: opt.coarse_grid,
            tol: opt.local_tol,
            refine_iters: opt.max_refine_iters,
            multistart: opt.multistart_count,
            seed: opt.rng_seed,
            threads: 0,
        }
    }
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = fs::read_to_string(path)
            .map_err(|e| format!("cannot read config file {}: {e}", path.display()))?;
        let mut cfg = Self::default();
        cfg.apply_text(&text)?;
        Ok(cfg)
    }

    /// Applies key=value lines on top of the current values. Lines that are
    /// empty or start with '#' are skipped; unknown keys are errors.
    pub fn apply_text(&mut self, text: &str) -> Result<(), String> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                format!("config line {}: expected key=value, got '{line}'", i + 1)
            })?;
            self.set(key.trim(), value.trim())
                .map_err(|e| format!("config line {}: {e}", i + 1))?;
        }
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        fn num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, String> {
            value
                .parse()
                .map_err(|_| format!("bad value '{value}' for {key}"))
        }
        match key {
            "grid" => self.grid = num(key, value)?,
            "tol" => self.tol = num(key, value)?,
            "refine_iters" => self.refine_iters = num(key, value)?,
            "multistart" => self.multistart = num(key, value)?,
            "seed" => self.seed = num(key, value)?,
            "threads" => self.threads = num(key, value)?,
            _ => return Err(format!("unknown config key '{key}'")),
        }
        Ok(())
    }

    /// Folds HLB_THREADS in; unset or empty leaves the current value.
    pub fn apply_env(&mut self) -> Result<(), String> {
        match std::env::var("HLB_THREADS") {
            Ok(v) if !v.trim().is_empty() => {
                self.threads = v.trim().parse().map_err(|_| {
                    format!("HLB_THREADS must be a non-negative integer, got '{v}'")
                })?;
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn opt(&self) -> OptConfig {
        OptConfig {
            coarse_grid: self.grid,
            local_tol: self.tol,
            max_refine_iters: self.refine_iters,
            multistart_count: self.multistart,
            rng_seed: self.seed,
        }
    }

    /// Header echo, in a fixed order shared by all output formats.
    pub fn pairs(&self) -> Vec<(&'static str, Cell)> {
        vec![
            ("grid", Cell::Int(self.grid as i64)),
            ("tol", Cell::Num(self.tol)),
            ("refine_iters", Cell::Int(self.refine_iters as i64)),
            ("multistart", Cell::Int(self.multistart as i64)),
            ("seed", Cell::Int(self.seed as i64)),
            ("threads", Cell::Int(self.threads as i64)),
        ]
    }

    /// Caps the global worker pool. A no-op for 0; must run before the first
    /// parallel computation to take effect.
    pub fn init_threads(&self) {
        if self.threads > 0 {
            if let Err(e) = rayon::ThreadPoolBuilder::new()
                .num_threads(self.threads)
                .build_global()
            {
                eprintln!("warning: could not cap worker threads: {e}");
            }
        }
    }
}
