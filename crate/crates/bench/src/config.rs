//! Flat `key = value` run configuration.
//!
//! ```text
//! # fig4 at a lower SNR
//! preset = fig4
//! gamma_db = 10
//! iters = 500
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{BenchError, Result};

/// Options of a `run`. Every field is optional so that a file and the
/// command line can be layered.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunOptions {
    pub preset: Option<String>,
    pub schemes: Option<Vec<String>>,
    pub m: Option<usize>,
    pub k: Option<usize>,
    pub alpha: Option<f64>,
    pub gamma_db: Option<f64>,
    pub route: Option<String>,
    pub iters: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub gnuplot: Option<bool>,
    pub record_runtime: Option<bool>,
}

impl RunOptions {
    /// Fields set in `self` win over those in `base`.
    pub fn over(self, base: RunOptions) -> RunOptions {
        RunOptions {
            preset: self.preset.or(base.preset),
            schemes: self.schemes.or(base.schemes),
            m: self.m.or(base.m),
            k: self.k.or(base.k),
            alpha: self.alpha.or(base.alpha),
            gamma_db: self.gamma_db.or(base.gamma_db),
            route: self.route.or(base.route),
            iters: self.iters.or(base.iters),
            seed: self.seed.or(base.seed),
            out: self.out.or(base.out),
            gnuplot: self.gnuplot.or(base.gnuplot),
            record_runtime: self.record_runtime.or(base.record_runtime),
        }
    }

    pub fn load(path: &Path) -> Result<RunOptions> {
        let text = fs::read_to_string(path).map_err(|source| BenchError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        parse(&text, path)
    }
}

fn value<T: std::str::FromStr>(v: &str, key: &str) -> std::result::Result<T, String> {
    v.parse().map_err(|_| format!("bad value {v:?} for {key}"))
}

fn flag(v: &str, key: &str) -> std::result::Result<bool, String> {
    match v.to_ascii_lowercase().as_str() {
        "1" | "true" | "yes" | "on" => Ok(true),
        "0" | "false" | "no" | "off" => Ok(false),
        _ => Err(format!("bad value {v:?} for {key}")),
    }
}

pub fn parse(text: &str, path: &Path) -> Result<RunOptions> {
    let mut o = RunOptions::default();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| BenchError::Config {
            path: path.to_path_buf(),
            line: i + 1,
            msg,
        };
        let (key, v) = line
            .split_once('=')
            .map(|(k, v)| (k.trim(), v.trim()))
            .ok_or_else(|| err(format!("expected key = value, got {line:?}")))?;
        let set: std::result::Result<(), String> = match key {
            "preset" => {
                o.preset = Some(v.to_string());
                Ok(())
            }
            "scheme" | "schemes" => {
                o.schemes = Some(v.split(',').map(|s| s.trim().to_string()).collect());
                Ok(())
            }
            "route" => {
                o.route = Some(v.to_string());
                Ok(())
            }
            "out" => {
                o.out = Some(PathBuf::from(v));
                Ok(())
            }
            "M" | "m" => value(v, key).map(|x| o.m = Some(x)),
            "K" | "k" => value(v, key).map(|x| o.k = Some(x)),
            "alpha" => value(v, key).map(|x| o.alpha = Some(x)),
            "gamma_db" | "gamma-db" => value(v, key).map(|x| o.gamma_db = Some(x)),
            "iters" | "iterations" => value(v, key).map(|x| o.iters = Some(x)),
            "seed" => value(v, key).map(|x| o.seed = Some(x)),
            "gnuplot" => flag(v, key).map(|x| o.gnuplot = Some(x)),
            "record_runtime" | "record-runtime" => flag(v, key).map(|x| o.record_runtime = Some(x)),
            _ => Err(format!("unknown key {key:?}")),
        };
        set.map_err(err)?;
    }
    Ok(o)
}
