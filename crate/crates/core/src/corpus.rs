//! Corpus files: one equation per TOML file with the options to run it
//! and the expected exit status.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::{run_pipeline, Mode, Options, Report};

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct CorpusCase {
    pub equation: String,
    /// `check`, `linearize` or `solve` (default).
    #[serde(default)]
    pub mode: Option<String>,
    #[serde(default)]
    pub params: Vec<String>,
    pub w: Option<String>,
    pub z: Option<String>,
    pub g: Option<String>,
    pub h1: Option<String>,
    pub h2: Option<String>,
    pub ansatz: Option<String>,
    #[serde(default)]
    pub expect_exit: i32,
}

impl CorpusCase {
    pub fn from_toml(text: &str) -> Result<CorpusCase> {
        toml::from_str(text).map_err(|e| Error::Input(e.to_string()))
    }

    pub fn options(&self, seed: u64, steps: usize) -> Result<Options> {
        let mode = match self.mode.as_deref().unwrap_or("solve") {
            "check" => Mode::Check,
            "linearize" => Mode::Linearize,
            "solve" => Mode::Solve,
            other => return Err(Error::Input(format!("unknown mode `{other}`"))),
        };
        let h = match (&self.h1, &self.h2) {
            (Some(a), Some(b)) => Some((a.clone(), b.clone())),
            (None, None) => None,
            _ => return Err(Error::Input("h1 and h2 must be given together".into())),
        };
        Ok(Options {
            mode,
            seed,
            params: self.params.clone(),
            w: self.w.clone(),
            z: self.z.clone(),
            g: self.g.clone(),
            h,
            ansatz: self.ansatz.clone(),
            steps,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorpusEntry {
    pub file: String,
    pub expected_exit: i32,
    pub exit_code: i32,
    pub passed: bool,
    pub error: Option<String>,
    pub report: Option<Report>,
}

/// `*.toml` files of `dir`, sorted by name.
pub fn corpus_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let entries =
        std::fs::read_dir(dir).map_err(|e| Error::Input(format!("{}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "toml"))
        .collect();
    files.sort();
    Ok(files)
}

pub fn run_case(path: &Path, seed: u64, steps: usize) -> CorpusEntry {
    let file = path
        .file_name()
        .map(|f| f.to_string_lossy().into_owned())
        .unwrap_or_default();
    let loaded = std::fs::read_to_string(path)
        .map_err(|e| Error::Input(e.to_string()))
        .and_then(|t| CorpusCase::from_toml(&t))
        .and_then(|c| Ok((c.options(seed, steps)?, c)));
    match loaded {
        Ok((opts, case)) => {
            let report = run_pipeline(&case.equation, &opts);
            CorpusEntry {
                file,
                expected_exit: case.expect_exit,
                exit_code: report.exit_code(),
                passed: report.exit_code() == case.expect_exit,
                error: None,
                report: Some(report),
            }
        }
        Err(e) => CorpusEntry {
            file,
            expected_exit: 0,
            exit_code: 3,
            passed: false,
            error: Some(e.to_string()),
            report: None,
        },
    }
}

/// Run every case of `dir` concurrently; results keep file order.
pub fn run_corpus(dir: &Path, seed: u64, steps: usize) -> Result<Vec<CorpusEntry>> {
    let files = corpus_files(dir)?;
    Ok(files.par_iter().map(|p| run_case(p, seed, steps)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_case() {
        let c = CorpusCase::from_toml("equation = \"y'' = 0\"\nmode = \"check\"\n").unwrap();
        assert_eq!(c.expect_exit, 0);
        assert_eq!(c.options(1, 10).unwrap().mode, Mode::Check);
        assert!(CorpusCase::from_toml("equation = 1").is_err());
        assert!(CorpusCase::from_toml("equation = \"y''=0\"\nbogus = 2").is_err());
    }
}
