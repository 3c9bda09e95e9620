//! What a single invocation will do, validated before any work starts.

use std::path::{Path, PathBuf};

use ragame::Tolerances;
use serde::Serialize;

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub command: &'static str,
    pub config: Option<PathBuf>,
    pub profile: Option<PathBuf>,
    /// `None` writes to stdout.
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    /// Overrides the verification threshold tolerance (fraction of `R`).
    pub tol: Option<f64>,
    pub grid: Option<usize>,
}

impl RunManifest {
    pub fn new(command: &'static str) -> Self {
        RunManifest {
            command,
            config: None,
            profile: None,
            out: None,
            seed: None,
            tol: None,
            grid: None,
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        for path in [&self.config, &self.profile].into_iter().flatten() {
            if !path.is_file() {
                return Err(CliError::Io {
                    path: path.clone(),
                    source: std::io::Error::new(std::io::ErrorKind::NotFound, "no such file"),
                });
            }
        }
        if let Some(tol) = self.tol {
            if !(tol.is_finite() && tol > 0.0) {
                return Err(CliError::Invalid(format!("--tol must be > 0, got {tol}")));
            }
        }
        if let Some(grid) = self.grid {
            if grid < 2 {
                return Err(CliError::Invalid(format!(
                    "--grid must be at least 2, got {grid}"
                )));
            }
        }
        Ok(())
    }

    pub fn tolerances(&self) -> Tolerances {
        let mut tol = Tolerances::default();
        if let Some(t) = self.tol {
            tol.threshold_match = t;
        }
        tol
    }

    pub fn config_path(&self) -> &Path {
        self.config.as_deref().expect("command takes --config")
    }

    pub fn profile_path(&self) -> &Path {
        self.profile.as_deref().expect("command takes --profile")
    }
}
