//! Instance files.

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use equicut::{Density, Instance, MeasureError, Permutation, RawDensity};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Normalization divisors further than this from 1 are reported.
const SCALE_WARN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlayerSpec {
    pub name: String,
    pub density: RawDensity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub players: Vec<PlayerSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
}

#[derive(Debug, Error)]
pub enum InstanceFileError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("player '{player}': {source}")]
    Validation {
        player: String,
        source: MeasureError,
    },
    #[error("duplicate player name '{0}'")]
    DuplicateName(String),
    #[error("instance has no players")]
    NoPlayers,
    #[error("sigma: {0}")]
    Sigma(equicut::solver::InstanceError),
    #[error("tol must be positive, got {0}")]
    Tolerance(f64),
}

/// A validated instance together with its player names.
#[derive(Debug, Clone)]
pub struct LoadedInstance {
    pub names: Vec<String>,
    pub instance: Instance,
    pub tol: Option<f64>,
    pub warnings: Vec<String>,
}

impl LoadedInstance {
    pub fn densities(&self) -> &[Density] {
        self.instance.densities()
    }
}

pub fn parse_instance(path: &Path) -> Result<LoadedInstance, InstanceFileError> {
    let text = fs::read_to_string(path).map_err(|source| InstanceFileError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_instance_str(&text)
}

pub fn parse_instance_str(text: &str) -> Result<LoadedInstance, InstanceFileError> {
    let file: InstanceFile = serde_json::from_str(text).map_err(|e| InstanceFileError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    load(file)
}

pub fn load(file: InstanceFile) -> Result<LoadedInstance, InstanceFileError> {
    if file.players.is_empty() {
        return Err(InstanceFileError::NoPlayers);
    }
    let mut seen = HashSet::new();
    let mut names = Vec::with_capacity(file.players.len());
    let mut densities = Vec::with_capacity(file.players.len());
    let mut warnings = Vec::new();
    for p in file.players {
        if !seen.insert(p.name.clone()) {
            return Err(InstanceFileError::DuplicateName(p.name));
        }
        let d = Density::validate_and_normalize(&p.density).map_err(|source| {
            InstanceFileError::Validation {
                player: p.name.clone(),
                source,
            }
        })?;
        if (d.scale() - 1.0).abs() > SCALE_WARN_TOL {
            warnings.push(format!(
                "player '{}': density has total mass {}, normalized to 1",
                p.name,
                d.scale()
            ));
        }
        names.push(p.name);
        densities.push(d);
    }
    if let Some(tol) = file.tol {
        if !(tol > 0.0) {
            return Err(InstanceFileError::Tolerance(tol));
        }
    }
    let sigma = match file.sigma {
        Some(order) => Permutation::new(order).map_err(InstanceFileError::Sigma)?,
        None => Permutation::identity(densities.len()),
    };
    let instance = Instance::new(densities, sigma).map_err(InstanceFileError::Sigma)?;
    Ok(LoadedInstance {
        names,
        instance,
        tol: file.tol,
        warnings,
    })
}
