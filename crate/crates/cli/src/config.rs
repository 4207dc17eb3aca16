//! Flat `key = value` run configuration.

use std::path::{Path, PathBuf};

use microlub::{BearingGeometry, Initializer, ModelParams, RoughnessProfile};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`, got `{text}`")]
    Syntax { line: usize, text: String },
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("bad value for `{key}`: `{value}`")]
    Value { key: String, value: String },
    #[error("{0}")]
    Invalid(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Model(#[from] microlub::Error),
}

/// Either the `(alpha, beta)` pair or the `(nu_b_bar, delta)` pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WallParams {
    Direct { alpha: f64, beta: f64 },
    Derived { nu_b: f64, delta: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub n: f64,
    pub r_c: f64,
    pub wall: WallParams,
    pub s1: f64,
    pub m: f64,
    /// Sinusoidal roughness amplitude; when set, `M` is computed from it.
    pub roughness_amplitude: Option<f64>,
    pub slope: f64,
    pub n1: usize,
    pub nz: usize,
    pub tol: f64,
    pub max_iter: usize,
    pub sweep_m: Vec<f64>,
    pub sweep_n: Vec<f64>,
    pub output_dir: PathBuf,
    pub init: Initializer,
    pub workers: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            n: 0.1,
            r_c: 0.01,
            wall: WallParams::Derived {
                nu_b: 0.1,
                delta: 0.01,
            },
            s1: 1.0,
            m: 0.0,
            roughness_amplitude: None,
            slope: -0.5,
            n1: 199,
            nz: 400,
            tol: 1e-8,
            max_iter: 500,
            sweep_m: vec![0.0, 0.5, 1.0],
            sweep_n: vec![0.1, 0.2, 0.3],
            output_dir: PathBuf::from("out"),
            init: Initializer::Couette,
            workers: None,
        }
    }
}

fn parse_f64(key: &str, value: &str) -> Result<f64, ConfigError> {
    let bad = || ConfigError::Value {
        key: key.to_string(),
        value: value.to_string(),
    };
    let v = match value.to_ascii_lowercase().as_str() {
        "inf" | "infinity" => f64::INFINITY,
        s => s.parse::<f64>().map_err(|_| bad())?,
    };
    if v.is_nan() {
        return Err(bad());
    }
    Ok(v)
}

fn parse_usize(key: &str, value: &str) -> Result<usize, ConfigError> {
    value.parse().map_err(|_| ConfigError::Value {
        key: key.to_string(),
        value: value.to_string(),
    })
}

fn parse_list(key: &str, value: &str) -> Result<Vec<f64>, ConfigError> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_f64(key, s))
        .collect()
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut cfg = Self::default();
        cfg.apply_text(&text)?;
        Ok(cfg)
    }

    /// Applies `key = value` lines; `#` starts a comment.
    pub fn apply_text(&mut self, text: &str) -> Result<(), ConfigError> {
        for (k, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
                line: k + 1,
                text: raw.to_string(),
            })?;
            self.set(key.trim(), value.trim())?;
        }
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        match key {
            "N" => self.n = parse_f64(key, value)?,
            "R_c" => self.r_c = parse_f64(key, value)?,
            "alpha" | "beta" => {
                let v = parse_f64(key, value)?;
                let (mut alpha, mut beta) = match self.wall {
                    WallParams::Direct { alpha, beta } => (alpha, beta),
                    WallParams::Derived { .. } => (f64::NAN, f64::NAN),
                };
                if key == "alpha" {
                    alpha = v;
                } else {
                    beta = v;
                }
                self.wall = WallParams::Direct { alpha, beta };
            }
            "nu_b" | "delta" => {
                let v = parse_f64(key, value)?;
                let (mut nu_b, mut delta) = match self.wall {
                    WallParams::Derived { nu_b, delta } => (nu_b, delta),
                    WallParams::Direct { .. } => (0.1, 0.01),
                };
                if key == "nu_b" {
                    nu_b = v;
                } else {
                    delta = v;
                }
                self.wall = WallParams::Derived { nu_b, delta };
            }
            "s1" => self.s1 = parse_f64(key, value)?,
            "M" => self.m = parse_f64(key, value)?,
            "roughness_amplitude" => self.roughness_amplitude = Some(parse_f64(key, value)?),
            "slope" => self.slope = parse_f64(key, value)?,
            "n1" => self.n1 = parse_usize(key, value)?,
            "nZ" => self.nz = parse_usize(key, value)?,
            "tol" => self.tol = parse_f64(key, value)?,
            "max_iter" => self.max_iter = parse_usize(key, value)?,
            "sweep_M" => self.sweep_m = parse_list(key, value)?,
            "sweep_N" => self.sweep_n = parse_list(key, value)?,
            "output_dir" => self.output_dir = PathBuf::from(value),
            "init" => {
                self.init = match value {
                    "couette" => Initializer::Couette,
                    "zero" => Initializer::Zero,
                    _ => {
                        return Err(ConfigError::Value {
                            key: key.into(),
                            value: value.into(),
                        })
                    }
                }
            }
            "workers" => self.workers = Some(parse_usize(key, value)?),
            _ => return Err(ConfigError::UnknownKey(key.to_string())),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if let WallParams::Direct { alpha, beta } = self.wall {
            if alpha.is_nan() || beta.is_nan() {
                return Err(ConfigError::Invalid(
                    "alpha and beta must be given together".into(),
                ));
            }
        }
        if self.sweep_m.is_empty() || self.sweep_n.is_empty() {
            return Err(ConfigError::Invalid("sweep lists must be non-empty".into()));
        }
        if let Some(m) = self.sweep_m.iter().find(|m| !(0.0..2.0).contains(*m)) {
            return Err(ConfigError::Invalid(format!("sweep M = {m} outside [0, 2)")));
        }
        if let Some(n) = self.sweep_n.iter().find(|n| !(**n > 0.0 && **n < 1.0)) {
            return Err(ConfigError::Invalid(format!("sweep N = {n} outside (0, 1)")));
        }
        if self.workers == Some(0) {
            return Err(ConfigError::Invalid("workers must be positive".into()));
        }
        self.params()?;
        self.geometry()?;
        Ok(())
    }

    pub fn geometry(&self) -> Result<BearingGeometry, ConfigError> {
        let h2 = match self.roughness_amplitude {
            Some(a) => RoughnessProfile::sinusoid(a),
            None => RoughnessProfile::Flat,
        };
        Ok(BearingGeometry::inclined(self.slope, h2)?)
    }

    /// Roughness coefficient: from the profile when an amplitude is set.
    pub fn roughness(&self) -> Result<f64, ConfigError> {
        match self.roughness_amplitude {
            Some(_) => Ok(self.geometry()?.roughness_coefficient()?),
            None => Ok(self.m),
        }
    }

    pub fn params(&self) -> Result<ModelParams, ConfigError> {
        self.params_at(self.n, self.roughness()?)
    }

    pub fn params_at(&self, n: f64, m: f64) -> Result<ModelParams, ConfigError> {
        Ok(match self.wall {
            WallParams::Direct { alpha, beta } => ModelParams::new(n, self.r_c, alpha, beta, self.s1, m)?,
            WallParams::Derived { nu_b, delta } => ModelParams::from_derived(n, self.r_c, nu_b, delta, self.s1, m)?,
        })
    }

    /// Worker count: `MICROLUB_WORKERS` first, then the config.
    pub fn worker_count(&self) -> Result<Option<usize>, ConfigError> {
        match std::env::var("MICROLUB_WORKERS") {
            Ok(v) => match v.trim().parse::<usize>() {
                Ok(n) if n > 0 => Ok(Some(n)),
                _ => Err(ConfigError::Value {
                    key: "MICROLUB_WORKERS".into(),
                    value: v,
                }),
            },
            Err(_) => Ok(self.workers),
        }
    }
}
