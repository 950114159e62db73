use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::Serialize;

use super::{CliError, Command, CommonArgs};
use crate::algebra::{DeformationParams, ModelKind, ModelSpec, Rep};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Fully resolved settings of one run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub model: String,
    pub rep: String,
    pub hbar: f64,
    pub mass: f64,
    pub omega: f64,
    pub tau: f64,
    pub alpha: f64,
    pub beta: f64,
    pub nmax: usize,
    pub grid: usize,
    pub tol: f64,
    pub oracle: bool,
    pub check: bool,
    pub format: Format,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    /// Whether the model / representation were chosen explicitly; some
    /// commands sweep all of them otherwise.
    #[serde(skip)]
    pub model_given: bool,
    #[serde(skip)]
    pub rep_given: bool,
}

const KEYS: [&str; 15] = [
    "model", "rep", "tau", "alpha", "beta", "hbar", "mass", "omega", "nmax", "grid", "tol", "format", "out", "oracle",
    "check",
];

/// Couplings used when a model is named without them.
pub fn default_couplings(kind: ModelKind) -> (f64, f64) {
    match kind {
        ModelKind::HarmonicOscillator => (0.0, 0.0),
        ModelKind::Swanson => (0.3, 0.2),
        ModelKind::PoschlTeller => (1.0, 0.5),
    }
}

#[derive(Default)]
struct Layer {
    model: Option<String>,
    rep: Option<String>,
    tau: Option<f64>,
    alpha: Option<f64>,
    beta: Option<f64>,
    hbar: Option<f64>,
    mass: Option<f64>,
    omega: Option<f64>,
    nmax: Option<usize>,
    grid: Option<usize>,
    tol: Option<f64>,
    format: Option<Format>,
    out: Option<PathBuf>,
    oracle: Option<bool>,
    check: Option<bool>,
}

impl Layer {
    fn from_flags(a: &CommonArgs) -> Self {
        Layer {
            model: a.model.clone(),
            rep: a.rep.clone(),
            tau: a.tau,
            alpha: a.alpha,
            beta: a.beta,
            hbar: a.hbar,
            mass: a.mass,
            omega: a.omega,
            nmax: a.nmax,
            grid: a.grid,
            tol: a.tol,
            format: a.format,
            out: a.out.clone(),
            oracle: a.oracle.then_some(true),
            check: a.check.then_some(true),
        }
    }

    fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }

    fn parse(text: &str) -> Result<Self, String> {
        let mut l = Layer::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected key=value", lineno + 1))?;
            let (key, value) = (key.trim(), value.trim());
            let bad = |what: &str| format!("line {}: {key} expects {what}, got {value:?}", lineno + 1);
            let num = || value.parse::<f64>().map_err(|_| bad("a number"));
            let count = || value.parse::<usize>().map_err(|_| bad("a non-negative integer"));
            let flag = || value.parse::<bool>().map_err(|_| bad("true or false"));
            match key {
                "model" => l.model = Some(value.to_string()),
                "rep" => l.rep = Some(value.to_string()),
                "tau" => l.tau = Some(num()?),
                "alpha" => l.alpha = Some(num()?),
                "beta" => l.beta = Some(num()?),
                "hbar" => l.hbar = Some(num()?),
                "mass" => l.mass = Some(num()?),
                "omega" => l.omega = Some(num()?),
                "nmax" => l.nmax = Some(count()?),
                "grid" => l.grid = Some(count()?),
                "tol" => l.tol = Some(num()?),
                "format" => l.format = Some(Format::from_str(value, true).map_err(|_| bad("csv or json"))?),
                "out" => l.out = Some(PathBuf::from(value)),
                "oracle" => l.oracle = Some(flag()?),
                "check" => l.check = Some(flag()?),
                _ => {
                    return Err(format!(
                        "line {}: unknown key {key:?} (known: {})",
                        lineno + 1,
                        KEYS.join(", ")
                    ))
                }
            }
        }
        Ok(l)
    }

    /// Fields of `self` win over `below`.
    fn over(self, below: Layer) -> Layer {
        Layer {
            model: self.model.or(below.model),
            rep: self.rep.or(below.rep),
            tau: self.tau.or(below.tau),
            alpha: self.alpha.or(below.alpha),
            beta: self.beta.or(below.beta),
            hbar: self.hbar.or(below.hbar),
            mass: self.mass.or(below.mass),
            omega: self.omega.or(below.omega),
            nmax: self.nmax.or(below.nmax),
            grid: self.grid.or(below.grid),
            tol: self.tol.or(below.tol),
            format: self.format.or(below.format),
            out: self.out.or(below.out),
            oracle: self.oracle.or(below.oracle),
            check: self.check.or(below.check),
        }
    }
}

impl RunConfig {
    pub fn resolve(flags: &CommonArgs, command: &Command) -> Result<Self, CliError> {
        let mut layer = Layer::from_flags(flags);
        if let Some(path) = &flags.config {
            layer = layer.over(Layer::from_file(path)?);
        }
        Self::from_layer(layer, command)
    }

    /// Settings from a config file's text alone, as the `spectrum` command
    /// would see them.
    pub fn from_config_text(text: &str) -> Result<Self, CliError> {
        Self::from_layer(Layer::parse(text).map_err(CliError::Usage)?, &Command::Spectrum)
    }

    fn from_layer(l: Layer, command: &Command) -> Result<Self, CliError> {
        let model_given = l.model.is_some();
        let rep_given = l.rep.is_some();
        let kind: ModelKind = l.model.as_deref().unwrap_or("ho").parse()?;
        let rep: Rep = l.rep.as_deref().unwrap_or("pi1").parse()?;
        let (a0, b0) = default_couplings(kind);
        let default_format = match command {
            Command::Verify(_) => Format::Json,
            _ => Format::Csv,
        };
        let cfg = RunConfig {
            model: kind.label().to_string(),
            rep: rep.label().to_string(),
            hbar: l.hbar.unwrap_or(1.0),
            mass: l.mass.unwrap_or(1.0),
            omega: l.omega.unwrap_or(1.0),
            tau: l.tau.unwrap_or(0.1),
            alpha: l.alpha.unwrap_or(a0),
            beta: l.beta.unwrap_or(b0),
            nmax: l.nmax.unwrap_or(5),
            grid: l.grid.unwrap_or(2048),
            tol: l.tol.unwrap_or(1e-5),
            oracle: l.oracle.unwrap_or(false),
            check: l.check.unwrap_or(false),
            format: l.format.unwrap_or(default_format),
            out: l.out,
            model_given,
            rep_given,
        };
        if !(cfg.tol > 0.0) {
            return Err(CliError::Usage(format!("tol must be > 0, got {}", cfg.tol)));
        }
        cfg.params()?;
        Ok(cfg)
    }

    pub fn params(&self) -> Result<DeformationParams, CliError> {
        Ok(DeformationParams::new(self.hbar, self.mass, self.omega, self.tau)?)
    }

    pub fn kind(&self) -> ModelKind {
        self.model.parse().expect("label round-trips")
    }

    pub fn model_spec(&self) -> ModelSpec {
        ModelSpec::from_kind(self.kind(), self.alpha, self.beta)
    }

    pub fn rep(&self) -> Rep {
        self.rep.parse().expect("label round-trips")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let c = RunConfig::from_config_text("").unwrap();
        assert_eq!((c.model.as_str(), c.rep.as_str(), c.tau, c.nmax), ("ho", "pi1", 0.1, 5));
        assert_eq!((c.hbar, c.mass, c.omega), (1.0, 1.0, 1.0));
        assert_eq!(c.format, Format::Csv);
    }

    #[test]
    fn file_values_and_comments() {
        let c = RunConfig::from_config_text("# run\nmodel = swanson\ntau=0.5 # deformed\nalpha=15\nbeta=0.1\n").unwrap();
        assert_eq!(c.model_spec(), ModelSpec::Swanson { alpha: 15.0, beta: 0.1 });
        assert_eq!(c.tau, 0.5);
    }

    #[test]
    fn model_defaults_fill_couplings() {
        let c = RunConfig::from_config_text("model=pt\n").unwrap();
        assert_eq!(c.model_spec(), ModelSpec::PoschlTeller { alpha: 1.0, beta: 0.5 });
    }

    #[test]
    fn rejects_unknown_and_malformed() {
        assert!(matches!(RunConfig::from_config_text("colour=blue"), Err(CliError::Usage(_))));
        assert!(matches!(RunConfig::from_config_text("tau"), Err(CliError::Usage(_))));
        assert!(matches!(RunConfig::from_config_text("nmax=-1"), Err(CliError::Usage(_))));
        assert!(matches!(RunConfig::from_config_text("tol=0"), Err(CliError::Usage(_))));
        assert!(RunConfig::from_config_text("hbar=-1").is_err());
        assert!(RunConfig::from_config_text("model=quartic").is_err());
    }

    #[test]
    fn flags_override_file() {
        let file = Layer::parse("tau=0.5\nnmax=2\n").unwrap();
        let flags = Layer {
            tau: Some(0.2),
            ..Default::default()
        };
        let c = RunConfig::from_layer(flags.over(file), &Command::Spectrum).unwrap();
        assert_eq!((c.tau, c.nmax), (0.2, 2));
    }
}
