//! Run configurations. Each parameter struct doubles as the clap argument set
//! of its subcommand and as the JSON form stored in manifests, so a manifest's
//! `config` can be fed back to `largeface sweep --config`.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use largeface_core::fragmentation::{DislocationLaw, FragConfig};
use largeface_core::theory::ChordEstimator;
use largeface_core::Psi;
use serde::{Deserialize, Serialize};

use crate::error::{RunError, RunResult};
use crate::grid::EpsGrid;

/// Version of every file format and config layout written by this crate.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    pub run: Experiment,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Triangulate(TriangulateParams),
    CountLarge(CountLargeParams),
    LongestChord(LongestChordParams),
    Fragment(FragmentParams),
    Stable(StableParams),
    Theory(TheoryParams),
}

impl RunConfig {
    pub fn new(run: Experiment) -> Self {
        RunConfig { schema_version: SCHEMA_VERSION, run }
    }

    pub fn from_json(text: &str) -> RunResult<Self> {
        let cfg: RunConfig = serde_json::from_str(text)?;
        if cfg.schema_version != SCHEMA_VERSION {
            return Err(RunError::config(format!(
                "config has schema version {}, this build reads {SCHEMA_VERSION}",
                cfg.schema_version
            )));
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> RunResult<()> {
        match &self.run {
            Experiment::Triangulate(p) => p.validate(),
            Experiment::CountLarge(p) => p.validate(),
            Experiment::LongestChord(p) => p.validate(),
            Experiment::Fragment(p) => p.validate(),
            Experiment::Stable(p) => p.validate(),
            Experiment::Theory(p) => p.validate(),
        }
    }
}

fn check_n(n: usize) -> RunResult<()> {
    if n < 2 || n > u32::MAX as usize {
        return Err(RunError::config(format!("n must lie in [2, 2^32), got {n}")));
    }
    Ok(())
}

fn check_replicates(m: u64) -> RunResult<()> {
    if m < 2 {
        return Err(RunError::config(format!("at least two replicates are needed, got {m}")));
    }
    Ok(())
}

fn default_seed() -> u64 {
    42
}

/// Manifest location: the explicit path, or `<primary output>.manifest.json`.
pub fn manifest_path(explicit: &Option<PathBuf>, primary: Option<&Path>) -> Option<PathBuf> {
    explicit.clone().or_else(|| {
        primary.map(|p| {
            let mut s = p.as_os_str().to_owned();
            s.push(".manifest.json");
            PathBuf::from(s)
        })
    })
}

/// Samples one excursion and writes its triangles.
#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TriangulateParams {
    /// Number of cells of the discretised excursion.
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 42)]
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Stream id of the excursion within the seed.
    #[arg(long, default_value_t = 0)]
    #[serde(default)]
    pub replicate: u64,
    /// Records CSV.
    #[arg(long)]
    pub out: PathBuf,
    /// Optional `index,value` dump of the excursion.
    #[arg(long)]
    #[serde(default)]
    pub dump_path: Option<PathBuf>,
    /// Manifest path; defaults to `<out>.manifest.json`.
    #[arg(long)]
    #[serde(default)]
    pub manifest: Option<PathBuf>,
}

impl TriangulateParams {
    pub fn validate(&self) -> RunResult<()> {
        check_n(self.n)
    }
}

/// Which triangles count as large.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FaceKind {
    /// Shortest edge longer than ε.
    Edge,
    /// Area larger than ε.
    Area,
    /// Length of the smaller sub-arc larger than ε.
    Psi1,
}

impl FaceKind {
    pub fn psi(self) -> Psi {
        match self {
            FaceKind::Edge => Psi::Edge,
            FaceKind::Area => Psi::Area,
            FaceKind::Psi1 => Psi::Psi1,
        }
    }

    /// λ in `ε^λ N(ε)`.
    pub fn exponent(self) -> f64 {
        match self {
            FaceKind::Edge | FaceKind::Psi1 => 1.0,
            FaceKind::Area => 0.5,
        }
    }
}

/// Counts large triangles over many excursions.
#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CountLargeParams {
    #[arg(long, value_enum)]
    pub kind: FaceKind,
    /// ε grid from coarse to fine: `0.4,0.2,0.1` or `geom(start,stop,k)`.
    #[arg(long)]
    pub eps: EpsGrid,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub replicates: u64,
    #[arg(long, default_value_t = 42)]
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Sweep CSV.
    #[arg(long)]
    pub out: PathBuf,
    /// Optional ratio CSV against the limit (2 for edges, 1/π for psi1, the
    /// per-path level functional for areas).
    #[arg(long)]
    #[serde(default)]
    pub ratio_out: Option<PathBuf>,
    #[arg(long)]
    #[serde(default)]
    pub manifest: Option<PathBuf>,
}

impl CountLargeParams {
    pub fn validate(&self) -> RunResult<()> {
        check_n(self.n)?;
        check_replicates(self.replicates)?;
        self.eps.values().map(|_| ())
    }
}

/// Samples the longest chord of many triangulations.
#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LongestChordParams {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub replicates: u64,
    #[arg(long, default_value_t = 42)]
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Per-replicate CSV `replicate,fraction,length,degenerate`.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    #[serde(default)]
    pub manifest: Option<PathBuf>,
}

impl LongestChordParams {
    pub fn validate(&self) -> RunResult<()> {
        check_n(self.n)?;
        check_replicates(self.replicates)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LawName {
    /// Every split is `(s1, 1-s1)`; params `s1`, optional `rate` (default 1).
    PointMass,
    /// `ν̄(u) = (κ/a)(u^{-a} - 2^a)`; params `kappa`, `a`.
    PowerTail,
    /// The dislocation measure of the Brownian excursion; no params.
    Brownian,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LawParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rate: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LawSpec {
    pub kind: LawName,
    #[serde(default)]
    pub params: LawParams,
    /// Splits whose smaller part is at most `delta_prime` are dropped. Required
    /// for laws with infinite total rate.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_prime: Option<f64>,
}

impl LawSpec {
    pub fn build(&self) -> RunResult<DislocationLaw> {
        let p = &self.params;
        let need = |v: Option<f64>, name: &str| {
            v.ok_or_else(|| RunError::config(format!("law {:?} needs params.{name}", self.kind)))
        };
        let unused = |names: &[(&str, bool)]| -> RunResult<()> {
            match names.iter().find(|(_, set)| *set) {
                Some((name, _)) => Err(RunError::config(format!("law {:?} takes no params.{name}", self.kind))),
                None => Ok(()),
            }
        };
        let delta =
            || self.delta_prime.ok_or_else(|| RunError::config(format!("law {:?} needs delta_prime", self.kind)));
        let law = match self.kind {
            LawName::PointMass => {
                unused(&[("kappa", p.kappa.is_some()), ("a", p.a.is_some())])?;
                if self.delta_prime.is_some() {
                    return Err(RunError::config("a point-mass law has nothing to truncate; drop delta_prime"));
                }
                DislocationLaw::point_mass(need(p.s1, "s1")?, p.rate.unwrap_or(1.0))?
            }
            LawName::PowerTail => {
                unused(&[("s1", p.s1.is_some()), ("rate", p.rate.is_some())])?;
                DislocationLaw::power_tail(need(p.kappa, "kappa")?, need(p.a, "a")?, delta()?)?
            }
            LawName::Brownian => {
                unused(&[
                    ("s1", p.s1.is_some()),
                    ("rate", p.rate.is_some()),
                    ("kappa", p.kappa.is_some()),
                    ("a", p.a.is_some()),
                ])?;
                DislocationLaw::brownian(delta()?)?
            }
        };
        Ok(law)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PsiSpec {
    /// `edge`, `area`, `psi1`, `parent_mass`, `power_tail` or `centroid`.
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
}

/// The fragmentation model file read by `fragment --config`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FragmentModel {
    pub alpha: f64,
    pub law: LawSpec,
    pub mass_cutoff: f64,
    pub psi: PsiSpec,
    /// Coarse to fine, as on the command line.
    pub eps_grid: EpsGrid,
    pub max_events: usize,
    /// λ in `ε^λ N(ε)`; derived from the law and ψ when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scaling_exponent: Option<f64>,
}

impl FragmentModel {
    pub fn build(&self) -> RunResult<FragConfig> {
        let config = FragConfig {
            alpha: self.alpha,
            law: self.law.build()?,
            mass_cutoff: self.mass_cutoff,
            psi: Psi::from_kind(&self.psi.kind, self.psi.b)?,
            eps_grid: self.eps_grid.ascending()?,
            max_events: self.max_events,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn exponent(&self, config: &FragConfig) -> RunResult<f64> {
        match self.scaling_exponent {
            Some(l) if l.is_finite() => Ok(l),
            Some(l) => Err(RunError::config(format!("scaling_exponent {l} is not finite"))),
            None => Ok(largeface_core::fragmentation::scaling_exponent(&config.law, &config.psi)?),
        }
    }
}

/// What fragmentation counts are divided by in the ratio table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RatioSpec {
    /// A deterministic limit.
    Scalar { value: f64 },
    /// `c·Σ(p)` of each path.
    Sigma { c: f64, p: f64 },
}

impl std::str::FromStr for RatioSpec {
    type Err = RunError;

    /// `scalar:V` or `sigma:C,P`.
    fn from_str(s: &str) -> RunResult<Self> {
        let bad = || RunError::config(format!("'{s}': expected scalar:VALUE or sigma:C,P"));
        let num = |t: &str| t.trim().parse::<f64>().map_err(|_| bad());
        let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
        match kind.trim() {
            "scalar" => Ok(RatioSpec::Scalar { value: num(rest)? }),
            "sigma" => {
                let (c, p) = rest.split_once(',').ok_or_else(bad)?;
                Ok(RatioSpec::Sigma { c: num(c)?, p: num(p)? })
            }
            _ => Err(bad()),
        }
    }
}

/// Simulates a fragmentation many times and counts large dislocations.
#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FragmentParams {
    /// Model file; its contents are copied into the manifest.
    #[arg(long = "config", value_parser = load_model)]
    pub model: FragmentModel,
    #[arg(long)]
    pub replicates: u64,
    #[arg(long, default_value_t = 42)]
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Sweep CSV.
    #[arg(long)]
    pub out: PathBuf,
    /// Events CSV of the first replicate.
    #[arg(long)]
    #[serde(default)]
    pub events_out: Option<PathBuf>,
    /// Ratio target, `scalar:V` or `sigma:C,P`.
    #[arg(long, requires = "ratio_out")]
    #[serde(default)]
    pub ratio: Option<RatioSpec>,
    #[arg(long, requires = "ratio")]
    #[serde(default)]
    pub ratio_out: Option<PathBuf>,
    #[arg(long)]
    #[serde(default)]
    pub manifest: Option<PathBuf>,
}

fn load_model(path: &str) -> Result<FragmentModel, RunError> {
    let text = std::fs::read_to_string(path).map_err(|source| RunError::Io { path: path.into(), source })?;
    Ok(serde_json::from_str(&text)?)
}

impl FragmentParams {
    pub fn validate(&self) -> RunResult<()> {
        check_replicates(self.replicates)?;
        let config = self.model.build()?;
        self.model.exponent(&config)?;
        if self.ratio.is_some() != self.ratio_out.is_some() {
            return Err(RunError::config("ratio and ratio_out go together"));
        }
        if let Some(RatioSpec::Sigma { p, .. }) = &self.ratio {
            if p.is_nan() || *p <= 1.0 {
                return Err(RunError::config(format!("Σ(p) needs p > 1, got {p}")));
            }
        }
        Ok(())
    }
}

fn default_phi_p() -> Vec<f64> {
    vec![1.0, 2.0]
}

/// Samples stable subordinator jumps and checks them against their laws.
#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StableParams {
    #[arg(long)]
    pub beta: f64,
    /// Jumps below delta are replaced by their mean.
    #[arg(long, default_value_t = 1e-6)]
    pub delta: f64,
    #[arg(long)]
    pub replicates: u64,
    #[arg(long, default_value_t = 42)]
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Exponents p at which the Laplace exponent is estimated.
    #[arg(long, value_delimiter = ',', default_values_t = [1.0, 2.0])]
    #[serde(default = "default_phi_p")]
    pub phi_p: Vec<f64>,
    /// Per-replicate CSV `replicate,t1,delta1,jumps`.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    #[serde(default)]
    pub manifest: Option<PathBuf>,
}

impl StableParams {
    pub fn validate(&self) -> RunResult<()> {
        check_beta(self.beta)?;
        check_delta(self.delta)?;
        check_replicates(self.replicates)?;
        if let Some(p) = self.phi_p.iter().find(|p| !(**p > 0.0 && p.is_finite())) {
            return Err(RunError::config(format!("phi exponents must be positive, got {p}")));
        }
        Ok(())
    }
}

fn check_beta(beta: f64) -> RunResult<()> {
    if !(beta > 1.0 && beta < 2.0) {
        return Err(RunError::config(format!("beta must lie in (1, 2), got {beta}")));
    }
    Ok(())
}

fn check_delta(delta: f64) -> RunResult<()> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(RunError::config(format!("delta must lie in (0, 1), got {delta}")));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TheoryEval {
    /// Laplace exponent Φ(p), Brownian or (with --beta) stable.
    Phi,
    /// Mean log drift of the Brownian tagged fragment.
    M,
    /// g₁(u).
    G1,
    /// Brownian longest-chord CDF at each --a.
    ChordCdf,
    /// Monte Carlo stable longest-chord CDF at each --a.
    StableChordCdf,
    /// Monte Carlo stable large-face constant.
    #[value(alias = "theorem41")]
    #[serde(alias = "theorem41")]
    StableFaceConstant,
    /// The Brownian limits, plus C_β and D_β with --beta.
    Constants,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Estimator {
    Direct,
    Conditioned,
}

impl From<Estimator> for ChordEstimator {
    fn from(e: Estimator) -> Self {
        match e {
            Estimator::Direct => ChordEstimator::Direct,
            Estimator::Conditioned => ChordEstimator::Conditioned,
        }
    }
}

fn default_replicates() -> u64 {
    100_000
}

fn default_delta() -> f64 {
    1e-6
}

fn default_estimator() -> Estimator {
    Estimator::Conditioned
}

fn default_rel_tol() -> f64 {
    1e-10
}

/// Evaluates a closed form or a Monte Carlo constant.
#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TheoryParams {
    #[arg(long, value_enum)]
    pub eval: TheoryEval,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<f64>,
    /// Chord fractions, comma separated.
    #[arg(long, value_delimiter = ',')]
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub a: Vec<f64>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[arg(long, default_value_t = 1e-6)]
    #[serde(default = "default_delta")]
    pub delta: f64,
    #[arg(long, default_value_t = 100_000)]
    #[serde(default = "default_replicates")]
    pub replicates: u64,
    #[arg(long, default_value_t = 42)]
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Estimator::Conditioned)]
    #[serde(default = "default_estimator")]
    pub estimator: Estimator,
    /// Relative tolerance of every quadrature.
    #[arg(long, default_value_t = 1e-10)]
    #[serde(default = "default_rel_tol")]
    pub rel_tol: f64,
    /// Also write the records here (stdout always gets them).
    #[arg(long)]
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    #[serde(default)]
    pub manifest: Option<PathBuf>,
}

impl TheoryParams {
    pub fn validate(&self) -> RunResult<()> {
        let need = |v: Option<f64>, flag: &str| {
            v.map(|_| ()).ok_or_else(|| RunError::config(format!("--eval {:?} needs --{flag}", self.eval)))
        };
        let need_a = || {
            if self.a.is_empty() {
                return Err(RunError::config("this evaluation needs --a"));
            }
            match self.a.iter().find(|a| !(**a > 0.0 && **a < 0.5)) {
                Some(a) => Err(RunError::config(format!("a must lie in (0, 1/2), got {a}"))),
                None => Ok(()),
            }
        };
        if !(self.rel_tol > 0.0 && self.rel_tol < 1.0) {
            return Err(RunError::config("rel_tol must lie in (0, 1)"));
        }
        if let Some(b) = self.beta {
            check_beta(b)?;
        }
        match self.eval {
            TheoryEval::Phi => need(self.p, "p"),
            TheoryEval::M | TheoryEval::Constants => Ok(()),
            TheoryEval::G1 => need(self.u, "u"),
            TheoryEval::ChordCdf => need_a(),
            TheoryEval::StableChordCdf => {
                need(self.beta, "beta")?;
                need_a()?;
                check_delta(self.delta)?;
                check_replicates(self.replicates)
            }
            TheoryEval::StableFaceConstant => {
                need(self.beta, "beta")?;
                check_delta(self.delta)?;
                check_replicates(self.replicates)
            }
        }
    }
}
