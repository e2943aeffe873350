use std::path::{Path, PathBuf};

use clap::ValueEnum;
use monokit::fem1d::{ManufacturedSolution, Mesh1D};
use monokit::sampling::{DEFAULT_DELTA_COUNT, DEFAULT_PAIR_COUNT};
use monokit::{FamilySpec, LemmaInput, LoadSpec, RawFamilySpec, SampleConfig, SolveConfig};
use serde::{Deserialize, Serialize};

use crate::args::Cli;
use crate::CliError;

pub const SEED_ENV: &str = "MONOKIT_SEED";
pub const DEFAULT_OUTPUT: &str = "monokit-out";
pub const DEFAULT_MESH: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Lemma,
    Check,
    Solve,
    Parabolic,
    Sweep,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Lemma => "lemma",
            Command::Check => "check",
            Command::Solve => "solve",
            Command::Parabolic => "parabolic",
            Command::Sweep => "sweep",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LemmaArgs {
    pub a: f64,
    pub b: f64,
    pub s: f64,
}

/// Start of a time-stepping run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum InitialData {
    /// Seeded nodal values uniform in `[−amplitude, amplitude]`.
    Random { amplitude: f64 },
    Zero,
    /// Interior nodal values.
    Nodal { values: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParabolicSection {
    #[serde(default = "default_horizon")]
    pub horizon: f64,
    #[serde(default = "default_steps")]
    pub steps: usize,
    #[serde(default = "default_initial")]
    pub initial: InitialData,
}

fn default_horizon() -> f64 {
    2.0
}

fn default_steps() -> usize {
    40
}

fn default_initial() -> InitialData {
    InitialData::Random { amplitude: 1.0 }
}

impl Default for ParabolicSection {
    fn default() -> Self {
        Self {
            horizon: default_horizon(),
            steps: default_steps(),
            initial: default_initial(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub p_values: Vec<f64>,
}

impl Default for SweepSection {
    fn default() -> Self {
        Self {
            p_values: vec![2.0, 3.0, 4.0],
        }
    }
}

fn default_pairs() -> usize {
    DEFAULT_PAIR_COUNT
}

fn default_mesh() -> Mesh1D {
    Mesh1D::new(DEFAULT_MESH).expect("default mesh is valid")
}

fn default_load() -> LoadSpec<f64> {
    LoadSpec::sine(1.0)
}

fn default_output() -> PathBuf {
    PathBuf::from(DEFAULT_OUTPUT)
}

fn default_sample() -> SampleConfig {
    SampleConfig::default().with_count(DEFAULT_DELTA_COUNT)
}

/// One run, as read from JSON and flags. Unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_output")]
    pub output_path: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<RawFamilySpec<f64>>,
    #[serde(default = "default_sample")]
    pub sample: SampleConfig,
    /// Pair count of the A3 scan; `sample.count` sizes the point scans.
    #[serde(default = "default_pairs")]
    pub pairs: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lemma: Option<LemmaArgs>,
    #[serde(default = "default_mesh")]
    pub mesh: Mesh1D,
    #[serde(default = "default_load")]
    pub load: LoadSpec<f64>,
    /// When set, `load` is replaced by the load that has this exact solution.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manufactured: Option<ManufacturedSolution<f64>>,
    #[serde(default)]
    pub solver: SolveConfig<f64>,
    #[serde(default)]
    pub parabolic: ParabolicSection,
    #[serde(default)]
    pub sweep: SweepSection,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        serde_json::from_value(serde_json::json!({ "command": command.name() })).expect("defaults deserialize")
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("config: {e}")))
    }

    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes") + "\n"
    }

    /// Validated family. Sweeps re-validate with each `p` of the grid.
    pub fn family_spec(&self) -> Result<FamilySpec<f64>, CliError> {
        let raw = self
            .family
            .clone()
            .ok_or_else(|| CliError::Usage(format!("command `{}` needs a family", self.command.name())))?;
        FamilySpec::from_raw(raw).map_err(|e| CliError::Usage(format!("family: {e}")))
    }

    pub fn lemma_input(&self) -> Result<LemmaInput<f64>, CliError> {
        let args = self
            .lemma
            .ok_or_else(|| CliError::Usage("command `lemma` needs --a, --b and --s".into()))?;
        LemmaInput::new(args.a, args.b, args.s).map_err(|e| CliError::Usage(format!("lemma: {e}")))
    }

    pub fn pair_sample(&self) -> SampleConfig {
        self.sample.with_count(self.pairs)
    }

    /// Checks everything the command will use and fills family defaults.
    pub fn validate(&mut self) -> Result<(), CliError> {
        let usage = |what: &str, e: monokit::Error| CliError::Usage(format!("{what}: {e}"));
        self.sample.seed = self.seed;
        if self.threads == Some(0) {
            return Err(CliError::Usage("threads must be ≥ 1".into()));
        }
        match self.command {
            Command::Lemma => {
                self.lemma_input()?;
            }
            Command::Check => {
                self.family = Some(self.family_spec()?.into());
                self.sample.validate().map_err(|e| usage("sample", e))?;
                if self.pairs == 0 {
                    return Err(CliError::Usage("pairs must be ≥ 1".into()));
                }
            }
            Command::Solve | Command::Parabolic => {
                let spec = self.family_spec()?;
                if spec.n() != 1 {
                    return Err(CliError::Usage(format!(
                        "command `{}` solves in one dimension and needs n = 1, got n = {}",
                        self.command.name(),
                        spec.n()
                    )));
                }
                self.family = Some(spec.into());
                self.load.validate().map_err(|e| usage("load", e))?;
                self.solver.validate().map_err(|e| usage("solver", e))?;
                if let Some(u) = &self.manufactured {
                    u.check_boundary().map_err(|e| usage("manufactured", e))?;
                }
                if self.command == Command::Parabolic {
                    let par = &self.parabolic;
                    if !(par.horizon > 0.0 && par.horizon.is_finite()) {
                        return Err(CliError::Usage(format!("parabolic.horizon must be > 0, got {}", par.horizon)));
                    }
                    if par.steps == 0 {
                        return Err(CliError::Usage("parabolic.steps must be ≥ 1".into()));
                    }
                    if let InitialData::Nodal { values } = &par.initial {
                        if values.len() != self.mesh.interior_count() {
                            return Err(CliError::Usage(format!(
                                "parabolic.initial has {} values, mesh has {} interior nodes",
                                values.len(),
                                self.mesh.interior_count()
                            )));
                        }
                    }
                }
            }
            Command::Sweep => {
                if self.sweep.p_values.is_empty() {
                    return Err(CliError::Usage("sweep.p_values is empty".into()));
                }
                for &p in &self.sweep.p_values {
                    self.family_at(p)?;
                }
                self.sample.validate().map_err(|e| usage("sample", e))?;
                if self.pairs == 0 {
                    return Err(CliError::Usage("pairs must be ≥ 1".into()));
                }
            }
        }
        Ok(())
    }

    /// The configured family with `p` replaced.
    pub fn family_at(&self, p: f64) -> Result<FamilySpec<f64>, CliError> {
        let mut raw = self
            .family
            .clone()
            .ok_or_else(|| CliError::Usage("command `sweep` needs a family".into()))?;
        raw.p = p;
        FamilySpec::from_raw(raw).map_err(|e| CliError::Usage(format!("family at p = {p}: {e}")))
    }
}

/// Resolves a configuration: file (if any), then flags, then validation.
/// The seed comes from `--seed`, else the file, else `MONOKIT_SEED`, else 0.
pub fn parse_config(cli: &Cli, env_seed: Option<&str>) -> Result<RunConfig, CliError> {
    let mut file_has_seed = false;
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
            let value: serde_json::Value =
                serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("config: {e}")))?;
            file_has_seed = value.get("seed").is_some();
            let mut cfg = RunConfig::from_json(&text)?;
            if let Some(cmd) = cli.command {
                cfg.command = cmd;
            }
            cfg
        }
        None => {
            let cmd = cli
                .command
                .ok_or_else(|| CliError::Usage("no command given (lemma, check, solve, parabolic, sweep)".into()))?;
            RunConfig::new(cmd)
        }
    };
    if !file_has_seed {
        if let Some(text) = env_seed {
            cfg.seed = text
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("{SEED_ENV} is not an unsigned integer: {text:?}")))?;
        }
    }
    cli.apply(&mut cfg)?;
    cfg.validate()?;
    Ok(cfg)
}
