use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use monokit::fem1d::{ManufacturedSolution, Mesh1D};
use monokit::{LoadSpec, RawFamilySpec, Variant};

use crate::config::{Command, InitialData, LemmaArgs, RunConfig};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LoadKind {
    Sine,
    Constant,
    Polynomial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SolutionKind {
    Zero,
    Sine,
    Parabola,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InitialKind {
    Random,
    Zero,
}

/// Checks and solves for uniformly monotone divergence-form operators.
///
/// Flags override the values of `--config`; the resolved configuration is
/// written to `effective_config.json` in the output directory.
#[derive(Debug, Clone, Default, Parser)]
#[command(name = "monokit", version, allow_negative_numbers = true)]
pub struct Cli {
    /// lemma | check | solve | parabolic | sweep (may come from --config instead)
    #[arg(value_enum)]
    pub command: Option<Command>,

    /// JSON run configuration
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Seed for every random scan (default: $MONOKIT_SEED, then 0)
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Worker threads for the sampling scans
    #[arg(long)]
    pub threads: Option<usize>,

    #[arg(long, help_heading = "Family")]
    pub family: Option<Variant>,
    #[arg(long, help_heading = "Family")]
    pub p: Option<f64>,
    #[arg(long, help_heading = "Family")]
    pub n: Option<usize>,
    #[arg(long, help_heading = "Family")]
    pub k: Option<usize>,
    #[arg(long, help_heading = "Family")]
    pub r: Option<f64>,
    #[arg(long, help_heading = "Family")]
    pub epsilon: Option<f64>,
    #[arg(long, value_delimiter = ',', help_heading = "Family")]
    pub exponents: Option<Vec<f64>>,
    #[arg(long, help_heading = "Family")]
    pub bump_radius: Option<f64>,
    #[arg(long, value_delimiter = ',', help_heading = "Family")]
    pub bump_scales: Option<Vec<f64>>,

    #[arg(long, help_heading = "Lemma")]
    pub a: Option<f64>,
    #[arg(long, help_heading = "Lemma")]
    pub b: Option<f64>,
    #[arg(long, help_heading = "Lemma")]
    pub s: Option<f64>,

    /// Points per delta/growth scan
    #[arg(long, help_heading = "Sampling")]
    pub count: Option<usize>,
    /// Pairs in the A3 scan
    #[arg(long, help_heading = "Sampling")]
    pub pairs: Option<usize>,
    #[arg(long, help_heading = "Sampling")]
    pub box_radius: Option<f64>,
    #[arg(long, help_heading = "Sampling")]
    pub exclusion: Option<f64>,
    /// Comma-separated exponents for `sweep`
    #[arg(long, value_delimiter = ',', help_heading = "Sampling")]
    pub p_values: Option<Vec<f64>>,

    /// Number of elements
    #[arg(long, help_heading = "Solver")]
    pub m: Option<usize>,
    #[arg(long, value_enum, help_heading = "Solver")]
    pub load: Option<LoadKind>,
    #[arg(long, help_heading = "Solver")]
    pub amplitude: Option<f64>,
    #[arg(long, help_heading = "Solver")]
    pub frequency: Option<f64>,
    /// Value of a constant load
    #[arg(long, help_heading = "Solver")]
    pub value: Option<f64>,
    /// Comma-separated polynomial load coefficients, lowest degree first
    #[arg(long, value_delimiter = ',', help_heading = "Solver")]
    pub coefficients: Option<Vec<f64>>,
    /// Replace the load by the one whose exact solution is this function
    #[arg(long, value_enum, help_heading = "Solver")]
    pub manufactured: Option<SolutionKind>,
    #[arg(long, help_heading = "Solver")]
    pub tol: Option<f64>,
    #[arg(long, help_heading = "Solver")]
    pub max_iterations: Option<usize>,
    #[arg(long, help_heading = "Solver")]
    pub damping_min: Option<f64>,
    #[arg(long, help_heading = "Solver")]
    pub quadrature_order: Option<usize>,

    #[arg(long, help_heading = "Parabolic")]
    pub horizon: Option<f64>,
    #[arg(long, help_heading = "Parabolic")]
    pub steps: Option<usize>,
    #[arg(long, value_enum, help_heading = "Parabolic")]
    pub initial: Option<InitialKind>,
    #[arg(long, help_heading = "Parabolic")]
    pub initial_amplitude: Option<f64>,
}

impl Cli {
    /// Writes every given flag into `cfg`.
    pub fn apply(&self, cfg: &mut RunConfig) -> Result<(), CliError> {
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(out) = &self.out {
            cfg.output_path = out.clone();
        }
        if self.threads.is_some() {
            cfg.threads = self.threads;
        }
        self.apply_family(cfg)?;
        self.apply_lemma(cfg)?;

        if let Some(count) = self.count {
            cfg.sample.count = count;
        }
        if let Some(pairs) = self.pairs {
            cfg.pairs = pairs;
        }
        if let Some(r) = self.box_radius {
            cfg.sample.box_radius = r;
        }
        if let Some(eta) = self.exclusion {
            cfg.sample.exclusion = eta;
        }
        if let Some(ps) = &self.p_values {
            cfg.sweep.p_values = ps.clone();
        }

        if let Some(m) = self.m {
            cfg.mesh = Mesh1D::new(m).map_err(|e| CliError::Usage(format!("--m: {e}")))?;
        }
        self.apply_load(cfg)?;
        if let Some(kind) = self.manufactured {
            cfg.manufactured = Some(match kind {
                SolutionKind::Zero => ManufacturedSolution::Zero,
                SolutionKind::Sine => ManufacturedSolution::Sine {
                    frequency: self.frequency.unwrap_or(1.0),
                },
                SolutionKind::Parabola => ManufacturedSolution::Parabola,
            });
        }
        if let Some(tol) = self.tol {
            cfg.solver.tol_residual = tol;
        }
        if let Some(it) = self.max_iterations {
            cfg.solver.max_iterations = it;
        }
        if let Some(d) = self.damping_min {
            cfg.solver.damping_min = d;
        }
        if let Some(q) = self.quadrature_order {
            cfg.solver.quadrature_order = q;
        }

        if let Some(t) = self.horizon {
            cfg.parabolic.horizon = t;
        }
        if let Some(steps) = self.steps {
            cfg.parabolic.steps = steps;
        }
        match (self.initial, self.initial_amplitude) {
            (Some(InitialKind::Zero), None) => cfg.parabolic.initial = InitialData::Zero,
            (Some(InitialKind::Zero), Some(_)) => {
                return Err(CliError::Usage("--initial-amplitude only applies to --initial random".into()))
            }
            (Some(InitialKind::Random), amp) => {
                cfg.parabolic.initial = InitialData::Random {
                    amplitude: amp.unwrap_or(1.0),
                }
            }
            (None, Some(amp)) => match &mut cfg.parabolic.initial {
                InitialData::Random { amplitude } => *amplitude = amp,
                _ => return Err(CliError::Usage("--initial-amplitude needs random initial data".into())),
            },
            (None, None) => {}
        }
        Ok(())
    }

    fn family_flags_given(&self) -> bool {
        self.p.is_some()
            || self.n.is_some()
            || self.k.is_some()
            || self.r.is_some()
            || self.epsilon.is_some()
            || self.exponents.is_some()
            || self.bump_radius.is_some()
            || self.bump_scales.is_some()
    }

    fn apply_family(&self, cfg: &mut RunConfig) -> Result<(), CliError> {
        let mut raw = match (self.family, cfg.family.take()) {
            (Some(variant), Some(existing)) if existing.variant == variant => existing,
            (Some(variant), existing) => {
                let p = self
                    .p
                    .or(existing.as_ref().map(|f| f.p))
                    .ok_or_else(|| CliError::Usage("--family needs --p".into()))?;
                let n = self.n.or(existing.as_ref().map(|f| f.n)).unwrap_or(1);
                RawFamilySpec::new(variant, p, n)
            }
            (None, Some(existing)) => existing,
            (None, None) => {
                if self.family_flags_given() {
                    return Err(CliError::Usage("family flags need --family".into()));
                }
                return Ok(());
            }
        };
        if let Some(p) = self.p {
            raw.p = p;
        }
        if let Some(n) = self.n {
            raw.n = n;
        }
        if self.k.is_some() {
            raw.k = self.k;
        }
        if self.r.is_some() {
            raw.r = self.r;
        }
        if self.epsilon.is_some() {
            raw.epsilon = self.epsilon;
        }
        if self.exponents.is_some() {
            raw.exponents = self.exponents.clone();
        }
        if self.bump_radius.is_some() {
            raw.bump_radius = self.bump_radius;
        }
        if self.bump_scales.is_some() {
            raw.bump_scales = self.bump_scales.clone();
        }
        cfg.family = Some(raw);
        Ok(())
    }

    fn apply_lemma(&self, cfg: &mut RunConfig) -> Result<(), CliError> {
        if self.a.is_none() && self.b.is_none() && self.s.is_none() {
            return Ok(());
        }
        let base = cfg.lemma;
        let pick = |flag: Option<f64>, old: Option<f64>, name: &str| {
            flag.or(old)
                .ok_or_else(|| CliError::Usage(format!("lemma needs --{name}")))
        };
        cfg.lemma = Some(LemmaArgs {
            a: pick(self.a, base.map(|l| l.a), "a")?,
            b: pick(self.b, base.map(|l| l.b), "b")?,
            s: pick(self.s, base.map(|l| l.s), "s")?,
        });
        Ok(())
    }

    fn apply_load(&self, cfg: &mut RunConfig) -> Result<(), CliError> {
        match self.load {
            Some(LoadKind::Sine) => {
                cfg.load = LoadSpec::Sine {
                    amplitude: self.amplitude.unwrap_or(1.0),
                    frequency: self.frequency.unwrap_or(1.0),
                }
            }
            Some(LoadKind::Constant) => {
                cfg.load = LoadSpec::Constant {
                    value: self.value.unwrap_or(1.0),
                }
            }
            Some(LoadKind::Polynomial) => {
                let coefficients = self
                    .coefficients
                    .clone()
                    .ok_or_else(|| CliError::Usage("--load polynomial needs --coefficients".into()))?;
                cfg.load = LoadSpec::Polynomial { coefficients };
            }
            None => {
                if self.amplitude.is_some() || (self.frequency.is_some() && self.manufactured.is_none()) {
                    match &mut cfg.load {
                        LoadSpec::Sine { amplitude, frequency } => {
                            *amplitude = self.amplitude.unwrap_or(*amplitude);
                            *frequency = self.frequency.unwrap_or(*frequency);
                        }
                        _ => return Err(CliError::Usage("--amplitude/--frequency need a sine load".into())),
                    }
                }
                if self.value.is_some() || self.coefficients.is_some() {
                    return Err(CliError::Usage("--value/--coefficients need --load constant/polynomial".into()));
                }
            }
        }
        Ok(())
    }
}
