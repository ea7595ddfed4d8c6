//! Campaign configuration files.

use std::fmt;
use std::path::{Path, PathBuf};

use musielak_core::embedding::EXACT_EMBEDDING_LIMIT;
use musielak_core::perm::{EXACT_PAIR_LIMIT, EXACT_SINGLE_LIMIT};
use serde::{Deserialize, Serialize};

use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Construct,
    VerifyThm1,
    VerifyThm2,
    Roundtrip,
    LemmaOracles,
    EmbedReport,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Self::Construct => "construct",
            Self::VerifyThm1 => "verify-thm1",
            Self::VerifyThm2 => "verify-thm2",
            Self::Roundtrip => "roundtrip",
            Self::LemmaOracles => "lemma-oracles",
            Self::EmbedReport => "embed-report",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Where weight matrices or Orlicz systems come from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Family {
    /// Every entry equal to `value`.
    Constant { value: f64 },
    /// Rows of `offset + U(0, 1)` entries sorted nonincreasingly.
    RandomDecreasing {
        #[serde(default = "default_offset")]
        offset: f64,
    },
    /// Power Orlicz functions, exponent of row `i` is `exponents[i mod len]`.
    PowerFamily { exponents: Vec<f64> },
}

fn default_offset() -> f64 {
    1e-3
}

impl Default for Family {
    fn default() -> Self {
        Self::RandomDecreasing {
            offset: default_offset(),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AverageChoice {
    #[default]
    Exact,
    MonteCarlo,
}

/// Individual checks of the `lemma-oracles` campaign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleCheck {
    /// `½‖x‖_a ≤ ‖x‖_{ΣM_i} ≤ 2‖x‖_a`.
    MatrixNorm,
    /// `(1/√2)·Ave ≤ ‖Ψx‖ ≤ Ave`.
    Khintchine,
    /// Two-permutation max average against the rearrangement bound.
    MaxTwo,
    /// Greedy `‖x‖_a` against all compositions.
    Greedy,
    /// Monte-Carlo `ave_l2` against exact enumeration.
    MonteCarlo,
    /// `Ave_σ max_k |y_k b_σ(k)|` against `‖y‖₂`.
    MaxVector,
}

impl OracleCheck {
    pub const ALL: [Self; 6] = [
        Self::MatrixNorm,
        Self::Khintchine,
        Self::MaxTwo,
        Self::Greedy,
        Self::MonteCarlo,
        Self::MaxVector,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::MatrixNorm => "matrix-norm",
            Self::Khintchine => "khintchine",
            Self::MaxTwo => "max-two",
            Self::Greedy => "greedy",
            Self::MonteCarlo => "monte-carlo",
            Self::MaxVector => "max-vector",
        }
    }

    /// Largest `n` the check can run at.
    pub fn limit(self) -> usize {
        match self {
            Self::MatrixNorm => usize::MAX,
            Self::Khintchine => EXACT_EMBEDDING_LIMIT,
            Self::MaxTwo => EXACT_PAIR_LIMIT,
            Self::Greedy => 6,
            Self::MonteCarlo | Self::MaxVector => EXACT_SINGLE_LIMIT,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Relative slack of sandwiches involving the Luxemburg solver.
    pub norm_slack: f64,
    /// Relative slack of sandwiches between exact sums.
    pub exact_slack: f64,
    /// Largest admissible `c_high / c_low` of an empirical band.
    pub band_spread: f64,
    /// Relative widening of the band at `n` that must contain the band at
    /// the next dimension.
    pub band_stability: f64,
    pub roundtrip_low: f64,
    pub roundtrip_high: f64,
    /// Largest relative change of the distortion between consecutive `n`.
    pub distortion_stability: f64,
    /// Monte-Carlo acceptance radius in standard errors.
    pub mc_sigmas: f64,
    /// Required fraction of Monte-Carlo runs inside the radius.
    pub mc_coverage: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            norm_slack: 1e-8,
            exact_slack: 1e-12,
            band_spread: 20.0,
            band_stability: 0.25,
            roundtrip_low: 0.25,
            roundtrip_high: 4.0,
            distortion_stability: 0.5,
            mc_sigmas: 4.0,
            mc_coverage: 0.99,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Json,
    Csv,
    #[default]
    Both,
}

impl Format {
    pub fn json(self) -> bool {
        matches!(self, Self::Json | Self::Both)
    }

    pub fn csv(self) -> bool {
        matches!(self, Self::Csv | Self::Both)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: PathBuf,
    pub format: Format,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("out"),
            format: Format::Both,
        }
    }
}

/// One campaign: a command, a dimension sweep, an instance family and the
/// sampling budget.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Filled from the command line when absent.
    pub command: Option<Command>,
    pub dims: Vec<usize>,
    pub family: Family,
    pub seed: u64,
    /// Matrices (or cubes, or systems) per dimension.
    pub instances: usize,
    /// Vectors per matrix.
    pub vectors: usize,
    pub average: AverageChoice,
    /// Monte-Carlo sample count.
    pub samples: usize,
    /// Random directions per distortion report.
    pub directions: usize,
    /// Checks of `lemma-oracles`; empty means all.
    pub checks: Vec<OracleCheck>,
    /// Optional weight matrix (JSON) used instead of the family.
    pub input: Option<PathBuf>,
    pub tolerances: Tolerances,
    pub output: OutputConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            command: None,
            dims: vec![2, 3, 4],
            family: Family::default(),
            seed: 0,
            instances: 20,
            vectors: 25,
            average: AverageChoice::Exact,
            samples: musielak_core::perm::DEFAULT_SAMPLES,
            directions: 200,
            checks: Vec::new(),
            input: None,
            tolerances: Tolerances::default(),
            output: OutputConfig::default(),
        }
    }
}

impl ExperimentConfig {
    /// Parses a config file; errors carry the line and column.
    pub fn from_path(path: &Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
        Self::from_json(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}:{msg}", path.display())),
            other => other,
        })
    }

    pub fn from_json(text: &str) -> Result<Self, Error> {
        serde_json::from_str(text)
            .map_err(|e| Error::Config(format!("{}:{}: {e}", e.line(), e.column())))
    }

    pub fn command(&self) -> Result<Command, Error> {
        self.command
            .ok_or_else(|| Error::Config("no command given".into()))
    }

    /// Checks that were requested, in canonical order.
    pub fn oracle_checks(&self) -> Vec<OracleCheck> {
        let mut checks = if self.checks.is_empty() {
            OracleCheck::ALL.to_vec()
        } else {
            self.checks.clone()
        };
        checks.sort();
        checks.dedup();
        checks
    }

    /// Rejects inconsistent settings before any computation starts.
    pub fn validate(&self) -> Result<(), Error> {
        let command = self.command()?;
        let bad = |msg: String| Err(Error::Config(msg));
        if let Some(&n) = self.dims.iter().find(|&&n| n == 0) {
            return bad(format!("dimension {n} in dims"));
        }
        match &self.family {
            Family::Constant { value } if !(*value > 0.0 && value.is_finite()) => {
                return bad(format!(
                    "constant family needs a positive value, got {value}"
                ))
            }
            Family::RandomDecreasing { offset } if !(*offset > 0.0 && offset.is_finite()) => {
                return bad(format!(
                    "random-decreasing family needs a positive offset, got {offset}"
                ))
            }
            Family::PowerFamily { exponents } => {
                if exponents.is_empty() {
                    return bad("power-family needs at least one exponent".into());
                }
                if let Some(p) = exponents.iter().find(|p| !(**p > 1.0 && **p < 2.0)) {
                    return bad(format!("power-family exponent {p} outside (1, 2)"));
                }
            }
            _ => {}
        }
        let powers = matches!(self.family, Family::PowerFamily { .. });
        match command {
            Command::VerifyThm1 | Command::LemmaOracles if powers => {
                return bad(format!("{command} needs a matrix family, not power-family"))
            }
            Command::VerifyThm2 | Command::EmbedReport if !powers => {
                return bad(format!("{command} needs the power-family"))
            }
            _ => {}
        }
        if self.input.is_some() && !matches!(command, Command::Construct | Command::Roundtrip) {
            return bad(format!(
                "input matrices are only read by construct and roundtrip, not {command}"
            ));
        }
        if self.average == AverageChoice::MonteCarlo && self.samples == 0 {
            return bad("monte-carlo averages need samples > 0".into());
        }
        let t = &self.tolerances;
        if !(t.roundtrip_low > 0.0 && t.roundtrip_low <= 1.0 && t.roundtrip_high >= 1.0) {
            return bad(format!(
                "roundtrip band [{}, {}] must contain 1",
                t.roundtrip_low, t.roundtrip_high
            ));
        }
        if !(0.0..=1.0).contains(&t.mc_coverage) {
            return bad(format!("mc_coverage {} outside [0, 1]", t.mc_coverage));
        }
        let max_n = self.dims.iter().copied().max().unwrap_or(0);
        let exact = self.average == AverageChoice::Exact;
        let limit = match command {
            Command::VerifyThm1 | Command::VerifyThm2 if exact => {
                Some((EXACT_SINGLE_LIMIT, "exact ave_l2"))
            }
            Command::EmbedReport if exact => Some((EXACT_EMBEDDING_LIMIT, "exact embedding norm")),
            Command::LemmaOracles => self
                .oracle_checks()
                .into_iter()
                .map(|c| (c.limit(), c.name()))
                .min_by_key(|(l, _)| *l),
            _ => None,
        };
        if let Some((limit, what)) = limit {
            if max_n > limit {
                return bad(format!(
                    "dimension {max_n} exceeds the {what} limit {limit}"
                ));
            }
        }
        Ok(())
    }
}
