//! Experiment configuration: a JSON document, one section per command.
//!
//! ```json
//! {
//!   "point": "bernoulli:0.5:42",
//!   "observable": { "type": "indicator", "letter": "1" },
//!   "schedule": { "type": "intervals", "base": 10, "n_max": 1000 },
//!   "classify": { "range": 500, "eps_grid": [0.01, 0.05, 0.1, 0.2] }
//! }
//! ```

use apspectra::mean::FolnerSchedule;
use apspectra::systems::{Observable, PointGen};
use apspectra::Error as CoreError;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A rejected configuration, naming the offending field.
#[derive(Debug, thiserror::Error)]
#[error("invalid config field `{field}`: {reason}")]
pub struct ConfigError {
    pub field: String,
    pub reason: String,
}

pub fn bad(field: impl Into<String>, reason: impl Into<String>) -> ConfigError {
    ConfigError {
        field: field.into(),
        reason: reason.into(),
    }
}

impl From<CoreError> for ConfigError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InvalidParameter { field, reason } => bad(field, reason),
            other => bad("config", other.to_string()),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Preset: `fibonacci`, `thue-morse`, `period-doubling`, `periodic:<word>`,
    /// `sturmian:<alpha>[:<rho>]`, `bernoulli:<p>:<seed>`, `step`, `block`.
    pub point: String,
    #[serde(default)]
    pub observable: ObservableSpec,
    #[serde(default)]
    pub schedule: ScheduleSpec,
    /// Overrides the seed of a Bernoulli preset.
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub generate: GenerateParams,
    #[serde(default)]
    pub scan: ScanParams,
    #[serde(default)]
    pub classify: ClassifyParams,
    #[serde(default)]
    pub spectrum: SpectrumParams,
    #[serde(default)]
    pub parseval: ParsevalParams,
    #[serde(default)]
    pub eigen: EigenParams,
    #[serde(default)]
    pub diffract: DiffractParams,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ObservableSpec {
    /// `1` on the named letter.
    Indicator { letter: String },
    /// `+1` on the first letter, `−1` elsewhere.
    PlusMinus,
    /// Real weight per letter, in alphabet order.
    Weights { weights: Vec<f64> },
}

impl Default for ObservableSpec {
    fn default() -> Self {
        ObservableSpec::Indicator { letter: String::new() }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ScheduleSpec {
    Intervals { base: u64, n_max: usize },
    Symmetric { base: u64, n_max: usize },
    Dyadic { n_max: usize },
    Alternating { n_max: usize },
}

impl Default for ScheduleSpec {
    fn default() -> Self {
        ScheduleSpec::Intervals { base: 1000, n_max: 10 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KindName {
    Mean,
    Weyl,
    Bohr,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GenerateParams {
    pub from: i64,
    pub to: i64,
}

impl Default for GenerateParams {
    fn default() -> Self {
        GenerateParams { from: -32, to: 32 }
    }
}

/// Budget overrides shared by `scan` and `classify`.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BudgetParams {
    pub weyl_window: Option<u64>,
    pub weyl_shifts: Option<u64>,
    pub bohr_horizon: Option<u64>,
    pub truncation: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScanParams {
    pub epsilon: f64,
    pub kind: KindName,
    pub range: u64,
    pub budget: BudgetParams,
}

impl Default for ScanParams {
    fn default() -> Self {
        ScanParams {
            epsilon: 0.1,
            kind: KindName::Mean,
            range: 100,
            budget: BudgetParams::default(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClassifyParams {
    pub eps_grid: Vec<f64>,
    pub range: u64,
    pub gap_threshold: f64,
    pub budget: BudgetParams,
}

impl Default for ClassifyParams {
    fn default() -> Self {
        ClassifyParams {
            eps_grid: vec![0.01, 0.05, 0.1, 0.2],
            range: 100,
            gap_threshold: 0.2,
            budget: BudgetParams::default(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectrumParams {
    pub grid_n: usize,
    /// Defaults to `[N/4, N/2, N]`.
    pub stages: Option<Vec<usize>>,
    pub threshold: Option<f64>,
    pub top_k: Option<usize>,
    pub max_frequencies: usize,
    pub cross_check: bool,
}

impl Default for SpectrumParams {
    fn default() -> Self {
        SpectrumParams {
            grid_n: 1 << 12,
            stages: None,
            threshold: None,
            top_k: None,
            max_frequencies: 64,
            cross_check: false,
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ParsevalParams {
    pub thetas: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EigenParams {
    pub theta: f64,
    /// Offsets `s` of the sample points `s·x`.
    pub points: Vec<i64>,
    /// Shifts `t` on which `e(t·x) = ξ(t)·e(x)` is tested.
    pub shifts: Vec<i64>,
}

impl Default for EigenParams {
    fn default() -> Self {
        EigenParams {
            theta: 0.0,
            points: vec![0, 1, 2, 3, 4],
            shifts: vec![1, 2],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TaperName {
    None,
    Triangular,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DiffractParams {
    /// Comb weight per letter; defaults to the observable's values.
    pub weights: Option<Vec<f64>>,
    pub k_max: usize,
    /// Density grid size; defaults to `4·k_max`.
    pub m: Option<usize>,
    pub taper: TaperName,
    /// Frequencies at which atoms are estimated.
    pub atoms: Vec<f64>,
}

impl Default for DiffractParams {
    fn default() -> Self {
        DiffractParams {
            weights: None,
            k_max: 64,
            m: None,
            taper: TaperName::Triangular,
            atoms: vec![0.0],
        }
    }
}

pub fn parse(text: &str) -> Result<ExperimentConfig, ConfigError> {
    serde_json::from_str(text).map_err(|e| {
        let msg = e.to_string();
        let field = field_in_message(&msg).unwrap_or_else(|| "config".to_string());
        bad(field, msg)
    })
}

fn field_in_message(msg: &str) -> Option<String> {
    let start = msg.find('`')? + 1;
    let end = start + msg[start..].find('`')?;
    Some(msg[start..end].to_string())
}

fn parse_num<T: std::str::FromStr>(s: &str, field: &str) -> Result<T, ConfigError> {
    s.parse()
        .map_err(|_| bad(field, format!("cannot parse `{s}`")))
}

impl ExperimentConfig {
    pub fn build_point(&self) -> Result<PointGen, ConfigError> {
        let mut parts = self.point.split(':');
        let head = parts.next().unwrap_or_default();
        let rest: Vec<&str> = parts.collect();
        let arity = |n: std::ops::RangeInclusive<usize>| -> Result<(), ConfigError> {
            if n.contains(&rest.len()) {
                Ok(())
            } else {
                Err(bad("point", format!("wrong number of parameters for `{head}`")))
            }
        };
        let point = match head {
            "fibonacci" => {
                arity(0..=0)?;
                PointGen::fibonacci()
            }
            "thue-morse" => {
                arity(0..=0)?;
                PointGen::thue_morse()
            }
            "period-doubling" => {
                arity(0..=0)?;
                PointGen::period_doubling()
            }
            "step" => {
                arity(0..=0)?;
                PointGen::step()
            }
            "block" => {
                arity(0..=0)?;
                PointGen::block()
            }
            "periodic" => {
                arity(1..=1)?;
                PointGen::periodic(rest[0])?
            }
            "sturmian" => {
                arity(1..=2)?;
                let alpha = parse_num(rest[0], "alpha")?;
                let rho = rest.get(1).map(|r| parse_num(r, "rho")).transpose()?.unwrap_or(0.0);
                PointGen::sturmian(alpha, rho)?
            }
            "bernoulli" => {
                arity(2..=2)?;
                let p = parse_num(rest[0], "p")?;
                let seed = match self.seed {
                    Some(s) => s,
                    None => parse_num(rest[1], "seed")?,
                };
                PointGen::bernoulli(p, seed)?
            }
            other => return Err(bad("point", format!("unknown preset `{other}`"))),
        };
        Ok(point)
    }

    pub fn build_observable(&self, point: &PointGen) -> Result<Observable<f64>, ConfigError> {
        let k = point.alphabet_size();
        match &self.observable {
            ObservableSpec::Indicator { letter } => {
                let idx = if letter.is_empty() {
                    0
                } else {
                    point
                        .letter_index(letter)
                        .ok_or_else(|| bad("letter", format!("`{letter}` is not in the alphabet")))?
                };
                Ok(Observable::indicator(idx, k)?)
            }
            ObservableSpec::PlusMinus => Ok(Observable::plus_minus(k)?),
            ObservableSpec::Weights { weights } => Ok(Observable::letter_weights(
                "weights",
                self.letter_weights(weights, k, "weights")?,
            )?),
        }
    }

    pub fn letter_weights(&self, weights: &[f64], k: usize, field: &str) -> Result<Vec<Complex64>, ConfigError> {
        if weights.len() != k {
            return Err(bad(field, format!("need {k} weights, got {}", weights.len())));
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(bad(field, "weights must be finite"));
        }
        Ok(weights.iter().map(|&w| Complex64::new(w, 0.0)).collect())
    }

    pub fn build_schedule(&self) -> Result<FolnerSchedule, ConfigError> {
        let s = match self.schedule {
            ScheduleSpec::Intervals { base, n_max } => FolnerSchedule::intervals(base, n_max)?,
            ScheduleSpec::Symmetric { base, n_max } => FolnerSchedule::symmetric(base, n_max)?,
            ScheduleSpec::Dyadic { n_max } => FolnerSchedule::dyadic(n_max)?,
            ScheduleSpec::Alternating { n_max } => FolnerSchedule::alternating(n_max)?,
        };
        Ok(s)
    }
}
