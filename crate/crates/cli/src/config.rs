//! Experiment configuration files.
//!
//! Scalars are strings: `"p"`, `"p/q"`, or `"random"`, which draws a rational
//! from the seeded generator. Every field is validated before any
//! computation starts and errors name the offending field.

use std::path::Path;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use whittaker_core::module::ModuleParams;
use whittaker_core::report::ParamsDoc;
use whittaker_core::scalar::parse_rational;
use whittaker_core::solver::{Truncation, DEFAULT_WINDOW};
use whittaker_core::{Rational, RootSystem, Scalar};

use crate::error::CliError;

pub const CONFIG_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSpec {
    #[serde(rename = "type")]
    pub cartan_type: String,
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruncationSpec {
    pub depth: usize,
    pub factor: usize,
    #[serde(default = "default_window")]
    pub window: usize,
}

fn default_window() -> usize {
    DEFAULT_WINDOW
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub format: Option<Format>,
    pub path: Option<String>,
}

/// One grid axis: explicit values, or an inclusive arithmetic range.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AxisSpec {
    Values(Vec<String>),
    Range { from: String, to: String, step: String },
}

/// Grid over the parameters of one family; one axis per scalar parameter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", deny_unknown_fields)]
pub enum GridSpec {
    #[serde(rename = "verma")]
    Verma { lambda: Vec<AxisSpec> },
    #[serde(rename = "mcdowell")]
    McDowell {
        centre_weight: Vec<AxisSpec>,
        casimir: Vec<AxisSpec>,
    },
    #[serde(rename = "universal_sl2")]
    UniversalSl2 { casimir: AxisSpec },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceSpec {
    pub label: String,
    pub system: SystemSpec,
    pub psi: Vec<String>,
    pub module: ParamsDoc,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub schema_version: u32,
    pub system: Option<SystemSpec>,
    pub psi: Option<Vec<String>>,
    pub module: Option<ParamsDoc>,
    pub grid: Option<GridSpec>,
    pub instances: Option<Vec<InstanceSpec>>,
    pub truncation: Option<TruncationSpec>,
    pub seed: Option<u64>,
    pub output: Option<OutputSpec>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        let config: Config = serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))?;
        if config.schema_version != CONFIG_SCHEMA_VERSION {
            return Err(CliError::Usage(format!(
                "schema_version: expected {CONFIG_SCHEMA_VERSION}, got {}",
                config.schema_version
            )));
        }
        Ok(config)
    }

    pub fn require_system(&self) -> Result<RootSystem, CliError> {
        let spec = self.system.as_ref().ok_or_else(|| missing("system"))?;
        spec.build()
    }

    /// Truncation from the config, overridden by command-line bounds.
    pub fn truncation(&self, depth: Option<usize>, factor: Option<usize>) -> Result<Truncation, CliError> {
        let base = self.truncation.as_ref();
        let depth = depth.or(base.map(|t| t.depth)).ok_or_else(|| missing("truncation.depth"))?;
        let factor = factor.or(base.map(|t| t.factor)).ok_or_else(|| missing("truncation.factor"))?;
        let window = base.map_or(DEFAULT_WINDOW, |t| t.window);
        Ok(Truncation::new(depth, factor).with_window(window))
    }
}

impl SystemSpec {
    pub fn build(&self) -> Result<RootSystem, CliError> {
        RootSystem::from_label(&self.cartan_type, self.rank).map_err(|e| CliError::Usage(format!("system: {e}")))
    }
}

pub fn missing(field: &str) -> CliError {
    CliError::Usage(format!("{field}: missing"))
}

/// Source of `"random"` values.
pub struct Draws {
    rng: ChaCha8Rng,
}

impl Draws {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// A rational with numerator in `[-97, 97]` and denominator in `[1, 13]`.
    pub fn rational(&mut self) -> Rational {
        let n = self.rng.gen_range(-97i64..=97);
        let d = self.rng.gen_range(1i64..=13);
        Rational::from_ratio(n, d)
    }

    pub fn scalar(&mut self, text: &str, field: &str) -> Result<Rational, CliError> {
        if text.trim() == "random" {
            return Ok(self.rational());
        }
        parse_rational(text).map_err(|e| CliError::Usage(format!("{field}: {e}")))
    }

    pub fn scalars(&mut self, texts: &[String], field: &str) -> Result<Vec<Rational>, CliError> {
        texts
            .iter()
            .enumerate()
            .map(|(i, t)| self.scalar(t, &format!("{field}[{i}]")))
            .collect()
    }

    /// Resolves `"random"` entries, returning concrete parameters.
    pub fn params(&mut self, doc: &ParamsDoc, field: &str) -> Result<ModuleParams<Rational>, CliError> {
        Ok(match doc {
            ParamsDoc::Verma { lambda } => ModuleParams::Verma {
                lambda: self.scalars(lambda, &format!("{field}.lambda"))?,
            },
            ParamsDoc::McDowell { centre_weight, casimir } => ModuleParams::McDowell {
                centre_weight: self.scalars(centre_weight, &format!("{field}.centre_weight"))?,
                casimir: self.scalars(casimir, &format!("{field}.casimir"))?,
            },
            ParamsDoc::UniversalSl2 { casimir } => ModuleParams::UniversalSl2 {
                casimir: self.scalar(casimir, &format!("{field}.casimir"))?,
            },
            ParamsDoc::DirectSum { summands } => ModuleParams::DirectSum(
                summands
                    .iter()
                    .enumerate()
                    .map(|(i, s)| self.params(s, &format!("{field}.summands[{i}]")))
                    .collect::<Result<_, _>>()?,
            ),
        })
    }
}

impl AxisSpec {
    pub fn values(&self, draws: &mut Draws, field: &str) -> Result<Vec<Rational>, CliError> {
        match self {
            Self::Values(v) => draws.scalars(v, field),
            Self::Range { from, to, step } => {
                let from = draws.scalar(from, &format!("{field}.from"))?;
                let to = draws.scalar(to, &format!("{field}.to"))?;
                let step = draws.scalar(step, &format!("{field}.step"))?;
                if step <= Rational::from_i64(0) {
                    return Err(CliError::Usage(format!("{field}.step: must be positive")));
                }
                let mut out = Vec::new();
                let mut x = from;
                while x <= to {
                    out.push(x.clone());
                    x += &step;
                }
                Ok(out)
            }
        }
    }
}

/// Axis names and values of a grid, in column order.
pub fn grid_axes(grid: &GridSpec, draws: &mut Draws) -> Result<Vec<(String, Vec<Rational>)>, CliError> {
    let mut axes = Vec::new();
    let mut push = |name: &str, specs: &[AxisSpec], draws: &mut Draws| -> Result<(), CliError> {
        for (i, a) in specs.iter().enumerate() {
            let label = format!("{name}[{i}]");
            axes.push((label.clone(), a.values(draws, &format!("grid.{label}"))?));
        }
        Ok(())
    };
    match grid {
        GridSpec::Verma { lambda } => push("lambda", lambda, draws)?,
        GridSpec::McDowell { centre_weight, casimir } => {
            push("centre_weight", centre_weight, draws)?;
            push("casimir", casimir, draws)?;
        }
        GridSpec::UniversalSl2 { casimir } => push("casimir", std::slice::from_ref(casimir), draws)?,
    }
    Ok(axes)
}

/// Module parameters at one grid point.
pub fn grid_params(grid: &GridSpec, coords: &[Rational]) -> ModuleParams<Rational> {
    match grid {
        GridSpec::Verma { lambda } => ModuleParams::Verma {
            lambda: coords[..lambda.len()].to_vec(),
        },
        GridSpec::McDowell { centre_weight, .. } => {
            let k = centre_weight.len();
            ModuleParams::McDowell {
                centre_weight: coords[..k].to_vec(),
                casimir: coords[k..].to_vec(),
            }
        }
        GridSpec::UniversalSl2 { .. } => ModuleParams::UniversalSl2 {
            casimir: coords[0].clone(),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_are_inclusive() {
        let mut d = Draws::new(0);
        let axis = AxisSpec::Range {
            from: "0".into(),
            to: "1".into(),
            step: "1/2".into(),
        };
        let v: Vec<String> = axis.values(&mut d, "x").unwrap().iter().map(|q| q.to_string()).collect();
        assert_eq!(v, ["0", "1/2", "1"]);
    }

    #[test]
    fn random_draws_are_seeded() {
        let a: Vec<Rational> = (0..5).map(|_| Draws::new(9).rational()).collect();
        assert!(a.windows(2).all(|w| w[0] == w[1]));
        let mut d = Draws::new(9);
        assert_eq!(d.scalar("random", "x").unwrap(), a[0]);
        assert!(d.scalar("0.5", "x").is_err());
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let text = r#"{"schema_version": 1, "sytem": {"type": "A", "rank": 1}}"#;
        assert!(serde_json::from_str::<Config>(text).is_err());
    }
}
