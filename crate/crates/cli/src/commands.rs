use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use whittaker_core::cache::{self, LoadOutcome};
use whittaker_core::length::{default_suite, length_bound_check, LengthReport, RowStatus};
use whittaker_core::module::ModulePresentation;
use whittaker_core::pbw::Uea;
use whittaker_core::report::{vector_terms, ReportDocument, TermDoc};
use whittaker_core::solver::{certify_simplicity, Truncation, Verdict};
use whittaker_core::sweep::{grid, sweep};
use whittaker_core::{QCharacter, Rational, RootSystem, Scalar};

use crate::config::{grid_axes, grid_params, missing, Config, Draws, Format, GridSpec, SystemSpec};
use crate::error::CliError;
use crate::output::{csv_bytes, emit};

/// Options shared by the computing commands.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct RunArgs {
    /// Experiment configuration (JSON).
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Report destination; stdout if omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Overrides the truncation depth bound D.
    #[arg(long)]
    pub depth: Option<usize>,
    /// Overrides the per-factor f-degree bound K.
    #[arg(long = "factor-deg")]
    pub factor_deg: Option<usize>,
    /// Seed for `"random"` parameter values.
    #[arg(long)]
    pub seed: Option<u64>,
}

impl RunArgs {
    fn load(&self) -> Result<Config, CliError> {
        let path = self.config.as_ref().ok_or_else(|| CliError::Usage("--config is required".into()))?;
        Config::load(path)
    }

    fn out(&self, config: &Config) -> Option<PathBuf> {
        self.out.clone().or_else(|| {
            config
                .output
                .as_ref()
                .and_then(|o| o.path.as_ref())
                .map(PathBuf::from)
        })
    }

    fn format(&self, config: Option<&Config>, default: Format) -> Format {
        self.format
            .or_else(|| config.and_then(|c| c.output.as_ref()).and_then(|o| o.format))
            .unwrap_or(default)
    }

    fn draws(&self, config: &Config) -> Draws {
        Draws::new(self.seed.or(config.seed).unwrap_or(0))
    }
}

/// Straightening engines with their on-disk caches.
pub struct Engines {
    dir: Option<PathBuf>,
    by_label: BTreeMap<String, Arc<Uea>>,
}

impl Engines {
    pub fn new(dir: Option<PathBuf>) -> Self {
        Self {
            dir,
            by_label: BTreeMap::new(),
        }
    }

    pub fn get(&mut self, system: RootSystem) -> Result<Arc<Uea>, CliError> {
        let label = system.label();
        if let Some(u) = self.by_label.get(&label) {
            return Ok(u.clone());
        }
        let uea = Uea::new(Arc::new(system));
        if let Some(dir) = &self.dir {
            let path = cache::cache_path(dir, &uea);
            if cache::load(&uea, &path)? == LoadOutcome::Stale {
                eprintln!("note: ignoring stale cache {}", path.display());
            }
        }
        self.by_label.insert(label, uea.clone());
        Ok(uea)
    }

    pub fn save(&self) -> Result<(), CliError> {
        if let Some(dir) = &self.dir {
            for uea in self.by_label.values() {
                cache::save(uea, &cache::cache_path(dir, uea))?;
            }
        }
        Ok(())
    }
}

fn character(draws: &mut Draws, psi: Option<&Vec<String>>, rank: usize, field: &str) -> Result<QCharacter, CliError> {
    let values = draws.scalars(psi.ok_or_else(|| missing(field))?, field)?;
    if values.len() != rank {
        return Err(CliError::Usage(format!(
            "{field}: expected {rank} values, one per simple root, got {}",
            values.len()
        )));
    }
    Ok(QCharacter::new(values))
}

pub fn roots(cartan_type: &str, rank: usize, out: Option<&Path>) -> Result<(), CliError> {
    let sys = RootSystem::from_label(cartan_type, rank)?;
    let mut text = serde_json::to_string_pretty(&sys.to_document()).map_err(|e| CliError::Failure(e.to_string()))?;
    text.push('\n');
    let summary = format!("{} positive_roots={}", sys.label(), sys.num_positive_roots());
    emit(out, text.as_bytes(), &summary)
}

pub fn certify(args: &RunArgs, engines: &mut Engines) -> Result<(), CliError> {
    let config = args.load()?;
    let system = config.require_system()?;
    let rank = system.rank();
    let label = system.label();
    let mut draws = args.draws(&config);
    let psi = character(&mut draws, config.psi.as_ref(), rank, "psi")?;
    let params = draws.params(config.module.as_ref().ok_or_else(|| missing("module"))?, "module")?;
    let t = config.truncation(args.depth, args.factor_deg)?;
    let uea = engines.get(system)?;
    let p = ModulePresentation::build(&uea, psi, params).map_err(|e| CliError::Usage(format!("module: {e}")))?;
    let report = certify_simplicity(&p, &t)?;
    engines.save()?;
    let doc = ReportDocument::new(&p, &report);
    let summary = format!(
        "{} dim={} depth={} factor={} stabilized={}",
        report.verdict, report.dim_lower_bound, t.depth, t.factor, report.stabilized
    );
    let bytes = match args.format(Some(&config), Format::Json) {
        Format::Json => doc.to_json()?.into_bytes(),
        Format::Csv => csv_bytes(
            &["system", "family", "dim", "verdict", "stabilized", "depth", "factor"].map(String::from),
            &[vec![
                label,
                p.family().to_string(),
                report.dim_lower_bound.to_string(),
                report.verdict.to_string(),
                report.stabilized.to_string(),
                t.depth.to_string(),
                t.factor.to_string(),
            ]],
        )?,
    };
    emit(args.out(&config).as_deref(), &bytes, &summary)
}

pub const SWEEP_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRowDoc {
    pub params: Vec<String>,
    pub dim: Option<usize>,
    pub verdict: Option<Verdict>,
    pub stabilized: Option<bool>,
    pub witnesses: Vec<Vec<TermDoc>>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepDocument {
    pub schema_version: u32,
    pub system: String,
    pub psi: Vec<String>,
    pub family: String,
    pub truncation: Truncation,
    pub columns: Vec<String>,
    pub rows: Vec<SweepRowDoc>,
    /// Grid points with at least two independent Whittaker vectors.
    pub locus: Vec<Vec<String>>,
}

/// Returns whether every row completed.
pub fn sweep_cmd(args: &RunArgs, engines: &mut Engines) -> Result<bool, CliError> {
    let config = args.load()?;
    let system = config.require_system()?;
    let rank = system.rank();
    let label = system.label();
    let mut draws = args.draws(&config);
    let psi = character(&mut draws, config.psi.as_ref(), rank, "psi")?;
    let grid_spec: &GridSpec = config.grid.as_ref().ok_or_else(|| missing("grid"))?;
    let axes = grid_axes(grid_spec, &mut draws)?;
    let t = config.truncation(args.depth, args.factor_deg)?;
    let uea = engines.get(system)?;

    // validate the shape of the parameters once, before the sweep
    let probe: Vec<Rational> = axes.iter().map(|_| Rational::from_i64(0)).collect();
    ModulePresentation::build(&uea, psi.clone(), grid_params(grid_spec, &probe))
        .map_err(|e| CliError::Usage(format!("grid: {e}")))?;

    let columns: Vec<String> = axes.iter().map(|(n, _)| n.clone()).collect();
    let values: Vec<Vec<Rational>> = axes.into_iter().map(|(_, v)| v).collect();
    let result = sweep(&uea, &psi, grid(&values), |c| Ok(grid_params(grid_spec, c)), &t);
    engines.save()?;

    let rows: Vec<SweepRowDoc> = result
        .rows
        .iter()
        .map(|row| {
            let params: Vec<String> = row.coords.iter().map(Scalar::to_exact_string).collect();
            match &row.outcome {
                Ok(rep) => {
                    let p = ModulePresentation::build(&uea, psi.clone(), grid_params(grid_spec, &row.coords))
                        .expect("built once already");
                    SweepRowDoc {
                        params,
                        dim: Some(rep.dim_lower_bound),
                        verdict: Some(rep.verdict),
                        stabilized: Some(rep.stabilized),
                        witnesses: rep.witnesses.iter().map(|w| vector_terms(&p, w)).collect(),
                        error: None,
                    }
                }
                Err(e) => SweepRowDoc {
                    params,
                    dim: None,
                    verdict: None,
                    stabilized: None,
                    witnesses: Vec::new(),
                    error: Some(e.clone()),
                },
            }
        })
        .collect();
    let locus: Vec<Vec<String>> = rows
        .iter()
        .filter(|r| r.dim.is_some_and(|d| d >= 2))
        .map(|r| r.params.clone())
        .collect();
    let errors = rows.iter().filter(|r| r.error.is_some()).count();
    let summary = format!("rows={} errors={} locus={}", rows.len(), errors, locus.len());
    let family = match grid_spec {
        GridSpec::Verma { .. } => "verma",
        GridSpec::McDowell { .. } => "mcdowell",
        GridSpec::UniversalSl2 { .. } => "universal_sl2",
    };

    let bytes = match args.format(Some(&config), Format::Csv) {
        Format::Csv => {
            let mut header = columns.clone();
            header.extend(["dim", "verdict", "stabilized", "error"].map(String::from));
            let table: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    let mut line = r.params.clone();
                    line.push(r.dim.map(|d| d.to_string()).unwrap_or_default());
                    line.push(r.verdict.map(|v| v.to_string()).unwrap_or_default());
                    line.push(r.stabilized.map(|s| s.to_string()).unwrap_or_default());
                    line.push(r.error.clone().unwrap_or_default());
                    line
                })
                .collect();
            csv_bytes(&header, &table)?
        }
        Format::Json => {
            let doc = SweepDocument {
                schema_version: SWEEP_SCHEMA_VERSION,
                system: label,
                psi: psi.values().iter().map(Scalar::to_exact_string).collect(),
                family: family.to_string(),
                truncation: t,
                columns,
                rows,
                locus,
            };
            let mut s = serde_json::to_string_pretty(&doc).map_err(|e| CliError::Failure(e.to_string()))?;
            s.push('\n');
            s.into_bytes()
        }
    };
    emit(args.out(&config).as_deref(), &bytes, &summary)?;
    Ok(errors == 0)
}

pub const COROLLARY_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorollaryDocument {
    pub schema_version: u32,
    pub truncation: Truncation,
    #[serde(flatten)]
    pub report: LengthReport,
}

/// Returns whether the inequality held on every judged row.
pub fn corollary(args: &RunArgs, engines: &mut Engines) -> Result<bool, CliError> {
    let config = match &args.config {
        Some(p) => Some(Config::load(p)?),
        None => None,
    };
    let t = match &config {
        Some(c) if c.truncation.is_some() => c.truncation(args.depth, args.factor_deg)?,
        _ => Truncation::new(args.depth.unwrap_or(12), args.factor_deg.unwrap_or(12)),
    };
    let instances = match config.as_ref().and_then(|c| c.instances.as_ref()) {
        Some(specs) => {
            let mut draws = args.draws(config.as_ref().unwrap());
            let mut out = Vec::with_capacity(specs.len());
            for (i, spec) in specs.iter().enumerate() {
                let field = format!("instances[{i}]");
                let system = spec.system.build().map_err(|e| CliError::Usage(format!("{field}.{e}")))?;
                let rank = system.rank();
                let uea = engines.get(system)?;
                let psi = character(&mut draws, Some(&spec.psi), rank, &format!("{field}.psi"))?;
                let params = draws.params(&spec.module, &format!("{field}.module"))?;
                let p = ModulePresentation::build(&uea, psi, params).map_err(|e| CliError::Usage(format!("{field}: {e}")))?;
                out.push((spec.label.clone(), p));
            }
            out
        }
        None => {
            let uea = engines.get(SystemSpec { cartan_type: "A".into(), rank: 1 }.build()?)?;
            default_suite(&uea)?
        }
    };
    let report = length_bound_check(&instances, &t);
    engines.save()?;

    let mut summary = String::new();
    for r in &report.rows {
        let line = match r.status {
            RowStatus::Skipped => format!("{}: SKIPPED ({})", r.label, r.note.clone().unwrap_or_default()),
            status => format!(
                "{}: {} <= {} {}{}",
                r.label,
                r.dim.map_or("?".into(), |d| d.to_string()),
                r.length.map_or("?".into(), |l| l.to_string()),
                if status == RowStatus::Pass { "PASS" } else { "FAIL" },
                match (&r.note, r.equality) {
                    (Some(n), _) => format!(" ({n})"),
                    (None, true) => " (equality)".into(),
                    _ => String::new(),
                }
            ),
        };
        summary.push_str(&line);
        summary.push('\n');
    }
    summary.push_str(&format!(
        "rows={} equality={} violations={}",
        report.rows.len(),
        report.equality_rows,
        report.violations
    ));

    let passed = report.passed();
    let bytes = match args.format(config.as_ref(), Format::Json) {
        Format::Json => {
            let doc = CorollaryDocument {
                schema_version: COROLLARY_SCHEMA_VERSION,
                truncation: t,
                report,
            };
            let mut s = serde_json::to_string_pretty(&doc).map_err(|e| CliError::Failure(e.to_string()))?;
            s.push('\n');
            s.into_bytes()
        }
        Format::Csv => csv_bytes(
            &["label", "dim", "length", "status", "equality", "note"].map(String::from),
            &report
                .rows
                .iter()
                .map(|r| {
                    vec![
                        r.label.clone(),
                        r.dim.map(|d| d.to_string()).unwrap_or_default(),
                        r.length.map(|d| d.to_string()).unwrap_or_default(),
                        serde_json::to_value(r.status).unwrap().as_str().unwrap().to_string(),
                        r.equality.to_string(),
                        r.note.clone().unwrap_or_default(),
                    ]
                })
                .collect::<Vec<_>>(),
        )?,
    };
    let out = args.out.clone().or_else(|| config.as_ref().and_then(|c| args.out(c)));
    emit(out.as_deref(), &bytes, &summary)?;
    Ok(passed)
}

pub fn cache_stats(dir: &Path) -> Result<(), CliError> {
    let files = cache::cache_files(dir)?;
    let mut summaries = Vec::with_capacity(files.len());
    for f in &files {
        match cache::summarize(f) {
            Ok(s) => summaries.push(s),
            Err(e) => eprintln!("note: unreadable cache file {}: {e}", f.display()),
        }
    }
    let mut text = serde_json::to_string_pretty(&summaries).map_err(|e| CliError::Failure(e.to_string()))?;
    text.push('\n');
    let total: usize = summaries.iter().map(|s| s.entries).sum();
    emit(None, text.as_bytes(), &format!("files={} entries={total}", summaries.len()))
}

pub fn cache_clear(dir: &Path) -> Result<(), CliError> {
    let files = cache::cache_files(dir)?;
    for f in &files {
        std::fs::remove_file(f)?;
    }
    println!("removed {} cache files from {}", files.len(), dir.display());
    Ok(())
}
