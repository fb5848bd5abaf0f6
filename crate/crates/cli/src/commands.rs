//! Subcommand implementations. Each returns rows; `main` decides where the
//! rendered CSV goes.

use std::f64::consts::TAU;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use flexling::approx::{refine_study, ApproxStudyRow, Evaluator, StudyOptions};
use flexling::baseline::{cri_pipeline, mamdani, Grid};
use flexling::inference::{at_method, degree_inference, natural_inference, parallel_degree_inference, InferenceResult};
use flexling::rules::FlexibleRule;
use flexling::values::{Side, Universe};
use thiserror::Error;

use crate::config::{ConfigError, ExperimentConfig};
use crate::output::{error_plot_svg, fmt_num, PlotPoint};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Usage(String),
    #[error("no near-true conclusion")]
    NoConclusion,
    #[error(transparent)]
    Inference(#[from] flexling::Error),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: io::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(ConfigError::Io { .. }) => 4,
            CliError::Config(_) | CliError::Usage(_) => 2,
            CliError::NoConclusion | CliError::Inference(_) => 3,
            CliError::Io { .. } | CliError::Csv(_) => 4,
        }
    }
}

fn io_err(context: impl Into<String>) -> impl FnOnce(io::Error) -> CliError {
    let context = context.into();
    move |source| CliError::Io { context, source }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InferMethod {
    Natural,
    Degree,
    At,
    Parallel,
    Mamdani,
    Cri,
}

impl InferMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            InferMethod::Natural => "natural",
            InferMethod::Degree => "degree",
            InferMethod::At => "at",
            InferMethod::Parallel => "parallel",
            InferMethod::Mamdani => "mamdani",
            InferMethod::Cri => "cri",
        }
    }
}

pub const COMPARE_METHODS: [InferMethod; 4] = [
    InferMethod::Degree,
    InferMethod::At,
    InferMethod::Mamdani,
    InferMethod::Cri,
];

pub const RESULT_HEADER: [&str; 8] = [
    "x0",
    "method",
    "rule",
    "truth",
    "y",
    "side",
    "in_extended_core",
    "error",
];

/// One evaluated (x0, method) pair.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub x0: Vec<f64>,
    pub method: InferMethod,
    pub rule: String,
    pub truth: Option<f64>,
    pub y: Option<f64>,
    pub side: Option<Side>,
    pub in_extended_core: Option<bool>,
    pub error: Option<String>,
}

impl ResultRow {
    fn failed(x0: Vec<f64>, method: InferMethod, rule: &str, err: &CliError) -> Self {
        Self {
            x0,
            method,
            rule: rule.to_string(),
            truth: None,
            y: None,
            side: None,
            in_extended_core: None,
            error: Some(err.to_string()),
        }
    }

    fn record(&self) -> Vec<String> {
        let opt = |v: Option<f64>| v.map(fmt_num).unwrap_or_default();
        vec![
            self.x0.iter().map(|&x| fmt_num(x)).collect::<Vec<_>>().join(";"),
            self.method.as_str().to_string(),
            self.rule.clone(),
            opt(self.truth),
            opt(self.y),
            self.side.map(|s| s.as_str().to_string()).unwrap_or_default(),
            self.in_extended_core.map(|b| b.to_string()).unwrap_or_default(),
            self.error.clone().unwrap_or_default(),
        ]
    }
}

fn from_inference(x0: Vec<f64>, method: InferMethod, rule: &str, r: InferenceResult) -> ResultRow {
    ResultRow {
        in_extended_core: Some(r.contained()),
        x0,
        method,
        rule: rule.to_string(),
        truth: Some(r.truth.value()),
        y: r.numeric,
        side: Some(r.side),
        error: None,
    }
}

fn single(rules: &[FlexibleRule], method: InferMethod) -> Result<&FlexibleRule, CliError> {
    match rules {
        [r] => Ok(r),
        _ => Err(CliError::Usage(format!(
            "method {} takes exactly one rule",
            method.as_str()
        ))),
    }
}

fn scalar(x0: &[f64], method: InferMethod) -> Result<f64, CliError> {
    match x0 {
        [x] => Ok(*x),
        _ => Err(CliError::Usage(format!(
            "method {} takes a single x0",
            method.as_str()
        ))),
    }
}

/// Evaluates one method on the rules named by `rule_spec` (comma list).
pub fn infer_row(
    cfg: &ExperimentConfig,
    rule_spec: &str,
    x0: &[f64],
    method: InferMethod,
) -> Result<ResultRow, CliError> {
    let rules = cfg.rules_for(rule_spec)?;
    if rules.is_empty() {
        return Err(CliError::Usage("no rule given".into()));
    }
    let label = rules.iter().map(FlexibleRule::name).collect::<Vec<_>>().join("+");
    let xs = x0.to_vec();
    match method {
        InferMethod::Natural => {
            let rule = single(&rules, method)?;
            let (_, t) = natural_inference(rule, x0)?.ok_or(CliError::NoConclusion)?;
            Ok(ResultRow {
                x0: xs,
                method,
                rule: label,
                truth: Some(t.value()),
                y: None,
                side: None,
                in_extended_core: None,
                error: None,
            })
        }
        InferMethod::Degree => {
            let r = degree_inference(single(&rules, method)?, scalar(x0, method)?)?;
            Ok(from_inference(xs, method, &label, r))
        }
        InferMethod::At => {
            let r = at_method(single(&rules, method)?, scalar(x0, method)?)?;
            Ok(from_inference(xs, method, &label, r))
        }
        InferMethod::Parallel => {
            let r = parallel_degree_inference(&rules, scalar(x0, method)?)?;
            Ok(from_inference(xs, method, &label, r))
        }
        InferMethod::Mamdani | InferMethod::Cri => {
            let x = scalar(x0, method)?;
            let first = &rules[0];
            let y_grid = Grid::new(first.consequent().universe(), cfg.grid_points)?;
            let out = if method == InferMethod::Mamdani {
                mamdani(&rules, x, &y_grid)?
            } else {
                let x_grid = Grid::new(first.condition()?.universe(), cfg.grid_points)?;
                cri_pipeline(&rules, x, &x_grid, &y_grid)?
            };
            let lead = rules[out.lead_rule].consequent();
            Ok(ResultRow {
                x0: xs,
                method,
                rule: label,
                truth: Some(out.firing),
                y: Some(out.y),
                side: None,
                in_extended_core: Some(lead.in_extended_core(out.y)),
                error: None,
            })
        }
    }
}

/// Every x0 crossed with degree, at, mamdani and cri; failures are kept as
/// rows with an error message.
pub fn cmd_compare(
    cfg: &ExperimentConfig,
    rule_spec: &str,
    x0_list: &[f64],
) -> Result<Vec<ResultRow>, CliError> {
    // resolve up front so a bad rule name is a usage failure, not 4N error rows
    cfg.rules_for(rule_spec)?;
    let mut rows = Vec::with_capacity(x0_list.len() * COMPARE_METHODS.len());
    for &x in x0_list {
        for method in COMPARE_METHODS {
            let row = infer_row(cfg, rule_spec, &[x], method)
                .unwrap_or_else(|e| ResultRow::failed(vec![x], method, rule_spec, &e));
            rows.push(row);
        }
    }
    Ok(rows)
}

pub fn write_result_csv<W: Write>(rows: &[ResultRow], out: W) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(RESULT_HEADER)?;
    for row in rows {
        w.write_record(row.record())?;
    }
    w.flush().map_err(io_err("writing csv"))?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TargetFunction {
    Identity,
    Square,
    Sin,
}

impl TargetFunction {
    pub fn name(&self) -> &'static str {
        match self {
            TargetFunction::Identity => "identity",
            TargetFunction::Square => "square",
            TargetFunction::Sin => "sin",
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            TargetFunction::Identity => x,
            TargetFunction::Square => x * x,
            TargetFunction::Sin => x.sin(),
        }
    }

    /// Input and output universes the built-in function is studied on.
    pub fn domains(&self) -> (Universe, Universe) {
        let (xlo, xhi, ylo, yhi) = match self {
            TargetFunction::Identity => (0.0, 10.0, 0.0, 10.0),
            TargetFunction::Square => (0.0, 10.0, 0.0, 100.0),
            TargetFunction::Sin => (0.0, TAU, -1.0, 1.0),
        };
        (
            Universe::new("x", xlo, xhi).expect("static domain"),
            Universe::new("y", ylo, yhi).expect("static domain"),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EvaluatorTag {
    Interpolation,
    Parallel,
    At,
    Degree,
    Mamdani,
    Cri,
}

impl EvaluatorTag {
    pub fn evaluator(&self, grid_points: usize) -> Evaluator {
        match self {
            EvaluatorTag::Interpolation => Evaluator::Interpolation,
            EvaluatorTag::Parallel => Evaluator::Parallel,
            EvaluatorTag::At => Evaluator::At,
            EvaluatorTag::Degree => Evaluator::Degree,
            EvaluatorTag::Mamdani => Evaluator::Mamdani { grid_points },
            EvaluatorTag::Cri => Evaluator::Cri { grid_points },
        }
    }
}

pub fn cmd_approx(
    cfg: &ExperimentConfig,
    function: TargetFunction,
    schedule: &[usize],
    evaluator: EvaluatorTag,
    samples: usize,
) -> Result<Vec<ApproxStudyRow>, CliError> {
    let (xu, yu) = function.domains();
    let rows = refine_study(
        |x| function.eval(x),
        &xu,
        &yu,
        schedule,
        evaluator.evaluator(cfg.grid_points),
        StudyOptions {
            samples,
            seed: cfg.seed,
        },
    )?;
    Ok(rows)
}

pub const APPROX_HEADER: [&str; 5] = ["n_granules", "granule_size", "method", "sup_error", "mean_error"];

pub fn write_approx_csv<W: Write>(rows: &[ApproxStudyRow], out: W) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(APPROX_HEADER)?;
    for r in rows {
        w.write_record([
            r.n_granules.to_string(),
            fmt_num(r.granule_size),
            r.method.to_string(),
            fmt_num(r.sup_error),
            fmt_num(r.mean_error),
        ])?;
    }
    w.flush().map_err(io_err("writing csv"))?;
    Ok(())
}

pub fn approx_svg(title: &str, rows: &[ApproxStudyRow]) -> String {
    let points: Vec<PlotPoint> = rows
        .iter()
        .map(|r| PlotPoint {
            n: r.n_granules as f64,
            error: r.sup_error,
        })
        .collect();
    error_plot_svg(title, &points)
}

/// Renders an approx CSV (needs `n_granules` and `sup_error` columns).
pub fn report_svg(csv_path: &Path) -> Result<String, CliError> {
    let mut reader = csv::Reader::from_path(csv_path)?;
    let headers = reader.headers()?.clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| CliError::Usage(format!("{} has no `{name}` column", csv_path.display())))
    };
    let n_col = column("n_granules")?;
    let e_col = column("sup_error")?;
    let method_col = headers.iter().position(|h| h == "method");
    let mut points = Vec::new();
    let mut method = String::new();
    for record in reader.records() {
        let record = record?;
        let parse = |i: usize| {
            record[i]
                .parse::<f64>()
                .map_err(|e| CliError::Usage(format!("bad number `{}`: {e}", &record[i])))
        };
        points.push(PlotPoint {
            n: parse(n_col)?,
            error: parse(e_col)?,
        });
        if let Some(i) = method_col {
            method = record[i].to_string();
        }
    }
    let title = if method.is_empty() {
        "sup error vs granules".to_string()
    } else {
        format!("sup error vs granules ({method})")
    };
    Ok(error_plot_svg(&title, &points))
}

pub fn write_file(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io_err(format!("creating {}", dir.display())))?;
    }
    fs::write(path, contents).map_err(io_err(format!("writing {}", path.display())))
}

pub fn output_dir(cfg: &ExperimentConfig) -> PathBuf {
    cfg.outputs.clone().unwrap_or_else(|| PathBuf::from("out"))
}

/// Parses `"4,5.5,6"`.
pub fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>, String>
where
    T::Err: std::fmt::Display,
{
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| p.parse::<T>().map_err(|e| format!("`{p}`: {e}")))
        .collect::<Result<Vec<T>, String>>()
        .and_then(|v| {
            if v.is_empty() {
                Err("empty list".to_string())
            } else {
                Ok(v)
            }
        })
}
