//! Rulebases that summarize a target function, and the diagnostics used to
//! compare evaluators on them: approximation error under granule refinement,
//! extended-core containment, and the area each reading of a rule occupies.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::baseline::{cri_pipeline, mamdani, Grid};
use crate::inference::{
    at_method, degree_inference, parallel_degree_inference, strongest_rule, PeakInterpolant,
};
use crate::rules::{FlexibleRule, Polarity};
use crate::values::{FlexiblePartition, FlexibleValue, Interval, Universe};
use crate::{Error, Result, TOLERANCE};

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_SAMPLES: usize = 10_000;
pub const DEFAULT_GRID_POINTS: usize = 201;

/// Floor on consequent half-widths so flat stretches still get a valid value.
pub const MIN_HALF_WIDTH: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct RuleBase {
    pub rules: Vec<FlexibleRule>,
    pub partition: FlexiblePartition,
}

/// Granulates `f` with `n` triangles on `x_universe`. Rule `i` maps the
/// `i`-th granule to a triangle peaked at `f(peak_i)` whose half-width is the
/// larger jump to a neighbouring sample.
pub fn build_rulebase_from_function<F>(
    f: F,
    x_universe: &Universe,
    y_universe: &Universe,
    n: usize,
) -> Result<RuleBase>
where
    F: Fn(f64) -> f64,
{
    let partition = FlexiblePartition::triangular(x_universe.name(), x_universe, n)?;
    let peaks = partition.peaks();
    let etas = peaks
        .iter()
        .map(|&x| {
            let y = f(x);
            if !y.is_finite() {
                return Err(Error::NonFiniteSample(x));
            }
            if !y_universe.contains(y) {
                return Err(Error::OutOfUniverse {
                    what: format!("f({x})"),
                    x: y,
                    universe: y_universe.name().to_string(),
                });
            }
            Ok(y)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut rules = Vec::with_capacity(n);
    for (i, a) in partition.values().iter().enumerate() {
        let eta = etas[i];
        let prev = i.checked_sub(1).map(|j| etas[j]);
        let next = etas.get(i + 1).copied();
        let d = [prev, next]
            .into_iter()
            .flatten()
            .map(|nb| (eta - nb).abs())
            .fold(MIN_HALF_WIDTH, f64::max);
        let b = FlexibleValue::triangle(
            format!("{}_{}", y_universe.name(), i + 1),
            y_universe,
            (eta - d).max(y_universe.lo()),
            eta,
            (eta + d).min(y_universe.hi()),
        )?;
        let secant = next.unwrap_or(eta) - prev.unwrap_or(eta);
        let polarity = if secant < 0.0 {
            Polarity::Decreasing
        } else {
            Polarity::Increasing
        };
        rules.push(FlexibleRule::single(format!("r{}", i + 1), a.clone(), b, polarity));
    }
    Ok(RuleBase { rules, partition })
}

/// How a rulebase is turned into a numeric function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Evaluator {
    Interpolation,
    Parallel,
    /// AT method on the strongest rule.
    At,
    /// Degree-level modus ponens on the strongest rule.
    Degree,
    Mamdani { grid_points: usize },
    Cri { grid_points: usize },
}

impl Evaluator {
    pub fn tag(&self) -> &'static str {
        match self {
            Evaluator::Interpolation => "interpolation",
            Evaluator::Parallel => "parallel",
            Evaluator::At => "at",
            Evaluator::Degree => "degree",
            Evaluator::Mamdani { .. } => "mamdani",
            Evaluator::Cri { .. } => "cri",
        }
    }

    pub fn parse(tag: &str, grid_points: usize) -> Option<Self> {
        Some(match tag {
            "interpolation" => Evaluator::Interpolation,
            "parallel" => Evaluator::Parallel,
            "at" => Evaluator::At,
            "degree" => Evaluator::Degree,
            "mamdani" => Evaluator::Mamdani { grid_points },
            "cri" => Evaluator::Cri { grid_points },
            _ => return None,
        })
    }

    fn prepare<'a>(&self, rules: &'a [FlexibleRule]) -> Result<Prepared<'a>> {
        let first = rules.first().ok_or(Error::EmptyRulebase)?;
        let mut prepared = Prepared {
            evaluator: *self,
            rules,
            interpolant: None,
            x_grid: None,
            y_grid: None,
        };
        match *self {
            Evaluator::Interpolation => {
                prepared.interpolant = Some(PeakInterpolant::from_rules(rules)?)
            }
            Evaluator::Mamdani { grid_points } => {
                prepared.y_grid = Some(Grid::new(first.consequent().universe(), grid_points)?)
            }
            Evaluator::Cri { grid_points } => {
                prepared.x_grid = Some(Grid::new(first.condition()?.universe(), grid_points)?);
                prepared.y_grid = Some(Grid::new(first.consequent().universe(), grid_points)?);
            }
            _ => {}
        }
        Ok(prepared)
    }
}

struct Prepared<'a> {
    evaluator: Evaluator,
    rules: &'a [FlexibleRule],
    interpolant: Option<PeakInterpolant>,
    x_grid: Option<Grid>,
    y_grid: Option<Grid>,
}

impl Prepared<'_> {
    fn eval(&self, x: f64) -> Result<f64> {
        let numeric = |r: crate::inference::InferenceResult| {
            r.numeric.expect("numeric inference path")
        };
        match self.evaluator {
            Evaluator::Interpolation => self.interpolant.as_ref().unwrap().eval(x),
            Evaluator::Parallel => parallel_degree_inference(self.rules, x).map(numeric),
            Evaluator::At => {
                let (i, _) = strongest_rule(self.rules, x)?;
                at_method(&self.rules[i], x).map(numeric)
            }
            Evaluator::Degree => {
                let (i, _) = strongest_rule(self.rules, x)?;
                degree_inference(&self.rules[i], x).map(numeric)
            }
            Evaluator::Mamdani { .. } => {
                mamdani(self.rules, x, self.y_grid.as_ref().unwrap()).map(|o| o.y)
            }
            Evaluator::Cri { .. } => cri_pipeline(
                self.rules,
                x,
                self.x_grid.as_ref().unwrap(),
                self.y_grid.as_ref().unwrap(),
            )
            .map(|o| o.y),
        }
    }
}

/// Evaluates a rulebase at one point.
pub fn evaluate(evaluator: Evaluator, rules: &[FlexibleRule], x: f64) -> Result<f64> {
    evaluator.prepare(rules)?.eval(x)
}

/// Span of antecedent peaks: the range on which every evaluator is defined.
fn peak_span(rules: &[FlexibleRule]) -> Result<(f64, f64)> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for r in rules {
        let p = r.condition()?.peak();
        lo = lo.min(p);
        hi = hi.max(p);
    }
    if rules.is_empty() {
        return Err(Error::EmptyRulebase);
    }
    Ok((lo, hi))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorStats {
    pub sup: f64,
    pub mean: f64,
}

/// Max and mean of `|evaluator(x) - f(x)|` over `samples` seeded uniform
/// draws from the antecedent peak span.
pub fn sup_error<F>(
    evaluator: Evaluator,
    rules: &[FlexibleRule],
    f: F,
    samples: usize,
    seed: u64,
) -> Result<ErrorStats>
where
    F: Fn(f64) -> f64,
{
    if samples == 0 {
        return Err(Error::NoSamples);
    }
    let prepared = evaluator.prepare(rules)?;
    let (lo, hi) = peak_span(rules)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sup = 0.0f64;
    let mut sum = 0.0;
    for _ in 0..samples {
        let x = rng.gen_range(lo..=hi);
        let y = prepared.eval(x).map_err(|e| Error::EvaluatorFailure {
            x,
            source: Box::new(e),
        })?;
        let err = (y - f(x)).abs();
        sup = sup.max(err);
        sum += err;
    }
    Ok(ErrorStats {
        sup,
        mean: sum / samples as f64,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ApproxStudyRow {
    pub n_granules: usize,
    pub granule_size: f64,
    pub method: &'static str,
    pub sup_error: f64,
    pub mean_error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StudyOptions {
    pub samples: usize,
    pub seed: u64,
}

impl Default for StudyOptions {
    fn default() -> Self {
        Self {
            samples: DEFAULT_SAMPLES,
            seed: DEFAULT_SEED,
        }
    }
}

/// One error row per granule count in `schedule` (strictly increasing).
pub fn refine_study<F>(
    f: F,
    x_universe: &Universe,
    y_universe: &Universe,
    schedule: &[usize],
    evaluator: Evaluator,
    options: StudyOptions,
) -> Result<Vec<ApproxStudyRow>>
where
    F: Fn(f64) -> f64,
{
    if schedule.is_empty() || schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::BadSchedule);
    }
    schedule
        .iter()
        .map(|&n| {
            let rb = build_rulebase_from_function(&f, x_universe, y_universe, n)?;
            let stats = sup_error(evaluator, &rb.rules, &f, options.samples, options.seed)?;
            Ok(ApproxStudyRow {
                n_granules: n,
                granule_size: x_universe.width() / (n - 1) as f64,
                method: evaluator.tag(),
                sup_error: stats.sup,
                mean_error: stats.mean,
            })
        })
        .collect()
}

/// Outcome of one containment probe.
#[derive(Debug, Clone, PartialEq)]
pub struct ContainmentProbe {
    pub x: f64,
    pub y: Option<f64>,
    pub lead_rule: usize,
    pub contained: bool,
}

/// Evaluates at `x` and checks whether the output lands in the extended core
/// of the strongest rule's consequent. Evaluation errors count as escapes.
pub fn containment_probe(
    evaluator: Evaluator,
    rules: &[FlexibleRule],
    x: f64,
) -> Result<ContainmentProbe> {
    let (lead_rule, _) = strongest_rule(rules, x)?;
    let y = evaluate(evaluator, rules, x).ok();
    let contained = y.is_some_and(|y| {
        rules[lead_rule].consequent().consistency(y) >= 0.5 - TOLERANCE
    });
    Ok(ContainmentProbe {
        x,
        y,
        lead_rule,
        contained,
    })
}

/// Fraction of seeded draws whose output lands in the extended core of the
/// strongest rule's consequent. Inputs are drawn by picking a rule uniformly
/// and then a point uniformly in its antecedent's extended core.
pub fn containment_rate(
    evaluator: Evaluator,
    rules: &[FlexibleRule],
    samples: usize,
    seed: u64,
) -> Result<f64> {
    if samples == 0 {
        return Err(Error::NoSamples);
    }
    let prepared = evaluator.prepare(rules)?;
    let cores = rules
        .iter()
        .map(|r| r.condition().map(FlexibleValue::extended_core))
        .collect::<Result<Vec<Interval>>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0usize;
    for _ in 0..samples {
        let core = cores[rng.gen_range(0..cores.len())];
        let x = rng.gen_range(core.lo..=core.hi);
        let (lead, _) = strongest_rule(rules, x)?;
        if let Ok(y) = prepared.eval(x) {
            if rules[lead].consequent().consistency(y) >= 0.5 - TOLERANCE {
                hits += 1;
            }
        }
    }
    Ok(hits as f64 / samples as f64)
}

/// Areas (x-units × y-units) of the regions a single rule occupies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceReport {
    pub area_support_product: f64,
    pub area_extcore_product: f64,
    /// Crisp reading of `(complement(A) × V) ∪ (U × B)` using supports.
    pub area_implication_region: f64,
}

pub fn space_report(rule: &FlexibleRule) -> Result<SpaceReport> {
    let a = rule.condition()?;
    let b = rule.consequent();
    let (u, v) = (a.universe().width(), b.universe().width());
    let (sa, sb) = (a.support().width(), b.support().width());
    let outside_a = u - sa;
    Ok(SpaceReport {
        area_support_product: sa * sb,
        area_extcore_product: a.extended_core().width() * b.extended_core().width(),
        area_implication_region: outside_a * v + u * sb - outside_a * sb,
    })
}
