//! Near-true inference paths and their numeric evaluation.
//!
//! - [`natural_inference`]: modus ponens that fires only on a near-true premise.
//! - [`degree_inference`]: degree-level modus ponens; the premise degree and
//!   the orientation of `x0` relative to the antecedent peak pick a point on
//!   the consequent through [`ln_conversion`].
//! - [`at_method`]: direct evaluation through the rule's adjoint maps.
//! - [`parallel_degree_inference`]: degree-weighted blend over every rule
//!   with a positive degree.
//! - [`interpolation_eval`]: piecewise-linear interpolation through the peak
//!   pairs of a rulebase.
//!
//! Conclusion truth equals premise truth; no attenuation is applied.

use crate::rules::{adjoint_function, antecedent_degree, FlexibleRule, Polarity};
use crate::truth::TruthDegree;
use crate::values::{FlexibleValue, Side};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Natural,
    DegreeUmp,
    At,
    Parallel,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Natural => "natural",
            Method::DegreeUmp => "degree",
            Method::At => "at",
            Method::Parallel => "parallel",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InferenceResult {
    pub conclusion: FlexibleValue,
    pub truth: TruthDegree,
    pub numeric: Option<f64>,
    pub side: Side,
    pub method: Method,
}

impl InferenceResult {
    /// Whether the numeric output lands in the conclusion's extended core.
    pub fn contained(&self) -> bool {
        self.numeric
            .is_some_and(|y| self.conclusion.in_extended_core(y))
    }
}

/// Side of the consequent addressed by an input approaching the antecedent
/// peak from `x0`.
pub fn orientation(antecedent: &FlexibleValue, x0: f64, polarity: Polarity) -> Side {
    let side = Side::of(x0, antecedent.peak());
    match polarity {
        Polarity::Increasing => side,
        Polarity::Decreasing => side.flipped(),
    }
}

/// Returns the consequent and the premise degree when the premise is
/// near-true, `None` otherwise.
pub fn natural_inference<'r>(
    rule: &'r FlexibleRule,
    x: &[f64],
) -> Result<Option<(&'r FlexibleValue, TruthDegree)>> {
    let t = antecedent_degree(rule, x)?;
    Ok(t.is_near_true().then_some((rule.consequent(), t)))
}

/// L-N conversion: the point on `side` of `value` at consistency
/// `min(t, beta)`.
pub fn ln_conversion(value: &FlexibleValue, t: TruthDegree, side: Side) -> Result<f64> {
    if !t.is_near_true() {
        return Err(Error::NotNearTrue(t.value()));
    }
    Ok(value.level_point(t.value().min(value.beta()), side))
}

pub fn degree_inference(rule: &FlexibleRule, x0: f64) -> Result<InferenceResult> {
    let a = rule.condition()?;
    let t = antecedent_degree(rule, &[x0])?;
    if !t.is_near_true() {
        return Err(Error::NotNearTrue(t.value()));
    }
    let side = orientation(a, x0, rule.polarity());
    let y = ln_conversion(rule.consequent(), t, side)?;
    Ok(InferenceResult {
        conclusion: rule.consequent().clone(),
        truth: t,
        numeric: Some(y),
        side,
        method: Method::DegreeUmp,
    })
}

pub fn at_method(rule: &FlexibleRule, x0: f64) -> Result<InferenceResult> {
    let a = rule.condition()?;
    let ext = a.extended_core();
    if !ext.contains(x0) {
        return Err(Error::OutsideExtendedCore {
            value: a.name().to_string(),
            x0,
            lo: ext.lo,
            hi: ext.hi,
        });
    }
    let y = adjoint_function(rule)?.apply(x0);
    Ok(InferenceResult {
        conclusion: rule.consequent().clone(),
        truth: antecedent_degree(rule, &[x0])?,
        numeric: Some(y),
        side: orientation(a, x0, rule.polarity()),
        method: Method::At,
    })
}

/// Index and degree of the rule with the largest antecedent consistency at
/// `x0`; ties go to the lower index. Single-condition rules only.
pub fn strongest_rule(rules: &[FlexibleRule], x0: f64) -> Result<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for (i, rule) in rules.iter().enumerate() {
        let t = rule.condition()?.consistency(x0);
        if best.is_none_or(|(_, bt)| t > bt) {
            best = Some((i, t));
        }
    }
    best.ok_or(Error::EmptyRulebase)
}

fn check_shared_consequent(rules: &[FlexibleRule]) -> Result<()> {
    let first = rules.first().ok_or(Error::EmptyRulebase)?;
    let universe = first.consequent().universe();
    for rule in rules {
        rule.condition()?;
        if rule.consequent().universe() != universe {
            return Err(Error::UniverseMismatch {
                expected: universe.name().to_string(),
                found: rule.consequent().universe().name().to_string(),
            });
        }
    }
    Ok(())
}

/// Blends the adjoint-map outputs of every rule with positive degree at `x0`,
/// weighted by degree. Outputs are clamped to each consequent's support.
pub fn parallel_degree_inference(rules: &[FlexibleRule], x0: f64) -> Result<InferenceResult> {
    check_shared_consequent(rules)?;
    let mut weighted = 0.0;
    let mut total = 0.0;
    for rule in rules {
        let t = rule.condition()?.consistency(x0);
        if t > 0.0 {
            let y = rule
                .consequent()
                .support()
                .clamp(adjoint_function(rule)?.apply(x0));
            weighted += t * y;
            total += t;
        }
    }
    if total == 0.0 {
        return Err(Error::NoFiredRule(x0));
    }
    let (idx, t) = strongest_rule(rules, x0)?;
    let lead = &rules[idx];
    let a = lead.condition()?;
    Ok(InferenceResult {
        conclusion: lead.consequent().clone(),
        truth: TruthDegree::new(t, a.beta())?,
        numeric: Some(weighted / total),
        side: orientation(a, x0, lead.polarity()),
        method: Method::Parallel,
    })
}

/// Piecewise-linear interpolant through the peak pairs of a rulebase.
#[derive(Debug, Clone, PartialEq)]
pub struct PeakInterpolant {
    nodes: Vec<(f64, f64)>,
}

impl PeakInterpolant {
    pub fn from_rules(rules: &[FlexibleRule]) -> Result<Self> {
        if rules.is_empty() {
            return Err(Error::EmptyRulebase);
        }
        let nodes = rules
            .iter()
            .map(|r| Ok((r.condition()?.peak(), r.consequent().peak())))
            .collect::<Result<Vec<_>>>()?;
        if nodes.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::UnorderedPeaks);
        }
        Ok(Self { nodes })
    }

    pub fn nodes(&self) -> &[(f64, f64)] {
        &self.nodes
    }

    pub fn range(&self) -> (f64, f64) {
        (self.nodes[0].0, self.nodes[self.nodes.len() - 1].0)
    }

    pub fn eval(&self, x0: f64) -> Result<f64> {
        let (lo, hi) = self.range();
        if !(lo <= x0 && x0 <= hi) {
            return Err(Error::OutOfRange { x0, lo, hi });
        }
        // first node strictly right of x0
        let k = self.nodes.partition_point(|&(x, _)| x <= x0);
        let (x_l, y_l) = self.nodes[k - 1];
        if x0 == x_l || k == self.nodes.len() {
            return Ok(y_l);
        }
        let (x_r, y_r) = self.nodes[k];
        Ok(y_l + (y_r - y_l) * (x0 - x_l) / (x_r - x_l))
    }
}

pub fn interpolation_eval(rules: &[FlexibleRule], x0: f64) -> Result<f64> {
    PeakInterpolant::from_rules(rules)?.eval(x0)
}
