//! Flexible rules `A1, ..., Ak -> B`.

use crate::truth::TruthDegree;
use crate::values::{FlexibleValue, Interval};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Combiner {
    Conjunction,
    Disjunction,
    /// Weighted arithmetic mean of the condition degrees.
    Synthesis,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Polarity {
    #[default]
    Increasing,
    Decreasing,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlexibleRule {
    name: String,
    conditions: Vec<FlexibleValue>,
    combiner: Combiner,
    weights: Vec<f64>,
    consequent: FlexibleValue,
    polarities: Vec<Polarity>,
}

impl FlexibleRule {
    /// `polarities` may be empty (all increasing); `weights` must be given
    /// for synthesis rules only and sum to 1.
    pub fn new(
        name: impl Into<String>,
        conditions: Vec<FlexibleValue>,
        combiner: Combiner,
        weights: Vec<f64>,
        consequent: FlexibleValue,
        polarities: Vec<Polarity>,
    ) -> Result<Self> {
        let name = name.into();
        if conditions.is_empty() {
            return Err(Error::EmptyConditions(name));
        }
        let bad = |detail: String| Error::BadWeights {
            rule: name.clone(),
            detail,
        };
        match combiner {
            Combiner::Synthesis => {
                if weights.len() != conditions.len() {
                    return Err(bad(format!(
                        "{} weights for {} conditions",
                        weights.len(),
                        conditions.len()
                    )));
                }
                if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
                    return Err(bad("weights must be finite and non-negative".into()));
                }
                let sum: f64 = weights.iter().sum();
                if (sum - 1.0).abs() > 1e-12 {
                    return Err(bad(format!("weights sum to {sum}, expected 1")));
                }
            }
            _ if !weights.is_empty() => {
                return Err(bad("weights apply to synthesis rules only".into()));
            }
            _ => {}
        }
        let polarities = if polarities.is_empty() {
            vec![Polarity::Increasing; conditions.len()]
        } else if polarities.len() != conditions.len() {
            return Err(Error::ArityMismatch {
                rule: name,
                expected: conditions.len(),
                got: polarities.len(),
            });
        } else {
            polarities
        };
        Ok(Self {
            name,
            conditions,
            combiner,
            weights,
            consequent,
            polarities,
        })
    }

    pub fn single(
        name: impl Into<String>,
        condition: FlexibleValue,
        consequent: FlexibleValue,
        polarity: Polarity,
    ) -> Self {
        Self {
            name: name.into(),
            conditions: vec![condition],
            combiner: Combiner::Conjunction,
            weights: Vec::new(),
            consequent,
            polarities: vec![polarity],
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn conditions(&self) -> &[FlexibleValue] {
        &self.conditions
    }

    pub fn combiner(&self) -> Combiner {
        self.combiner
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn consequent(&self) -> &FlexibleValue {
        &self.consequent
    }

    pub fn polarities(&self) -> &[Polarity] {
        &self.polarities
    }

    pub fn is_single(&self) -> bool {
        self.conditions.len() == 1
    }

    /// The antecedent of a single-condition rule.
    pub fn condition(&self) -> Result<&FlexibleValue> {
        match self.conditions.as_slice() {
            [a] => Ok(a),
            _ => Err(Error::MultiCondition(self.name.clone())),
        }
    }

    pub fn polarity(&self) -> Polarity {
        self.polarities[0]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EnvelopeKind {
    ExtendedCore,
    Support,
}

/// Crisp rectangle occupied by a rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RigidEnvelope {
    pub x_interval: Interval,
    pub y_interval: Interval,
    pub kind: EnvelopeKind,
}

impl RigidEnvelope {
    pub fn area(&self) -> f64 {
        self.x_interval.width() * self.y_interval.width()
    }

    pub fn contains(&self, other: &RigidEnvelope) -> bool {
        self.x_interval.contains_interval(&other.x_interval)
            && self.y_interval.contains_interval(&other.y_interval)
    }
}

pub fn rigid_envelope(rule: &FlexibleRule, kind: EnvelopeKind) -> Result<RigidEnvelope> {
    let a = rule.condition()?;
    let b = rule.consequent();
    let (x_interval, y_interval) = match kind {
        EnvelopeKind::ExtendedCore => (a.extended_core(), b.extended_core()),
        EnvelopeKind::Support => (a.support(), b.support()),
    };
    Ok(RigidEnvelope {
        x_interval,
        y_interval,
        kind,
    })
}

/// `y = anchor_y + slope * (x - anchor_x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineMap {
    pub anchor_x: f64,
    pub anchor_y: f64,
    pub slope: f64,
}

impl AffineMap {
    pub fn apply(&self, x: f64) -> f64 {
        if x == self.anchor_x {
            return self.anchor_y;
        }
        self.anchor_y + self.slope * (x - self.anchor_x)
    }
}

/// Two affine pieces through the peak pair, one per flank of the antecedent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdjointMaps {
    pub left: AffineMap,
    pub right: AffineMap,
}

impl AdjointMaps {
    /// Left piece up to and including the antecedent peak, right piece after.
    pub fn apply(&self, x: f64) -> f64 {
        if x <= self.left.anchor_x {
            self.left.apply(x)
        } else {
            self.right.apply(x)
        }
    }
}

/// Affine maps fixing `(peak_A, peak_B)` and sending the extended-core
/// endpoints of `A` onto those of `B` (crossed over for decreasing rules).
/// A flank of zero width gets slope 0.
pub fn adjoint_function(rule: &FlexibleRule) -> Result<AdjointMaps> {
    let a = rule.condition()?;
    let b = rule.consequent();
    let (ea, eb) = (a.extended_core(), b.extended_core());
    let (xa, xb) = (a.peak(), b.peak());
    let (left_target, right_target) = match rule.polarity() {
        Polarity::Increasing => (eb.lo, eb.hi),
        Polarity::Decreasing => (eb.hi, eb.lo),
    };
    let slope = |dy: f64, dx: f64| if dx > 0.0 { dy / dx } else { 0.0 };
    let anchor = |slope| AffineMap {
        anchor_x: xa,
        anchor_y: xb,
        slope,
    };
    Ok(AdjointMaps {
        left: anchor(slope(xb - left_target, xa - ea.lo)),
        right: anchor(slope(right_target - xb, ea.hi - xa)),
    })
}

/// Combined truth degree of the antecedent at `x` (one coordinate per
/// condition). The result is scaled by the largest condition ceiling.
pub fn antecedent_degree(rule: &FlexibleRule, x: &[f64]) -> Result<TruthDegree> {
    if x.len() != rule.conditions.len() {
        return Err(Error::ArityMismatch {
            rule: rule.name.clone(),
            expected: rule.conditions.len(),
            got: x.len(),
        });
    }
    let degrees = rule
        .conditions
        .iter()
        .zip(x)
        .map(|(a, &xi)| a.consistency(xi));
    let beta = rule
        .conditions
        .iter()
        .map(FlexibleValue::beta)
        .fold(1.0, f64::max);
    let t = match rule.combiner {
        Combiner::Conjunction => degrees.fold(f64::INFINITY, f64::min),
        Combiner::Disjunction => degrees.fold(0.0, f64::max),
        Combiner::Synthesis => degrees.zip(&rule.weights).map(|(d, w)| d * w).sum(),
    };
    TruthDegree::new(t.clamp(0.0, beta), beta)
}
