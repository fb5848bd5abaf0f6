//! Scalar truth degrees.
//!
//! Connectives are min / max / `beta - t`. They are kept behind plain
//! functions so another compound-truth model can replace them.

use crate::values::FlexibleValue;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruthDegree {
    value: f64,
    beta: f64,
}

/// Qualitative class of a truth degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TruthClass {
    /// t > 0.5
    NearTrue,
    /// t = 0.5
    RoughTrue,
    /// 0 < t < 0.5
    DegreeTrue,
    /// t = 0
    NotTrue,
}

impl TruthDegree {
    pub fn new(value: f64, beta: f64) -> Result<Self> {
        if !(beta.is_finite() && beta >= 1.0 && (0.0..=beta).contains(&value)) {
            return Err(Error::BadTruth { value, beta });
        }
        Ok(Self { value, beta })
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn class(&self) -> TruthClass {
        classify_truth(*self)
    }

    pub fn is_near_true(&self) -> bool {
        self.value > 0.5
    }

    fn same_scale(self, other: Self) -> Result<f64> {
        if self.beta == other.beta {
            Ok(self.beta)
        } else {
            Err(Error::BetaMismatch(self.beta, other.beta))
        }
    }
}

/// Degree of the atomic proposition "x0 is `value`".
pub fn truth_of_atom(value: &FlexibleValue, x0: f64) -> TruthDegree {
    TruthDegree {
        value: value.consistency(x0),
        beta: value.beta(),
    }
}

pub fn conj(a: TruthDegree, b: TruthDegree) -> Result<TruthDegree> {
    let beta = a.same_scale(b)?;
    Ok(TruthDegree {
        value: a.value.min(b.value),
        beta,
    })
}

pub fn disj(a: TruthDegree, b: TruthDegree) -> Result<TruthDegree> {
    let beta = a.same_scale(b)?;
    Ok(TruthDegree {
        value: a.value.max(b.value),
        beta,
    })
}

pub fn neg(t: TruthDegree) -> TruthDegree {
    TruthDegree {
        value: t.beta - t.value,
        beta: t.beta,
    }
}

pub fn classify_truth(t: TruthDegree) -> TruthClass {
    let v = t.value;
    if v > 0.5 {
        TruthClass::NearTrue
    } else if v == 0.5 {
        TruthClass::RoughTrue
    } else if v > 0.0 {
        TruthClass::DegreeTrue
    } else {
        TruthClass::NotTrue
    }
}
