use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("universe `{name}`: bounds must be finite with lo < hi (got [{lo}, {hi}])")]
    BadUniverse { name: String, lo: f64, hi: f64 },

    #[error("value `{value}`: knots out of order ({detail})")]
    OrderingViolation { value: String, detail: String },

    #[error("`{what}` = {x} lies outside universe `{universe}`")]
    OutOfUniverse { what: String, x: f64, universe: String },

    #[error("value `{value}`: bad consistency ceiling {beta} ({detail})")]
    BadBeta { value: String, beta: f64, detail: String },

    #[error("partition needs at least 2 granules (got {0})")]
    BadCount(usize),

    #[error("truth degree {value} outside [0, {beta}]")]
    BadTruth { value: f64, beta: f64 },

    #[error("truth degrees on different scales (beta {0} vs {1})")]
    BetaMismatch(f64, f64),

    #[error("rule `{0}` has no conditions")]
    EmptyConditions(String),

    #[error("rule `{rule}`: {detail}")]
    BadWeights { rule: String, detail: String },

    #[error("rule `{0}` has more than one condition")]
    MultiCondition(String),

    #[error("rule `{rule}` expects {expected} inputs, got {got}")]
    ArityMismatch { rule: String, expected: usize, got: usize },

    #[error("premise degree {0} is not near-true (needs > 0.5)")]
    NotNearTrue(f64),

    #[error("x0 = {x0} outside the extended core [{lo}, {hi}] of `{value}`")]
    OutsideExtendedCore { value: String, x0: f64, lo: f64, hi: f64 },

    #[error("no rule fires at x0 = {0}")]
    NoFiredRule(f64),

    #[error("x0 = {x0} outside the interpolation range [{lo}, {hi}]")]
    OutOfRange { x0: f64, lo: f64, hi: f64 },

    #[error("universe mismatch: expected `{expected}`, found `{found}`")]
    UniverseMismatch { expected: String, found: String },

    #[error("grid mismatch between fact and relation")]
    GridMismatch,

    #[error("grid needs at least 2 points (got {0})")]
    BadGrid(usize),

    #[error("fuzzy set is empty; centroid undefined")]
    EmptySet,

    #[error("rulebase is empty")]
    EmptyRulebase,

    #[error("antecedent peaks must be strictly increasing")]
    UnorderedPeaks,

    #[error("target function is not finite at x = {0}")]
    NonFiniteSample(f64),

    #[error("granule schedule must be non-empty and strictly increasing")]
    BadSchedule,

    #[error("sample count must be at least 1")]
    NoSamples,

    #[error("evaluator failed at x = {x}: {source}")]
    EvaluatorFailure {
        x: f64,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
