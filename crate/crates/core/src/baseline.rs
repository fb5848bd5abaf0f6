//! Classical fuzzy reasoning on discretized universes: Zadeh's implication
//! `max{1 - a, min{a, b}}`, sup-min composition `B' = A' o R`, and the
//! Mamdani clip / aggregate / centroid controller.

use crate::rules::FlexibleRule;
use crate::values::{FlexibleValue, Universe};
use crate::{Error, Result};

/// Evenly spaced sample points covering a universe, both bounds included.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    universe: Universe,
    points: Vec<f64>,
}

impl Grid {
    pub fn new(universe: &Universe, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::BadGrid(n));
        }
        let step = universe.width() / (n - 1) as f64;
        let mut points: Vec<f64> = (0..n).map(|i| universe.lo() + step * i as f64).collect();
        points[n - 1] = universe.hi();
        Ok(Self {
            universe: universe.clone(),
            points,
        })
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        self.universe.width() / (self.points.len() - 1) as f64
    }

    /// Index of the grid point nearest `x`; exact midpoints go to the lower index.
    pub fn nearest(&self, x: f64) -> Result<usize> {
        if !self.universe.contains(x) {
            return Err(Error::OutOfUniverse {
                what: "x0".into(),
                x,
                universe: self.universe.name().to_string(),
            });
        }
        let n = self.points.len();
        let k = (((x - self.universe.lo()) / self.spacing()).floor() as usize).min(n - 1);
        // floor may land one cell off after rounding; look at both neighbours
        let lo = k.saturating_sub(1);
        let hi = (k + 1).min(n - 1);
        let mut best = lo;
        for i in lo + 1..=hi {
            if (x - self.points[i]).abs() < (x - self.points[best]).abs() {
                best = i;
            }
        }
        Ok(best)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FuzzySetGrid {
    grid: Grid,
    degrees: Vec<f64>,
}

impl FuzzySetGrid {
    /// Degrees are clamped into `[0, 1]`.
    pub fn new(grid: Grid, degrees: Vec<f64>) -> Result<Self> {
        if degrees.len() != grid.len() {
            return Err(Error::GridMismatch);
        }
        let degrees = degrees.into_iter().map(|d| d.clamp(0.0, 1.0)).collect();
        Ok(Self { grid, degrees })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn degrees(&self) -> &[f64] {
        &self.degrees
    }

    pub fn height(&self) -> f64 {
        self.degrees.iter().copied().fold(0.0, f64::max)
    }

    /// Pointwise `min(self, level)`.
    pub fn clip(&self, level: f64) -> Self {
        Self {
            grid: self.grid.clone(),
            degrees: self.degrees.iter().map(|d| d.min(level)).collect(),
        }
    }
}

/// Row-major membership grid over `x_grid × y_grid`.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyRelationGrid {
    x_grid: Grid,
    y_grid: Grid,
    degrees: Vec<f64>,
}

impl FuzzyRelationGrid {
    pub fn x_grid(&self) -> &Grid {
        &self.x_grid
    }

    pub fn y_grid(&self) -> &Grid {
        &self.y_grid
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.degrees[i * self.y_grid.len() + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let m = self.y_grid.len();
        &self.degrees[i * m..(i + 1) * m]
    }
}

pub fn discretize(value: &FlexibleValue, grid: &Grid) -> Result<FuzzySetGrid> {
    if value.universe() != grid.universe() {
        return Err(Error::UniverseMismatch {
            expected: value.universe().name().to_string(),
            found: grid.universe().name().to_string(),
        });
    }
    let degrees = grid.points().iter().map(|&x| value.membership(x)).collect();
    FuzzySetGrid::new(grid.clone(), degrees)
}

pub fn zadeh_implication(a: &FuzzySetGrid, b: &FuzzySetGrid) -> FuzzyRelationGrid {
    let degrees = a
        .degrees()
        .iter()
        .flat_map(|&ai| {
            b.degrees()
                .iter()
                .map(move |&bj| (1.0 - ai).max(ai.min(bj)))
        })
        .collect();
    FuzzyRelationGrid {
        x_grid: a.grid().clone(),
        y_grid: b.grid().clone(),
        degrees,
    }
}

/// Sup-min composition: `b'[j] = max_i min{a'[i], r[i][j]}`.
pub fn cri_compose(a_prime: &FuzzySetGrid, r: &FuzzyRelationGrid) -> Result<FuzzySetGrid> {
    if a_prime.grid() != r.x_grid() {
        return Err(Error::GridMismatch);
    }
    let mut out = vec![0.0f64; r.y_grid().len()];
    for (i, &ai) in a_prime.degrees().iter().enumerate() {
        if ai == 0.0 {
            continue;
        }
        for (o, &rij) in out.iter_mut().zip(r.row(i)) {
            *o = o.max(ai.min(rij));
        }
    }
    FuzzySetGrid::new(r.y_grid().clone(), out)
}

pub fn fuzzify_singleton(x0: f64, grid: &Grid) -> Result<FuzzySetGrid> {
    let k = grid.nearest(x0)?;
    let mut degrees = vec![0.0; grid.len()];
    degrees[k] = 1.0;
    FuzzySetGrid::new(grid.clone(), degrees)
}

pub fn defuzzify_centroid(s: &FuzzySetGrid) -> Result<f64> {
    let (num, den) = s
        .grid()
        .points()
        .iter()
        .zip(s.degrees())
        .fold((0.0, 0.0), |(n, d), (&p, &m)| (n + p * m, d + m));
    if den <= 0.0 {
        return Err(Error::EmptySet);
    }
    Ok(num / den)
}

/// Output of a fuzzy pipeline together with the firing level of the
/// strongest rule.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyOutput {
    pub y: f64,
    pub aggregate: FuzzySetGrid,
    /// Index of the rule with the highest firing level (lower index on ties).
    pub lead_rule: usize,
    pub firing: f64,
}

fn consequent_grid_check(rules: &[FlexibleRule], y_grid: &Grid) -> Result<()> {
    if rules.is_empty() {
        return Err(Error::EmptyRulebase);
    }
    for rule in rules {
        rule.condition()?;
        if rule.consequent().universe() != y_grid.universe() {
            return Err(Error::UniverseMismatch {
                expected: y_grid.universe().name().to_string(),
                found: rule.consequent().universe().name().to_string(),
            });
        }
    }
    Ok(())
}

fn lead(levels: &[f64]) -> (usize, f64) {
    levels
        .iter()
        .enumerate()
        .fold((0, levels[0]), |best, (i, &l)| if l > best.1 { (i, l) } else { best })
}

/// Mamdani controller: clip each consequent at its rule's firing level,
/// aggregate by pointwise max, then take the centroid.
pub fn mamdani(rules: &[FlexibleRule], x0: f64, y_grid: &Grid) -> Result<FuzzyOutput> {
    consequent_grid_check(rules, y_grid)?;
    let levels: Vec<f64> = rules
        .iter()
        .map(|r| r.conditions()[0].membership(x0))
        .collect();
    if levels.iter().all(|&l| l <= 0.0) {
        return Err(Error::NoFiredRule(x0));
    }
    let mut agg = vec![0.0f64; y_grid.len()];
    for (rule, &level) in rules.iter().zip(&levels) {
        if level <= 0.0 {
            continue;
        }
        let clipped = discretize(rule.consequent(), y_grid)?.clip(level);
        for (a, &d) in agg.iter_mut().zip(clipped.degrees()) {
            *a = a.max(d);
        }
    }
    let aggregate = FuzzySetGrid::new(y_grid.clone(), agg)?;
    let y = defuzzify_centroid(&aggregate)?;
    let (lead_rule, firing) = lead(&levels);
    Ok(FuzzyOutput {
        y,
        aggregate,
        lead_rule,
        firing,
    })
}

pub fn mamdani_pipeline(rules: &[FlexibleRule], x0: f64, y_grid: &Grid) -> Result<f64> {
    mamdani(rules, x0, y_grid).map(|o| o.y)
}

/// CRI pipeline: singleton fact on `x_grid`, Zadeh relation per rule, sup-min
/// composition, union over rules, centroid.
pub fn cri_pipeline(
    rules: &[FlexibleRule],
    x0: f64,
    x_grid: &Grid,
    y_grid: &Grid,
) -> Result<FuzzyOutput> {
    consequent_grid_check(rules, y_grid)?;
    let fact = fuzzify_singleton(x0, x_grid)?;
    let x_sample = x_grid.points()[x_grid.nearest(x0)?];
    let mut agg = vec![0.0f64; y_grid.len()];
    let mut levels = Vec::with_capacity(rules.len());
    for rule in rules {
        let a = discretize(&rule.conditions()[0], x_grid)?;
        let b = discretize(rule.consequent(), y_grid)?;
        let b_prime = cri_compose(&fact, &zadeh_implication(&a, &b))?;
        for (o, &d) in agg.iter_mut().zip(b_prime.degrees()) {
            *o = o.max(d);
        }
        levels.push(rule.conditions()[0].membership(x_sample));
    }
    let aggregate = FuzzySetGrid::new(y_grid.clone(), agg)?;
    let y = defuzzify_centroid(&aggregate)?;
    let (lead_rule, firing) = lead(&levels);
    Ok(FuzzyOutput {
        y,
        aggregate,
        lead_rule,
        firing,
    })
}
