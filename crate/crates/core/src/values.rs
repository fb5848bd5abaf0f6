//! Flexible linguistic values on bounded numeric universes.
//!
//! A [`FlexibleValue`] carries a piecewise-linear consistency function
//! through the knot schedule
//!
//! ```text
//! (s-, 0) - (e-, 0.5) - (c-, 1) - (peak, beta) - (c+, 1) - (e+, 0.5) - (s+, 0)
//! ```
//!
//! where `(s-, s+)` is the support, `[e-, e+]` the extended core and
//! `[c-, c+]` the core. Consistency is zero outside the support and its clamp
//! to `[0, 1]` is the membership function.
//!
//! A side whose core touches the universe bound may be *clipped*: the support,
//! extended core and core share that endpoint and consistency is at least 1 up
//! to the bound. End granules of triangular partitions are clipped this way.

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Universe {
    name: String,
    lo: f64,
    hi: f64,
}

impl Universe {
    pub fn new(name: impl Into<String>, lo: f64, hi: f64) -> Result<Self> {
        let name = name.into();
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::BadUniverse { name, lo, hi });
        }
        Ok(Self { name, lo, hi })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn bounds(&self) -> Interval {
        Interval::new(self.lo, self.hi)
    }
}

/// A closed interval `[lo, hi]`. Supports are stored with the same type even
/// though they are read as open intervals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn clamp(&self, x: f64) -> f64 {
        x.clamp(self.lo, self.hi)
    }
}

impl From<(f64, f64)> for Interval {
    fn from((lo, hi): (f64, f64)) -> Self {
        Self::new(lo, hi)
    }
}

/// Which flank of a value (relative to its peak) a point lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
    AtPeak,
}

impl Side {
    pub fn of(x: f64, peak: f64) -> Self {
        if x < peak {
            Side::Left
        } else if x > peak {
            Side::Right
        } else {
            Side::AtPeak
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
            Side::AtPeak => Side::AtPeak,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
            Side::AtPeak => "peak",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlexibleValue {
    name: String,
    universe: Universe,
    support: Interval,
    core: Interval,
    extended_core: Interval,
    peak: f64,
    beta: f64,
}

/// Builds a flexible value, checking the knot ordering
/// `s- < e- < c- <= peak <= c+ < e+ < s+` inside the universe.
///
/// When `extended_core` is `None` its endpoints default to the midpoints
/// between the support and core endpoints.
pub fn make_flexible_value(
    name: impl Into<String>,
    universe: &Universe,
    support: Interval,
    core: Interval,
    peak: f64,
    beta: f64,
    extended_core: Option<Interval>,
) -> Result<FlexibleValue> {
    let name = name.into();
    let ext = extended_core.unwrap_or_else(|| {
        Interval::new(
            0.5 * (support.lo + core.lo),
            0.5 * (core.hi + support.hi),
        )
    });
    let order = |detail: String| Error::OrderingViolation {
        value: name.clone(),
        detail,
    };

    let knots = [support.lo, ext.lo, core.lo, peak, core.hi, ext.hi, support.hi];
    if knots.iter().any(|k| !k.is_finite()) {
        return Err(order("knots must be finite".into()));
    }
    if !beta.is_finite() || beta < 1.0 {
        return Err(Error::BadBeta {
            value: name,
            beta,
            detail: "must be finite and >= 1".into(),
        });
    }
    if !(core.lo <= peak && peak <= core.hi) {
        return Err(order(format!(
            "peak {peak} must lie in core [{}, {}]",
            core.lo, core.hi
        )));
    }

    // Left flank: strict ramp, or clipped at the universe's lower bound.
    if support.lo == core.lo {
        if core.lo != universe.lo() {
            return Err(order(format!(
                "support start {} must precede core start {} unless the core touches the universe bound",
                support.lo, core.lo
            )));
        }
        if ext.lo != core.lo {
            return Err(order(format!(
                "clipped left flank needs extended core start {} = core start {}",
                ext.lo, core.lo
            )));
        }
    } else if !(support.lo < ext.lo && ext.lo < core.lo) {
        return Err(order(format!(
            "need support start {} < extended core start {} < core start {}",
            support.lo, ext.lo, core.lo
        )));
    }

    // Right flank, mirrored.
    if support.hi == core.hi {
        if core.hi != universe.hi() {
            return Err(order(format!(
                "support end {} must follow core end {} unless the core touches the universe bound",
                support.hi, core.hi
            )));
        }
        if ext.hi != core.hi {
            return Err(order(format!(
                "clipped right flank needs extended core end {} = core end {}",
                ext.hi, core.hi
            )));
        }
    } else if !(core.hi < ext.hi && ext.hi < support.hi) {
        return Err(order(format!(
            "need core end {} < extended core end {} < support end {}",
            core.hi, ext.hi, support.hi
        )));
    }

    for (what, x) in [("support start", support.lo), ("support end", support.hi)] {
        if !universe.contains(x) {
            return Err(Error::OutOfUniverse {
                what: format!("{name}: {what}"),
                x,
                universe: universe.name().to_string(),
            });
        }
    }

    // A ceiling above 1 needs room on both sides of the peak to climb from
    // the core endpoints, otherwise consistency would jump at the peak.
    if beta > 1.0 && !(core.lo < peak && peak < core.hi) {
        return Err(Error::BadBeta {
            value: name,
            beta,
            detail: "beta > 1 requires the peak strictly inside the core".into(),
        });
    }

    Ok(FlexibleValue {
        name,
        universe: universe.clone(),
        support,
        core,
        extended_core: ext,
        peak,
        beta,
    })
}

impl FlexibleValue {
    /// Triangle with a degenerate core at `peak`, beta 1 and midpoint
    /// extended core. Flanks collapse to clipped sides when `peak` sits on
    /// the corresponding support bound.
    pub fn triangle(
        name: impl Into<String>,
        universe: &Universe,
        lo: f64,
        peak: f64,
        hi: f64,
    ) -> Result<Self> {
        make_flexible_value(
            name,
            universe,
            Interval::new(lo, hi),
            Interval::new(peak, peak),
            peak,
            1.0,
            None,
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn support(&self) -> Interval {
        self.support
    }

    pub fn core(&self) -> Interval {
        self.core
    }

    pub fn extended_core(&self) -> Interval {
        self.extended_core
    }

    pub fn peak(&self) -> f64 {
        self.peak
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn left_clipped(&self) -> bool {
        self.support.lo == self.core.lo
    }

    pub fn right_clipped(&self) -> bool {
        self.support.hi == self.core.hi
    }

    /// Consistency degree in `[0, beta]`; zero outside the support.
    pub fn consistency(&self, x: f64) -> f64 {
        let Interval { lo: s_lo, hi: s_hi } = self.support;
        let Interval { lo: e_lo, hi: e_hi } = self.extended_core;
        let Interval { lo: c_lo, hi: c_hi } = self.core;

        if x.is_nan() {
            return 0.0;
        }
        if c_lo <= x && x <= c_hi {
            if x == self.peak {
                return self.beta;
            }
            if self.beta == 1.0 {
                return 1.0;
            }
            let rise = self.beta - 1.0;
            return if x < self.peak {
                1.0 + rise * (x - c_lo) / (self.peak - c_lo)
            } else {
                1.0 + rise * (c_hi - x) / (c_hi - self.peak)
            };
        }
        if x <= s_lo || x >= s_hi {
            return 0.0;
        }
        if x < c_lo {
            if x <= e_lo {
                0.5 * (x - s_lo) / (e_lo - s_lo)
            } else {
                0.5 + 0.5 * (x - e_lo) / (c_lo - e_lo)
            }
        } else if x >= e_hi {
            0.5 * (s_hi - x) / (s_hi - e_hi)
        } else {
            0.5 + 0.5 * (e_hi - x) / (e_hi - c_hi)
        }
    }

    pub fn membership(&self, x: f64) -> f64 {
        self.consistency(x).clamp(0.0, 1.0)
    }

    pub fn in_extended_core(&self, x: f64) -> bool {
        self.consistency(x) >= 0.5 - crate::TOLERANCE
    }

    /// Point on the requested flank where consistency reaches `level`
    /// (`0.5 <= level <= beta`). On a plateau the point nearest that flank's
    /// support boundary is returned, so the result is continuous in `level`.
    pub fn level_point(&self, level: f64, side: Side) -> f64 {
        let level = level.clamp(0.5, self.beta);
        match side {
            Side::AtPeak => self.peak,
            Side::Left => {
                let (e, c) = (self.extended_core.lo, self.core.lo);
                if level <= 1.0 {
                    e + (level - 0.5) / 0.5 * (c - e)
                } else if level >= self.beta {
                    self.peak
                } else {
                    c + (level - 1.0) / (self.beta - 1.0) * (self.peak - c)
                }
            }
            Side::Right => {
                let (e, c) = (self.extended_core.hi, self.core.hi);
                if level <= 1.0 {
                    e - (level - 0.5) / 0.5 * (e - c)
                } else if level >= self.beta {
                    self.peak
                } else {
                    c - (level - 1.0) / (self.beta - 1.0) * (c - self.peak)
                }
            }
        }
    }
}

/// An ordered family of values on one universe with strictly increasing peaks.
#[derive(Debug, Clone, PartialEq)]
pub struct FlexiblePartition {
    universe: Universe,
    values: Vec<FlexibleValue>,
}

/// The best-matching member of a partition at some point.
#[derive(Debug, Clone, Copy)]
pub struct Classification<'a> {
    pub index: usize,
    pub value: &'a FlexibleValue,
    pub degree: f64,
}

impl FlexiblePartition {
    pub fn new(universe: &Universe, values: Vec<FlexibleValue>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::BadCount(0));
        }
        for v in &values {
            if v.universe() != universe {
                return Err(Error::UniverseMismatch {
                    expected: universe.name().to_string(),
                    found: v.universe().name().to_string(),
                });
            }
        }
        if values.windows(2).any(|w| w[0].peak() >= w[1].peak()) {
            return Err(Error::UnorderedPeaks);
        }
        Ok(Self {
            universe: universe.clone(),
            values,
        })
    }

    /// `n` evenly spaced triangles named `{prefix}_1 .. {prefix}_n`.
    pub fn triangular(prefix: &str, universe: &Universe, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::BadCount(n));
        }
        let peaks: Vec<f64> = (0..n)
            .map(|i| {
                if i == n - 1 {
                    universe.hi()
                } else {
                    universe.lo() + universe.width() * i as f64 / (n - 1) as f64
                }
            })
            .collect();
        let values = (0..n)
            .map(|i| {
                let lo = peaks[i.saturating_sub(1)];
                let hi = peaks[(i + 1).min(n - 1)];
                FlexibleValue::triangle(format!("{prefix}_{}", i + 1), universe, lo, peaks[i], hi)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(universe, values)
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn values(&self) -> &[FlexibleValue] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn peaks(&self) -> Vec<f64> {
        self.values.iter().map(FlexibleValue::peak).collect()
    }

    /// N-L conversion: the member with maximal consistency at `x`, ties going
    /// to the lower index.
    pub fn classify(&self, x: f64) -> Result<Classification<'_>> {
        if !self.universe.contains(x) {
            return Err(Error::OutOfUniverse {
                what: "x".into(),
                x,
                universe: self.universe.name().to_string(),
            });
        }
        let mut best = Classification {
            index: 0,
            value: &self.values[0],
            degree: self.values[0].consistency(x),
        };
        for (index, value) in self.values.iter().enumerate().skip(1) {
            let degree = value.consistency(x);
            if degree > best.degree {
                best = Classification {
                    index,
                    value,
                    degree,
                };
            }
        }
        Ok(best)
    }
}

/// Triangular partition whose members are prefixed with the universe name.
pub fn make_triangular_partition(universe: &Universe, n: usize) -> Result<FlexiblePartition> {
    FlexiblePartition::triangular(universe.name(), universe, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> Universe {
        Universe::new("U", 0.0, 10.0).unwrap()
    }

    fn canonical_a() -> FlexibleValue {
        make_flexible_value(
            "A",
            &unit(),
            Interval::new(2.0, 8.0),
            Interval::new(4.5, 5.5),
            5.0,
            1.0,
            None,
        )
        .unwrap()
    }

    #[test]
    fn default_extended_core_is_midpoint() {
        let a = canonical_a();
        assert_eq!(a.extended_core(), Interval::new(3.25, 6.75));
    }

    #[test]
    fn knot_values() {
        let a = canonical_a();
        assert_eq!(a.consistency(5.0), 1.0);
        assert_eq!(a.consistency(3.25), 0.5);
        assert_eq!(a.consistency(6.75), 0.5);
        assert_eq!(a.consistency(2.0), 0.0);
        assert_eq!(a.consistency(8.0), 0.0);
        assert_eq!(a.consistency(1.0), 0.0);
        assert!((a.consistency(4.0) - 0.8).abs() < 1e-12);
        assert!((a.consistency(6.0) - 0.8).abs() < 1e-12);
        assert!((a.membership(4.0) - 0.8).abs() < 1e-12);
        assert_eq!(a.membership(9.0), 0.0);
    }

    #[test]
    fn beta_above_one() {
        let v = make_flexible_value(
            "tall",
            &unit(),
            Interval::new(2.0, 8.0),
            Interval::new(4.0, 6.0),
            5.0,
            1.5,
            None,
        )
        .unwrap();
        assert_eq!(v.consistency(5.0), 1.5);
        assert_eq!(v.consistency(4.0), 1.0);
        assert!((v.consistency(4.5) - 1.25).abs() < 1e-12);
        assert!((v.consistency(5.5) - 1.25).abs() < 1e-12);
        assert_eq!(v.membership(4.5), 1.0);
        assert!((v.level_point(1.25, Side::Left) - 4.5).abs() < 1e-12);
        assert!((v.level_point(1.25, Side::Right) - 5.5).abs() < 1e-12);
        assert_eq!(v.level_point(1.5, Side::Left), 5.0);
    }

    #[test]
    fn construction_errors() {
        let u = unit();
        let err = make_flexible_value(
            "bad",
            &u,
            Interval::new(2.0, 8.0),
            Interval::new(1.0, 5.5),
            5.0,
            1.0,
            None,
        )
        .unwrap_err();
        assert!(matches!(err, Error::OrderingViolation { ref value, .. } if value == "bad"));

        let err = make_flexible_value(
            "wide",
            &u,
            Interval::new(-1.0, 8.0),
            Interval::new(4.5, 5.5),
            5.0,
            1.0,
            None,
        )
        .unwrap_err();
        assert!(matches!(err, Error::OutOfUniverse { .. }));

        let err = make_flexible_value(
            "low",
            &u,
            Interval::new(2.0, 8.0),
            Interval::new(4.5, 5.5),
            5.0,
            0.9,
            None,
        )
        .unwrap_err();
        assert!(matches!(err, Error::BadBeta { .. }));

        // peak outside core
        assert!(make_flexible_value(
            "p",
            &u,
            Interval::new(2.0, 8.0),
            Interval::new(4.5, 5.5),
            6.0,
            1.0,
            None
        )
        .is_err());

        // clipped flank away from the universe bound
        assert!(FlexibleValue::triangle("t", &u, 3.0, 3.0, 6.0).is_err());
        // explicit extended core outside the ramp
        assert!(make_flexible_value(
            "e",
            &u,
            Interval::new(2.0, 8.0),
            Interval::new(4.5, 5.5),
            5.0,
            1.0,
            Some(Interval::new(1.5, 6.0))
        )
        .is_err());
    }

    #[test]
    fn clipped_flank_at_universe_bound() {
        let u = unit();
        let v = FlexibleValue::triangle("first", &u, 0.0, 0.0, 5.0).unwrap();
        assert!(v.left_clipped());
        assert_eq!(v.extended_core(), Interval::new(0.0, 2.5));
        assert_eq!(v.consistency(0.0), 1.0);
        assert_eq!(v.consistency(2.5), 0.5);
        assert_eq!(v.consistency(-1.0), 0.0);
        assert_eq!(v.level_point(0.8, Side::Left), 0.0);
    }

    #[test]
    fn triangular_partition() {
        let p = make_triangular_partition(&unit(), 3).unwrap();
        assert_eq!(p.peaks(), vec![0.0, 5.0, 10.0]);
        assert_eq!(p.values()[1].membership(2.5), 0.5);
        let sum: f64 = p.values().iter().map(|v| v.membership(2.5)).sum();
        assert_eq!(sum, 1.0);

        let c = p.classify(5.0).unwrap();
        assert_eq!((c.index, c.degree), (1, 1.0));
        let c = p.classify(2.5).unwrap();
        assert_eq!((c.index, c.degree), (0, 0.5));
        let c = p.classify(6.0).unwrap();
        assert_eq!(c.index, 1);
        assert!((c.degree - 0.8).abs() < 1e-12);
        assert!(matches!(p.classify(11.0), Err(Error::OutOfUniverse { .. })));

        assert_eq!(make_triangular_partition(&unit(), 1).unwrap_err(), Error::BadCount(1));

        let tau = Universe::new("angle", 0.0, std::f64::consts::TAU).unwrap();
        let p = make_triangular_partition(&tau, 5).unwrap();
        for w in p.peaks().windows(2) {
            assert!((w[1] - w[0] - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
        }
    }

    #[test]
    fn level_point_inverts_flanks() {
        let b = make_flexible_value(
            "B",
            &Universe::new("V", 0.0, 100.0).unwrap(),
            Interval::new(20.0, 80.0),
            Interval::new(45.0, 55.0),
            50.0,
            1.0,
            None,
        )
        .unwrap();
        assert!((b.level_point(0.8, Side::Left) - 40.0).abs() < 1e-9);
        assert!((b.level_point(0.8, Side::Right) - 60.0).abs() < 1e-9);
        assert_eq!(b.level_point(1.0, Side::Left), 45.0);
        assert_eq!(b.level_point(1.0, Side::Right), 55.0);
        assert_eq!(b.level_point(0.7, Side::AtPeak), 50.0);
    }

    #[test]
    fn universe_validation() {
        assert!(Universe::new("x", 1.0, 1.0).is_err());
        assert!(Universe::new("x", 0.0, f64::INFINITY).is_err());
    }
}
