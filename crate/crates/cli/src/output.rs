//! CSV cell formatting and the SVG error plot.

use std::fmt::Write as _;

const SIGNIFICANT: i32 = 12;
const MAX_DECIMALS: i32 = 40;

/// Fixed-point decimal carrying 12 significant digits.
pub fn fmt_num(v: f64) -> String {
    assert!(v.is_finite(), "non-finite value in numeric cell");
    if v == 0.0 {
        return format!("{:.*}", (SIGNIFICANT - 1) as usize, 0.0);
    }
    let magnitude = v.abs().log10().floor() as i32;
    let decimals = (SIGNIFICANT - 1 - magnitude).clamp(0, MAX_DECIMALS) as usize;
    let s = format!("{v:.decimals$}");
    if s.starts_with('-') && s[1..].bytes().all(|b| b == b'0' || b == b'.') {
        s[1..].to_string()
    } else {
        s
    }
}

/// One point of the error plot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlotPoint {
    pub n: f64,
    pub error: f64,
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 30.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 60.0;
/// Zero errors are drawn on this floor of the log axis.
const LOG_FLOOR: f64 = 1e-16;

/// Static SVG line plot of error against granule count, log-scaled y axis.
pub fn error_plot_svg(title: &str, points: &[PlotPoint]) -> String {
    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(svg, "<!-- generator: flexling {} -->", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="24" font-family="sans-serif" font-size="16" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let x0 = MARGIN_LEFT;
    let y0 = HEIGHT - MARGIN_BOTTOM;
    let _ = writeln!(
        svg,
        r#"<path d="M{x0:.2} {MARGIN_TOP:.2} L{x0:.2} {y0:.2} L{:.2} {y0:.2}" stroke="black" fill="none"/>"#,
        x0 + plot_w
    );

    if !points.is_empty() {
        let (n_min, n_max) = points
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| (a.min(p.n), b.max(p.n)));
        let logs: Vec<f64> = points.iter().map(|p| p.error.max(LOG_FLOOR).log10()).collect();
        let lo = logs.iter().copied().fold(f64::INFINITY, f64::min).floor();
        let mut hi = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max).ceil();
        if hi <= lo {
            hi = lo + 1.0;
        }
        let n_span = if n_max > n_min { n_max - n_min } else { 1.0 };
        let px = |n: f64| x0 + (n - n_min) / n_span * plot_w;
        let py = |l: f64| y0 - (l - lo) / (hi - lo) * plot_h;

        for decade in (lo as i32)..=(hi as i32) {
            let y = py(decade as f64);
            let _ = writeln!(
                svg,
                r#"<line x1="{:.2}" y1="{y:.2}" x2="{x0:.2}" y2="{y:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="end">1e{decade}</text>"#,
                x0 - 5.0,
                x0 - 8.0,
                y + 4.0
            );
        }
        for p in points {
            let x = px(p.n);
            let _ = writeln!(
                svg,
                r#"<line x1="{x:.2}" y1="{y0:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/><text x="{x:.2}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="middle">{}</text>"#,
                y0 + 5.0,
                y0 + 18.0,
                p.n
            );
        }
        let coords: Vec<String> = points
            .iter()
            .zip(&logs)
            .map(|(p, &l)| format!("{:.2},{:.2}", px(p.n), py(l)))
            .collect();
        let _ = writeln!(
            svg,
            r##"<polyline points="{}" fill="none" stroke="#1f77b4" stroke-width="2"/>"##,
            coords.join(" ")
        );
        for c in &coords {
            let (cx, cy) = c.split_once(',').unwrap();
            let _ = writeln!(svg, r##"<circle cx="{cx}" cy="{cy}" r="3" fill="#1f77b4"/>"##);
        }
    }

    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="13" text-anchor="middle">granules n</text>"#,
        x0 + plot_w / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="18" y="{:.2}" font-family="sans-serif" font-size="13" text-anchor="middle" transform="rotate(-90 18 {:.2})">sup error (log)</text>"#,
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0
    );
    svg.push_str("</svg>\n");
    svg
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt_num(40.0), "40.0000000000");
        assert_eq!(fmt_num(0.8), "0.800000000000");
        assert_eq!(fmt_num(0.0), "0.00000000000");
        assert_eq!(fmt_num(-1.5), "-1.50000000000");
        assert_eq!(fmt_num(123456.0), "123456.000000");
        assert_eq!(fmt_num(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_num(-1e-60), "0.0000000000000000000000000000000000000000");
    }

    #[test]
    fn plot_has_points() {
        let svg = error_plot_svg(
            "sin",
            &[
                PlotPoint { n: 5.0, error: 0.2 },
                PlotPoint { n: 9.0, error: 0.05 },
                PlotPoint { n: 17.0, error: 0.0 },
            ],
        );
        assert!(svg.starts_with("<?xml"));
        assert_eq!(svg.matches("<circle").count(), 3);
        assert!(svg.contains("<polyline"));
        assert!(svg.trim_end().ends_with("</svg>"));
    }
}
