use std::fmt::Write as _;

use odkit_core::TimeSeriesFrame;

use crate::error::{Result, VizError};
use crate::figure::{shade, Axis, FigureSpec, Svg};
use crate::kde::Kde;

const SERIES_COLOURS: [&str; 8] =
    ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"];

/// How the distribution figure treats the frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    /// Two feature columns: density contours plus a score-shaded scatter.
    Static,
    /// Any column count: one curve per column against the timestamps.
    TimeSeries,
}

/// Scores min-max normalized to `[0, 1]`; a constant vector maps to 0.5.
pub fn normalize_scores(scores: &[f64]) -> Vec<f64> {
    let lo = scores.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi > lo {
        scores.iter().map(|s| (s - lo) / (hi - lo)).collect()
    } else {
        vec![0.5; scores.len()]
    }
}

fn check_scores(scores: &[f64], expected: usize) -> Result<()> {
    if scores.len() != expected {
        return Err(VizError::LengthMismatch { what: "scores", expected, got: scores.len() });
    }
    if scores.iter().any(|s| !s.is_finite()) {
        return Err(VizError::NonFinite("scores"));
    }
    Ok(())
}

fn points_attr(points: impl Iterator<Item = (f64, f64)>) -> String {
    let mut out = String::new();
    for (i, (x, y)) in points.enumerate() {
        if i > 0 {
            out.push(' ');
        }
        let _ = write!(out, "{x:.2},{y:.2}");
    }
    out
}

/// SVG text of the distribution figure.
pub fn render_distribution(
    frame: &TimeSeriesFrame,
    scores: &[f64],
    kind: PlotKind,
    spec: &FigureSpec,
) -> Result<String> {
    spec.validate()?;
    if frame.is_empty() || frame.n_cols() == 0 {
        return Err(VizError::Empty);
    }
    check_scores(scores, frame.n_rows())?;
    match kind {
        PlotKind::Static => render_static(frame, scores, spec),
        PlotKind::TimeSeries => Ok(render_series(frame, spec)),
    }
}

fn render_static(frame: &TimeSeriesFrame, scores: &[f64], spec: &FigureSpec) -> Result<String> {
    if frame.n_cols() != 2 {
        return Err(VizError::NotTwoDimensional(frame.n_cols()));
    }
    let points: Vec<[f64; 2]> = frame.rows().map(|r| [r[0], r[1]]).collect();
    let (xname, yname) = (&frame.columns()[0], &frame.columns()[1]);
    let m = spec.margin;
    let panel = (spec.width - 3.0 * m) / 2.0;
    let (top, bottom) = (m, spec.height - m);
    let mut svg = Svg::new(spec);

    let grid = Kde::fit(points.clone()).grid(spec.kde_grid);
    let gx = Axis { lo: grid.x0, hi: grid.x1, from: m, to: m + panel };
    let gy = Axis { lo: grid.y0, hi: grid.y1, from: bottom, to: top };
    svg.text(m + panel / 2.0, m - 20.0, "middle", 14.0, "Kernel density estimate");
    svg.axes(&gx, &gy, xname, yname);
    svg.line(r#"<g id="density">"#);
    let peak = grid.max();
    let levels = spec.contour_levels;
    for l in 1..=levels {
        let level = peak * l as f64 / (levels + 1) as f64;
        let mut d = String::new();
        for [a, b] in grid.contour(level) {
            let _ = write!(d, "M{:.2} {:.2}L{:.2} {:.2}", gx.map(a.0), gy.map(a.1), gx.map(b.0), gy.map(b.1));
        }
        if d.is_empty() {
            continue;
        }
        // denser levels drawn darker
        let colour = shade(1.0 - l as f64 / (levels + 1) as f64);
        svg.line(&format!(
            r#"<path class="contour" data-level="{level:.6e}" d="{d}" fill="none" stroke="{colour}" stroke-width="1.2"/>"#
        ));
    }
    svg.line("</g>");

    let left = 2.0 * m + panel;
    let sx = Axis::covering(points.iter().map(|p| p[0]), left, left + panel);
    let sy = Axis::covering(points.iter().map(|p| p[1]), bottom, top);
    svg.text(left + panel / 2.0, m - 20.0, "middle", 14.0, "Outlier score (lighter is higher)");
    svg.axes(&sx, &sy, xname, yname);
    svg.line(r#"<g id="scatter">"#);
    for (p, t) in points.iter().zip(normalize_scores(scores)) {
        svg.line(&format!(
            r##"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{}" stroke="#333333" stroke-width="0.5"/>"##,
            sx.map(p[0]),
            sy.map(p[1]),
            shade(t)
        ));
    }
    svg.line("</g>");
    Ok(svg.finish())
}

fn render_series(frame: &TimeSeriesFrame, spec: &FigureSpec) -> String {
    let m = spec.margin;
    let x = Axis::covering(frame.timestamps().iter().map(|&t| t as f64), m, spec.width - m);
    let y = Axis::covering(frame.values().iter().copied(), spec.height - m, m);
    let mut svg = Svg::new(spec);
    svg.text(spec.width / 2.0, m - 20.0, "middle", 14.0, "Series");
    svg.axes(&x, &y, "timestamp", "value");
    svg.line(r#"<g id="series">"#);
    for (j, name) in frame.columns().iter().enumerate() {
        let colour = SERIES_COLOURS[j % SERIES_COLOURS.len()];
        let pts =
            points_attr(frame.timestamps().iter().zip(frame.rows()).map(|(&t, r)| (x.map(t as f64), y.map(r[j]))));
        svg.line(&format!(
            r#"<polyline class="series" data-column="{}" points="{pts}" fill="none" stroke="{colour}" stroke-width="1.2"/>"#,
            crate::figure::escape(name)
        ));
        svg.text(spec.width - m + 4.0, m + 14.0 * (j as f64 + 1.0), "start", 10.0, name);
    }
    svg.line("</g>");
    svg.finish()
}

/// SVG text of the score figure: score curve, dashed threshold line and a
/// distinct mark on every point strictly above the threshold.
pub fn render_outlierscore(timestamps: &[i64], scores: &[f64], threshold: f64, spec: &FigureSpec) -> Result<String> {
    spec.validate()?;
    check_scores(scores, timestamps.len())?;
    if timestamps.is_empty() {
        return Err(VizError::Empty);
    }
    if !threshold.is_finite() {
        return Err(VizError::NonFinite("threshold"));
    }
    let m = spec.margin;
    let x = Axis::covering(timestamps.iter().map(|&t| t as f64), m, spec.width - m);
    let y = Axis::covering(scores.iter().copied().chain([threshold]), spec.height - m, m);
    let mut svg = Svg::new(spec);
    svg.text(spec.width / 2.0, m - 20.0, "middle", 14.0, "Outlier score");
    svg.axes(&x, &y, "timestamp", "score");
    svg.line(r#"<g id="score">"#);
    let pts = points_attr(timestamps.iter().zip(scores).map(|(&t, &s)| (x.map(t as f64), y.map(s))));
    svg.line(&format!(r##"<polyline class="score" points="{pts}" fill="none" stroke="#1f77b4" stroke-width="1.2"/>"##));
    let ty = y.map(threshold);
    svg.line(&format!(
        r##"<line class="threshold" x1="{:.2}" y1="{ty:.2}" x2="{:.2}" y2="{ty:.2}" stroke="#d62728" stroke-width="1" stroke-dasharray="6 4"/>"##,
        x.from, x.to
    ));
    for (&t, &s) in timestamps.iter().zip(scores) {
        if s > threshold {
            svg.line(&format!(
                r##"<circle class="outlier-mark" cx="{:.2}" cy="{:.2}" r="4" fill="#d62728"/>"##,
                x.map(t as f64),
                y.map(s)
            ));
        }
    }
    svg.line("</g>");
    Ok(svg.finish())
}
