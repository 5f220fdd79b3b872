use crate::error::{Result, VizError};

/// Canvas size and layout shared by all figures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FigureSpec {
    pub width: f64,
    pub height: f64,
    pub margin: f64,
    /// KDE grid resolution per axis.
    pub kde_grid: usize,
    /// Number of contour levels drawn on the density panel.
    pub contour_levels: usize,
}

impl Default for FigureSpec {
    fn default() -> Self {
        Self { width: 800.0, height: 600.0, margin: 50.0, kde_grid: 100, contour_levels: 8 }
    }
}

impl FigureSpec {
    pub fn validate(&self) -> Result<()> {
        let ok = self.width.is_finite()
            && self.height.is_finite()
            && self.margin >= 0.0
            && self.width > 2.0 * self.margin
            && self.height > 2.0 * self.margin;
        if !ok {
            return Err(VizError::InvalidFigure(format!(
                "{}x{} with margin {} leaves no plot area",
                self.width, self.height, self.margin
            )));
        }
        if self.kde_grid < 10 {
            return Err(VizError::InvalidFigure(format!("kde grid {} is below 10", self.kde_grid)));
        }
        if self.contour_levels == 0 {
            return Err(VizError::InvalidFigure("at least one contour level".into()));
        }
        Ok(())
    }
}

/// Affine map from a data interval onto a pixel interval. The pixel interval
/// may run backwards (screen y grows downward).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub from: f64,
    pub to: f64,
}

impl Axis {
    /// Covers `values`; a degenerate range is widened by ±0.5.
    pub fn covering(values: impl IntoIterator<Item = f64>, from: f64, to: f64) -> Self {
        let (mut lo, mut hi) =
            values.into_iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
        if !lo.is_finite() || !hi.is_finite() {
            (lo, hi) = (0.0, 1.0);
        }
        if hi <= lo {
            lo -= 0.5;
            hi += 0.5;
        }
        Self { lo, hi, from, to }
    }

    pub fn map(&self, v: f64) -> f64 {
        self.from + (v - self.lo) / (self.hi - self.lo) * (self.to - self.from)
    }
}

/// Fill colour for a normalized score `t` in `[0, 1]`: a linear RGB ramp
/// from dark navy (low score) to near-white (high score). Every channel is
/// nondecreasing in `t`, so higher scores are never darker.
pub fn shade(t: f64) -> String {
    const DARK: [f64; 3] = [8.0, 48.0, 107.0];
    const LIGHT: [f64; 3] = [247.0, 251.0, 255.0];
    let t = if t.is_nan() { 0.0 } else { t.clamp(0.0, 1.0) };
    let c: Vec<u8> = DARK.iter().zip(LIGHT).map(|(d, l)| (d + (l - d) * t).round() as u8).collect();
    format!("#{:02x}{:02x}{:02x}", c[0], c[1], c[2])
}

/// Relative luminance proxy of a `#rrggbb` colour, for ordering shades.
pub fn lightness(hex: &str) -> f64 {
    let ch = |i: usize| u8::from_str_radix(&hex[i..i + 2], 16).map(f64::from).unwrap_or(0.0);
    0.2126 * ch(1) + 0.7152 * ch(3) + 0.0722 * ch(5)
}

pub(crate) fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

/// Short tick label.
pub(crate) fn fmt_tick(v: f64) -> String {
    if v != 0.0 && (v.abs() >= 1e5 || v.abs() < 1e-3) {
        format!("{v:.2e}")
    } else {
        format!("{:.3}", v).trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

pub(crate) struct Svg {
    body: String,
}

impl Svg {
    pub fn new(spec: &FigureSpec) -> Self {
        let mut body = String::new();
        body.push_str(r#"<?xml version="1.0" encoding="UTF-8"?>"#);
        body.push('\n');
        body.push_str(&format!(
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
            w = spec.width,
            h = spec.height
        ));
        body.push('\n');
        body.push_str(&format!(r#"<rect x="0" y="0" width="{}" height="{}" fill="white"/>"#, spec.width, spec.height));
        body.push('\n');
        Self { body }
    }

    pub fn line(&mut self, s: &str) {
        self.body.push_str(s);
        self.body.push('\n');
    }

    pub fn text(&mut self, x: f64, y: f64, anchor: &str, size: f64, content: &str) {
        self.line(&format!(
            r#"<text x="{x:.2}" y="{y:.2}" text-anchor="{anchor}" font-family="sans-serif" font-size="{size}">{}</text>"#,
            escape(content)
        ));
    }

    /// Frame, min/max tick labels and axis titles for a panel.
    pub fn axes(&mut self, x: &Axis, y: &Axis, x_title: &str, y_title: &str) {
        let (left, right) = (x.from.min(x.to), x.from.max(x.to));
        let (top, bottom) = (y.from.min(y.to), y.from.max(y.to));
        self.line(&format!(
            r#"<rect x="{left:.2}" y="{top:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="black" stroke-width="1"/>"#,
            right - left,
            bottom - top
        ));
        self.text(left, bottom + 16.0, "start", 11.0, &fmt_tick(x.lo));
        self.text(right, bottom + 16.0, "end", 11.0, &fmt_tick(x.hi));
        self.text(left - 4.0, bottom, "end", 11.0, &fmt_tick(y.lo));
        self.text(left - 4.0, top + 10.0, "end", 11.0, &fmt_tick(y.hi));
        self.text((left + right) / 2.0, bottom + 32.0, "middle", 12.0, x_title);
        self.text(left - 4.0, top - 8.0, "start", 12.0, y_title);
    }

    pub fn finish(mut self) -> String {
        self.body.push_str("</svg>\n");
        self.body
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shade_is_monotone() {
        let mut last = -1.0;
        for i in 0..=100 {
            let l = lightness(&shade(i as f64 / 100.0));
            assert!(l >= last);
            last = l;
        }
        assert!(lightness(&shade(0.9)) > lightness(&shade(0.1)));
    }

    #[test]
    fn axis_is_affine_and_inverts() {
        let a = Axis::covering([0.0, 10.0], 500.0, 100.0);
        assert_eq!(a.map(0.0), 500.0);
        assert_eq!(a.map(10.0), 100.0);
        assert_eq!(a.map(5.0), 300.0);
        let flat = Axis::covering([3.0, 3.0], 0.0, 1.0);
        assert_eq!(flat.map(3.0), 0.5);
    }

    #[test]
    fn escapes_markup() {
        assert_eq!(escape("a<b & \"c\""), "a&lt;b &amp; &quot;c&quot;");
    }
}
