//! Standalone SVG histograms with an analytic density overlay.

use crate::error::{Error, Result};
use crate::numerics::{normal_pdf, Histogram};
use std::fmt::Write as _;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN_LEFT: f64 = 60.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 50.0;
const CURVE_POINTS: usize = 200;

/// Density drawn over the bars.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Overlay {
    /// Standard normal density.
    Normal,
    /// Density of `s |N(0,1)|`.
    HalfNormal(f64),
}

impl Overlay {
    pub fn density(&self, x: f64) -> f64 {
        match *self {
            Overlay::Normal => normal_pdf(x),
            Overlay::HalfNormal(s) => {
                if x < 0.0 {
                    0.0
                } else {
                    2.0 * normal_pdf(x / s) / s
                }
            }
        }
    }

    fn label(&self) -> String {
        match self {
            Overlay::Normal => "N(0,1) density".into(),
            Overlay::HalfNormal(s) => format!("{s:.4}·|N(0,1)| density"),
        }
    }
}

/// Renders `hist` as density-normalized bars with `overlay` sampled at 200
/// points, on a fixed 800×500 canvas.
pub fn emit_svg_histogram(hist: &Histogram, overlay: Overlay, title: &str) -> Result<String> {
    if hist.counts.is_empty() || hist.total() == 0 {
        return Err(Error::Domain("histogram has zero total mass".into()));
    }
    let dens = hist.densities();
    let xs: Vec<f64> = (0..CURVE_POINTS)
        .map(|i| hist.lo + (hist.hi - hist.lo) * i as f64 / (CURVE_POINTS - 1) as f64)
        .collect();
    let curve: Vec<f64> = xs.iter().map(|&x| overlay.density(x)).collect();
    let ymax = dens.iter().chain(&curve).fold(0.0f64, |m, &v| m.max(v)) * 1.1;
    let ymax = if ymax > 0.0 { ymax } else { 1.0 };

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let sx = |x: f64| MARGIN_LEFT + (x - hist.lo) / (hist.hi - hist.lo) * plot_w;
    let sy = |y: f64| MARGIN_TOP + plot_h * (1.0 - y / ymax);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="24" font-family="sans-serif" font-size="16" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        xml_escape(title)
    );
    let w = hist.width();
    for (k, &d) in dens.iter().enumerate() {
        let x0 = sx(hist.lo + k as f64 * w);
        let x1 = sx(hist.lo + (k + 1) as f64 * w);
        let y = sy(d);
        let _ = writeln!(
            s,
            r##"<rect x="{x0:.2}" y="{y:.2}" width="{:.2}" height="{:.2}" fill="#9ecae1" stroke="#3182bd" stroke-width="0.5"/>"##,
            x1 - x0,
            MARGIN_TOP + plot_h - y
        );
    }
    let pts: Vec<String> = xs
        .iter()
        .zip(&curve)
        .map(|(&x, &y)| format!("{:.2},{:.2}", sx(x), sy(y)))
        .collect();
    let _ = writeln!(
        s,
        r##"<polyline points="{}" fill="none" stroke="#de2d26" stroke-width="2"/>"##,
        pts.join(" ")
    );
    // axes
    let base = MARGIN_TOP + plot_h;
    let _ = writeln!(
        s,
        r#"<line x1="{MARGIN_LEFT}" y1="{base}" x2="{}" y2="{base}" stroke="black"/>"#,
        MARGIN_LEFT + plot_w
    );
    let _ = writeln!(
        s,
        r#"<line x1="{MARGIN_LEFT}" y1="{MARGIN_TOP}" x2="{MARGIN_LEFT}" y2="{base}" stroke="black"/>"#
    );
    for i in 0..=8 {
        let x = hist.lo + (hist.hi - hist.lo) * i as f64 / 8.0;
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12" text-anchor="middle">{}</text>"#,
            sx(x),
            base + 18.0,
            tick(x)
        );
    }
    for i in 0..=4 {
        let y = ymax * i as f64 / 4.0;
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12" text-anchor="end">{}</text>"#,
            MARGIN_LEFT - 6.0,
            sy(y) + 4.0,
            tick(y)
        );
    }
    let _ = writeln!(
        s,
        r##"<text x="{}" y="{}" font-family="sans-serif" font-size="12" text-anchor="end" fill="#de2d26">{}</text>"##,
        MARGIN_LEFT + plot_w,
        MARGIN_TOP + 14.0,
        xml_escape(&overlay.label())
    );
    s.push_str("</svg>\n");
    Ok(s)
}

fn tick(v: f64) -> String {
    let r = format!("{v:.2}");
    r.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
