//! Minimal SVG line charts.

use std::fmt::Write;

use crate::error::{Error, Result};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const MARGIN: (f64, f64, f64, f64) = (64.0, 24.0, 40.0, 56.0); // left, right, top, bottom
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"];

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PlotOptions {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_y: bool,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if lo == hi {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

/// One `<polyline>` per series, with a frame, tick labels and a legend.
pub fn render_svg(series: &[Series], opts: &PlotOptions) -> Result<String> {
    if series.is_empty() || series.iter().all(|s| s.points.is_empty()) {
        return Err(Error::Validation("nothing to plot".into()));
    }
    let all = || series.iter().flat_map(|s| s.points.iter().copied());
    if let Some((x, y)) = all().find(|(x, y)| !x.is_finite() || !y.is_finite()) {
        return Err(Error::Validation(format!("cannot plot non-finite point ({x}, {y})")));
    }
    if opts.log_y {
        if let Some((_, y)) = all().find(|&(_, y)| y <= 0.0) {
            return Err(Error::Domain(format!("log-scale y axis needs positive values, found {y}")));
        }
    }
    let ty = |y: f64| if opts.log_y { y.log10() } else { y };
    let (x0, x1) = range(all().map(|p| p.0));
    let (y0, y1) = range(all().map(|p| ty(p.1)));
    let (ml, mr, mt, mb) = MARGIN;
    let pw = WIDTH - ml - mr;
    let ph = HEIGHT - mt - mb;
    let sx = |x: f64| ml + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| mt + ph - (y - y0) / (y1 - y0) * ph;

    let mut svg = String::new();
    let w = &mut svg;
    let _ = writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(w, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        w,
        r#"<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );
    for i in 0..=4 {
        let f = i as f64 / 4.0;
        let xv = x0 + f * (x1 - x0);
        let yv = y0 + f * (y1 - y0);
        let ylabel = if opts.log_y { format!("{:.3e}", 10f64.powf(yv)) } else { format!("{yv:.4}") };
        let _ = writeln!(
            w,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{xv:.4}</text>"#,
            sx(xv),
            mt + ph + 16.0
        );
        let _ = writeln!(
            w,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{ylabel}</text>"#,
            ml - 6.0,
            sy(yv) + 4.0
        );
    }
    let _ = writeln!(
        w,
        r#"<text x="{:.1}" y="20" text-anchor="middle" font-size="14">{}</text>"#,
        ml + pw / 2.0,
        escape(&opts.title)
    );
    let _ = writeln!(
        w,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
        ml + pw / 2.0,
        HEIGHT - 12.0,
        escape(&opts.x_label)
    );
    let y_label = if opts.log_y { format!("{} (log)", opts.y_label) } else { opts.y_label.clone() };
    let _ = writeln!(
        w,
        r#"<text x="16" y="{:.1}" text-anchor="middle" transform="rotate(-90 16 {:.1})">{}</text>"#,
        mt + ph / 2.0,
        mt + ph / 2.0,
        escape(&y_label)
    );
    for (i, s) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let pts: Vec<String> = s
            .points
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(ty(y))))
            .collect();
        let _ = writeln!(
            w,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            pts.join(" ")
        );
        let ly = mt + 16.0 + 16.0 * i as f64;
        let _ = writeln!(
            w,
            r#"<text x="{:.1}" y="{ly:.1}" fill="{color}" text-anchor="end">{}</text>"#,
            ml + pw - 8.0,
            escape(&s.name)
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}
