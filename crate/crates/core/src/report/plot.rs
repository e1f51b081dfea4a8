use std::fmt::Write as _;
use std::io::Write;

use super::{Histogram, ReportError};

const PALETTE: [&str; 6] = ["#1f4e9c", "#c0392b", "#2e8b57", "#8e44ad", "#d68910", "#555555"];
const PANEL_W: f64 = 560.0;
const PANEL_H: f64 = 400.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 20.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 55.0;

#[derive(Debug, Clone, PartialEq)]
pub struct Style {
    pub label: String,
    pub color: Option<String>,
}

impl Style {
    pub fn new(label: impl Into<String>) -> Self {
        Style { label: label.into(), color: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    Overlay,
    Panels,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotSpec {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub layout: Layout,
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn fmt(x: f64) -> String {
    let s = format!("{x:.2}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn tick_label(x: f64) -> String {
    let s = format!("{x:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.to_string() }
}

fn step_points(h: &Histogram, x0: f64, y0: f64, w: f64, ht: f64, ymax: f64) -> String {
    let sx = |x: f64| x0 + (x - h.lo()) / (h.hi() - h.lo()) * w;
    let sy = |y: f64| y0 + ht - y / ymax * ht;
    let mut pts = String::new();
    let _ = write!(pts, "{},{}", fmt(sx(h.lo())), fmt(sy(0.0)));
    for (i, &c) in h.counts().iter().enumerate() {
        let (a, b) = h.bin_edges(i);
        let _ = write!(pts, " {},{} {},{}", fmt(sx(a)), fmt(sy(c)), fmt(sx(b)), fmt(sy(c)));
    }
    let _ = write!(pts, " {},{}", fmt(sx(h.hi())), fmt(sy(0.0)));
    pts
}

fn axes(doc: &mut String, h: &Histogram, x0: f64, y0: f64, w: f64, ht: f64, ymax: f64, spec: &PlotSpec) {
    let _ = writeln!(
        doc,
        r#"<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        fmt(x0),
        fmt(y0),
        fmt(w),
        fmt(ht)
    );
    for k in 0..=5 {
        let f = k as f64 / 5.0;
        let x = x0 + f * w;
        let xv = h.lo() + f * (h.hi() - h.lo());
        let _ = writeln!(
            doc,
            r#"<line x1="{0}" y1="{1}" x2="{0}" y2="{2}" stroke="black"/><text x="{0}" y="{3}" font-size="12" text-anchor="middle">{4}</text>"#,
            fmt(x),
            fmt(y0 + ht),
            fmt(y0 + ht - 6.0),
            fmt(y0 + ht + 16.0),
            tick_label(xv)
        );
        let y = y0 + ht - f * ht;
        let _ = writeln!(
            doc,
            r#"<line x1="{0}" y1="{1}" x2="{2}" y2="{1}" stroke="black"/><text x="{3}" y="{4}" font-size="12" text-anchor="end">{5}</text>"#,
            fmt(x0),
            fmt(y),
            fmt(x0 + 6.0),
            fmt(x0 - 4.0),
            fmt(y + 4.0),
            tick_label(f * ymax)
        );
    }
    let _ = writeln!(
        doc,
        r#"<text x="{}" y="{}" font-size="14" text-anchor="middle">{}</text>"#,
        fmt(x0 + w / 2.0),
        fmt(y0 + ht + 40.0),
        esc(&spec.x_label)
    );
    let _ = writeln!(
        doc,
        r#"<text x="{0}" y="{1}" font-size="14" text-anchor="middle" transform="rotate(-90 {0} {1})">{2}</text>"#,
        fmt(x0 - 50.0),
        fmt(y0 + ht / 2.0),
        esc(&spec.y_label)
    );
}

/// Renders step histograms as a standalone SVG document.
pub fn plot_svg(hists: &[(&Histogram, Style)], spec: &PlotSpec) -> Result<String, ReportError> {
    let Some((first, _)) = hists.first() else {
        return Err(ReportError::Input("nothing to plot".into()));
    };
    if hists.iter().any(|(h, _)| !h.same_binning(first)) {
        return Err(ReportError::Input("histograms to plot must share their binning".into()));
    }
    let n_panels = match spec.layout {
        Layout::Overlay => 1,
        Layout::Panels => hists.len(),
    };
    let total_w = PANEL_W * n_panels as f64;
    let inner_w = PANEL_W - MARGIN_L - MARGIN_R;
    let inner_h = PANEL_H - MARGIN_T - MARGIN_B;
    let ymax = hists.iter().flat_map(|(h, _)| h.counts().iter().copied()).fold(0.0, f64::max).max(1.0) * 1.1;

    let mut doc = String::new();
    let _ = writeln!(doc, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        doc,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{0}" height="{1}" viewBox="0 0 {0} {1}" font-family="sans-serif">"#,
        fmt(total_w),
        fmt(PANEL_H)
    );
    let _ = writeln!(doc, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        doc,
        r#"<text x="{}" y="22" font-size="16" text-anchor="middle">{}</text>"#,
        fmt(total_w / 2.0),
        esc(&spec.title)
    );
    for (i, (h, style)) in hists.iter().enumerate() {
        let panel = if spec.layout == Layout::Panels { i } else { 0 };
        let x0 = panel as f64 * PANEL_W + MARGIN_L;
        if spec.layout == Layout::Panels || i == 0 {
            axes(&mut doc, h, x0, MARGIN_T, inner_w, inner_h, ymax, spec);
        }
        let color = style.color.clone().unwrap_or_else(|| PALETTE[i % PALETTE.len()].to_string());
        let _ = writeln!(
            doc,
            r#"<polyline fill="none" stroke="{}" stroke-width="1.5" points="{}"/>"#,
            esc(&color),
            step_points(h, x0, MARGIN_T, inner_w, inner_h, ymax)
        );
        let row = if spec.layout == Layout::Panels { 0 } else { i };
        let ly = MARGIN_T + 18.0 + 18.0 * row as f64;
        let lx = x0 + inner_w - 150.0;
        let _ = writeln!(
            doc,
            r#"<line x1="{0}" y1="{1}" x2="{2}" y2="{1}" stroke="{3}" stroke-width="2"/><text x="{4}" y="{5}" font-size="12">{6}</text>"#,
            fmt(lx),
            fmt(ly),
            fmt(lx + 20.0),
            esc(&color),
            fmt(lx + 26.0),
            fmt(ly + 4.0),
            esc(&style.label)
        );
    }
    let _ = writeln!(doc, "</svg>");
    Ok(doc)
}

pub fn emit_plot<W: Write>(hists: &[(&Histogram, Style)], spec: &PlotSpec, sink: &mut W) -> Result<(), ReportError> {
    let doc = plot_svg(hists, spec)?;
    sink.write_all(doc.as_bytes())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(layout: Layout) -> PlotSpec {
        PlotSpec { title: "m(Dsπ) <test>".into(), x_label: "mass [GeV]".into(), y_label: "entries".into(), layout }
    }

    #[test]
    fn two_series() {
        let mut a = Histogram::new(20, 5.0, 5.6).unwrap();
        let mut b = a.clone();
        a.fill(5.28).unwrap();
        b.fill(5.37).unwrap();
        for layout in [Layout::Overlay, Layout::Panels] {
            let doc = plot_svg(&[(&a, Style::new("S1")), (&b, Style::new("S3 & fit"))], &spec(layout)).unwrap();
            assert_eq!(doc.matches("<polyline").count(), 2);
        }
    }

    #[test]
    fn errors() {
        assert!(plot_svg(&[], &spec(Layout::Overlay)).is_err());
        let a = Histogram::new(20, 5.0, 5.6).unwrap();
        let b = Histogram::new(10, 5.0, 5.6).unwrap();
        assert!(plot_svg(&[(&a, Style::new("a")), (&b, Style::new("b"))], &spec(Layout::Overlay)).is_err());
    }
}
