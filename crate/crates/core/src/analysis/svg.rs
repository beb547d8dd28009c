//! Minimal SVG rendering for AUC-vs-distance curves and distance histograms.

use std::fmt::Write;

use super::binned::DistanceHistogram;

const PANEL_W: f64 = 320.0;
const PANEL_H: f64 = 260.0;
const MARGIN_L: f64 = 52.0;
const MARGIN_R: f64 = 14.0;
const MARGIN_T: f64 = 30.0;
const MARGIN_B: f64 = 44.0;
const TICKS: usize = 5;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];
pub const POSITIVE_COLOR: &str = "#1f77b4";
pub const NEGATIVE_COLOR: &str = "#d62728";

#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Panel {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Maps data ranges onto one panel's plotting area.
struct Frame {
    x0: f64,
    y0: f64,
    x_range: (f64, f64),
    y_range: (f64, f64),
}

impl Frame {
    fn new(ox: f64, oy: f64, x_range: (f64, f64), y_range: (f64, f64)) -> Self {
        Frame {
            x0: ox + MARGIN_L,
            y0: oy + MARGIN_T,
            x_range: widen(x_range),
            y_range: widen(y_range),
        }
    }

    fn plot_w(&self) -> f64 {
        PANEL_W - MARGIN_L - MARGIN_R
    }

    fn plot_h(&self) -> f64 {
        PANEL_H - MARGIN_T - MARGIN_B
    }

    fn x(&self, v: f64) -> f64 {
        self.x0 + (v - self.x_range.0) / (self.x_range.1 - self.x_range.0) * self.plot_w()
    }

    fn y(&self, v: f64) -> f64 {
        self.y0 + self.plot_h() - (v - self.y_range.0) / (self.y_range.1 - self.y_range.0) * self.plot_h()
    }

    fn axes(&self, out: &mut String, title: &str, x_label: &str, y_label: &str) {
        let (w, h) = (self.plot_w(), self.plot_h());
        let _ = writeln!(
            out,
            r##"<rect x="{:.2}" y="{:.2}" width="{w:.2}" height="{h:.2}" fill="none" stroke="#333"/>"##,
            self.x0, self.y0
        );
        let _ = writeln!(
            out,
            r##"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="13">{}</text>"##,
            self.x0 + w / 2.0,
            self.y0 - 10.0,
            escape(title)
        );
        let _ = writeln!(
            out,
            r##"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="11">{}</text>"##,
            self.x0 + w / 2.0,
            self.y0 + h + 36.0,
            escape(x_label)
        );
        let (yx, yy) = (self.x0 - 40.0, self.y0 + h / 2.0);
        let _ = writeln!(
            out,
            r##"<text x="{yx:.2}" y="{yy:.2}" text-anchor="middle" font-size="11" transform="rotate(-90 {yx:.2} {yy:.2})">{}</text>"##,
            escape(y_label)
        );
        for i in 0..=TICKS {
            let f = i as f64 / TICKS as f64;
            let xv = self.x_range.0 + f * (self.x_range.1 - self.x_range.0);
            let yv = self.y_range.0 + f * (self.y_range.1 - self.y_range.0);
            let _ = writeln!(
                out,
                r##"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="9">{}</text>"##,
                self.x(xv),
                self.y0 + h + 14.0,
                tick(xv)
            );
            let _ = writeln!(
                out,
                r##"<text x="{:.2}" y="{:.2}" text-anchor="end" font-size="9">{}</text>"##,
                self.x0 - 4.0,
                self.y(yv) + 3.0,
                tick(yv)
            );
        }
    }
}

fn widen((lo, hi): (f64, f64)) -> (f64, f64) {
    if hi > lo {
        (lo, hi)
    } else {
        (lo - 0.5, hi + 0.5)
    }
}

fn tick(v: f64) -> String {
    let s = format!("{v:.2}");
    if s == "-0.00" {
        "0.00".into()
    } else {
        s
    }
}

fn range(values: impl Iterator<Item = f64>) -> Option<(f64, f64)> {
    values.fold(None, |acc, v| match acc {
        None => Some((v, v)),
        Some((lo, hi)) => Some((lo.min(v), hi.max(v))),
    })
}

fn document(width: f64, height: f64, body: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" viewBox=\"0 0 {width:.0} {height:.0}\" font-family=\"sans-serif\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n{body}</svg>\n"
    )
}

fn legend(out: &mut String, x: f64, y: f64, entries: &[(&str, &str)]) {
    for (i, (name, color)) in entries.iter().enumerate() {
        let yy = y + 14.0 * i as f64;
        let _ = writeln!(
            out,
            r##"<rect x="{x:.2}" y="{:.2}" width="10" height="10" fill="{color}"/><text x="{:.2}" y="{:.2}" font-size="10">{}</text>"##,
            yy - 9.0,
            x + 14.0,
            yy,
            escape(name)
        );
    }
}

/// Panels laid out left to right, each a set of line-and-marker series.
/// A panel without points shows an "insufficient bins" note.
pub fn line_panels(panels: &[Panel]) -> String {
    let mut body = String::new();
    for (p, panel) in panels.iter().enumerate() {
        let ox = p as f64 * PANEL_W;
        let pts = || panel.series.iter().flat_map(|s| s.points.iter().copied());
        let xr = range(pts().map(|p| p.0)).unwrap_or((0.0, 1.0));
        let yr = range(pts().map(|p| p.1)).unwrap_or((0.0, 1.0));
        let frame = Frame::new(ox, 0.0, xr, yr);
        frame.axes(&mut body, &panel.title, &panel.x_label, &panel.y_label);
        if pts().next().is_none() {
            let _ = writeln!(
                body,
                r##"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="12" fill="#777">insufficient bins</text>"##,
                frame.x0 + frame.plot_w() / 2.0,
                frame.y0 + frame.plot_h() / 2.0
            );
            continue;
        }
        let mut entries = Vec::new();
        for (k, s) in panel.series.iter().enumerate() {
            let color = PALETTE[k % PALETTE.len()];
            entries.push((s.name.as_str(), color));
            if s.points.len() > 1 {
                let path: Vec<String> = s
                    .points
                    .iter()
                    .map(|&(x, y)| format!("{:.2},{:.2}", frame.x(x), frame.y(y)))
                    .collect();
                let _ = writeln!(
                    body,
                    r##"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"##,
                    path.join(" ")
                );
            }
            for &(x, y) in &s.points {
                let _ = writeln!(
                    body,
                    r##"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="{color}"/>"##,
                    frame.x(x),
                    frame.y(y)
                );
            }
        }
        legend(&mut body, frame.x0 + 6.0, frame.y0 + 14.0, &entries);
    }
    document(PANEL_W * panels.len().max(1) as f64, PANEL_H, &body)
}

/// Overlaid positive (blue) and negative (red) distance histograms.
pub fn histogram_overlay(h: &DistanceHistogram, title: &str, x_label: &str) -> String {
    let mut body = String::new();
    let lo = h.edges.first().copied().unwrap_or(0.0);
    let hi = h.edges.last().copied().unwrap_or(1.0);
    let top = h.positive.iter().chain(&h.negative).copied().max().unwrap_or(0).max(1) as f64;
    let frame = Frame::new(0.0, 0.0, (lo, hi), (0.0, top));
    frame.axes(&mut body, title, x_label, "edges");
    for (counts, color) in [(&h.positive, POSITIVE_COLOR), (&h.negative, NEGATIVE_COLOR)] {
        for (i, &c) in counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let (x1, x2) = (frame.x(h.edges[i]), frame.x(h.edges[i + 1]));
            let (y1, y2) = (frame.y(c as f64), frame.y(0.0));
            let _ = writeln!(
                body,
                r##"<rect x="{x1:.2}" y="{y1:.2}" width="{:.2}" height="{:.2}" fill="{color}" fill-opacity="0.45"/>"##,
                x2 - x1,
                y2 - y1
            );
        }
    }
    legend(
        &mut body,
        frame.x0 + frame.plot_w() - 70.0,
        frame.y0 + 14.0,
        &[("positive", POSITIVE_COLOR), ("negative", NEGATIVE_COLOR)],
    );
    document(PANEL_W, PANEL_H, &body)
}
