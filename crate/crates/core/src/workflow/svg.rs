//! Dependency-free SVG plots. Output depends only on the input data, so the
//! same artifacts always render to the same bytes.

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::analysis::Trajectory;
use crate::error::{Error, Result};

const WIDTH: f64 = 760.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 170.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;

pub fn algorithm_color(name: &str) -> &'static str {
    match name {
        "Decimate" => "#1f77b4",
        "M4" => "#ff7f0e",
        "MinMax" => "#2ca02c",
        "LTTB" => "#d62728",
        "MinMaxLTTB" => "#9467bd",
        "Original" => "#000000",
        _ => "#7f7f7f",
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

#[derive(Debug, Clone, Copy)]
struct Axis {
    lo: f64,
    hi: f64,
    log: bool,
}

impl Axis {
    fn new(lo: f64, hi: f64, log: bool) -> Axis {
        let (lo, hi) = if log { (lo.log10(), hi.log10()) } else { (lo, hi) };
        let (lo, hi) = if hi - lo < 1e-12 {
            (lo - 0.5, hi + 0.5)
        } else {
            (lo, hi)
        };
        let pad = 0.05 * (hi - lo);
        Axis {
            lo: lo - pad,
            hi: hi + pad,
            log,
        }
    }

    fn frac(&self, v: f64) -> f64 {
        let v = if self.log { v.log10() } else { v };
        (v - self.lo) / (self.hi - self.lo)
    }

    fn ticks(&self) -> Vec<f64> {
        if self.log {
            let (a, b) = (self.lo.ceil() as i32, self.hi.floor() as i32);
            return (a..=b).map(|e| 10f64.powi(e)).collect();
        }
        let span = self.hi - self.lo;
        let raw = span / 5.0;
        let mag = 10f64.powf(raw.log10().floor());
        let step = [1.0, 2.0, 5.0, 10.0]
            .iter()
            .map(|m| m * mag)
            .find(|s| span / s <= 6.0)
            .unwrap_or(10.0 * mag);
        let mut t = (self.lo / step).ceil() * step;
        let mut out = Vec::new();
        while t <= self.hi + 1e-12 {
            out.push(if t.abs() < step * 1e-9 { 0.0 } else { t });
            t += step;
        }
        out
    }
}

fn tick_label(v: f64, log: bool) -> String {
    if log {
        let e = v.log10().round() as i32;
        return if (-2..=3).contains(&e) {
            format!("{}", 10f64.powi(e))
        } else {
            format!("1e{e}")
        };
    }
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.to_string()
    }
}

struct Canvas {
    body: String,
    x: Axis,
    y: Axis,
}

impl Canvas {
    fn new(title: &str, x: Axis, y: Axis, x_label: &str, y_label: &str) -> Canvas {
        let mut c = Canvas {
            body: String::new(),
            x,
            y,
        };
        let (pw, ph) = (WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM);
        let _ = writeln!(
            c.body,
            r##"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"##
        );
        let _ = writeln!(c.body, r##"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"##);
        let _ = writeln!(
            c.body,
            r##"<text x="{:.2}" y="22" text-anchor="middle" font-size="15">{}</text>"##,
            LEFT + pw / 2.0,
            escape(title)
        );
        let _ = writeln!(
            c.body,
            r##"<rect class="frame" x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="#444"/>"##
        );
        for t in x.ticks() {
            let px = c.px(t);
            let _ = writeln!(
                c.body,
                "<line x1=\"{px:.2}\" y1=\"{:.2}\" x2=\"{px:.2}\" y2=\"{:.2}\" stroke=\"#444\"/><text x=\"{px:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{}</text>",
                TOP + ph,
                TOP + ph + 5.0,
                TOP + ph + 19.0,
                tick_label(t, x.log)
            );
        }
        for t in y.ticks() {
            let py = c.py(t);
            let _ = writeln!(
                c.body,
                "<line x1=\"{:.2}\" y1=\"{py:.2}\" x2=\"{LEFT}\" y2=\"{py:.2}\" stroke=\"#444\"/><text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{}</text>",
                LEFT - 5.0,
                LEFT - 8.0,
                py + 4.0,
                tick_label(t, y.log)
            );
        }
        let _ = writeln!(
            c.body,
            r##"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"##,
            LEFT + pw / 2.0,
            HEIGHT - 18.0,
            escape(x_label)
        );
        let _ = writeln!(
            c.body,
            r##"<text x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">{}</text>"##,
            TOP + ph / 2.0,
            TOP + ph / 2.0,
            escape(y_label)
        );
        c
    }

    fn px(&self, v: f64) -> f64 {
        LEFT + self.x.frac(v) * (WIDTH - LEFT - RIGHT)
    }

    fn py(&self, v: f64) -> f64 {
        HEIGHT - BOTTOM - self.y.frac(v) * (HEIGHT - TOP - BOTTOM)
    }

    fn legend(&mut self, entries: &[(String, &str)]) {
        let x = WIDTH - RIGHT + 15.0;
        for (i, (name, color)) in entries.iter().enumerate() {
            let y = TOP + 10.0 + 18.0 * i as f64;
            let _ = writeln!(
                self.body,
                r##"<line x1="{x:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="{color}" stroke-width="2"/><text x="{:.2}" y="{:.2}">{}</text>"##,
                x + 20.0,
                x + 26.0,
                y + 4.0,
                escape(name)
            );
        }
    }

    fn finish(mut self) -> String {
        self.body.push_str("</svg>\n");
        self.body
    }
}

fn polyline(points: &[(f64, f64)]) -> String {
    points
        .iter()
        .map(|(x, y)| format!("{x:.2},{y:.2}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn star(cx: f64, cy: f64, r: f64) -> String {
    let pts: Vec<(f64, f64)> = (0..10)
        .map(|i| {
            let rr = if i % 2 == 0 { r } else { r * 0.45 };
            let a = -std::f64::consts::FRAC_PI_2 + std::f64::consts::PI * f64::from(i) / 5.0;
            (cx + rr * a.cos(), cy + rr * a.sin())
        })
        .collect();
    polyline(&pts)
}

/// One point of an accuracy-versus-factor series.
#[derive(Debug, Clone, PartialEq)]
pub struct AccuracyPoint {
    pub algorithm: String,
    pub factor: usize,
    pub mean_accuracy: f64,
}

/// Accuracy against factor (log axis), one line per algorithm, with the
/// original's mean as a dashed line inside a +-1 std band and a star on
/// each algorithm's critical factor.
pub fn accuracy_svg(
    points: &[AccuracyPoint],
    original: (f64, f64),
    critical: &BTreeMap<String, usize>,
) -> Result<String> {
    if points.is_empty() {
        return Err(Error::EmptyResult("no accuracy points to plot".into()));
    }
    let (orig_mean, orig_std) = original;
    let fmin = points.iter().map(|p| p.factor).min().unwrap_or(1).max(1) as f64;
    let fmax = points.iter().map(|p| p.factor).max().unwrap_or(1).max(1) as f64;
    let amin = points
        .iter()
        .map(|p| p.mean_accuracy)
        .fold(orig_mean - orig_std, f64::min);
    let amax = points
        .iter()
        .map(|p| p.mean_accuracy)
        .fold(orig_mean + orig_std, f64::max);
    let mut c = Canvas::new(
        "Accuracy by downsampling factor",
        Axis::new(fmin, fmax, true),
        Axis::new(amin, amax.min(1.0).max(amin), false),
        "downsampling factor",
        "mean CV accuracy",
    );
    let (x0, x1) = (c.px(fmin), c.px(fmax));
    let (yb_hi, yb_lo) = (c.py(orig_mean + orig_std), c.py(orig_mean - orig_std));
    let _ = writeln!(
        c.body,
        r##"<rect class="original-band" x="{x0:.2}" y="{yb_hi:.2}" width="{:.2}" height="{:.2}" fill="#000000" fill-opacity="0.08"/>"##,
        x1 - x0,
        (yb_lo - yb_hi).max(0.0)
    );
    let y = c.py(orig_mean);
    let _ = writeln!(
        c.body,
        r##"<line class="original" x1="{x0:.2}" y1="{y:.2}" x2="{x1:.2}" y2="{y:.2}" stroke="#000000" stroke-dasharray="6 4"/>"##
    );
    let mut series: BTreeMap<&str, Vec<&AccuracyPoint>> = BTreeMap::new();
    for p in points {
        series.entry(p.algorithm.as_str()).or_default().push(p);
    }
    let mut legend = vec![("Original".to_string(), algorithm_color("Original"))];
    for (alg, mut pts) in series {
        pts.sort_by_key(|p| p.factor);
        let color = algorithm_color(alg);
        let xy: Vec<(f64, f64)> = pts
            .iter()
            .map(|p| (c.px(p.factor as f64), c.py(p.mean_accuracy)))
            .collect();
        let _ = writeln!(
            c.body,
            r##"<polyline class="series" fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"##,
            polyline(&xy)
        );
        for (x, y) in &xy {
            let _ = writeln!(c.body, r##"<circle cx="{x:.2}" cy="{y:.2}" r="2.5" fill="{color}"/>"##);
        }
        if let Some(p) = critical.get(alg).and_then(|f| pts.iter().find(|p| p.factor == *f)) {
            let _ = writeln!(
                c.body,
                r##"<polygon class="critical" points="{}" fill="{color}" stroke="#000000" stroke-width="0.5"/>"##,
                star(c.px(p.factor as f64), c.py(p.mean_accuracy), 8.0)
            );
        }
        legend.push((alg.to_string(), color));
    }
    c.legend(&legend);
    Ok(c.finish())
}

/// Heat grid of `values[row][col]` in [0, 1]; rows are treatments, columns
/// classes. Undefined (NaN) cells are hatched grey.
pub fn class_grid_svg(title: &str, rows: &[String], cols: &[String], values: &[Vec<f64>]) -> Result<String> {
    if rows.is_empty() || cols.is_empty() {
        return Err(Error::EmptyResult("no per-class rates to plot".into()));
    }
    let cell_w = 90.0;
    let cell_h = 16.0;
    let left = 150.0;
    let top = 60.0;
    let w = left + cell_w * cols.len() as f64 + 20.0;
    let h = top + cell_h * rows.len() as f64 + 20.0;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r##"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.0} {h:.0}" font-family="sans-serif" font-size="11">"##
    );
    let _ = writeln!(s, r##"<rect width="{w:.0}" height="{h:.0}" fill="white"/>"##);
    let _ = writeln!(
        s,
        r##"<text x="{:.2}" y="20" text-anchor="middle" font-size="14">{}</text>"##,
        w / 2.0,
        escape(title)
    );
    for (j, col) in cols.iter().enumerate() {
        let _ = writeln!(
            s,
            r##"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"##,
            left + cell_w * (j as f64 + 0.5),
            top - 8.0,
            escape(col)
        );
    }
    for (i, row) in rows.iter().enumerate() {
        let y = top + cell_h * i as f64;
        let _ = writeln!(
            s,
            r##"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"##,
            left - 6.0,
            y + cell_h - 4.0,
            escape(row)
        );
        for j in 0..cols.len() {
            let v = values.get(i).and_then(|r| r.get(j)).copied().unwrap_or(f64::NAN);
            let x = left + cell_w * j as f64;
            let (fill, text) = if v.is_finite() {
                let v = v.clamp(0.0, 1.0);
                // white to dark blue
                let r = (255.0 * (1.0 - 0.85 * v)).round() as u8;
                let g = (255.0 * (1.0 - 0.6 * v)).round() as u8;
                (format!("#{r:02x}{g:02x}ff"), format!("{v:.2}"))
            } else {
                ("#cccccc".to_string(), "n/a".to_string())
            };
            let _ = writeln!(
                s,
                "<rect class=\"cell\" x=\"{x:.2}\" y=\"{y:.2}\" width=\"{cell_w}\" height=\"{cell_h}\" fill=\"{fill}\" stroke=\"white\"/><text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{text}</text>",
                x + cell_w / 2.0,
                y + cell_h - 4.0
            );
        }
    }
    s.push_str("</svg>\n");
    Ok(s)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParetoMarker {
    pub label: String,
    pub algorithm: String,
    pub time_s: f64,
    pub accuracy: f64,
    pub dominated: bool,
}

/// Accuracy against extraction time on a log axis. Non-dominated points are
/// filled, labelled and joined by the front line; dominated points are
/// hollow.
pub fn pareto_svg(points: &[ParetoMarker]) -> Result<String> {
    if points.is_empty() {
        return Err(Error::EmptyResult("no Pareto points to plot".into()));
    }
    if let Some(p) = points.iter().find(|p| !(p.time_s.is_finite() && p.time_s > 0.0)) {
        return Err(Error::InvalidArgument(format!(
            "{}: extraction time {} cannot go on a log axis",
            p.label, p.time_s
        )));
    }
    let tmin = points.iter().map(|p| p.time_s).fold(f64::INFINITY, f64::min);
    let tmax = points.iter().map(|p| p.time_s).fold(0.0, f64::max);
    let amin = points.iter().map(|p| p.accuracy).fold(f64::INFINITY, f64::min);
    let amax = points.iter().map(|p| p.accuracy).fold(f64::NEG_INFINITY, f64::max);
    let mut c = Canvas::new(
        "Extraction time vs accuracy",
        Axis::new(tmin, tmax, true),
        Axis::new(amin, amax, false),
        "feature extraction time [s] (log scale)",
        "mean CV accuracy",
    );
    let mut front: Vec<&ParetoMarker> = points.iter().filter(|p| !p.dominated).collect();
    front.sort_by(|a, b| a.time_s.total_cmp(&b.time_s));
    let xy: Vec<(f64, f64)> = front.iter().map(|p| (c.px(p.time_s), c.py(p.accuracy))).collect();
    let _ = writeln!(
        c.body,
        r##"<polyline class="front" fill="none" stroke="#444444" stroke-dasharray="3 3" points="{}"/>"##,
        polyline(&xy)
    );
    for p in points {
        let (x, y) = (c.px(p.time_s), c.py(p.accuracy));
        let color = algorithm_color(&p.algorithm);
        if p.dominated {
            let _ = writeln!(
                c.body,
                r##"<circle class="dominated" cx="{x:.2}" cy="{y:.2}" r="4" fill="none" stroke="{color}"/>"##
            );
        } else {
            let _ = writeln!(
                c.body,
                "<circle class=\"non-dominated\" cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"5\" fill=\"{color}\" stroke=\"#000000\"/><text x=\"{:.2}\" y=\"{:.2}\" font-size=\"10\">{}</text>",
                x + 7.0,
                y - 5.0,
                escape(&p.label)
            );
        }
    }
    let mut algs: Vec<&str> = points.iter().map(|p| p.algorithm.as_str()).collect();
    algs.sort_unstable();
    algs.dedup();
    let legend: Vec<(String, &str)> = algs.iter().map(|a| (a.to_string(), algorithm_color(a))).collect();
    c.legend(&legend);
    Ok(c.finish())
}

/// Polylines of embedded importance vectors, one per (algorithm, fold),
/// starting at the original (square marker).
pub fn trajectories_svg(trajectories: &[Trajectory]) -> Result<String> {
    let coords: Vec<&[f64]> = trajectories
        .iter()
        .flat_map(|t| t.vertices.iter().map(|v| v.coords.as_slice()))
        .collect();
    if coords.is_empty() {
        return Err(Error::EmptyResult("no trajectories to plot".into()));
    }
    if coords.iter().any(|c| c.len() < 2) {
        return Err(Error::InvalidArgument("trajectory vertices need 2 coordinates".into()));
    }
    let (mut xmin, mut xmax, mut ymin, mut ymax) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for c in &coords {
        xmin = xmin.min(c[0]);
        xmax = xmax.max(c[0]);
        ymin = ymin.min(c[1]);
        ymax = ymax.max(c[1]);
    }
    let mut c = Canvas::new(
        "Feature-importance trajectories (MDS)",
        Axis::new(xmin, xmax, false),
        Axis::new(ymin, ymax, false),
        "MDS 1",
        "MDS 2",
    );
    let mut algs: Vec<&str> = Vec::new();
    for t in trajectories {
        let color = algorithm_color(&t.algorithm);
        let xy: Vec<(f64, f64)> = t
            .vertices
            .iter()
            .map(|v| (c.px(v.coords[0]), c.py(v.coords[1])))
            .collect();
        let _ = writeln!(
            c.body,
            r##"<polyline class="trajectory" fill="none" stroke="{color}" stroke-opacity="0.6" points="{}"/>"##,
            polyline(&xy)
        );
        if let (Some(first), Some(v)) = (xy.first(), t.vertices.first()) {
            if v.factor == 1 {
                let _ = writeln!(
                    c.body,
                    r##"<rect class="origin" x="{:.2}" y="{:.2}" width="6" height="6" fill="#000000"/>"##,
                    first.0 - 3.0,
                    first.1 - 3.0
                );
            }
        }
        if let Some(last) = xy.last() {
            let _ = writeln!(
                c.body,
                r##"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="{color}"/>"##,
                last.0, last.1
            );
        }
        if !algs.contains(&t.algorithm.as_str()) {
            algs.push(&t.algorithm);
        }
    }
    algs.sort_unstable();
    let legend: Vec<(String, &str)> = algs.iter().map(|a| (a.to_string(), algorithm_color(a))).collect();
    c.legend(&legend);
    Ok(c.finish())
}
