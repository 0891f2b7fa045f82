use super::{FitResult, LatencySummary};
use std::fmt::Write;

const W: f64 = 640.0;
const H: f64 = 400.0;
const PAD: f64 = 50.0;

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        let (x1, y1) = (if x1 > x0 { x1 } else { x0 + 1.0 }, if y1 > y0 { y1 } else { y0 + 1.0 });
        Frame { x0, x1, y0, y1 }
    }

    fn px(&self, x: f64) -> f64 {
        PAD + (x - self.x0) / (self.x1 - self.x0) * (W - 2.0 * PAD)
    }

    fn py(&self, y: f64) -> f64 {
        H - PAD - (y - self.y0) / (self.y1 - self.y0) * (H - 2.0 * PAD)
    }
}

fn open(out: &mut String, title: &str, f: &Frame, x_label: &str, y_label: &str) {
    let _ = write!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">
<rect width="{W}" height="{H}" fill="white"/>
<text x="{}" y="24" text-anchor="middle" font-size="15">{}</text>
<line x1="{PAD}" y1="{b}" x2="{r}" y2="{b}" stroke="black"/>
<line x1="{PAD}" y1="{PAD}" x2="{PAD}" y2="{b}" stroke="black"/>
<text x="{}" y="{}" text-anchor="middle">{}</text>
<text x="14" y="{}" text-anchor="middle" transform="rotate(-90 14 {})">{}</text>
<text x="{PAD}" y="{}" text-anchor="middle">{}</text>
<text x="{r}" y="{}" text-anchor="middle">{}</text>
<text x="{}" y="{b}" text-anchor="end">{}</text>
<text x="{}" y="{}" text-anchor="end">{}</text>
"#,
        W / 2.0,
        escape(title),
        W / 2.0,
        H - 10.0,
        escape(x_label),
        H / 2.0,
        H / 2.0,
        escape(y_label),
        H - PAD + 16.0,
        tick(f.x0),
        H - PAD + 16.0,
        tick(f.x1),
        PAD - 4.0,
        tick(f.y0),
        PAD - 4.0,
        PAD + 4.0,
        tick(f.y1),
        b = H - PAD,
        r = W - PAD,
    );
}

fn tick(v: f64) -> String {
    format!("{:.2}", v).trim_end_matches('0').trim_end_matches('.').to_string()
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Scatter of `(x, y)` points with an optional fitted parabola.
pub fn scatter_fit_svg(points: &[(f64, f64)], fit: Option<&FitResult>, title: &str, x_label: &str, y_label: &str) -> String {
    let xs = points.iter().map(|p| p.0);
    let ys = points.iter().map(|p| p.1);
    let x0 = xs.clone().fold(f64::INFINITY, f64::min).min(0.0);
    let x1 = xs.fold(f64::NEG_INFINITY, f64::max).max(x0 + 1.0);
    let y1 = ys.fold(0.0f64, f64::max) * 1.1;
    let f = Frame::new(x0, x1, 0.0, y1);
    let mut out = String::new();
    open(&mut out, title, &f, x_label, y_label);
    for &(x, y) in points {
        let _ = writeln!(
            out,
            r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="steelblue"/>"#,
            f.px(x),
            f.py(y)
        );
    }
    if let Some(fit) = fit {
        let steps = 100;
        let path: Vec<String> = (0..=steps)
            .map(|i| {
                let x = f.x0 + (f.x1 - f.x0) * i as f64 / steps as f64;
                let y = fit.eval(x).clamp(f.y0, f.y1);
                format!("{:.2},{:.2}", f.px(x), f.py(y))
            })
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline points="{}" fill="none" stroke="firebrick" stroke-width="2"/>"#,
            path.join(" ")
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Bar chart of a latency histogram with 1 ms bins.
pub fn histogram_svg(summary: &LatencySummary, title: &str) -> String {
    let first = summary.histogram.first().map_or(0, |b| b.start_ms) as f64;
    let last = summary.histogram.last().map_or(0, |b| b.start_ms) as f64 + 1.0;
    let peak = summary.histogram.iter().map(|b| b.count).max().unwrap_or(0) as f64;
    let f = Frame::new(first, last, 0.0, peak * 1.1);
    let mut out = String::new();
    open(&mut out, title, &f, "click-to-photon latency (ms)", "clicks");
    for b in &summary.histogram {
        let x = f.px(b.start_ms as f64);
        let w = f.px(b.start_ms as f64 + 1.0) - x;
        let top = f.py(b.count as f64);
        let _ = writeln!(
            out,
            r#"<rect x="{x:.2}" y="{top:.2}" width="{:.2}" height="{:.2}" fill="steelblue" stroke="white" stroke-width="0.5"/>"#,
            w,
            H - PAD - top
        );
    }
    let mx = f.px(summary.mean);
    let _ = writeln!(
        out,
        r#"<line x1="{mx:.2}" y1="{PAD}" x2="{mx:.2}" y2="{}" stroke="firebrick" stroke-dasharray="4 3"/>"#,
        H - PAD
    );
    out.push_str("</svg>\n");
    out
}
