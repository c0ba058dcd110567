use std::fmt::Write as _;
use std::path::Path;

use super::{write_text, ReportError};
use crate::explain::GlobalImportance;
use crate::features::CorrelationMatrix;

pub const WIDTH: u32 = 800;
pub const HEIGHT: u32 = 600;

const LEFT: f64 = 90.0;
const RIGHT: f64 = 30.0;
const TOP: f64 = 50.0;
const BOTTOM: f64 = 70.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn open(out: &mut String, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        out,
        r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="28" text-anchor="middle" font-size="16">{}</text>"#,
        f64::from(WIDTH) / 2.0,
        escape(title)
    );
}

/// Tick step of the form 1, 2 or 5 times a power of ten giving about `target` ticks.
fn tick_step(span: f64, target: f64) -> f64 {
    let raw = span / target;
    let mag = 10f64.powf(raw.log10().floor());
    let norm = raw / mag;
    let nice = if norm <= 1.0 {
        1.0
    } else if norm <= 2.0 {
        2.0
    } else if norm <= 5.0 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let step = tick_step(hi - lo, 5.0);
    let mut t = (lo / step).ceil() * step;
    let mut out = Vec::new();
    while t <= hi + step * 1e-9 {
        out.push(if t.abs() < step * 1e-9 { 0.0 } else { t });
        t += step;
    }
    out
}

fn fmt_tick(v: f64) -> String {
    let s = format!("{v:.2}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.to_string()
    }
}

/// Actual-versus-predicted scatter with the identity line.
///
/// Points are `<circle>` elements and the identity line is the only `<line>`.
pub fn scatter_svg(y_true: &[f64], y_pred: &[f64]) -> Result<String, ReportError> {
    if y_true.len() != y_pred.len() {
        return Err(ReportError::Shape {
            y_true: y_true.len(),
            y_pred: y_pred.len(),
        });
    }
    if y_true.is_empty() {
        return Err(ReportError::Empty);
    }
    let all = y_true.iter().chain(y_pred);
    let (mut lo, mut hi) = all.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| {
        (a.min(v), b.max(v))
    });
    if lo >= 0.0 {
        lo = 0.0;
    }
    if hi <= lo {
        hi = lo + 1.0;
    }
    hi += (hi - lo) * 0.05;

    let pw = f64::from(WIDTH) - LEFT - RIGHT;
    let ph = f64::from(HEIGHT) - TOP - BOTTOM;
    let sx = |v: f64| LEFT + (v - lo) / (hi - lo) * pw;
    let sy = |v: f64| TOP + ph - (v - lo) / (hi - lo) * ph;

    let mut out = String::new();
    open(&mut out, "Actual vs predicted viewership");
    let x0 = LEFT;
    let y0 = TOP + ph;
    let _ = writeln!(
        out,
        r#"<path d="M{x0:.2},{TOP:.2} V{y0:.2} H{:.2}" fill="none" stroke="black"/>"#,
        LEFT + pw
    );
    for t in ticks(lo, hi) {
        let (x, y) = (sx(t), sy(t));
        let label = fmt_tick(t);
        let _ = writeln!(
            out,
            r#"<path d="M{x:.2},{y0:.2} v5 M{x0:.2},{y:.2} h-5" stroke="black"/>"#
        );
        let _ = writeln!(
            out,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{label}</text>"#,
            y0 + 20.0
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{label}</text>"#,
            x0 - 8.0,
            y + 4.0
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">Actual viewers (millions)</text>"#,
        LEFT + pw / 2.0,
        f64::from(HEIGHT) - 20.0
    );
    let _ = writeln!(
        out,
        r#"<text x="25" y="{:.2}" text-anchor="middle" transform="rotate(-90 25 {:.2})">Predicted viewers (millions)</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0
    );
    let _ = writeln!(
        out,
        r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="red" stroke-width="1.5"/>"#,
        sx(lo),
        sy(lo),
        sx(hi),
        sy(hi)
    );
    for (t, p) in y_true.iter().zip(y_pred) {
        let _ = writeln!(
            out,
            r##"<circle cx="{:.2}" cy="{:.2}" r="4" fill="#1f77b4" fill-opacity="0.8"/>"##,
            sx(*t),
            sy(*p)
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}

pub fn render_scatter(
    y_true: &[f64],
    y_pred: &[f64],
    path: impl AsRef<Path>,
) -> Result<(), ReportError> {
    write_text(path.as_ref(), &scatter_svg(y_true, y_pred)?)
}

/// Horizontal bars of mean |attribution|, most important on top.
///
/// Bars are `<rect class="bar">`; the largest spans the full plot width.
pub fn importance_svg(importance: &GlobalImportance) -> Result<String, ReportError> {
    let ranked = importance.ranked();
    if ranked.is_empty() {
        return Err(ReportError::Empty);
    }
    let max = ranked.iter().map(|(_, v)| *v).fold(0.0, f64::max);
    let left = 170.0;
    let pw = f64::from(WIDTH) - left - RIGHT;
    let ph = f64::from(HEIGHT) - TOP - BOTTOM;
    let slot = ph / ranked.len() as f64;

    let mut out = String::new();
    open(&mut out, "Feature importance (mean |Shapley value|)");
    for (i, (name, v)) in ranked.iter().enumerate() {
        let w = if max > 0.0 { v / max * pw } else { 0.0 };
        let y = TOP + i as f64 * slot;
        let _ = writeln!(
            out,
            r##"<rect class="bar" x="{left:.2}" y="{:.2}" width="{w:.2}" height="{:.2}" fill="#1f77b4"/>"##,
            y + slot * 0.1,
            slot * 0.8
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            left - 8.0,
            y + slot / 2.0 + 4.0,
            escape(name)
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}">{v:.4}</text>"#,
            left + w.min(pw - 50.0) + 4.0,
            y + slot / 2.0 + 4.0
        );
    }
    let _ = writeln!(
        out,
        r#"<path d="M{left:.2},{TOP:.2} V{:.2} H{:.2}" fill="none" stroke="black"/>"#,
        TOP + ph,
        left + pw
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">Mean |Shapley value| (log viewers)</text>"#,
        left + pw / 2.0,
        f64::from(HEIGHT) - 20.0
    );
    out.push_str("</svg>\n");
    Ok(out)
}

pub fn render_importance(
    importance: &GlobalImportance,
    path: impl AsRef<Path>,
) -> Result<(), ReportError> {
    write_text(path.as_ref(), &importance_svg(importance)?)
}

/// Diverging blue-white-red fill for `r` in [-1, 1].
fn cell_color(r: f64) -> String {
    let r = r.clamp(-1.0, 1.0);
    let mix = |a: f64| (255.0 - (255.0 - a) * r.abs()).round() as u8;
    let (cr, cg, cb) = if r >= 0.0 {
        (mix(178.0), mix(24.0), mix(43.0))
    } else {
        (mix(33.0), mix(102.0), mix(172.0))
    };
    format!("#{cr:02x}{cg:02x}{cb:02x}")
}

/// Correlation heatmap; each `<rect class="cell">` is annotated with r to 2 decimals.
pub fn heatmap_svg(matrix: &CorrelationMatrix) -> Result<String, ReportError> {
    let n = matrix.names.len();
    if n == 0 {
        return Err(ReportError::Empty);
    }
    let left = 150.0;
    let top = 60.0;
    let size = (f64::from(WIDTH) - left - RIGHT).min(f64::from(HEIGHT) - top - 110.0);
    let cell = size / n as f64;

    let mut out = String::new();
    open(&mut out, "Feature correlation matrix (Pearson r)");
    for (i, row) in matrix.values.iter().enumerate() {
        for (j, r) in row.iter().enumerate() {
            let x = left + j as f64 * cell;
            let y = top + i as f64 * cell;
            let _ = writeln!(
                out,
                r#"<rect class="cell" x="{x:.2}" y="{y:.2}" width="{cell:.2}" height="{cell:.2}" fill="{}" stroke="white"/>"#,
                cell_color(*r)
            );
            let ink = if r.abs() > 0.6 { "white" } else { "black" };
            let _ = writeln!(
                out,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" fill="{ink}">{:.2}</text>"#,
                x + cell / 2.0,
                y + cell / 2.0 + 4.0,
                r
            );
        }
    }
    for (i, name) in matrix.names.iter().enumerate() {
        let c = i as f64 * cell + cell / 2.0;
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            left - 8.0,
            top + c + 4.0,
            escape(name)
        );
        let (x, y) = (left + c, top + size + 12.0);
        let _ = writeln!(
            out,
            r#"<text x="{x:.2}" y="{y:.2}" text-anchor="end" transform="rotate(-40 {x:.2} {y:.2})">{}</text>"#,
            escape(name)
        );
    }
    if !matrix.zero_variance.is_empty() {
        let _ = writeln!(
            out,
            r#"<text x="{left:.2}" y="{:.2}">zero variance (r shown as 0): {}</text>"#,
            f64::from(HEIGHT) - 12.0,
            escape(&matrix.zero_variance.join(", "))
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}

pub fn render_heatmap(
    matrix: &CorrelationMatrix,
    path: impl AsRef<Path>,
) -> Result<(), ReportError> {
    write_text(path.as_ref(), &heatmap_svg(matrix)?)
}
