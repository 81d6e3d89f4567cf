//! Output formats: curve CSV, record JSON and a standalone SVG plot.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use prset_core::harness::{Curve, RunRecord};

use crate::{LabError, LabResult};

pub const CSV_HEADER: [&str; 4] = ["round", "mean_regret", "ci_low", "ci_high"];

/// Decimal rendering with six significant digits, trailing zeros trimmed.
/// Magnitudes outside `[1e-5, 1e15)` use exponent notation.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x.is_nan() { "NaN".into() } else if x == 0.0 { "0".into() } else { format!("{x}") };
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-5..15).contains(&exp) {
        return format!("{x:.5e}");
    }
    let decimals = (5 - exp).max(0) as usize;
    let mut s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.truncate(s.trim_end_matches('0').trim_end_matches('.').len());
    }
    s
}

fn csv_error(path: &Path, source: csv::Error) -> LabError {
    LabError::Csv { path: path.to_path_buf(), source }
}

pub fn write_curve_csv(curve: &Curve, path: &Path) -> LabResult<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)
        .map_err(|e| csv_error(path, e))?;
    w.write_record(CSV_HEADER).map_err(|e| csv_error(path, e))?;
    for t in 0..curve.horizon() {
        w.write_record([
            (t + 1).to_string(),
            sig6(curve.mean[t]),
            sig6(curve.ci_low[t]),
            sig6(curve.ci_high[t]),
        ])
        .map_err(|e| csv_error(path, e))?;
    }
    w.flush().map_err(|e| LabError::io(path, e))
}

/// Reads a curve CSV back; the trial count is not stored and comes back as 0.
pub fn read_curve_csv(path: &Path) -> LabResult<Curve> {
    let mut r = csv::Reader::from_path(path).map_err(|e| csv_error(path, e))?;
    let header = r.headers().map_err(|e| csv_error(path, e))?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(LabError::config(format!("{}: unexpected header {header:?}", path.display())));
    }
    let mut curve = Curve { trials: 0, mean: vec![], ci_low: vec![], ci_high: vec![] };
    for (i, row) in r.records().enumerate() {
        let row = row.map_err(|e| csv_error(path, e))?;
        let num = |j: usize| -> LabResult<f64> {
            row.get(j)
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| LabError::config(format!("{}: bad value on row {}", path.display(), i + 2)))
        };
        if num(0)? != (i + 1) as f64 {
            return Err(LabError::config(format!("{}: rounds out of sequence at row {}", path.display(), i + 2)));
        }
        curve.mean.push(num(1)?);
        curve.ci_low.push(num(2)?);
        curve.ci_high.push(num(3)?);
    }
    Ok(curve)
}

pub fn write_records_json(records: &[RunRecord], path: &Path) -> LabResult<()> {
    let text = serde_json::to_string(records).expect("records serialize");
    fs::write(path, text).map_err(|e| LabError::io(path, e))
}

pub fn read_records_json(path: &Path) -> LabResult<Vec<RunRecord>> {
    let text = fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
    serde_json::from_str(&text).map_err(|source| LabError::Parse { path: path.to_path_buf(), source })
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 20.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 50.0;
/// Rounds drawn at most; long curves are thinned evenly in log-space.
const MAX_POINTS: usize = 1500;

fn sample_rounds(horizon: usize) -> Vec<usize> {
    if horizon <= MAX_POINTS {
        return (1..=horizon).collect();
    }
    let top = (horizon as f64).ln();
    let mut out: Vec<usize> = (0..MAX_POINTS)
        .map(|i| (top * i as f64 / (MAX_POINTS - 1) as f64).exp().round() as usize)
        .map(|t| t.clamp(1, horizon))
        .collect();
    out.dedup();
    out
}

/// Mean regret against rounds on a log-x axis, with the confidence band.
pub fn curve_svg(curve: &Curve, title: &str) -> String {
    let horizon = curve.horizon().max(1);
    let rounds = sample_rounds(curve.horizon());
    let y_min = curve.ci_low.iter().copied().fold(0.0, f64::min);
    let mut y_max = curve.ci_high.iter().copied().fold(0.0, f64::max);
    if y_max - y_min < 1e-12 {
        y_max = y_min + 1.0;
    }
    let plot_w = WIDTH - MARGIN_L - MARGIN_R;
    let plot_h = HEIGHT - MARGIN_T - MARGIN_B;
    let x_span = (horizon as f64).ln().max(1e-9);
    let px = |t: usize| MARGIN_L + plot_w * (t as f64).ln() / x_span;
    let py = |v: f64| MARGIN_T + plot_h * (1.0 - (v - y_min) / (y_max - y_min));

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#, WIDTH / 2.0, escape(title));

    let mut band = String::new();
    for &t in &rounds {
        let _ = write!(band, "{:.2},{:.2} ", px(t), py(curve.ci_high[t - 1]));
    }
    for &t in rounds.iter().rev() {
        let _ = write!(band, "{:.2},{:.2} ", px(t), py(curve.ci_low[t - 1]));
    }
    let _ = writeln!(s, r##"<polygon points="{}" fill="#9ecae1" fill-opacity="0.5" stroke="none"/>"##, band.trim_end());
    let mut line = String::new();
    for &t in &rounds {
        let _ = write!(line, "{:.2},{:.2} ", px(t), py(curve.mean[t - 1]));
    }
    let _ = writeln!(s, r##"<polyline points="{}" fill="none" stroke="#08519c" stroke-width="1.5"/>"##, line.trim_end());

    let (x0, x1, y0, y1) = (MARGIN_L, WIDTH - MARGIN_R, MARGIN_T, HEIGHT - MARGIN_B);
    let _ = writeln!(s, r#"<path d="M{x0},{y0} V{y1} H{x1}" fill="none" stroke="black"/>"#);
    let mut decade = 1usize;
    while decade <= horizon {
        let x = px(decade);
        let _ = writeln!(s, r#"<line x1="{x:.2}" y1="{y1}" x2="{x:.2}" y2="{}" stroke="black"/>"#, y1 + 5.0);
        let _ = writeln!(s, r#"<text x="{x:.2}" y="{}" text-anchor="middle">{decade}</text>"#, y1 + 18.0);
        decade = match decade.checked_mul(10) {
            Some(d) => d,
            None => break,
        };
    }
    for i in 0..=4 {
        let v = y_min + (y_max - y_min) * i as f64 / 4.0;
        let y = py(v);
        let _ = writeln!(s, r#"<line x1="{}" y1="{y:.2}" x2="{x0}" y2="{y:.2}" stroke="black"/>"#, x0 - 5.0);
        let _ = writeln!(s, r#"<text x="{}" y="{:.2}" text-anchor="end">{}</text>"#, x0 - 8.0, y + 4.0, sig6(v));
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">round (log scale)</text>"#, (x0 + x1) / 2.0, HEIGHT - 10.0);
    let _ = writeln!(
        s,
        r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">mean pseudo-regret ({} trials)</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0,
        curve.trials
    );
    s.push_str("</svg>\n");
    s
}

pub fn write_curve_svg(curve: &Curve, title: &str, path: &Path) -> LabResult<()> {
    fs::write(path, curve_svg(curve, title)).map_err(|e| LabError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_significant_digits() {
        assert_eq!(sig6(0.0), "0");
        assert_eq!(sig6(250.0), "250");
        assert_eq!(sig6(1.0 / 3.0), "0.333333");
        assert_eq!(sig6(-2.0 / 3.0), "-0.666667");
        assert_eq!(sig6(123456.7), "123457");
        assert_eq!(sig6(1e-7), "1.00000e-7");
        assert_eq!(sig6(12.5), "12.5");
    }

    #[test]
    fn thinning_keeps_endpoints() {
        let r = sample_rounds(1_000_000);
        assert_eq!(r[0], 1);
        assert_eq!(*r.last().unwrap(), 1_000_000);
        assert!(r.len() <= MAX_POINTS);
        assert!(r.windows(2).all(|w| w[0] < w[1]));
    }
}
