use std::fmt::Write as _;
use std::path::Path;

use crate::{Error, Result};

/// Shortest decimal string that parses back to the same `f64`.
pub fn num(v: f64) -> String {
    format!("{v:?}")
}

/// A CSV table with a config-hash comment, a units comment and a header row.
#[derive(Debug, Clone)]
pub struct Table {
    hash: String,
    columns: Vec<&'static str>,
    units: String,
    rows: Vec<String>,
}

impl Table {
    pub fn new(hash: &str, columns: &[&'static str], units: &str) -> Self {
        Self {
            hash: hash.to_string(),
            columns: columns.to_vec(),
            units: units.to_string(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, values: &[f64]) {
        debug_assert_eq!(values.len(), self.columns.len());
        let row: Vec<String> = values.iter().map(|&v| num(v)).collect();
        self.rows.push(row.join(","));
    }

    /// Row with a trailing text cell.
    pub fn push_tagged(&mut self, values: &[f64], tag: &str) {
        debug_assert_eq!(values.len() + 1, self.columns.len());
        let mut row: Vec<String> = values.iter().map(|&v| num(v)).collect();
        row.push(tag.to_string());
        self.rows.push(row.join(","));
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        writeln!(out, "# config_sha256={}", self.hash).unwrap();
        writeln!(out, "# units: {}", self.units).unwrap();
        writeln!(out, "{}", self.columns.join(",")).unwrap();
        for r in &self.rows {
            out.push_str(r);
            out.push('\n');
        }
        out
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_file(path, &self.render())
    }
}

pub fn write_file(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
    }
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Gnuplot-ready two-column `ln t  ln value` data; nonpositive values skipped.
pub fn log_log_dat(hash: &str, label: &str, times: &[f64], values: &[f64]) -> String {
    let mut out = format!("# config_sha256={hash}\n# {label}: ln(t) ln(norm)\n");
    for (t, v) in times.iter().zip(values) {
        if *v > 0.0 {
            writeln!(out, "{} {}", num(t.ln()), num(v.ln())).unwrap();
        }
    }
    out
}

/// A plain log-log line chart, one polyline per series.
pub fn log_log_svg(title: &str, series: &[(&str, &[f64], &[f64])]) -> String {
    const W: f64 = 640.0;
    const H: f64 = 420.0;
    const PAD: f64 = 60.0;
    const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

    let pts: Vec<Vec<(f64, f64)>> = series
        .iter()
        .map(|(_, t, v)| {
            t.iter()
                .zip(v.iter())
                .filter(|(_, v)| **v > 0.0)
                .map(|(t, v)| (t.log10(), v.log10()))
                .collect()
        })
        .collect();
    let all = pts.iter().flatten();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in all {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if x0 > x1 {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    let (x1, y1) = (x1.max(x0 + 1e-9), y1.max(y0 + 1e-9));
    let sx = |x: f64| PAD + (x - x0) / (x1 - x0) * (W - 2.0 * PAD);
    let sy = |y: f64| H - PAD - (y - y0) / (y1 - y0) * (H - 2.0 * PAD);

    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    )
    .unwrap();
    writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    writeln!(
        out,
        r#"<text x="{}" y="24" text-anchor="middle" font-family="sans-serif" font-size="15">{}</text>"#,
        W / 2.0,
        escape(title)
    )
    .unwrap();
    writeln!(
        out,
        r#"<path d="M{PAD} {PAD} V{} H{}" fill="none" stroke="black"/>"#,
        H - PAD,
        W - PAD
    )
    .unwrap();
    writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="12">log10 t  [{:.2}, {:.2}]</text>"#,
        W / 2.0,
        H - 20.0,
        x0,
        x1
    )
    .unwrap();
    writeln!(
        out,
        r#"<text x="16" y="{}" font-family="sans-serif" font-size="12" transform="rotate(-90 16 {})" text-anchor="middle">log10 norm  [{:.2}, {:.2}]</text>"#,
        H / 2.0,
        H / 2.0,
        y0,
        y1
    )
    .unwrap();
    for (n, ((name, _, _), p)) in series.iter().zip(&pts).enumerate() {
        let color = COLORS[n % COLORS.len()];
        let d: Vec<String> = p
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        writeln!(
            out,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
            d.join(" ")
        )
        .unwrap();
        writeln!(
            out,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" fill="{color}">{}</text>"#,
            W - PAD - 90.0,
            PAD + 16.0 * n as f64,
            escape(name)
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
