//! CSV and SVG output for scan tables.

use std::fmt::Write as _;
use std::io::Write;

use serde::Serialize;

use crate::error::Result;
use crate::scans::region::RegionTable;

/// Frozen column order of region-scan CSV files.
pub const REGION_CSV_HEADER: [&str; 9] = [
    "family",
    "alpha",
    "visibility",
    "usual_value",
    "usual_bound",
    "usual_detected",
    "glsi_theta_star",
    "glsi_violation",
    "glsi_detected",
];

/// Writes `# key=value` lines, then a header row and one row per record.
pub fn write_csv<W: Write, T: Serialize>(
    mut out: W,
    rows: impl IntoIterator<Item = T>,
    metadata: &[(String, String)],
) -> Result<()> {
    for (k, v) in metadata {
        writeln!(out, "# {k}={v}")?;
    }
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn region_csv<W: Write>(out: W, table: &RegionTable, metadata: &[(String, String)]) -> Result<()> {
    write_csv(out, &table.cells, metadata)
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 60.0;

fn svg_open(title: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#, WIDTH / 2.0, escape(title));
    s
}

fn axes(s: &mut String, x_label: &str, y_label: &str, x_range: (f64, f64), y_range: (f64, f64)) {
    let (x0, y0, x1, y1) = (MARGIN, HEIGHT - MARGIN, WIDTH - MARGIN, MARGIN);
    let _ = writeln!(s, r#"<path d="M{x0} {y1} L{x0} {y0} L{x1} {y0}" fill="none" stroke="black"/>"#);
    for (t, v) in [(0.0, x_range.0), (1.0, x_range.1)] {
        let x = x0 + t * (x1 - x0);
        let _ = writeln!(s, r#"<text x="{x}" y="{}" text-anchor="middle">{v:.3}</text>"#, y0 + 16.0);
    }
    for (t, v) in [(0.0, y_range.0), (1.0, y_range.1)] {
        let y = y0 - t * (y0 - y1);
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">{v:.3}</text>"#, x0 - 6.0, y + 4.0);
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, (x0 + x1) / 2.0, y0 + 36.0, escape(x_label));
    let _ = writeln!(
        s,
        r#"<text x="18" y="{0}" text-anchor="middle" transform="rotate(-90 18 {0})">{1}</text>"#,
        (y0 + y1) / 2.0,
        escape(y_label)
    );
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.filter(|v| v.is_finite()).fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), v| (l.min(v), h.max(v)));
    if !lo.is_finite() {
        (0.0, 1.0)
    } else if hi - lo < 1e-12 {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

/// Red for positive violation, blue for negative, white at zero.
fn heat_colour(value: f64, scale: f64) -> String {
    let t = (value / scale).clamp(-1.0, 1.0);
    let fade = |t: f64| (255.0 * (1.0 - t.abs())).round() as u8;
    if t >= 0.0 {
        format!("rgb(255,{0},{0})", fade(t))
    } else {
        format!("rgb({0},{0},255)", fade(t))
    }
}

/// Heat map of the optimized violation over `(α, V)`, with cells detected by
/// the usual LSI outlined.
pub fn region_svg(table: &RegionTable) -> String {
    let mut s = svg_open(&format!("{} family: violation over (alpha, V)", table.family));
    let (na, nv) = (table.alpha_grid.len(), table.v_grid.len());
    let scale = table.cells.iter().map(|c| c.glsi_violation.abs()).fold(1e-12, f64::max);
    let cw = (WIDTH - 2.0 * MARGIN) / na as f64;
    let ch = (HEIGHT - 2.0 * MARGIN) / nv as f64;
    for i in 0..na {
        for j in 0..nv {
            let c = table.cell(i, j);
            let x = MARGIN + i as f64 * cw;
            let y = HEIGHT - MARGIN - (j + 1) as f64 * ch;
            let stroke = if c.usual_detected { r#" stroke="black" stroke-width="0.6""# } else { "" };
            let _ = writeln!(
                s,
                r#"<rect x="{x:.2}" y="{y:.2}" width="{cw:.2}" height="{ch:.2}" fill="{}"{stroke}/>"#,
                heat_colour(c.glsi_violation, scale)
            );
        }
    }
    let a = (table.alpha_grid[0], table.alpha_grid[na - 1]);
    let v = (table.v_grid[0], table.v_grid[nv - 1]);
    axes(&mut s, "alpha (rad)", "visibility V", a, v);
    s.push_str("</svg>\n");
    s
}

/// Named polyline data for [`line_svg`].
pub struct Series<'a> {
    pub name: &'a str,
    pub points: Vec<(f64, f64)>,
}

const PALETTE: [&str; 5] = ["#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e"];

pub fn line_svg(title: &str, x_label: &str, y_label: &str, series: &[Series<'_>]) -> String {
    let mut s = svg_open(title);
    let xr = range(series.iter().flat_map(|c| c.points.iter().map(|p| p.0)));
    let yr = range(series.iter().flat_map(|c| c.points.iter().map(|p| p.1)));
    let px = |x: f64| MARGIN + (x - xr.0) / (xr.1 - xr.0) * (WIDTH - 2.0 * MARGIN);
    let py = |y: f64| HEIGHT - MARGIN - (y - yr.0) / (yr.1 - yr.0) * (HEIGHT - 2.0 * MARGIN);
    for (k, c) in series.iter().enumerate() {
        let colour = PALETTE[k % PALETTE.len()];
        let pts: Vec<String> =
            c.points.iter().filter(|p| p.0.is_finite() && p.1.is_finite()).map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y))).collect();
        let _ = writeln!(s, r#"<polyline points="{}" fill="none" stroke="{colour}" stroke-width="1.5"/>"#, pts.join(" "));
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" fill="{colour}">{}</text>"#,
            WIDTH - MARGIN - 140.0,
            MARGIN + 16.0 * (k + 1) as f64,
            escape(c.name)
        );
    }
    axes(&mut s, x_label, y_label, xr, yr);
    s.push_str("</svg>\n");
    s
}
