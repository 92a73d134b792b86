//! Minimal SVG heatmaps, one rectangle per cell.

use std::fmt::Write as _;

/// Rows beyond this count are thinned by a fixed stride.
const MAX_ROWS: usize = 400;
const CELL_W: f64 = 16.0;
const PLOT_H: f64 = 400.0;
const MARGIN: f64 = 40.0;

/// Anchors of the viridis colormap.
const VIRIDIS: [(u8, u8, u8); 9] = [
    (68, 1, 84),
    (71, 44, 122),
    (59, 81, 139),
    (44, 113, 142),
    (33, 144, 141),
    (39, 173, 129),
    (92, 200, 99),
    (170, 220, 50),
    (253, 231, 37),
];

fn colour(v: f64) -> (u8, u8, u8) {
    let x = v.clamp(0.0, 1.0) * (VIRIDIS.len() - 1) as f64;
    let k = (x.floor() as usize).min(VIRIDIS.len() - 2);
    let f = x - k as f64;
    let mix = |a: u8, b: u8| (a as f64 + f * (b as f64 - a as f64)).round() as u8;
    let (a, b) = (VIRIDIS[k], VIRIDIS[k + 1]);
    (mix(a.0, b.0), mix(a.1, b.1), mix(a.2, b.2))
}

/// Heatmap of `rows` (all of equal length), first row at the top.
pub fn heatmap(title: &str, x_label: &str, y_label: &str, rows: &[Vec<f64>]) -> String {
    let stride = rows.len().div_ceil(MAX_ROWS).max(1);
    let shown: Vec<&Vec<f64>> = rows.iter().step_by(stride).collect();
    let cols = shown.first().map_or(0, |r| r.len());
    let (lo, hi) = shown
        .iter()
        .flat_map(|r| r.iter())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| {
            (a.min(v), b.max(v))
        });
    let span = if hi > lo { hi - lo } else { 1.0 };
    let cell_h = if shown.is_empty() {
        0.0
    } else {
        PLOT_H / shown.len() as f64
    };
    let width = 2.0 * MARGIN + CELL_W * cols as f64;
    let height = 2.0 * MARGIN + PLOT_H;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(
        out,
        r#"<text x="{MARGIN}" y="{}" font-size="12">{} (min {lo:.4e}, max {hi:.4e})</text>"#,
        MARGIN / 2.0,
        escape(title)
    );
    for (r, row) in shown.iter().enumerate() {
        for (c, &v) in row.iter().enumerate() {
            let (red, green, blue) = colour((v - lo) / span);
            let _ = writeln!(
                out,
                r#"<rect x="{:.2}" y="{:.2}" width="{CELL_W}" height="{:.4}" fill="rgb({red},{green},{blue})"/>"#,
                MARGIN + c as f64 * CELL_W,
                MARGIN + r as f64 * cell_h,
                cell_h
            );
        }
    }
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" font-size="12" text-anchor="middle">{}</text>"#,
        width / 2.0,
        height - MARGIN / 3.0,
        escape(x_label)
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" font-size="12" text-anchor="middle" transform="rotate(-90 {} {})">{}</text>"#,
        MARGIN / 2.0,
        height / 2.0,
        MARGIN / 2.0,
        height / 2.0,
        escape(y_label)
    );
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
