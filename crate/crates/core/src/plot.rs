//! Line plots rendered to SVG straight from a result CSV.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::output::{format_number, Table};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 150.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 60.0;
const TICKS: usize = 5;
const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];

/// Which columns to draw. Rows sharing a `group` value form one curve.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotSpec {
    pub title: String,
    pub x: String,
    pub y: String,
    pub group: Option<String>,
    pub x_label: String,
    pub y_label: String,
}

struct Curve {
    label: String,
    points: Vec<(f64, f64)>,
}

fn column(table: &Table, name: &str, path: &Path) -> Result<usize> {
    table.column(name).ok_or_else(|| Error::Csv {
        path: path.to_path_buf(),
        message: format!("missing column `{name}`"),
    })
}

fn curves(table: &Table, spec: &PlotSpec, path: &Path) -> Result<Vec<Curve>> {
    let xi = column(table, &spec.x, path)?;
    let yi = column(table, &spec.y, path)?;
    let gi = spec
        .group
        .as_deref()
        .map(|g| column(table, g, path))
        .transpose()?;
    let mut out: Vec<(Option<u64>, Curve)> = Vec::new();
    for row in &table.rows {
        let key = gi.map(|g| row[g].to_bits());
        let idx = match out.iter().position(|(k, _)| *k == key) {
            Some(i) => i,
            None => {
                let label = match (gi, &spec.group) {
                    (Some(g), Some(name)) => format!("{name} = {}", trim_number(row[g])),
                    _ => spec.y.clone(),
                };
                out.push((
                    key,
                    Curve {
                        label,
                        points: Vec::new(),
                    },
                ));
                out.len() - 1
            }
        };
        out[idx].1.points.push((row[xi], row[yi]));
    }
    Ok(out.into_iter().map(|(_, c)| c).collect())
}

fn trim_number(v: f64) -> String {
    let s = format!("{v}");
    if s.len() > 8 {
        format!("{v:.4}")
    } else {
        s
    }
}

fn bounds(values: impl Iterator<Item = f64>) -> Option<(f64, f64)> {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        });
    if lo > hi {
        return None;
    }
    if lo == hi {
        let pad = if lo == 0.0 { 1.0 } else { 0.05 * lo.abs() };
        Some((lo - pad, hi + pad))
    } else {
        Some((lo, hi))
    }
}

/// Renders the table as SVG text. Points with a non-finite coordinate break
/// the line.
pub fn render_svg(table: &Table, spec: &PlotSpec, source: &Path) -> Result<String> {
    if table.rows.is_empty() {
        return Err(Error::Csv {
            path: source.to_path_buf(),
            message: "no data rows to plot".to_string(),
        });
    }
    let curves = curves(table, spec, source)?;
    let all = || curves.iter().flat_map(|c| c.points.iter());
    let no_data = || Error::Csv {
        path: source.to_path_buf(),
        message: "no finite data to plot".to_string(),
    };
    let (x0, x1) = bounds(all().map(|p| p.0)).ok_or_else(no_data)?;
    let (y0, y1) = bounds(all().map(|p| p.1)).ok_or_else(no_data)?;

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let sx = |x: f64| MARGIN_LEFT + (x - x0) / (x1 - x0) * plot_w;
    let sy = |y: f64| MARGIN_TOP + (1.0 - (y - y0) / (y1 - y0)) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
        MARGIN_LEFT + plot_w / 2.0,
        escape(&spec.title)
    );
    let _ = writeln!(
        svg,
        r#"<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    );
    for i in 0..=TICKS {
        let f = i as f64 / TICKS as f64;
        let xv = x0 + f * (x1 - x0);
        let yv = y0 + f * (y1 - y0);
        let _ = writeln!(
            svg,
            r#"<line x1="{0:.1}" y1="{1:.1}" x2="{0:.1}" y2="{2:.1}" stroke="black"/><text x="{0:.1}" y="{3:.1}" text-anchor="middle">{4}</text>"#,
            sx(xv),
            MARGIN_TOP + plot_h,
            MARGIN_TOP + plot_h + 5.0,
            MARGIN_TOP + plot_h + 20.0,
            tick(xv)
        );
        let _ = writeln!(
            svg,
            r#"<line x1="{0:.1}" y1="{1:.1}" x2="{2:.1}" y2="{1:.1}" stroke="black"/><text x="{3:.1}" y="{4:.1}" text-anchor="end">{5}</text>"#,
            MARGIN_LEFT - 5.0,
            sy(yv),
            MARGIN_LEFT,
            MARGIN_LEFT - 8.0,
            sy(yv) + 4.0,
            tick(yv)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 15.0,
        escape(&spec.x_label)
    );
    let _ = writeln!(
        svg,
        r#"<text x="20" y="{0:.1}" text-anchor="middle" transform="rotate(-90 20 {0:.1})">{1}</text>"#,
        MARGIN_TOP + plot_h / 2.0,
        escape(&spec.y_label)
    );

    for (i, curve) in curves.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        for segment in curve
            .points
            .split(|(x, y)| !(x.is_finite() && y.is_finite()))
            .filter(|s| !s.is_empty())
        {
            let pts: Vec<String> = segment
                .iter()
                .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
                .collect();
            let _ = writeln!(
                svg,
                r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
                pts.join(" ")
            );
        }
        let ly = MARGIN_TOP + 15.0 + 18.0 * i as f64;
        let lx = WIDTH - MARGIN_RIGHT + 12.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{lx:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{color}" stroke-width="2"/><text x="{:.1}" y="{:.1}">{}</text>"#,
            lx + 20.0,
            lx + 26.0,
            ly + 4.0,
            escape(&curve.label)
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn tick(v: f64) -> String {
    let s = format_number(v);
    // shorten the 12-digit CSV form for axis labels
    let (mantissa, exp) = s.split_once('e').unwrap_or((&s, "0"));
    let exp: i32 = exp.parse().unwrap_or(0);
    let m: f64 = mantissa.parse().unwrap_or(0.0);
    if (-3..4).contains(&exp) {
        let value = m * 10f64.powi(exp);
        let text = format!("{value:.3}");
        text.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        format!("{m:.2}e{exp}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Reads `csv_path` and writes the plot to `svg_path`. Nothing is written
/// when the CSV has no plottable data.
pub fn emit_plot(csv_path: &Path, spec: &PlotSpec, svg_path: &Path) -> Result<()> {
    let table = Table::read_csv(csv_path)?;
    let svg = render_svg(&table, spec, csv_path)?;
    fs::write(svg_path, svg).map_err(|e| Error::io(svg_path, e))
}
