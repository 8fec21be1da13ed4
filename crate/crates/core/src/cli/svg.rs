//! Static SVG line charts of sweep rows: one panel per metric, one line per
//! trace, Monte-Carlo points as open circles.

use std::f64::consts::LN_2;
use std::fmt::Write as _;

use super::config::Metric;
use super::sweep::{fmt_sig, Cell, SweepRow, SweepSpec};

const WIDTH: f64 = 680.0;
const PANEL_HEIGHT: f64 = 360.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 130.0;
const MARGIN_TOP: f64 = 30.0;
const MARGIN_BOTTOM: f64 = 50.0;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
];

struct Series {
    label: String,
    line: Vec<(f64, f64)>,
    points: Vec<(f64, f64)>,
}

fn extent(series: &[Series]) -> Option<(f64, f64, f64, f64)> {
    let all = series.iter().flat_map(|s| s.line.iter().chain(&s.points));
    let mut b: Option<(f64, f64, f64, f64)> = None;
    for &(x, y) in all {
        b = Some(match b {
            None => (x, x, y, y),
            Some((x0, x1, y0, y1)) => (x0.min(x), x1.max(x), y0.min(y), y1.max(y)),
        });
    }
    b.map(|(x0, x1, y0, y1)| {
        let pad = |lo: f64, hi: f64| {
            if hi > lo {
                let m = 0.02 * (hi - lo);
                (lo - m, hi + m)
            } else {
                (lo - 0.5, hi + 0.5)
            }
        };
        let (x0, x1) = pad(x0, x1);
        let (y0, y1) = pad(y0, y1);
        (x0, x1, y0, y1)
    })
}

/// Round tick positions inside `[lo, hi]`, steps of 1, 2 or 5 times a power of ten.
fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let raw = (hi - lo) / 8.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|k| k * mag)
        .find(|&st| st >= raw)
        .unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

fn panel(
    out: &mut String,
    top: f64,
    title: &str,
    y_label: &str,
    legend_title: &str,
    series: &[Series],
) {
    let _ = writeln!(out, r#"<g transform="translate(0,{top})">"#);
    let (pw, ph) = (
        WIDTH - MARGIN_LEFT - MARGIN_RIGHT,
        PANEL_HEIGHT - MARGIN_TOP - MARGIN_BOTTOM,
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="18" text-anchor="middle" font-size="14">{title}</text>"#,
        MARGIN_LEFT + pw / 2.0
    );
    let Some((x0, x1, y0, y1)) = extent(series) else {
        let _ = writeln!(
            out,
            r#"<text x="{MARGIN_LEFT}" y="60" font-size="12">no data</text></g>"#
        );
        return;
    };
    let sx = |x: f64| MARGIN_LEFT + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| MARGIN_TOP + (y1 - y) / (y1 - y0) * ph;

    let _ = writeln!(
        out,
        r#"<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );
    for xv in ticks(x0, x1) {
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="11">{}</text>"#,
            sx(xv),
            MARGIN_TOP + ph + 16.0,
            fmt_sig(xv)
        );
    }
    for yv in ticks(y0, y1) {
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end" font-size="11">{}</text>"#,
            MARGIN_LEFT - 6.0,
            sy(yv) + 4.0,
            fmt_sig(yv)
        );
        let _ = writeln!(
            out,
            r##"<line x1="{MARGIN_LEFT}" x2="{:.2}" y1="{y:.2}" y2="{y:.2}" stroke="#dddddd"/>"##,
            MARGIN_LEFT + pw,
            y = sy(yv)
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="12">average SNR of main link (dB)</text>"#,
        MARGIN_LEFT + pw / 2.0,
        PANEL_HEIGHT - 12.0
    );
    let _ = writeln!(
        out,
        r#"<text transform="translate(16,{:.2}) rotate(-90)" text-anchor="middle" font-size="12">{y_label}</text>"#,
        MARGIN_TOP + ph / 2.0
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{MARGIN_TOP}" font-size="11">{legend_title}</text>"#,
        MARGIN_LEFT + pw + 12.0
    );
    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        if s.line.len() > 1 {
            let pts: Vec<String> = s
                .line
                .iter()
                .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
                .collect();
            let _ = writeln!(
                out,
                r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
                pts.join(" ")
            );
        }
        for &(x, y) in &s.points {
            let _ = writeln!(
                out,
                r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="none" stroke="{color}"/>"#,
                sx(x),
                sy(y)
            );
        }
        let ly = MARGIN_TOP + 18.0 + 18.0 * i as f64;
        let lx = MARGIN_LEFT + pw + 12.0;
        let _ = writeln!(
            out,
            r#"<line x1="{lx}" x2="{}" y1="{ly}" y2="{ly}" stroke="{color}" stroke-width="1.5"/><text x="{}" y="{}" font-size="11">{}</text>"#,
            lx + 20.0,
            lx + 26.0,
            ly + 4.0,
            s.label
        );
    }
    out.push_str("</g>\n");
}

fn collect(
    spec: &SweepSpec,
    rows: &[SweepRow],
    line: fn(&SweepRow) -> Cell,
    mc: fn(&SweepRow) -> Cell,
    scale: f64,
) -> Vec<Series> {
    spec.vary_values
        .iter()
        .map(|&v| {
            let trace: Vec<&SweepRow> = rows.iter().filter(|r| r.vary_value == v).collect();
            let pick = |f: fn(&SweepRow) -> Cell| -> Vec<(f64, f64)> {
                trace
                    .iter()
                    .filter_map(|r| f(r).value().map(|y| (r.snr_db, y * scale)))
                    .collect()
            };
            Series {
                label: fmt_sig(v),
                line: pick(line),
                points: pick(mc),
            }
        })
        .collect()
}

/// SVG document for the requested metrics of a sweep.
pub fn line_chart(spec: &SweepSpec, rows: &[SweepRow], bits: bool) -> String {
    let (unit, scale) = if bits {
        ("bits", 1.0 / LN_2)
    } else {
        ("nats", 1.0)
    };
    let mut panels: Vec<(String, String, Vec<Series>)> = Vec::new();
    if spec.metrics.contains(&Metric::Pnsc) {
        panels.push((
            "PNSC".into(),
            "probability".into(),
            collect(spec, rows, |r| r.pnsc, |r| r.pnsc_mc, 1.0),
        ));
    }
    if spec.metrics.contains(&Metric::Asc) {
        panels.push((
            "ASC".into(),
            format!("ASC ({unit})"),
            collect(spec, rows, |r| r.asc_nats, |r| r.asc_mc, scale),
        ));
    }
    if spec.metrics.contains(&Metric::AscAsym) {
        panels.push((
            "asymptotic ASC".into(),
            format!("ASC ({unit})"),
            collect(spec, rows, |r| r.asc_asym_nats, |_| Cell::Na, scale),
        ));
    }
    let height = PANEL_HEIGHT * panels.len().max(1) as f64;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" viewBox="0 0 {WIDTH} {height}" font-family="sans-serif">"#
    );
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    for (i, (title, label, series)) in panels.iter().enumerate() {
        panel(
            &mut out,
            PANEL_HEIGHT * i as f64,
            title,
            label,
            spec.vary.name(),
            series,
        );
    }
    out.push_str("</svg>\n");
    out
}
