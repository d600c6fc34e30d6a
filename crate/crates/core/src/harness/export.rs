//! CSV and SVG output for BLER curves.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::compare::BLER_FLOOR;
use super::config::{McsScheme, Technology};
use super::runner::{BlerCurve, BlerPoint, CurveSummary, ErrorBreakdown};
use crate::{Error, Result};

pub const CSV_HEADER: &str = "technology,mcs,channel,snr_db,trials,errors,bler,ci_low,ci_high";
const BREAKDOWN_TAG: &str = "# breakdown ";

#[derive(Debug, Serialize, Deserialize)]
struct Row {
    technology: Technology,
    mcs: McsScheme,
    channel: String,
    snr_db: f64,
    trials: u64,
    errors: u64,
    bler: f64,
    ci_low: f64,
    ci_high: f64,
}

/// CSV text: `comments` as leading `#` lines, one row per point, then one
/// `# breakdown` line per point with the sync / header / payload counts.
pub fn csv_string(curves: &[BlerCurve], comments: &[String]) -> Result<String> {
    let mut out = String::new();
    for c in comments {
        for line in c.lines() {
            writeln!(out, "# {line}").expect("write to String");
        }
    }
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(CSV_HEADER.split(','))?;
    for curve in curves {
        for p in &curve.points {
            w.serialize(Row {
                technology: curve.summary.technology,
                mcs: curve.summary.mcs,
                channel: curve.summary.channel.clone(),
                snr_db: p.snr_db,
                trials: p.trials,
                errors: p.errors,
                bler: p.bler,
                ci_low: p.ci_low,
                ci_high: p.ci_high,
            })?;
        }
    }
    let body = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    out.push_str(std::str::from_utf8(&body).expect("CSV output is UTF-8"));
    for curve in curves {
        for p in &curve.points {
            let b = p.breakdown;
            writeln!(
                out,
                "{BREAKDOWN_TAG}{},{},{},{},{},{},{}",
                curve.summary.technology,
                curve.summary.mcs,
                curve.summary.channel,
                p.snr_db,
                b.sync,
                b.header,
                b.payload
            )
            .expect("write to String");
        }
    }
    Ok(out)
}

pub fn export_csv(curves: &[BlerCurve], comments: &[String], path: &Path) -> Result<()> {
    std::fs::write(path, csv_string(curves, comments)?)?;
    Ok(())
}

/// Parses CSV produced by `csv_string`. Points without a breakdown line count
/// all their errors as payload errors.
pub fn parse_csv(text: &str) -> Result<Vec<BlerCurve>> {
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    if header.join(",") != CSV_HEADER {
        return Err(Error::Parse(format!("unexpected CSV header `{}`", header.join(","))));
    }
    let mut breakdowns = Vec::new();
    for line in text.lines().filter_map(|l| l.strip_prefix(BREAKDOWN_TAG)) {
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 7 {
            return Err(Error::Parse(format!("malformed breakdown line `{line}`")));
        }
        let num = |s: &str| s.parse::<u64>().map_err(|e| Error::Parse(format!("`{s}`: {e}")));
        let snr: f64 = f[3].parse().map_err(|e| Error::Parse(format!("`{}`: {e}", f[3])))?;
        let b = ErrorBreakdown { sync: num(f[4])?, header: num(f[5])?, payload: num(f[6])? };
        breakdowns.push(((f[0].to_string(), f[1].to_string(), f[2].to_string()), snr, b));
    }
    let mut curves: Vec<BlerCurve> = Vec::new();
    for row in reader.deserialize() {
        let row: Row = row?;
        let summary = CurveSummary { technology: row.technology, mcs: row.mcs, channel: row.channel };
        let key = (summary.technology.to_string(), summary.mcs.to_string(), summary.channel.clone());
        let breakdown = breakdowns
            .iter()
            .find(|(k, s, _)| *k == key && s.to_bits() == row.snr_db.to_bits())
            .map(|(_, _, b)| *b)
            .unwrap_or(ErrorBreakdown { payload: row.errors, ..Default::default() });
        if breakdown.total() != row.errors {
            return Err(Error::Parse(format!("breakdown for {key:?} at {} dB does not sum to errors", row.snr_db)));
        }
        let point = BlerPoint {
            snr_db: row.snr_db,
            trials: row.trials,
            errors: row.errors,
            bler: row.bler,
            ci_low: row.ci_low,
            ci_high: row.ci_high,
            breakdown,
        };
        match curves.iter_mut().find(|c| c.summary == summary) {
            Some(c) => c.points.push(point),
            None => curves.push(BlerCurve { summary, points: vec![point] }),
        }
    }
    Ok(curves)
}

pub fn read_csv(path: &Path) -> Result<Vec<BlerCurve>> {
    parse_csv(&std::fs::read_to_string(path)?)
}

const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"];
const WIDTH: f64 = 760.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 220.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 60.0;

/// Standalone SVG with a log BLER axis. Zero-BLER points sit at 1e-6 with
/// open markers.
pub fn plot_svg(curves: &[BlerCurve], title: &str) -> String {
    let pts = || curves.iter().flat_map(|c| c.points.iter()).filter(|p| p.snr_db.is_finite());
    let (mut x0, mut x1) =
        pts().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| (a.min(p.snr_db), b.max(p.snr_db)));
    if !x0.is_finite() {
        (x0, x1) = (0.0, 1.0);
    }
    if x1 - x0 < 1e-9 {
        x0 -= 1.0;
        x1 += 1.0;
    }
    let min_bler = pts().map(|p| p.bler.max(BLER_FLOOR)).fold(1.0, f64::min);
    let decades = (-min_bler.log10().floor()).max(1.0) as i32;
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let sx = |s: f64| LEFT + (s - x0) / (x1 - x0) * plot_w;
    let sy = |b: f64| TOP + (-b.max(BLER_FLOOR).log10()) / decades as f64 * plot_h;

    let mut svg = String::new();
    let w = &mut svg;
    writeln!(w, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    writeln!(w, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    writeln!(
        w,
        r#"<text x="{}" y="18" text-anchor="middle" font-size="14">{}</text>"#,
        LEFT + plot_w / 2.0,
        escape(title)
    )
    .unwrap();
    for d in 0..=decades {
        let y = TOP + d as f64 / decades as f64 * plot_h;
        writeln!(w, r##"<line x1="{LEFT}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#ddd"/>"##, LEFT + plot_w)
            .unwrap();
        writeln!(w, r#"<text x="{}" y="{:.2}" text-anchor="end">1e-{d}</text>"#, LEFT - 6.0, y + 4.0).unwrap();
    }
    let step = nice_step(x1 - x0);
    let mut s = (x0 / step).ceil() * step;
    while s <= x1 + 1e-9 {
        let x = sx(s);
        writeln!(w, r##"<line x1="{x:.2}" y1="{TOP}" x2="{x:.2}" y2="{:.2}" stroke="#eee"/>"##, TOP + plot_h).unwrap();
        writeln!(w, r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, TOP + plot_h + 16.0, fmt_tick(s))
            .unwrap();
        s += step;
    }
    writeln!(w, r#"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#)
        .unwrap();
    writeln!(w, r#"<text x="{}" y="{}" text-anchor="middle">SNR (dB)</text>"#, LEFT + plot_w / 2.0, HEIGHT - 18.0)
        .unwrap();
    writeln!(
        w,
        r#"<text x="18" y="{0}" text-anchor="middle" transform="rotate(-90 18 {0})">BLER</text>"#,
        TOP + plot_h / 2.0
    )
    .unwrap();

    for (i, curve) in curves.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let finite: Vec<&BlerPoint> = curve.points.iter().filter(|p| p.snr_db.is_finite()).collect();
        let path: Vec<String> = finite.iter().map(|p| format!("{:.2},{:.2}", sx(p.snr_db), sy(p.bler))).collect();
        writeln!(w, r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#, path.join(" "))
            .unwrap();
        for p in finite {
            let fill = if p.bler > 0.0 { color } else { "none" };
            writeln!(
                w,
                r#"<circle class="point" cx="{:.2}" cy="{:.2}" r="3.5" fill="{fill}" stroke="{color}" data-bler="{}"/>"#,
                sx(p.snr_db),
                sy(p.bler),
                p.bler
            )
            .unwrap();
        }
        let ly = TOP + 10.0 + 18.0 * i as f64;
        let lx = LEFT + plot_w + 14.0;
        writeln!(w, r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/>"#, lx + 20.0)
            .unwrap();
        writeln!(w, r#"<text x="{}" y="{}">{}</text>"#, lx + 26.0, ly + 4.0, escape(&curve.label())).unwrap();
    }
    writeln!(w, "</svg>").unwrap();
    svg
}

pub fn export_plot(curves: &[BlerCurve], title: &str, path: &Path) -> Result<()> {
    std::fs::write(path, plot_svg(curves, title))?;
    Ok(())
}

fn nice_step(span: f64) -> f64 {
    let raw = span / 8.0;
    let mag = 10f64.powf(raw.log10().floor());
    [1.0, 2.0, 5.0, 10.0].iter().map(|m| m * mag).find(|s| *s >= raw).unwrap_or(10.0 * mag)
}

fn fmt_tick(v: f64) -> String {
    let r = (v * 100.0).round() / 100.0;
    if r == r.trunc() {
        format!("{}", r as i64)
    } else {
        format!("{r}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
