//! Static SVG chart of a run: the six stocks on a unit left axis and the
//! proportionality score on a secondary right axis.

use std::fmt::Write;

use crate::integrator::Trajectory;
use crate::model::Stock;
use crate::proportionality::ProportionalityTrace;

const WIDTH: f64 = 960.0;
const HEIGHT: f64 = 520.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 820.0;
const TOP: f64 = 50.0;
const BOTTOM: f64 = 460.0;

const STOCK_COLORS: [&str; 6] = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"];
const SCORE_COLOR: &str = "#111111";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ChartError {
    #[error("cannot chart an empty trajectory")]
    Empty,
    #[error("score trace has {score} samples, trajectory has {states}")]
    Misaligned { states: usize, score: usize },
}

struct Axis {
    lo: f64,
    hi: f64,
    px_lo: f64,
    px_hi: f64,
}

impl Axis {
    fn map(&self, v: f64) -> f64 {
        if self.hi == self.lo {
            return (self.px_lo + self.px_hi) / 2.0;
        }
        self.px_lo + (v - self.lo) / (self.hi - self.lo) * (self.px_hi - self.px_lo)
    }
}

fn series(out: &mut String, xs: &[f64], ys: &[f64], x: &Axis, y: &Axis, color: &str, name: &str) {
    if xs.len() == 1 {
        writeln!(
            out,
            r#"<circle class="series" data-name="{name}" cx="{:.2}" cy="{:.2}" r="4" fill="{color}"/>"#,
            x.map(xs[0]),
            y.map(ys[0])
        )
        .unwrap();
        return;
    }
    let points: Vec<String> = xs
        .iter()
        .zip(ys)
        .map(|(&a, &b)| format!("{:.2},{:.2}", x.map(a), y.map(b)))
        .collect();
    writeln!(
        out,
        r#"<polyline class="series" data-name="{name}" fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#,
        points.join(" ")
    )
    .unwrap();
}

/// Renders the run as a standalone SVG 1.1 document.
pub fn emit_chart_svg(traj: &Trajectory, trace: &ProportionalityTrace) -> Result<String, ChartError> {
    if traj.is_empty() {
        return Err(ChartError::Empty);
    }
    if trace.score.len() != traj.len() {
        return Err(ChartError::Misaligned {
            states: traj.len(),
            score: trace.score.len(),
        });
    }
    let t0 = traj.times[0];
    let t1 = *traj.times.last().unwrap();
    let x = Axis {
        lo: t0,
        hi: t1,
        px_lo: LEFT,
        px_hi: RIGHT,
    };
    let stocks = Axis {
        lo: 0.0,
        hi: 1.0,
        px_lo: BOTTOM,
        px_hi: TOP,
    };
    let smin = trace.score.iter().copied().fold(0.0, f64::min);
    let smax = trace.score.iter().copied().fold(0.0, f64::max);
    let pad = ((smax - smin) * 0.1).max(0.01);
    let score = Axis {
        lo: smin - pad,
        hi: smax + pad,
        px_lo: BOTTOM,
        px_hi: TOP,
    };

    let mut out = String::new();
    out.push_str(r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    out.push('\n');
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    writeln!(out, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#).unwrap();
    writeln!(
        out,
        r#"<text x="{}" y="28" text-anchor="middle" font-size="16">Co-learning stocks and proportionality score</text>"#,
        (LEFT + RIGHT) / 2.0
    )
    .unwrap();

    // Grid and axes.
    out.push_str(r##"<g stroke="#dddddd" stroke-width="1">"##);
    out.push('\n');
    for k in 0..=4 {
        let v = k as f64 / 4.0;
        let py = stocks.map(v);
        writeln!(out, r#"<line x1="{LEFT}" y1="{py:.2}" x2="{RIGHT}" y2="{py:.2}"/>"#).unwrap();
        let px = x.map(t0 + v * (t1 - t0));
        writeln!(out, r#"<line x1="{px:.2}" y1="{TOP}" x2="{px:.2}" y2="{BOTTOM}"/>"#).unwrap();
    }
    out.push_str("</g>\n");
    let zero = score.map(0.0);
    writeln!(
        out,
        r##"<line id="score-zero" x1="{LEFT}" y1="{zero:.2}" x2="{RIGHT}" y2="{zero:.2}" stroke="#888888" stroke-dasharray="6 4"/>"##
    )
    .unwrap();
    writeln!(
        out,
        r#"<rect x="{LEFT}" y="{TOP}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        RIGHT - LEFT,
        BOTTOM - TOP
    )
    .unwrap();
    for k in 0..=4 {
        let v = k as f64 / 4.0;
        let tv = t0 + v * (t1 - t0);
        writeln!(
            out,
            r#"<text x="{:.2}" y="{}" text-anchor="middle">{tv:.2}</text>"#,
            x.map(tv),
            BOTTOM + 18.0
        )
        .unwrap();
        writeln!(
            out,
            r#"<text x="{}" y="{:.2}" text-anchor="end">{v:.2}</text>"#,
            LEFT - 8.0,
            stocks.map(v) + 4.0
        )
        .unwrap();
        let sv = score.lo + v * (score.hi - score.lo);
        writeln!(
            out,
            r#"<text x="{}" y="{:.2}" text-anchor="start" fill="{SCORE_COLOR}">{sv:.3}</text>"#,
            RIGHT + 8.0,
            score.map(sv) + 4.0
        )
        .unwrap();
    }
    writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle">mission time (window units)</text>"#,
        (LEFT + RIGHT) / 2.0,
        BOTTOM + 38.0
    )
    .unwrap();
    writeln!(
        out,
        r#"<text transform="translate(20 {}) rotate(-90)" text-anchor="middle">stock level</text>"#,
        (TOP + BOTTOM) / 2.0
    )
    .unwrap();
    writeln!(
        out,
        r#"<text transform="translate({} {}) rotate(90)" text-anchor="middle">score (MA − CD)</text>"#,
        RIGHT + 62.0,
        (TOP + BOTTOM) / 2.0
    )
    .unwrap();

    for (stock, color) in Stock::ALL.into_iter().zip(STOCK_COLORS) {
        let ys = traj.series(stock);
        series(&mut out, &traj.times, &ys, &x, &stocks, color, &stock.name().to_uppercase());
    }
    series(&mut out, &traj.times, &trace.score, &x, &score, SCORE_COLOR, "score");

    // Legend.
    let names = ["H", "A", "S", "T", "U", "C", "score"];
    let colors = STOCK_COLORS.iter().copied().chain([SCORE_COLOR]);
    for (k, (name, color)) in names.iter().zip(colors).enumerate() {
        let ly = TOP + 10.0 + 18.0 * k as f64;
        writeln!(
            out,
            r#"<line x1="{}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="3"/><text x="{}" y="{}">{name}</text>"#,
            RIGHT - 90.0,
            RIGHT - 70.0,
            RIGHT - 64.0,
            ly + 4.0
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    Ok(out)
}
