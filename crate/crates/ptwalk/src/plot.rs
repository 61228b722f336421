//! Static SVG views of result tables.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write;

use ptwalk_core::scan::SweepResult;
use ptwalk_core::topology::PhaseCell;

use crate::csv::format_g;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("nothing to plot: {0}")]
pub struct NothingToPlot(pub &'static str);

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#e6b800", "#2ca02c", "#9467bd", "#8c564b", "#17becf", "#7f7f7f",
];
const PANEL_W: f64 = 520.0;
const PANEL_H: f64 = 320.0;
const MARGIN: f64 = 60.0;

/// Label for `k·π/4`, e.g. `-3π/4`, `π/2`, `0`.
pub fn pi_quarter_label(k: i64) -> String {
    if k == 0 {
        return "0".into();
    }
    let (num, den) = reduce(k, 4);
    let sign = if num < 0 { "-" } else { "" };
    let n = num.abs();
    let head = if n == 1 {
        "π".to_string()
    } else {
        format!("{n}π")
    };
    if den == 1 {
        format!("{sign}{head}")
    } else {
        format!("{sign}{head}/{den}")
    }
}

fn reduce(mut n: i64, mut d: i64) -> (i64, i64) {
    let (mut a, mut b) = (n.abs(), d);
    while b != 0 {
        (a, b) = (b, a % b);
    }
    n /= a;
    d /= a;
    (n, d)
}

/// Round tick values covering `[lo, hi]`.
fn nice_ticks(lo: f64, hi: f64) -> Vec<f64> {
    let span = (hi - lo).max(1e-12);
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .into_iter()
        .map(|m| m * mag)
        .find(|s| span / s <= 6.0)
        .unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|i| i as f64 * step).collect()
}

struct Axes {
    x0: f64,
    y0: f64,
    xlo: f64,
    xhi: f64,
    ylo: f64,
    yhi: f64,
}

impl Axes {
    fn px(&self, x: f64) -> f64 {
        self.x0 + (x - self.xlo) / (self.xhi - self.xlo) * PANEL_W
    }

    fn py(&self, y: f64) -> f64 {
        self.y0 + PANEL_H - (y - self.ylo) / (self.yhi - self.ylo) * PANEL_H
    }

    fn frame(&self, svg: &mut String, xlabel: &str, ylabel: &str) {
        let (x0, y0) = (self.x0, self.y0);
        let _ = writeln!(
            svg,
            r##"<rect x="{x0}" y="{y0}" width="{PANEL_W}" height="{PANEL_H}" fill="none" stroke="#000"/>"##
        );
        let k_lo = (self.xlo / (PI / 4.0) - 1e-9).ceil() as i64;
        let k_hi = (self.xhi / (PI / 4.0) + 1e-9).floor() as i64;
        for k in k_lo..=k_hi {
            let x = self.px(k as f64 * PI / 4.0);
            let yb = y0 + PANEL_H;
            let _ = writeln!(
                svg,
                r##"<line x1="{x:.2}" y1="{yb}" x2="{x:.2}" y2="{:.2}" stroke="#000"/><text x="{x:.2}" y="{:.2}" text-anchor="middle" font-size="12">{}</text>"##,
                yb + 5.0,
                yb + 18.0,
                pi_quarter_label(k)
            );
        }
        for v in nice_ticks(self.ylo, self.yhi) {
            let y = self.py(v);
            let _ = writeln!(
                svg,
                r##"<line x1="{:.2}" y1="{y:.2}" x2="{x0}" y2="{y:.2}" stroke="#000"/><text x="{:.2}" y="{:.2}" text-anchor="end" font-size="12">{}</text>"##,
                x0 - 5.0,
                x0 - 8.0,
                y + 4.0,
                format_g(v, 6)
            );
        }
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="13">{xlabel}</text>"#,
            x0 + PANEL_W / 2.0,
            y0 + PANEL_H + 38.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="13" transform="rotate(-90 {:.2} {:.2})">{ylabel}</text>"#,
            x0 - 45.0,
            y0 + PANEL_H / 2.0,
            x0 - 45.0,
            y0 + PANEL_H / 2.0
        );
    }
}

fn open_svg(width: f64, height: f64) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">\n<rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>\n"
    )
}

fn beta_label(beta: f64) -> String {
    format!("β={}π", format_g(beta / PI, 4))
}

/// `(α, D, S)`
type Point = (f64, Option<f64>, Option<f64>);
type Pick = fn(&Point) -> Option<f64>;

/// D and S against α, one polyline per `(β, t)` series in each panel.
pub fn sweep_svg(result: &SweepResult) -> Result<String, NothingToPlot> {
    if result.is_empty() {
        return Err(NothingToPlot("the result has no rows"));
    }
    // BTreeMap over bit patterns keeps series in (β, t) order
    let mut series: BTreeMap<(u64, usize), Vec<Point>> = BTreeMap::new();
    for r in &result.rows {
        let key = (order_key(r.beta), r.t);
        series
            .entry(key)
            .or_default()
            .push((r.alpha, r.diffusion, r.entropy_bits));
    }
    if series.values().all(|s| s.len() < 2) {
        return Err(NothingToPlot(
            "every series has a single α point; a one-point curve is meaningless",
        ));
    }
    let alphas = result.rows.iter().map(|r| r.alpha);
    let xlo = alphas.clone().fold(f64::INFINITY, f64::min);
    let xhi = alphas.fold(f64::NEG_INFINITY, f64::max);

    let width = 2.0 * (PANEL_W + 2.0 * MARGIN);
    let height = PANEL_H + 2.0 * MARGIN + 20.0 * series.len() as f64;
    let mut svg = open_svg(width, height);
    let panels: [(&str, Pick); 2] = [("D", |p| p.1), ("S (bits)", |p| p.2)];
    for (i, (label, pick)) in panels.into_iter().enumerate() {
        let values = series.values().flatten().filter_map(pick);
        let ylo = values.clone().fold(f64::INFINITY, f64::min).min(0.0);
        let mut yhi = values.fold(f64::NEG_INFINITY, f64::max);
        if yhi.is_nan() || yhi <= ylo {
            yhi = ylo + 1.0;
        }
        let axes = Axes {
            x0: MARGIN + i as f64 * (PANEL_W + 2.0 * MARGIN),
            y0: MARGIN,
            xlo,
            xhi,
            ylo,
            yhi: yhi * 1.05,
        };
        axes.frame(&mut svg, "α", label);
        for (n, points) in series.values().enumerate() {
            let coords: Vec<String> = points
                .iter()
                .filter_map(|p| pick(p).map(|y| format!("{:.2},{:.2}", axes.px(p.0), axes.py(y))))
                .collect();
            let _ = writeln!(
                svg,
                r#"<polyline fill="none" stroke="{}" stroke-width="1.5" points="{}"/>"#,
                PALETTE[n % PALETTE.len()],
                coords.join(" ")
            );
        }
    }
    for (n, (&(beta_bits, t), _)) in series.iter().enumerate() {
        let y = MARGIN + PANEL_H + 50.0 + 20.0 * n as f64;
        let colour = PALETTE[n % PALETTE.len()];
        let _ = writeln!(
            svg,
            r#"<line x1="{MARGIN}" y1="{y}" x2="{}" y2="{y}" stroke="{colour}" stroke-width="2"/><text x="{}" y="{}" font-size="12">{}, t={t}</text>"#,
            MARGIN + 30.0,
            MARGIN + 36.0,
            y + 4.0,
            beta_label(from_order_key(beta_bits))
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Monotone map from `f64` to `u64`, so floats can key a sorted map.
fn order_key(x: f64) -> u64 {
    let b = x.to_bits();
    if b >> 63 == 1 {
        !b
    } else {
        b | (1 << 63)
    }
}

fn from_order_key(k: u64) -> f64 {
    f64::from_bits(if k >> 63 == 1 { k & !(1 << 63) } else { !k })
}

const TRANSITION_COLOUR: &str = "#d62728";

fn winding_colour(w: i32) -> &'static str {
    match w {
        0 => "#e8e8e8",
        1 => "#1f77b4",
        -1 => "#ff9f40",
        _ => "#444444",
    }
}

/// Coloured cell grid: one rectangle per cell, transition cells in red.
/// `cells[i][j]` is `(α_i, β_j)`; α runs along x.
pub fn phase_diagram_svg(cells: &[Vec<PhaseCell>]) -> Result<String, NothingToPlot> {
    let n_alpha = cells.len();
    let n_beta = cells.first().map_or(0, Vec::len);
    if n_alpha * n_beta == 0 {
        return Err(NothingToPlot("the phase diagram has no cells"));
    }
    if n_alpha < 2 || n_beta < 2 {
        return Err(NothingToPlot(
            "a phase diagram needs at least two points on each axis",
        ));
    }
    let side = PANEL_W.min(PANEL_H * 1.6);
    let (cw, ch) = (side / n_alpha as f64, side / n_beta as f64);
    let alpha = |i: usize| cells[i][0].alpha;
    let beta = |j: usize| cells[0][j].beta;
    let xlo = alpha(0);
    let xhi = alpha(n_alpha - 1) + (alpha(n_alpha - 1) - alpha(n_alpha - 2));
    let ylo = beta(0);
    let yhi = beta(n_beta - 1) + (beta(n_beta - 1) - beta(n_beta - 2));

    let width = side + 2.0 * MARGIN + 160.0;
    let height = side + 2.0 * MARGIN;
    let mut svg = open_svg(width, height);
    svg.push_str("<g shape-rendering=\"crispEdges\">\n");
    for (i, column) in cells.iter().enumerate() {
        for (j, cell) in column.iter().enumerate() {
            let colour = match cell.winding {
                Some(w) => winding_colour(w.value),
                None => TRANSITION_COLOUR,
            };
            let _ = writeln!(
                svg,
                r#"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="{colour}"/>"#,
                MARGIN + i as f64 * cw,
                MARGIN + side - (j + 1) as f64 * ch,
                cw,
                ch
            );
        }
    }
    svg.push_str("</g>\n");
    let scale_x = |x: f64| MARGIN + (x - xlo) / (xhi - xlo) * side;
    let scale_y = |y: f64| MARGIN + side - (y - ylo) / (yhi - ylo) * side;
    let _ = writeln!(
        svg,
        r##"<rect x="{MARGIN}" y="{MARGIN}" width="{side}" height="{side}" fill="none" stroke="#000"/>"##
    );
    let quarter = |lo: f64, hi: f64| {
        (lo / (PI / 4.0) - 1e-9).ceil() as i64..=(hi / (PI / 4.0) + 1e-9).floor() as i64
    };
    for k in quarter(xlo, xhi) {
        let x = scale_x(k as f64 * PI / 4.0);
        let yb = MARGIN + side;
        let _ = writeln!(
            svg,
            r##"<line x1="{x:.2}" y1="{yb}" x2="{x:.2}" y2="{:.2}" stroke="#000"/><text x="{x:.2}" y="{:.2}" text-anchor="middle" font-size="12">{}</text>"##,
            yb + 5.0,
            yb + 18.0,
            pi_quarter_label(k)
        );
    }
    for k in quarter(ylo, yhi) {
        let y = scale_y(k as f64 * PI / 4.0);
        let _ = writeln!(
            svg,
            r##"<line x1="{:.2}" y1="{y:.2}" x2="{MARGIN}" y2="{y:.2}" stroke="#000"/><text x="{:.2}" y="{:.2}" text-anchor="end" font-size="12">{}</text>"##,
            MARGIN - 5.0,
            MARGIN - 8.0,
            y + 4.0,
            pi_quarter_label(k)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="13">α</text><text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="13">β</text>"#,
        MARGIN + side / 2.0,
        MARGIN + side + 38.0,
        MARGIN - 45.0,
        MARGIN + side / 2.0
    );
    let legend = [
        ("W = 0", winding_colour(0)),
        ("W = 1", winding_colour(1)),
        ("W = -1", winding_colour(-1)),
        ("transition", TRANSITION_COLOUR),
    ];
    for (n, (label, colour)) in legend.into_iter().enumerate() {
        let x = MARGIN + side + 20.0;
        let y = MARGIN + 24.0 * n as f64;
        let _ = writeln!(
            svg,
            r##"<rect x="{x}" y="{y}" width="14" height="14" fill="{colour}" stroke="#000"/><text x="{}" y="{}" font-size="12">{label}</text>"##,
            x + 20.0,
            y + 12.0
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}
