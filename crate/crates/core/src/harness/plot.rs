//! SVG figures and equivalent gnuplot scripts.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use plotters::prelude::*;

use super::ExperimentRow;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum XAxis {
    /// Network size on a log2 scale.
    Size,
    Round,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Metric {
    Steps,
    Cost,
}

impl Metric {
    fn label(self) -> &'static str {
        match self {
            Metric::Steps => "mean steps",
            Metric::Cost => "mean cost",
        }
    }

    fn of(self, r: &ExperimentRow) -> (f64, f64) {
        match self {
            Metric::Steps => (r.mean_steps, r.ci95_steps),
            Metric::Cost => (r.mean_cost, r.ci95_cost),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FigureStyle {
    pub x: XAxis,
    pub metric: Metric,
}

impl FigureStyle {
    fn x_of(self, r: &ExperimentRow) -> i32 {
        match self.x {
            XAxis::Size => r.size.trailing_zeros() as i32,
            XAxis::Round => r.round as i32,
        }
    }
}

const COLORS: [RGBColor; 6] = [
    RGBColor(31, 119, 180),
    RGBColor(214, 39, 40),
    RGBColor(44, 160, 44),
    RGBColor(148, 103, 189),
    RGBColor(255, 127, 14),
    RGBColor(0, 0, 0),
];

/// `(x, mean, ci95)` points.
type Points = Vec<(i32, f64, f64)>;
type Series = BTreeMap<String, Points>;

/// Points per algorithm (per algorithm and size on a round axis with
/// several sizes), in first-appearance order.
fn series(rows: &[ExperimentRow], style: FigureStyle) -> Vec<(String, Points)> {
    let mut order: Vec<String> = Vec::new();
    let mut by_name: Series = BTreeMap::new();
    let split_sizes = style.x == XAxis::Round && rows.iter().any(|r| r.size != rows[0].size);
    for r in rows {
        let name = if split_sizes {
            format!("{} n=2^{}", r.algorithm, r.size.trailing_zeros())
        } else {
            r.algorithm.clone()
        };
        if !by_name.contains_key(&name) {
            order.push(name.clone());
        }
        let (mean, ci) = style.metric.of(r);
        by_name
            .entry(name)
            .or_default()
            .push((style.x_of(r), mean, ci));
    }
    order
        .into_iter()
        .map(|name| {
            let mut pts = by_name.remove(&name).unwrap_or_default();
            pts.sort_by_key(|p| p.0);
            (name, pts)
        })
        .collect()
}

fn plot_err<E: std::fmt::Display>(e: E) -> Error {
    Error::Plot(e.to_string())
}

/// Renders mean ± 95% CI per algorithm to an SVG file.
pub fn emit_plot(
    rows: &[ExperimentRow],
    style: FigureStyle,
    title: &str,
    path: &Path,
) -> Result<()> {
    let data = series(rows, style);
    let xs = data.iter().flat_map(|(_, p)| p.iter().map(|q| q.0));
    let (x_lo, x_hi) = xs.fold((i32::MAX, i32::MIN), |(lo, hi), x| (lo.min(x), hi.max(x)));
    let (x_lo, x_hi) = if x_lo > x_hi {
        (0, 1)
    } else {
        (x_lo - 1, x_hi + 1)
    };
    let ys = data
        .iter()
        .flat_map(|(_, p)| p.iter().flat_map(|q| [q.1 - q.2, q.1 + q.2]));
    let (y_lo, y_hi) = ys.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), y| {
        (lo.min(y), hi.max(y))
    });
    let (y_lo, y_hi) = if y_lo > y_hi {
        (0.0, 1.0)
    } else {
        let pad = ((y_hi - y_lo) * 0.08).max(1e-3);
        ((y_lo - pad).max(0.0), y_hi + pad)
    };

    let root = SVGBackend::new(path, (800, 560)).into_drawing_area();
    root.fill(&WHITE).map_err(plot_err)?;
    let mut chart = ChartBuilder::on(&root)
        .caption(title, ("sans-serif", 22))
        .margin(16)
        .x_label_area_size(44)
        .y_label_area_size(64)
        .build_cartesian_2d(x_lo..x_hi, y_lo..y_hi)
        .map_err(plot_err)?;
    let size_label = |x: &i32| format!("2^{x}");
    let round_label = |x: &i32| x.to_string();
    chart
        .configure_mesh()
        .x_labels((x_hi - x_lo + 1) as usize)
        .x_label_formatter(match style.x {
            XAxis::Size => &size_label,
            XAxis::Round => &round_label,
        })
        .x_desc(match style.x {
            XAxis::Size => "n",
            XAxis::Round => "round",
        })
        .y_desc(style.metric.label())
        .draw()
        .map_err(plot_err)?;

    for (i, (name, pts)) in data.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        chart
            .draw_series(LineSeries::new(
                pts.iter().map(|p| (p.0, p.1)),
                color.stroke_width(2),
            ))
            .map_err(plot_err)?
            .label(name.as_str())
            .legend(move |(x, y)| {
                PathElement::new(vec![(x, y), (x + 20, y)], color.stroke_width(2))
            });
        chart
            .draw_series(
                pts.iter().map(|&(x, m, ci)| {
                    ErrorBar::new_vertical(x, m - ci, m, m + ci, color.filled(), 8)
                }),
            )
            .map_err(plot_err)?;
    }
    if !data.is_empty() {
        chart
            .configure_series_labels()
            .background_style(WHITE.mix(0.85))
            .border_style(BLACK)
            .draw()
            .map_err(plot_err)?;
    }
    root.present().map_err(plot_err)?;
    Ok(())
}

/// A self-contained gnuplot script drawing the same figure.
pub fn gnuplot_script(
    rows: &[ExperimentRow],
    style: FigureStyle,
    title: &str,
    svg_name: &str,
) -> String {
    let data = series(rows, style);
    let mut s = String::new();
    let _ = writeln!(s, "set terminal svg size 800,560");
    let _ = writeln!(s, "set output '{svg_name}'");
    let _ = writeln!(s, "set title '{title}'");
    let _ = writeln!(s, "set ylabel '{}'", style.metric.label());
    match style.x {
        XAxis::Size => {
            let _ = writeln!(
                s,
                "set xlabel 'n'\nset logscale x 2\nset format x '2^{{%L}}'"
            );
        }
        XAxis::Round => {
            let _ = writeln!(s, "set xlabel 'round'");
        }
    }
    let _ = writeln!(s, "set key top left");
    for (i, (_, pts)) in data.iter().enumerate() {
        let _ = writeln!(s, "$s{i} << EOD");
        for &(x, m, ci) in pts {
            let xv = match style.x {
                XAxis::Size => 1u64 << x,
                XAxis::Round => x as u64,
            };
            let _ = writeln!(s, "{xv} {m} {ci}");
        }
        let _ = writeln!(s, "EOD");
    }
    if data.is_empty() {
        let _ = writeln!(s, "set xrange [0:1]\nset yrange [0:1]\nplot NaN notitle");
    } else {
        let plots: Vec<String> = data
            .iter()
            .enumerate()
            .map(|(i, (name, _))| format!("$s{i} using 1:2:3 with yerrorlines title '{name}'"))
            .collect();
        let _ = writeln!(s, "plot {}", plots.join(", \\\n     "));
    }
    s
}
