//! SVG rendering of CDF files.

use std::path::Path;

use plotters::prelude::*;

use crate::output::read_cdf;
use crate::Error;

const MAX_POINTS: usize = 2000;

/// Legend label derived from a `cdf_<curve>.csv` file name.
pub fn legend_label(path: &Path) -> String {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("curve");
    let name = stem.strip_prefix("cdf_").unwrap_or(stem);
    let (scheme, rest) = if let Some(rest) = name.strip_prefix("full_ap_multiuser") {
        ("Full AP (multi-user)", rest)
    } else if let Some(rest) = name.strip_prefix("full_ap") {
        ("Full AP", rest)
    } else if let Some(rest) = name.strip_prefix("oas_dp") {
        ("OAS-DP", rest)
    } else if let Some(rest) = name.strip_prefix("oas") {
        ("OAS", rest)
    } else {
        return name.to_string();
    };
    match rest.trim_start_matches('_') {
        "" | "full_power" => scheme.to_string(),
        "power_saving" => format!("{scheme} Power Saving"),
        "equal_total_power" => format!("{scheme} Equal Total Power"),
        other => format!("{scheme} {other}"),
    }
}

/// Keeps at most `max` evenly spaced rows, always including the last one.
fn thin(rows: &[(f64, f64)], max: usize) -> Vec<(f64, f64)> {
    if rows.len() <= max {
        return rows.to_vec();
    }
    let step = rows.len().div_ceil(max);
    let mut out: Vec<_> = rows.iter().step_by(step).copied().collect();
    if out.last() != rows.last() {
        out.push(*rows.last().unwrap());
    }
    out
}

/// Staircase polyline of an empirical CDF.
fn staircase(rows: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut pts = Vec::with_capacity(2 * rows.len() + 1);
    pts.push((rows[0].0, 0.0));
    let mut prev = 0.0;
    for &(x, p) in rows {
        pts.push((x, prev));
        pts.push((x, p));
        prev = p;
    }
    pts
}

/// Draws every CDF file into one SVG. Nothing is written if any input is invalid.
pub fn plot(inputs: &[impl AsRef<Path>], out: &Path) -> Result<(), Error> {
    if inputs.is_empty() {
        return Err(Error::Plot("no CDF files to plot".into()));
    }
    let curves = inputs
        .iter()
        .map(|p| {
            let p = p.as_ref();
            read_cdf(p).map(|rows| (legend_label(p), thin(&rows, MAX_POINTS)))
        })
        .collect::<Result<Vec<_>, _>>()?;

    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for (_, rows) in &curves {
        lo = lo.min(rows[0].0);
        hi = hi.max(rows[rows.len() - 1].0);
    }
    let pad = ((hi - lo) * 0.02).max(1e-3);
    let (lo, hi) = ((lo - pad).max(0.0), hi + pad);

    let plot_err = |e: &dyn std::fmt::Display| Error::Plot(e.to_string());
    let root = SVGBackend::new(out, (900, 600)).into_drawing_area();
    root.fill(&WHITE).map_err(|e| plot_err(&e))?;
    let mut chart = ChartBuilder::on(&root)
        .margin(20)
        .x_label_area_size(45)
        .y_label_area_size(55)
        .build_cartesian_2d(lo..hi, 0.0..1.0)
        .map_err(|e| plot_err(&e))?;
    chart
        .configure_mesh()
        .x_desc("Spectral efficiency (bit/s/Hz)")
        .y_desc("CDF")
        .draw()
        .map_err(|e| plot_err(&e))?;

    for (i, (label, rows)) in curves.iter().enumerate() {
        let color = Palette99::pick(i).to_rgba();
        chart
            .draw_series(LineSeries::new(staircase(rows), color.stroke_width(2)))
            .map_err(|e| plot_err(&e))?
            .label(label.clone())
            .legend(move |(x, y)| {
                PathElement::new(vec![(x, y), (x + 20, y)], color.stroke_width(2))
            });
    }
    chart
        .configure_series_labels()
        .position(SeriesLabelPosition::LowerRight)
        .background_style(WHITE.mix(0.8))
        .border_style(BLACK)
        .draw()
        .map_err(|e| plot_err(&e))?;
    root.present().map_err(|e| plot_err(&e))?;
    Ok(())
}
