//! CSV and manifest artifacts of a run.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use cellfree_oas::montecarlo::{run_experiment, CurveResult, ExperimentResult, SystemConfig};

use crate::config::{render_config, ResolvedConfig};
use crate::Error;

pub const CDF_HEADER: &str = "se_bits_per_hz,cdf_probability";
pub const SUMMARY_HEADER: &str =
    "scheme,power_mode,percentile_05,percentile_50,mean,active_power_fraction,samples";
pub const MANIFEST_NAME: &str = "manifest.cfg";
pub const SUMMARY_NAME: &str = "summary.csv";

/// Formats `v` with six significant digits in plain decimal notation.
pub fn six_sig(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let magnitude = v.abs().log10().floor() as i32;
    let decimals = (5 - magnitude).max(0) as usize;
    format!("{v:.decimals$}")
}

pub fn cdf_file_name(curve: &CurveResult) -> String {
    format!("cdf_{}.csv", curve.id.name())
}

/// Paths written by [`run`].
#[derive(Debug, Clone, PartialEq)]
pub struct RunArtifacts {
    pub manifest: PathBuf,
    pub summary: PathBuf,
    pub cdfs: Vec<PathBuf>,
}

fn create(path: &Path) -> Result<BufWriter<File>, Error> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub fn write_cdf(path: &Path, curve: &CurveResult) -> Result<(), Error> {
    let mut w = create(path)?;
    let err = io_err(path);
    writeln!(w, "{CDF_HEADER}").map_err(&err)?;
    for (value, p) in curve.summary.points() {
        writeln!(w, "{},{p}", six_sig(value)).map_err(&err)?;
    }
    w.flush().map_err(&err)
}

pub fn write_summary(path: &Path, result: &ExperimentResult) -> Result<(), Error> {
    let mut w = create(path)?;
    let err = io_err(path);
    writeln!(w, "{SUMMARY_HEADER}").map_err(&err)?;
    for c in &result.curves {
        let s = &c.summary;
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            c.id.scheme,
            c.id.power_mode_label(),
            six_sig(s.percentile_05),
            six_sig(s.percentile_50),
            six_sig(s.mean),
            c.active_power_fraction,
            s.count()
        )
        .map_err(&err)?;
    }
    w.flush().map_err(&err)
}

/// Manifest text: provenance comments followed by the full configuration.
pub fn render_manifest(cfg: &ResolvedConfig, outputs: &[String], created_unix: u64) -> String {
    let s: &SystemConfig = &cfg.system;
    let mut out = format!(
        "# {} {} run manifest\n# created_unix = {created_unix}\n",
        env!("CARGO_PKG_NAME"),
        env!("CARGO_PKG_VERSION")
    );
    out.push_str(&format!("# outputs = {}\n", outputs.join(", ")));
    out.push_str(&format!(
        "# power reading: power_split = {} ({:.6e} W downlink per subcarrier), noise_bandwidth = {} ({:.6e} W)\n",
        s.power_split,
        s.downlink_power_w(),
        s.noise_bandwidth,
        s.noise_power_w()
    ));
    out.push_str(&render_config(cfg));
    out
}

/// Runs the experiment and writes every artifact into `out_dir`.
pub fn run(cfg: &ResolvedConfig, out_dir: &Path) -> Result<RunArtifacts, Error> {
    cfg.system.validate().map_err(Error::Validation)?;
    let result = run_experiment(&cfg.system)?;
    std::fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;

    let mut cdfs = Vec::new();
    for curve in &result.curves {
        let path = out_dir.join(cdf_file_name(curve));
        write_cdf(&path, curve)?;
        cdfs.push(path);
    }
    let summary = out_dir.join(SUMMARY_NAME);
    write_summary(&summary, &result)?;

    let mut outputs: Vec<String> = result.curves.iter().map(cdf_file_name).collect();
    outputs.push(SUMMARY_NAME.into());
    let created = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let manifest = out_dir.join(MANIFEST_NAME);
    std::fs::write(&manifest, render_manifest(cfg, &outputs, created))
        .map_err(io_err(&manifest))?;

    Ok(RunArtifacts {
        manifest,
        summary,
        cdfs,
    })
}

/// Reads a CDF file back as `(value, probability)` rows.
pub fn read_cdf(path: &Path) -> Result<Vec<(f64, f64)>, Error> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    let csv_err = |message: String| Error::Csv {
        path: path.to_path_buf(),
        message,
    };
    let mut lines = text.lines();
    match lines.next() {
        Some(CDF_HEADER) => {}
        other => {
            return Err(csv_err(format!(
                "expected header {CDF_HEADER:?}, found {other:?}"
            )))
        }
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let parsed = line
            .split_once(',')
            .and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)));
        match parsed {
            Some(row) => rows.push(row),
            None => return Err(csv_err(format!("line {}: malformed row {line:?}", i + 2))),
        }
    }
    if rows.is_empty() {
        return Err(csv_err("no data rows".into()));
    }
    Ok(rows)
}
