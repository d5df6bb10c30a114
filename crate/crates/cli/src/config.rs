//! `key = value` configuration files.
//!
//! Absent keys keep their defaults; unknown keys are rejected. The same
//! format is used for run manifests, so a manifest can be fed back as a
//! configuration.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use cellfree_oas::channel::TapProfile;
use cellfree_oas::montecarlo::SystemConfig;
use cellfree_oas::schemes::Scheme;
use cellfree_oas::selection::PowerMode;

use crate::Error;

/// A simulator configuration plus the tap-profile source it was built from.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedConfig {
    pub system: SystemConfig,
    /// `etu`, `flat`, or a path to a profile file.
    pub tap_profile: String,
}

impl Default for ResolvedConfig {
    fn default() -> Self {
        Self {
            system: SystemConfig::default(),
            tap_profile: "etu".into(),
        }
    }
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub drops: Option<usize>,
    pub schemes: Option<Vec<Scheme>>,
    pub workers: Option<usize>,
}

impl Overrides {
    pub fn apply(&self, cfg: &mut ResolvedConfig) {
        let s = &mut cfg.system;
        if let Some(v) = self.seed {
            s.seed = v;
        }
        if let Some(v) = self.drops {
            s.drops = v;
        }
        if let Some(v) = &self.schemes {
            s.schemes = v.clone();
        }
        if let Some(v) = self.workers {
            s.workers = v;
        }
    }
}

fn list<T: std::str::FromStr<Err = cellfree_oas::Error>>(value: &str) -> Result<Vec<T>, String> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<T>().map_err(|e| e.to_string()))
        .collect()
}

fn num<T: std::str::FromStr>(value: &str) -> Result<T, String> {
    value
        .parse::<T>()
        .map_err(|_| format!("cannot parse {value:?} as a number"))
}

fn boolean(value: &str) -> Result<bool, String> {
    match value {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        other => Err(format!("expected true or false, got {other:?}")),
    }
}

fn load_profile(id: &str, base: &Path) -> Result<TapProfile, String> {
    match id {
        "etu" => Ok(TapProfile::etu()),
        "flat" => Ok(TapProfile::flat()),
        path => {
            let path = base.join(path);
            let text = std::fs::read_to_string(&path)
                .map_err(|e| format!("cannot read tap profile {}: {e}", path.display()))?;
            TapProfile::parse(&text).map_err(|e| e.to_string())
        }
    }
}

fn set(cfg: &mut ResolvedConfig, key: &str, value: &str, base: &Path) -> Result<bool, String> {
    let s = &mut cfg.system;
    match key {
        "M" => s.m = num(value)?,
        "K" => s.k = num(value)?,
        "N" => s.n = num(value)?,
        "M_s" => s.ms = num(value)?,
        "delta_f_hz" => s.delta_f_hz = num(value)?,
        "bandwidth_hz" => s.bandwidth_hz = num(value)?,
        "f_c_mhz" => s.f_c_mhz = num(value)?,
        "area_side_m" => s.area_side_m = num(value)?,
        "h_ap_m" => s.h_ap_m = num(value)?,
        "h_ue_m" => s.h_ue_m = num(value)?,
        "d0_m" => s.d0_m = num(value)?,
        "d1_m" => s.d1_m = num(value)?,
        "sigma_sd_db" => s.sigma_sd_db = num(value)?,
        "p_d_w" => s.p_d_w = num(value)?,
        "p_u_w" => s.p_u_w = num(value)?,
        "noise_density_dbm_hz" => s.noise_density_dbm_hz = num(value)?,
        "noise_figure_db" => s.noise_figure_db = num(value)?,
        "noise_bandwidth" => {
            s.noise_bandwidth = value
                .parse()
                .map_err(|e: cellfree_oas::Error| e.to_string())?
        }
        "power_split" => {
            s.power_split = value
                .parse()
                .map_err(|e: cellfree_oas::Error| e.to_string())?
        }
        "power_modes" => s.power_modes = list::<PowerMode>(value)?,
        "schemes" => s.schemes = list::<Scheme>(value)?,
        "eta_rule" => {
            s.eta_rule = value
                .parse()
                .map_err(|e: cellfree_oas::Error| e.to_string())?
        }
        "sample_mode" => {
            s.sample_mode = value
                .parse()
                .map_err(|e: cellfree_oas::Error| e.to_string())?
        }
        "drops" => s.drops = num(value)?,
        "realizations" => s.realizations = num(value)?,
        "seed" => s.seed = num(value)?,
        "wrap_around" => s.wrap_around = boolean(value)?,
        "sample_rate_hz" => s.sample_rate_hz = Some(num(value)?),
        "cp_len" => s.cp_len = num(value)?,
        "workers" => s.workers = num(value)?,
        "weights" => {
            s.weights = value
                .split(',')
                .map(str::trim)
                .filter(|v| !v.is_empty())
                .map(num)
                .collect::<Result<_, _>>()?
        }
        "tap_profile" => {
            s.tap_profile = load_profile(value, base)?;
            cfg.tap_profile = if matches!(value, "etu" | "flat") {
                value.to_string()
            } else {
                base.join(value).to_string_lossy().into_owned()
            };
        }
        _ => return Ok(false),
    }
    Ok(true)
}

/// Parses configuration text. Relative tap-profile paths resolve against `base`.
pub fn parse_config(text: &str, base: &Path) -> Result<ResolvedConfig, Error> {
    let mut cfg = ResolvedConfig::default();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected \"key = value\", got {line:?}"),
            });
        };
        let (key, value) = (key.trim(), value.trim());
        match set(&mut cfg, key, value, base) {
            Ok(true) => {}
            Ok(false) => {
                return Err(Error::UnknownKey {
                    line: line_no,
                    key: key.to_string(),
                })
            }
            Err(message) => {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("{key}: {message}"),
                })
            }
        }
    }
    Ok(cfg)
}

/// Reads, parses and validates a configuration file, then applies overrides.
pub fn load_config(path: &Path, overrides: &Overrides) -> Result<ResolvedConfig, Error> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let base = path
        .parent()
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from("."));
    let mut cfg = parse_config(&text, &base)?;
    overrides.apply(&mut cfg);
    cfg.system.validate().map_err(Error::Validation)?;
    Ok(cfg)
}

fn join<T: ToString>(items: &[T]) -> String {
    items
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

/// Every setting in parseable `key = value` form.
pub fn render_config(cfg: &ResolvedConfig) -> String {
    let s = &cfg.system;
    let mut out = String::new();
    let mut kv = |k: &str, v: String| {
        let _ = writeln!(out, "{k} = {v}");
    };
    kv("M", s.m.to_string());
    kv("K", s.k.to_string());
    kv("N", s.n.to_string());
    kv("M_s", s.ms.to_string());
    kv("delta_f_hz", s.delta_f_hz.to_string());
    kv("bandwidth_hz", s.bandwidth_hz.to_string());
    kv("f_c_mhz", s.f_c_mhz.to_string());
    kv("area_side_m", s.area_side_m.to_string());
    kv("h_ap_m", s.h_ap_m.to_string());
    kv("h_ue_m", s.h_ue_m.to_string());
    kv("d0_m", s.d0_m.to_string());
    kv("d1_m", s.d1_m.to_string());
    kv("sigma_sd_db", s.sigma_sd_db.to_string());
    kv("p_d_w", s.p_d_w.to_string());
    kv("p_u_w", s.p_u_w.to_string());
    kv("noise_density_dbm_hz", s.noise_density_dbm_hz.to_string());
    kv("noise_figure_db", s.noise_figure_db.to_string());
    kv("noise_bandwidth", s.noise_bandwidth.to_string());
    kv("power_split", s.power_split.to_string());
    kv("power_modes", join(&s.power_modes));
    kv("schemes", join(&s.schemes));
    kv("eta_rule", s.eta_rule.as_str().to_string());
    kv("sample_mode", s.sample_mode.to_string());
    kv("drops", s.drops.to_string());
    kv("realizations", s.realizations.to_string());
    kv("seed", s.seed.to_string());
    kv("wrap_around", s.wrap_around.to_string());
    kv("tap_profile", cfg.tap_profile.clone());
    if let Some(rate) = s.sample_rate_hz {
        kv("sample_rate_hz", rate.to_string());
    }
    kv("cp_len", s.cp_len.to_string());
    if !s.weights.is_empty() {
        kv("weights", join(&s.weights));
    }
    kv("workers", s.workers.to_string());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_text_gives_defaults() {
        let cfg = parse_config("", Path::new(".")).unwrap();
        assert_eq!(cfg, ResolvedConfig::default());
        assert_eq!((cfg.system.m, cfg.system.n, cfg.system.ms), (128, 1200, 10));
    }

    #[test]
    fn values_and_comments() {
        let text =
            "# header\nM = 64  # fewer APs\n\nschemes = full_ap, oas_dp\nwrap_around = true\n";
        let cfg = parse_config(text, Path::new(".")).unwrap();
        assert_eq!(cfg.system.m, 64);
        assert_eq!(cfg.system.schemes, vec![Scheme::FullAp, Scheme::OasDp]);
        assert!(cfg.system.wrap_around);
    }

    #[test]
    fn errors_carry_line_numbers() {
        match parse_config("M = 4\nbogus = 1\n", Path::new(".")) {
            Err(Error::UnknownKey { line: 2, key }) => assert_eq!(key, "bogus"),
            other => panic!("{other:?}"),
        }
        match parse_config("\n\nM 4\n", Path::new(".")) {
            Err(Error::Parse { line: 3, .. }) => {}
            other => panic!("{other:?}"),
        }
        match parse_config("N = many\n", Path::new(".")) {
            Err(Error::Parse { line: 1, message }) => assert!(message.contains("N")),
            other => panic!("{other:?}"),
        }
        assert!(parse_config("power_modes = loud\n", Path::new(".")).is_err());
    }

    #[test]
    fn render_round_trips() {
        let mut cfg = ResolvedConfig::default();
        cfg.system.seed = 77;
        cfg.system.sigma_sd_db = 7.25;
        cfg.system.weights = (0..20).map(|i| 1.0 + i as f64 / 3.0).collect();
        cfg.system.sample_rate_hz = Some(30.72e6);
        cfg.tap_profile = "flat".into();
        cfg.system.tap_profile = TapProfile::flat();
        let back = parse_config(&render_config(&cfg), Path::new(".")).unwrap();
        assert_eq!(back, cfg);
    }
}
