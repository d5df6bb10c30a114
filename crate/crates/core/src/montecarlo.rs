//! Experiment configuration, orchestration and empirical CDFs.
//!
//! Each drop is an independent work unit: it draws a network, allocates
//! subcarriers, selects APs and evaluates every requested scheme. Drops run
//! on a rayon pool and their samples are merged in drop order, so results do
//! not depend on the number of workers.

use std::fmt;
use std::str::FromStr;

use ndarray::Array2;
use rayon::prelude::*;

use crate::channel::{draw_small_scale, generate_drop, PhasorTable, TapProfile};
use crate::error::{Error, Result};
use crate::estimation::{mmse_alpha, split_estimate};
use crate::rng::{Purpose, StreamKey};
use crate::schemes::{se, sinr_full_ap, sinr_full_ap_multiuser, sinr_oas, sinr_oas_dp, Scheme};
use crate::selection::{
    allocate_round_robin, full_power_eta, select_aps, Allocation, EtaRule, PowerMode,
};
use crate::Complex64;

/// Bandwidth over which the thermal noise of one subcarrier is integrated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseBandwidth {
    /// One subcarrier spacing.
    Subcarrier,
    /// The whole signal bandwidth.
    Band,
}

/// How the per-AP and per-user power budgets map onto one subcarrier.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PowerSplit {
    /// The full budget is available on every subcarrier.
    PerSubcarrier,
    /// The budget is spread evenly over the `N` subcarriers.
    PerBand,
}

/// What one CDF sample represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleMode {
    /// One sample per (user, realization) on a single assigned subcarrier;
    /// realization `r` uses the user's `r mod |B_k|`-th subcarrier.
    Subcarrier,
    /// One sample per (user, realization): the mean SE over all assigned subcarriers.
    UserMean,
}

macro_rules! keyword_enum {
    ($ty:ident { $($variant:ident => $name:literal),+ $(,)? }) => {
        impl $ty {
            pub fn as_str(self) -> &'static str {
                match self {
                    $($ty::$variant => $name),+
                }
            }
        }

        impl FromStr for $ty {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($name => Ok($ty::$variant),)+
                    other => Err(Error::Config(format!(
                        concat!("unknown ", stringify!($ty), " {:?}"),
                        other
                    ))),
                }
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }
    };
}

keyword_enum!(NoiseBandwidth { Subcarrier => "subcarrier", Band => "band" });
keyword_enum!(PowerSplit { PerSubcarrier => "per_subcarrier", PerBand => "per_band" });
keyword_enum!(SampleMode { Subcarrier => "subcarrier", UserMean => "user_mean" });

#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    pub m: usize,
    pub k: usize,
    pub n: usize,
    pub delta_f_hz: f64,
    pub bandwidth_hz: f64,
    pub f_c_mhz: f64,
    pub area_side_m: f64,
    pub h_ap_m: f64,
    pub h_ue_m: f64,
    pub d0_m: f64,
    pub d1_m: f64,
    pub sigma_sd_db: f64,
    pub p_d_w: f64,
    pub p_u_w: f64,
    pub noise_density_dbm_hz: f64,
    pub noise_figure_db: f64,
    pub noise_bandwidth: NoiseBandwidth,
    pub power_split: PowerSplit,
    pub ms: usize,
    pub power_modes: Vec<PowerMode>,
    pub schemes: Vec<Scheme>,
    pub eta_rule: EtaRule,
    pub sample_mode: SampleMode,
    pub drops: usize,
    pub realizations: usize,
    pub seed: u64,
    pub wrap_around: bool,
    pub tap_profile: TapProfile,
    /// Sample rate used to place taps on the grid; `N * delta_f` when unset.
    pub sample_rate_hz: Option<f64>,
    pub cp_len: usize,
    pub weights: Vec<f64>,
    /// Worker threads; 0 uses every available core.
    pub workers: usize,
}

impl Default for SystemConfig {
    fn default() -> Self {
        Self {
            m: 128,
            k: 20,
            n: 1200,
            delta_f_hz: 15e3,
            bandwidth_hz: 20e6,
            f_c_mhz: 1900.0,
            area_side_m: 1000.0,
            h_ap_m: 15.0,
            h_ue_m: 1.65,
            d0_m: 10.0,
            d1_m: 50.0,
            sigma_sd_db: 8.0,
            p_d_w: 0.2,
            p_u_w: 0.1,
            noise_density_dbm_hz: -174.0,
            noise_figure_db: 9.0,
            noise_bandwidth: NoiseBandwidth::Subcarrier,
            power_split: PowerSplit::PerBand,
            ms: 10,
            power_modes: vec![PowerMode::PowerSaving, PowerMode::EqualTotalPower],
            schemes: vec![Scheme::FullAp, Scheme::Oas, Scheme::OasDp],
            eta_rule: EtaRule::PerSubcarrier,
            sample_mode: SampleMode::Subcarrier,
            drops: 200,
            realizations: 100,
            seed: 1,
            wrap_around: false,
            tap_profile: TapProfile::etu(),
            sample_rate_hz: None,
            cp_len: 160,
            weights: Vec::new(),
            workers: 0,
        }
    }
}

impl SystemConfig {
    pub fn sample_rate(&self) -> f64 {
        self.sample_rate_hz
            .unwrap_or(self.n as f64 * self.delta_f_hz)
    }

    /// Thermal noise power of one subcarrier in watts.
    pub fn noise_power_w(&self) -> f64 {
        let bw = match self.noise_bandwidth {
            NoiseBandwidth::Subcarrier => self.delta_f_hz,
            NoiseBandwidth::Band => self.bandwidth_hz,
        };
        let dbm = self.noise_density_dbm_hz + self.noise_figure_db + 10.0 * bw.log10();
        10f64.powf((dbm - 30.0) / 10.0)
    }

    fn per_subcarrier(&self, budget: f64) -> f64 {
        match self.power_split {
            PowerSplit::PerSubcarrier => budget,
            PowerSplit::PerBand => budget / self.n as f64,
        }
    }

    /// Downlink power of one AP on one subcarrier.
    pub fn downlink_power_w(&self) -> f64 {
        self.per_subcarrier(self.p_d_w)
    }

    /// Uplink pilot power of one user on one subcarrier.
    pub fn uplink_power_w(&self) -> f64 {
        self.per_subcarrier(self.p_u_w)
    }

    /// `gamma_t = P_d / sigma^2` on one subcarrier.
    pub fn transmit_snr(&self) -> f64 {
        self.downlink_power_w() / self.noise_power_w()
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if self.m == 0 || self.k == 0 || self.n == 0 {
            return fail("M, K and N must be positive".into());
        }
        if self.ms == 0 || self.ms > self.m {
            return fail(format!(
                "M_s = {} must satisfy 1 <= M_s <= M = {}",
                self.ms, self.m
            ));
        }
        if self.k > self.n {
            return fail(format!("K = {} must not exceed N = {}", self.k, self.n));
        }
        if self.drops == 0 || self.realizations == 0 {
            return fail("drops and realizations must be positive".into());
        }
        let positive = [
            ("delta_f_hz", self.delta_f_hz),
            ("bandwidth_hz", self.bandwidth_hz),
            ("f_c_mhz", self.f_c_mhz),
            ("area_side_m", self.area_side_m),
            ("h_ap_m", self.h_ap_m),
            ("h_ue_m", self.h_ue_m),
            ("d0_m", self.d0_m),
            ("p_d_w", self.p_d_w),
            ("p_u_w", self.p_u_w),
            ("sample_rate_hz", self.sample_rate()),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return fail(format!("{name} must be positive and finite, got {v}"));
            }
        }
        if !(self.d1_m > self.d0_m) {
            return fail(format!(
                "d1_m = {} must exceed d0_m = {}",
                self.d1_m, self.d0_m
            ));
        }
        if !(self.sigma_sd_db >= 0.0 && self.sigma_sd_db.is_finite()) {
            return fail("sigma_sd_db must be non-negative".into());
        }
        if !self.noise_density_dbm_hz.is_finite() || !self.noise_figure_db.is_finite() {
            return fail("noise density and noise figure must be finite".into());
        }
        if self.schemes.is_empty() {
            return fail("at least one scheme is required".into());
        }
        if self.schemes.iter().any(|s| s.uses_selection()) && self.power_modes.is_empty() {
            return fail("OAS schemes need at least one power mode".into());
        }
        if !self.weights.is_empty() && self.weights.len() != self.k {
            return fail(format!(
                "{} weights given for K = {} users",
                self.weights.len(),
                self.k
            ));
        }
        if self.cp_len > self.n {
            return fail(format!("cp_len = {} exceeds N = {}", self.cp_len, self.n));
        }
        let max_index = self
            .tap_profile
            .sample_indices(self.sample_rate())
            .into_iter()
            .max()
            .unwrap_or(0);
        if max_index >= self.n {
            return fail(format!(
                "tap at sample {max_index} does not fit in N = {}",
                self.n
            ));
        }
        if max_index > self.cp_len {
            return fail(format!(
                "cp_len = {} is shorter than the channel (last tap at sample {max_index})",
                self.cp_len
            ));
        }
        Ok(())
    }

    /// Curves produced by this configuration, in output order.
    pub fn curves(&self) -> Vec<CurveId> {
        let mut out = Vec::new();
        for &scheme in &self.schemes {
            if scheme.uses_selection() {
                out.extend(
                    self.power_modes
                        .iter()
                        .map(|&m| CurveId::new(scheme, Some(m))),
                );
            } else {
                out.push(CurveId::new(scheme, None));
            }
        }
        out.dedup();
        out
    }
}

/// One CDF: a scheme and, for AP-selection schemes, its power mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CurveId {
    pub scheme: Scheme,
    pub power_mode: Option<PowerMode>,
}

impl CurveId {
    pub fn new(scheme: Scheme, power_mode: Option<PowerMode>) -> Self {
        Self { scheme, power_mode }
    }

    /// File-name friendly label, e.g. `oas_dp_power_saving`.
    pub fn name(&self) -> String {
        match self.power_mode {
            Some(mode) => format!("{}_{}", self.scheme, mode),
            None => self.scheme.to_string(),
        }
    }

    pub fn power_mode_label(&self) -> &'static str {
        self.power_mode.map_or("full_power", PowerMode::as_str)
    }
}

impl fmt::Display for CurveId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Empirical distribution of spectral-efficiency samples.
#[derive(Debug, Clone, PartialEq)]
pub struct CdfSummary {
    pub sorted: Vec<f64>,
    /// Exceeded by 95% of samples ("95%-likely").
    pub percentile_05: f64,
    pub percentile_50: f64,
    pub percentile_95: f64,
    pub mean: f64,
}

impl CdfSummary {
    pub fn count(&self) -> usize {
        self.sorted.len()
    }

    /// Lower empirical quantile: the order statistic at `ceil(p n) - 1`.
    pub fn percentile(&self, p: f64) -> f64 {
        self.sorted[quantile_index(p, self.sorted.len())]
    }

    /// `(value, (i + 1) / n)` for every order statistic.
    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let n = self.sorted.len() as f64;
        self.sorted
            .iter()
            .enumerate()
            .map(move |(i, v)| (*v, (i + 1) as f64 / n))
    }
}

/// Index of the lower `p`-quantile among `n` sorted samples.
pub fn quantile_index(p: f64, n: usize) -> usize {
    // the small slack keeps p*n that is an integer in exact arithmetic from rounding up
    let rank = (p.clamp(0.0, 1.0) * n as f64 - 1e-9).ceil() as usize;
    rank.clamp(1, n) - 1
}

pub fn empirical_cdf(samples: &[f64]) -> Result<CdfSummary> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    if let Some(bad) = samples.iter().find(|v| !v.is_finite()) {
        return Err(Error::Domain(format!("non-finite sample {bad}")));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let mean = sorted.iter().sum::<f64>() / n as f64;
    Ok(CdfSummary {
        percentile_05: sorted[quantile_index(0.05, n)],
        percentile_50: sorted[quantile_index(0.50, n)],
        percentile_95: sorted[quantile_index(0.95, n)],
        mean,
        sorted,
    })
}

/// Radiated power of a curve relative to Full AP.
pub fn power_summary(config: &SystemConfig, curve: CurveId) -> f64 {
    match curve.power_mode {
        Some(mode) if curve.scheme.uses_selection() => {
            mode.active_power_fraction(config.m, config.ms)
        }
        _ => 1.0,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveResult {
    pub id: CurveId,
    /// Samples in generation order (drop, user, realization).
    pub samples: Vec<f64>,
    pub summary: CdfSummary,
    pub active_power_fraction: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub curves: Vec<CurveResult>,
}

impl ExperimentResult {
    pub fn curve(&self, id: CurveId) -> Option<&CurveResult> {
        self.curves.iter().find(|c| c.id == id)
    }
}

/// Quantities shared by every drop.
struct Context<'a> {
    config: &'a SystemConfig,
    curves: Vec<CurveId>,
    allocation: Allocation,
    phasors: PhasorTable,
    tap_indices: Vec<usize>,
    noise: f64,
    uplink: f64,
    gamma_t: f64,
}

impl<'a> Context<'a> {
    fn new(config: &'a SystemConfig) -> Result<Self> {
        config.validate()?;
        let tap_indices = config.tap_profile.sample_indices(config.sample_rate());
        Ok(Self {
            config,
            curves: config.curves(),
            allocation: allocate_round_robin(config.n, config.k, &config.weights)?,
            phasors: PhasorTable::new(&tap_indices, config.n)?,
            tap_indices,
            noise: config.noise_power_w(),
            uplink: config.uplink_power_w(),
            gamma_t: config.transmit_snr(),
        })
    }

    fn evaluate_drop(&self, drop_index: u64) -> Result<Vec<Vec<f64>>> {
        let cfg = self.config;
        let drop = generate_drop(cfg, cfg.seed, drop_index)?;
        let beta = &drop.large_scale.beta;
        let alpha = beta.mapv(|b| mmse_alpha(b, self.uplink, self.noise).unwrap_or(f64::NAN));
        if alpha.iter().any(|a| !(*a > 0.0)) {
            return Err(Error::Domain(format!(
                "drop {drop_index}: estimate variance underflowed to zero"
            )));
        }

        let mut out: Vec<Vec<f64>> = vec![Vec::new(); self.curves.len()];
        let slot = |id: CurveId| self.curves.iter().position(|c| *c == id);

        if let Some(i) = slot(CurveId::new(Scheme::FullApMultiUser, None)) {
            // every AP serves all K users on every subcarrier
            let eta_ap: Vec<f64> = alpha
                .rows()
                .into_iter()
                .map(|row| full_power_eta(&row.to_vec()))
                .collect::<Result<_>>()?;
            let eta = Array2::from_shape_fn(alpha.dim(), |(m, _)| eta_ap[m]);
            for sinr in sinr_full_ap_multiuser(alpha.view(), beta.view(), eta.view(), self.gamma_t)?
            {
                out[i].push(se(sinr)?);
            }
        }

        let global_eta: Option<Vec<f64>> = match cfg.eta_rule {
            EtaRule::Global => Some(
                alpha
                    .rows()
                    .into_iter()
                    .map(|row| full_power_eta(&row.to_vec()))
                    .collect::<Result<_>>()?,
            ),
            EtaRule::PerSubcarrier => None,
        };

        for user in 0..cfg.k {
            let b = drop.large_scale.column(user);
            let a: Vec<f64> = alpha.column(user).to_vec();
            let eta: Vec<f64> = match &global_eta {
                Some(g) => g.clone(),
                None => a
                    .iter()
                    .map(|x| full_power_eta(&[*x]))
                    .collect::<Result<_>>()?,
            };

            if let Some(i) = slot(CurveId::new(Scheme::FullAp, None)) {
                out[i].push(se(sinr_full_ap(&a, &b, &eta, self.gamma_t)?)?);
            }

            let wants_oas = cfg.schemes.contains(&Scheme::Oas);
            let wants_dp = cfg.schemes.contains(&Scheme::OasDp);
            if !wants_oas && !wants_dp {
                continue;
            }
            let selected = select_aps(&b, cfg.ms)?;
            let pick = |v: &[f64]| selected.iter().map(|&m| v[m]).collect::<Vec<f64>>();
            let (a_sel, b_sel, eta_sel) = (pick(&a), pick(&b), pick(&eta));

            if wants_oas {
                for &mode in &cfg.power_modes {
                    let gt = self.gamma_t * mode.snr_scale(cfg.m, cfg.ms);
                    let i = slot(CurveId::new(Scheme::Oas, Some(mode))).expect("curve listed");
                    out[i].push(se(sinr_oas(&a_sel, &b_sel, &eta_sel, gt)?)?);
                }
            }

            if wants_dp {
                let subs = self.allocation.of(user);
                for r in 0..cfg.realizations {
                    let samples = self.oas_dp_realization(
                        drop_index, user, r, subs, &selected, &a_sel, &b_sel, &eta_sel,
                    )?;
                    for (mode, value) in cfg.power_modes.iter().zip(samples) {
                        let i =
                            slot(CurveId::new(Scheme::OasDp, Some(*mode))).expect("curve listed");
                        out[i].push(value);
                    }
                }
            }
        }
        Ok(out)
    }

    /// SE of one OAS-DP realization for every power mode.
    #[allow(clippy::too_many_arguments)]
    fn oas_dp_realization(
        &self,
        drop_index: u64,
        user: usize,
        realization: usize,
        subs: &[usize],
        selected: &[usize],
        alpha: &[f64],
        beta: &[f64],
        eta: &[f64],
    ) -> Result<Vec<f64>> {
        let cfg = self.config;
        let stream = ((user as u64) << 32) | realization as u64;
        let mut fading = StreamKey::new(cfg.seed, drop_index, Purpose::SmallScale, stream).rng();
        let mut noise = StreamKey::new(cfg.seed, drop_index, Purpose::Estimation, stream).rng();

        let subs: &[usize] = match cfg.sample_mode {
            SampleMode::Subcarrier => std::slice::from_ref(&subs[realization % subs.len()]),
            SampleMode::UserMean => subs,
        };
        let ms = selected.len();
        // estimates[s * ms + i]: AP selected[i] on subcarrier subs[s]
        let mut estimates = vec![Complex64::ZERO; subs.len() * ms];
        for i in 0..ms {
            let h = draw_small_scale(&cfg.tap_profile, &mut fading);
            let scale = beta[i].sqrt();
            let g: Vec<Complex64> = h.iter().map(|x| x * scale).collect();
            debug_assert_eq!(g.len(), self.tap_indices.len());
            for (s, &sub) in subs.iter().enumerate() {
                let response = self.phasors.response(sub, &g);
                estimates[s * ms + i] = split_estimate(response, alpha[i], beta[i], &mut noise)?.0;
            }
        }

        cfg.power_modes
            .iter()
            .map(|mode| {
                let gt = self.gamma_t * mode.snr_scale(cfg.m, cfg.ms);
                let mut total = 0.0;
                for row in estimates.chunks(ms) {
                    total += se(sinr_oas_dp(row, alpha, beta, eta, gt)?)?;
                }
                Ok(total / subs.len() as f64)
            })
            .collect()
    }
}

/// Runs every drop of `config` and returns one CDF per curve.
pub fn run_experiment(config: &SystemConfig) -> Result<ExperimentResult> {
    let ctx = Context::new(config)?;
    let evaluate = || {
        (0..config.drops as u64)
            .into_par_iter()
            .map(|d| ctx.evaluate_drop(d))
            .collect::<Result<Vec<_>>>()
    };
    let per_drop = if config.workers > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(config.workers)
            .build()
            .map_err(|e| Error::Config(format!("worker pool: {e}")))?
            .install(evaluate)?
    } else {
        evaluate()?
    };

    let mut merged: Vec<Vec<f64>> = vec![Vec::new(); ctx.curves.len()];
    for drop in per_drop {
        for (dst, src) in merged.iter_mut().zip(drop) {
            dst.extend(src);
        }
    }
    let curves = ctx
        .curves
        .iter()
        .zip(merged)
        .map(|(&id, samples)| {
            Ok(CurveResult {
                id,
                summary: empirical_cdf(&samples)?,
                samples,
                active_power_fraction: power_summary(config, id),
            })
        })
        .collect::<Result<_>>()?;
    Ok(ExperimentResult { curves })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SystemConfig {
        SystemConfig {
            m: 32,
            k: 4,
            n: 120,
            ms: 4,
            cp_len: 16,
            drops: 3,
            realizations: 5,
            ..SystemConfig::default()
        }
    }

    #[test]
    fn defaults_validate() {
        SystemConfig::default().validate().unwrap();
    }

    #[test]
    fn validation_catches_bad_values() {
        let bad = [
            SystemConfig {
                ms: 200,
                ..SystemConfig::default()
            },
            SystemConfig {
                ms: 0,
                ..SystemConfig::default()
            },
            SystemConfig {
                k: 2000,
                ..SystemConfig::default()
            },
            SystemConfig {
                drops: 0,
                ..SystemConfig::default()
            },
            SystemConfig {
                p_d_w: -1.0,
                ..SystemConfig::default()
            },
            SystemConfig {
                d1_m: 5.0,
                ..SystemConfig::default()
            },
            SystemConfig {
                cp_len: 40,
                ..SystemConfig::default()
            },
            SystemConfig {
                sample_rate_hz: Some(1e9),
                ..SystemConfig::default()
            },
            SystemConfig {
                schemes: vec![],
                ..SystemConfig::default()
            },
            SystemConfig {
                weights: vec![1.0],
                ..SystemConfig::default()
            },
        ];
        for cfg in bad {
            assert!(cfg.validate().is_err(), "{cfg:?}");
        }
    }

    #[test]
    fn noise_power_per_subcarrier() {
        // -174 + 9 + 10 log10(15000) = -123.2391 dBm
        let cfg = SystemConfig::default();
        let dbm = 10.0 * (cfg.noise_power_w() * 1e3).log10();
        assert!((dbm + 123.23908740944319).abs() < 1e-9, "{dbm}");
        let band = SystemConfig {
            noise_bandwidth: NoiseBandwidth::Band,
            ..cfg
        };
        let dbm = 10.0 * (band.noise_power_w() * 1e3).log10();
        assert!((dbm + 91.98970004336019).abs() < 1e-9, "{dbm}");
    }

    #[test]
    fn power_split() {
        let cfg = SystemConfig::default();
        assert_eq!(cfg.downlink_power_w(), 0.2 / 1200.0);
        let full = SystemConfig {
            power_split: PowerSplit::PerSubcarrier,
            ..cfg
        };
        assert_eq!(full.downlink_power_w(), 0.2);
        assert_eq!(full.uplink_power_w(), 0.1);
    }

    #[test]
    fn curve_listing() {
        let names: Vec<String> = SystemConfig::default()
            .curves()
            .iter()
            .map(CurveId::name)
            .collect();
        assert_eq!(
            names,
            [
                "full_ap",
                "oas_power_saving",
                "oas_equal_total_power",
                "oas_dp_power_saving",
                "oas_dp_equal_total_power"
            ]
        );
    }

    #[test]
    fn quantile_convention() {
        let s = empirical_cdf(&[4.0, 2.0, 3.0, 1.0]).unwrap();
        assert_eq!(s.percentile(0.5), 2.0);
        assert_eq!(s.percentile(0.25), 1.0);
        assert_eq!(s.percentile(0.26), 2.0);
        assert_eq!(s.percentile(1.0), 4.0);
        assert_eq!(s.percentile(0.0), 1.0);
        assert_eq!(
            s.points().collect::<Vec<_>>(),
            vec![(1.0, 0.25), (2.0, 0.5), (3.0, 0.75), (4.0, 1.0)]
        );
        assert_eq!(quantile_index(0.05, 100), 4);
        assert_eq!(quantile_index(0.05, 101), 5);
    }

    #[test]
    fn constant_samples() {
        let s = empirical_cdf(&[2.5; 17]).unwrap();
        assert_eq!(
            (s.percentile_05, s.percentile_50, s.percentile_95, s.mean),
            (2.5, 2.5, 2.5, 2.5)
        );
    }

    #[test]
    fn empty_and_nan_rejected() {
        assert_eq!(empirical_cdf(&[]), Err(Error::EmptySamples));
        assert!(empirical_cdf(&[1.0, f64::NAN]).is_err());
    }

    #[test]
    fn power_fractions() {
        let cfg = SystemConfig::default();
        let ps = CurveId::new(Scheme::Oas, Some(PowerMode::PowerSaving));
        let etp = CurveId::new(Scheme::OasDp, Some(PowerMode::EqualTotalPower));
        assert_eq!(power_summary(&cfg, ps), 0.078125);
        assert_eq!(power_summary(&cfg, etp), 1.0);
        assert_eq!(power_summary(&cfg, CurveId::new(Scheme::FullAp, None)), 1.0);
        let all = SystemConfig {
            ms: 128,
            ..cfg.clone()
        };
        assert_eq!(power_summary(&all, ps), 1.0);
    }

    #[test]
    fn sample_counts() {
        let cfg = small();
        let res = run_experiment(&cfg).unwrap();
        for c in &res.curves {
            let expected = match c.id.scheme {
                Scheme::OasDp => cfg.drops * cfg.k * cfg.realizations,
                _ => cfg.drops * cfg.k,
            };
            assert_eq!(c.samples.len(), expected, "{}", c.id);
            assert!(c.samples.iter().all(|s| *s >= 0.0));
            let s = &c.summary;
            assert!(s.percentile_05 <= s.percentile_50 && s.percentile_50 <= s.percentile_95);
        }
    }

    #[test]
    fn deterministic_across_workers() {
        let one = SystemConfig {
            workers: 1,
            ..small()
        };
        let four = SystemConfig {
            workers: 4,
            ..small()
        };
        assert_eq!(
            run_experiment(&one).unwrap(),
            run_experiment(&four).unwrap()
        );
    }

    #[test]
    fn full_selection_matches_full_ap() {
        let cfg = SystemConfig {
            ms: 32,
            power_modes: vec![PowerMode::PowerSaving],
            ..small()
        };
        let res = run_experiment(&cfg).unwrap();
        let full = res.curve(CurveId::new(Scheme::FullAp, None)).unwrap();
        let oas = res
            .curve(CurveId::new(Scheme::Oas, Some(PowerMode::PowerSaving)))
            .unwrap();
        // same terms, summed in selection order instead of AP order
        for (a, b) in full.samples.iter().zip(&oas.samples) {
            assert!((a - b).abs() <= 1e-12 * a.abs(), "{a} vs {b}");
        }
    }

    #[test]
    fn multiuser_benchmark_is_worse() {
        let cfg = SystemConfig {
            schemes: vec![Scheme::FullApMultiUser, Scheme::FullAp],
            eta_rule: EtaRule::Global,
            ..small()
        };
        let res = run_experiment(&cfg).unwrap();
        let mu = &res
            .curve(CurveId::new(Scheme::FullApMultiUser, None))
            .unwrap()
            .samples;
        let su = &res
            .curve(CurveId::new(Scheme::FullAp, None))
            .unwrap()
            .samples;
        assert!(mu.iter().zip(su).all(|(a, b)| a < b));
    }

    #[test]
    fn user_mean_mode_runs() {
        let cfg = SystemConfig {
            sample_mode: SampleMode::UserMean,
            schemes: vec![Scheme::OasDp],
            power_modes: vec![PowerMode::PowerSaving],
            ..small()
        };
        let res = run_experiment(&cfg).unwrap();
        assert_eq!(
            res.curves[0].samples.len(),
            cfg.drops * cfg.k * cfg.realizations
        );
    }
}
