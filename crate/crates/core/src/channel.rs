//! Network drops, large-scale fading and tapped-delay-line small-scale fading.
//!
//! Geometry is kept in meters and converted to kilometers for the path-loss
//! law; carrier frequencies are in MHz.

use ndarray::Array2;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::montecarlo::SystemConfig;
use crate::ofdm::DftPlan;
use crate::rng::{complex_normal, Purpose, StreamKey};

/// COST-Hata frequency/height constant in dB (`f_c` in MHz, heights in m).
pub fn cost_hata_constant(f_c_mhz: f64, h_ap_m: f64, h_ue_m: f64) -> Result<f64> {
    if !(f_c_mhz > 0.0 && h_ap_m > 0.0 && h_ue_m > 0.0) {
        return Err(Error::Domain(format!(
            "COST-Hata needs positive frequency and heights (f_c={f_c_mhz}, h_AP={h_ap_m}, h_UE={h_ue_m})"
        )));
    }
    let lf = f_c_mhz.log10();
    Ok(46.3 + 33.9 * lf - 13.82 * h_ap_m.log10() - (1.1 * lf - 0.7) * h_ue_m + 1.56 * lf - 0.8)
}

/// Three-slope path loss in dB (a negative gain). Distances in km.
pub fn path_loss(d_km: f64, constant_db: f64, d0_km: f64, d1_km: f64) -> f64 {
    if d_km > d1_km {
        -constant_db - 35.0 * d_km.log10()
    } else if d_km > d0_km {
        -constant_db - 10.0 * (d1_km.powf(1.5) * d_km * d_km).log10()
    } else {
        -constant_db - 10.0 * (d1_km.powf(1.5) * d0_km * d0_km).log10()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Geometry {
    pub side_m: f64,
    pub aps: Vec<Point>,
    pub users: Vec<Point>,
    pub h_ap_m: f64,
    pub h_ue_m: f64,
    pub wrap_around: bool,
}

impl Geometry {
    /// Horizontal AP-user distance in meters, on a torus when wrap-around is on.
    pub fn distance_m(&self, ap: usize, user: usize) -> f64 {
        let (a, u) = (self.aps[ap], self.users[user]);
        let mut dx = (a.x - u.x).abs();
        let mut dy = (a.y - u.y).abs();
        if self.wrap_around {
            dx = dx.min(self.side_m - dx);
            dy = dy.min(self.side_m - dy);
        }
        dx.hypot(dy)
    }
}

/// Large-scale fading of every AP-user pair, indexed `[ap, user]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LargeScaleMatrix {
    pub beta: Array2<f64>,
    pub path_loss_db: Array2<f64>,
    pub shadowing_db: Array2<f64>,
}

impl LargeScaleMatrix {
    pub fn aps(&self) -> usize {
        self.beta.nrows()
    }

    pub fn users(&self) -> usize {
        self.beta.ncols()
    }

    /// Large-scale gains from every AP to `user`.
    pub fn column(&self, user: usize) -> Vec<f64> {
        self.beta.column(user).to_vec()
    }
}

/// One random network realization.
#[derive(Debug, Clone, PartialEq)]
pub struct Drop {
    pub index: u64,
    pub geometry: Geometry,
    pub large_scale: LargeScaleMatrix,
}

fn uniform_point(side: f64, key: StreamKey) -> Point {
    let mut rng = key.rng();
    Point {
        x: rng.random::<f64>() * side,
        y: rng.random::<f64>() * side,
    }
}

fn link_index(ap: usize, user: usize) -> u64 {
    ((ap as u64) << 32) | user as u64
}

/// Draws AP/user positions and shadowing for drop `drop_index`.
///
/// Every AP, user and link has its own stream, so the result depends only on
/// `(config, seed, drop_index)`; in particular AP positions do not depend on
/// the number of users.
pub fn generate_drop(config: &SystemConfig, seed: u64, drop_index: u64) -> Result<Drop> {
    let side = config.area_side_m;
    let aps = (0..config.m)
        .map(|m| {
            uniform_point(
                side,
                StreamKey::new(seed, drop_index, Purpose::ApPositions, m as u64),
            )
        })
        .collect();
    let users = (0..config.k)
        .map(|k| {
            uniform_point(
                side,
                StreamKey::new(seed, drop_index, Purpose::UserPositions, k as u64),
            )
        })
        .collect();
    let geometry = Geometry {
        side_m: side,
        aps,
        users,
        h_ap_m: config.h_ap_m,
        h_ue_m: config.h_ue_m,
        wrap_around: config.wrap_around,
    };

    let constant = cost_hata_constant(config.f_c_mhz, config.h_ap_m, config.h_ue_m)?;
    let shadow = Normal::new(0.0, config.sigma_sd_db)
        .map_err(|e| Error::Config(format!("shadowing deviation: {e}")))?;
    let (d0, d1) = (config.d0_m / 1000.0, config.d1_m / 1000.0);

    let shape = (config.m, config.k);
    let mut path_loss_db = Array2::zeros(shape);
    let mut shadowing_db = Array2::zeros(shape);
    let mut beta = Array2::zeros(shape);
    for ((m, k), pl) in path_loss_db.indexed_iter_mut() {
        *pl = path_loss(geometry.distance_m(m, k) / 1000.0, constant, d0, d1);
        let mut rng = StreamKey::new(seed, drop_index, Purpose::Shadowing, link_index(m, k)).rng();
        let x: f64 = shadow.sample(&mut rng);
        shadowing_db[[m, k]] = x;
        beta[[m, k]] = 10f64.powf((*pl + x) / 10.0);
    }

    Ok(Drop {
        index: drop_index,
        geometry,
        large_scale: LargeScaleMatrix {
            beta,
            path_loss_db,
            shadowing_db,
        },
    })
}

/// Power-delay profile of a tapped delay line.
#[derive(Debug, Clone, PartialEq)]
pub struct TapProfile {
    delays_s: Vec<f64>,
    powers_db: Vec<f64>,
    linear: Vec<f64>,
}

impl TapProfile {
    pub fn new(delays_s: Vec<f64>, powers_db: Vec<f64>) -> Result<Self> {
        if delays_s.is_empty() {
            return Err(Error::Config("tap profile has no taps".into()));
        }
        if delays_s.len() != powers_db.len() {
            return Err(Error::Dimension {
                expected: delays_s.len(),
                found: powers_db.len(),
            });
        }
        if delays_s.iter().any(|d| !d.is_finite() || *d < 0.0) {
            return Err(Error::Config(
                "tap delays must be finite and non-negative".into(),
            ));
        }
        if delays_s.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::Config("tap delays must be non-decreasing".into()));
        }
        if powers_db.iter().any(|p| !p.is_finite()) {
            return Err(Error::Config("tap powers must be finite".into()));
        }
        let raw: Vec<f64> = powers_db.iter().map(|p| 10f64.powf(p / 10.0)).collect();
        let total: f64 = raw.iter().sum();
        let linear = raw.iter().map(|p| p / total).collect();
        Ok(Self {
            delays_s,
            powers_db,
            linear,
        })
    }

    /// 3GPP Extended Typical Urban, delays in microseconds.
    pub fn etu() -> Self {
        let delays_us = [0.0, 0.05, 0.12, 0.2, 0.23, 0.5, 1.6, 2.3, 5.0];
        let powers = [-1.0, -1.0, -1.0, 0.0, 0.0, 0.0, -3.0, -5.0, -7.0];
        Self::new(
            delays_us.iter().map(|d| d * 1e-6).collect(),
            powers.to_vec(),
        )
        .expect("built-in ETU profile is valid")
    }

    /// Frequency-flat Rayleigh channel.
    pub fn flat() -> Self {
        Self::new(vec![0.0], vec![0.0]).expect("single-tap profile is valid")
    }

    /// Parses `delay_seconds power_dB` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut delays = Vec::new();
        let mut powers = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let parse = |s: &str| {
                s.parse::<f64>().map_err(|_| {
                    Error::Config(format!("tap profile line {}: bad number {s:?}", i + 1))
                })
            };
            match fields.as_slice() {
                [d, p] => {
                    delays.push(parse(d)?);
                    powers.push(parse(p)?);
                }
                _ => {
                    return Err(Error::Config(format!(
                        "tap profile line {}: expected \"delay_seconds power_dB\"",
                        i + 1
                    )))
                }
            }
        }
        Self::new(delays, powers)
    }

    pub fn len(&self) -> usize {
        self.delays_s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.delays_s.is_empty()
    }

    pub fn delays_s(&self) -> &[f64] {
        &self.delays_s
    }

    pub fn powers_db(&self) -> &[f64] {
        &self.powers_db
    }

    /// Tap powers scaled to sum to one.
    pub fn linear_powers(&self) -> &[f64] {
        &self.linear
    }

    /// Sample index of each tap, `round(delay * sample_rate)`.
    pub fn sample_indices(&self, sample_rate_hz: f64) -> Vec<usize> {
        self.delays_s
            .iter()
            .map(|d| (d * sample_rate_hz).round() as usize)
            .collect()
    }

    /// Smallest cyclic prefix that keeps the channel free of inter-block interference.
    pub fn min_cp_len(&self, sample_rate_hz: f64) -> usize {
        let max_delay = self.delays_s.iter().copied().fold(0.0, f64::max);
        (max_delay * sample_rate_hz).ceil() as usize + 1
    }
}

/// Draws unit-power small-scale taps `h` for one link.
pub fn draw_small_scale<R: Rng + ?Sized>(profile: &TapProfile, rng: &mut R) -> Vec<Complex64> {
    profile
        .linear_powers()
        .iter()
        .map(|p| complex_normal(rng) * p.sqrt())
        .collect()
}

/// Time-domain filter `g = sqrt(beta) h` of one link, with per-tap sample indices.
#[derive(Debug, Clone, PartialEq)]
pub struct TapChannel {
    pub indices: Vec<usize>,
    pub taps: Vec<Complex64>,
    pub beta: f64,
}

impl TapChannel {
    pub fn new(indices: Vec<usize>, beta: f64, small_scale: &[Complex64]) -> Result<Self> {
        if indices.len() != small_scale.len() {
            return Err(Error::Dimension {
                expected: indices.len(),
                found: small_scale.len(),
            });
        }
        let scale = beta.sqrt();
        Ok(Self {
            indices,
            taps: small_scale.iter().map(|h| h * scale).collect(),
            beta,
        })
    }

    /// Filter length `L`, i.e. the largest sample index plus one.
    pub fn filter_len(&self) -> usize {
        self.indices.iter().max().map_or(0, |i| i + 1)
    }

    /// Compact filter of `filter_len()` samples. Taps on the same index add.
    pub fn filter(&self) -> Vec<Complex64> {
        let mut out = vec![Complex64::ZERO; self.filter_len()];
        for (i, g) in self.indices.iter().zip(&self.taps) {
            out[*i] += g;
        }
        out
    }

    /// Filter zero-padded to `n` samples.
    pub fn zero_padded(&self, n: usize) -> Result<Vec<Complex64>> {
        if self.filter_len() > n {
            return Err(Error::Config(format!(
                "tap at sample {} does not fit in a {n}-point block",
                self.filter_len() - 1
            )));
        }
        let mut out = self.filter();
        out.resize(n, Complex64::ZERO);
        Ok(out)
    }

    /// Direct evaluation of subcarrier `sub` of the `n`-point response.
    pub fn response_at(&self, sub: usize, n: usize) -> Complex64 {
        self.indices
            .iter()
            .zip(&self.taps)
            .map(|(&i, g)| {
                let phase = -2.0 * std::f64::consts::PI * ((sub * i) % n) as f64 / n as f64;
                g * Complex64::from_polar(1.0, phase)
            })
            .sum()
    }
}

/// Per-subcarrier response of one link.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyChannel {
    pub response: Vec<Complex64>,
    pub beta: f64,
}

/// DFT of the zero-padded filter.
pub fn frequency_response(taps: &TapChannel, plan: &DftPlan) -> Result<FrequencyChannel> {
    let padded = taps.zero_padded(plan.size())?;
    Ok(FrequencyChannel {
        response: plan.dft(&padded)?,
        beta: taps.beta,
    })
}

/// Precomputed `exp(-2 pi j n i_l / N)` for every subcarrier and tap of a profile.
///
/// Used when only a few subcarriers of many links are needed.
#[derive(Debug, Clone)]
pub struct PhasorTable {
    n: usize,
    taps: usize,
    phasors: Vec<Complex64>,
}

impl PhasorTable {
    pub fn new(indices: &[usize], n: usize) -> Result<Self> {
        if let Some(&max) = indices.iter().max() {
            if max >= n {
                return Err(Error::Config(format!(
                    "tap at sample {max} does not fit in a {n}-point block"
                )));
            }
        }
        let mut phasors = Vec::with_capacity(n * indices.len());
        for sub in 0..n {
            for &i in indices {
                let phase = -2.0 * std::f64::consts::PI * ((sub * i) % n) as f64 / n as f64;
                phasors.push(Complex64::from_polar(1.0, phase));
            }
        }
        Ok(Self {
            n,
            taps: indices.len(),
            phasors,
        })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// Response of filter `taps` on subcarrier `sub`.
    pub fn response(&self, sub: usize, taps: &[Complex64]) -> Complex64 {
        let row = &self.phasors[sub * self.taps..(sub + 1) * self.taps];
        row.iter().zip(taps).map(|(p, g)| p * g).sum()
    }
}
