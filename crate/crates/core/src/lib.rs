//! Link-level Monte Carlo simulation of the downlink of a cell-free massive
//! MIMO-OFDM network with opportunistic access-point selection.
//!
//! The crate is organised bottom-up:
//!
//! * [`ofdm`]: DFT plans, cyclic prefix handling and the time-domain signal
//!   path used to check the per-subcarrier channel model.
//! * [`channel`]: network drops, COST-Hata large-scale fading and tapped
//!   delay line small-scale fading.
//! * [`estimation`]: MMSE estimate statistics and estimate/error splitting.
//! * [`selection`]: subcarrier allocation, AP selection and power control.
//! * [`schemes`]: SINR expressions for Full-AP, OAS and OAS-DP.
//! * [`montecarlo`]: experiment configuration, orchestration and empirical
//!   CDFs.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN

pub mod channel;
pub mod error;
pub mod estimation;
pub mod montecarlo;
pub mod ofdm;
pub mod rng;
pub mod schemes;
pub mod selection;

pub use error::{Error, Result};
pub use num_complex::Complex64;
