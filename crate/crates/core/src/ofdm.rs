//! OFDM modulation and the time-domain signal path.
//!
//! The forward transform is unnormalized and the inverse carries the `1/N`
//! factor, so `idft(dft(x)) == x` and subcarrier `n` of a received block is
//! `dft(y)[n]`.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{check_len, Error, Result};

/// An `N`-point DFT of arbitrary size.
///
/// Plans are immutable once built and may be shared between threads.
#[derive(Clone)]
pub struct DftPlan {
    size: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for DftPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DftPlan").field("size", &self.size).finish()
    }
}

impl DftPlan {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::Config("DFT size must be positive".into()));
        }
        let mut planner = FftPlanner::new();
        Ok(Self {
            size,
            forward: planner.plan_fft_forward(size),
            inverse: planner.plan_fft_inverse(size),
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// `out[n] = sum_k x[k] exp(-2 pi j n k / N)`.
    pub fn dft(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        check_len(self.size, x.len())?;
        let mut buf = x.to_vec();
        self.forward.process(&mut buf);
        Ok(buf)
    }

    /// `out[k] = (1/N) sum_n x[n] exp(+2 pi j n k / N)`.
    pub fn idft(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        check_len(self.size, x.len())?;
        let mut buf = x.to_vec();
        self.inverse.process(&mut buf);
        let scale = 1.0 / self.size as f64;
        buf.iter_mut().for_each(|v| *v *= scale);
        Ok(buf)
    }
}

/// One OFDM block in both domains.
#[derive(Debug, Clone, PartialEq)]
pub struct OfdmSymbol {
    pub frequency: Vec<Complex64>,
    pub time: Vec<Complex64>,
    pub cp_len: usize,
}

impl OfdmSymbol {
    /// Modulates a frequency-domain block with the inverse DFT.
    pub fn modulate(plan: &DftPlan, frequency: Vec<Complex64>, cp_len: usize) -> Result<Self> {
        let time = plan.idft(&frequency)?;
        Ok(Self {
            frequency,
            time,
            cp_len,
        })
    }

    pub fn len(&self) -> usize {
        self.time.len()
    }

    pub fn is_empty(&self) -> bool {
        self.time.is_empty()
    }
}

/// Prepends the last `cp_len` time samples to the block.
pub fn add_cp(symbol: &OfdmSymbol) -> Result<Vec<Complex64>> {
    let n = symbol.time.len();
    if symbol.cp_len > n {
        return Err(Error::Config(format!(
            "cyclic prefix of {} samples is longer than the {n}-sample block",
            symbol.cp_len
        )));
    }
    let mut out = Vec::with_capacity(n + symbol.cp_len);
    out.extend_from_slice(&symbol.time[n - symbol.cp_len..]);
    out.extend_from_slice(&symbol.time);
    Ok(out)
}

/// Drops the first `cp_len` samples and keeps the following `n`.
pub fn remove_cp(received: &[Complex64], cp_len: usize, n: usize) -> Result<Vec<Complex64>> {
    if received.len() < cp_len + n {
        return Err(Error::Dimension {
            expected: cp_len + n,
            found: received.len(),
        });
    }
    Ok(received[cp_len..cp_len + n].to_vec())
}

/// `out[n] = sum_l g[l] x[(n - l) mod N]`.
pub fn cyclic_convolve(g: &[Complex64], x: &[Complex64]) -> Result<Vec<Complex64>> {
    check_len(g.len(), x.len())?;
    let n = x.len();
    let out = (0..n)
        .map(|i| {
            g.iter()
                .enumerate()
                .filter(|(_, gl)| **gl != Complex64::ZERO)
                .map(|(l, gl)| gl * x[(i + n - l) % n])
                .sum()
        })
        .collect();
    Ok(out)
}

/// Full linear convolution of a CP-extended block with a channel filter.
///
/// The output has `x_cp.len() + taps.len() - 1` samples. After removing the
/// first `cp_len` samples, the next `N` equal the cyclic convolution of the
/// zero-padded filter with the original block.
pub fn linear_channel_pass(
    x_cp: &[Complex64],
    taps: &[Complex64],
    cp_len: usize,
) -> Result<Vec<Complex64>> {
    if taps.is_empty() {
        return Err(Error::Config("channel filter has no taps".into()));
    }
    if taps.len() > cp_len + 1 {
        return Err(Error::InterSymbolInterference {
            taps: taps.len(),
            cp_len,
        });
    }
    let mut out = vec![Complex64::ZERO; x_cp.len() + taps.len() - 1];
    for (i, xi) in x_cp.iter().enumerate() {
        for (l, gl) in taps.iter().enumerate() {
            out[i + l] += xi * gl;
        }
    }
    Ok(out)
}

/// Zero-pads a filter to `n` samples.
pub fn zero_pad(taps: &[Complex64], n: usize) -> Result<Vec<Complex64>> {
    if taps.len() > n {
        return Err(Error::Config(format!(
            "filter of {} taps does not fit in {n} samples",
            taps.len()
        )));
    }
    let mut out = taps.to_vec();
    out.resize(n, Complex64::ZERO);
    Ok(out)
}
