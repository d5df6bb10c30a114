//! Subcarrier allocation, opportunistic AP selection and power control.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Disjoint subcarrier sets, one per user.
#[derive(Debug, Clone, PartialEq)]
pub struct Allocation {
    pub subcarriers: Vec<Vec<usize>>,
    pub weights: Vec<f64>,
}

impl Allocation {
    pub fn users(&self) -> usize {
        self.subcarriers.len()
    }

    pub fn of(&self, user: usize) -> &[usize] {
        &self.subcarriers[user]
    }
}

/// Deals all `n` subcarriers to `k` users by smooth weighted round-robin.
///
/// Each step credits every user with its normalized weight and hands the next
/// subcarrier to the user with the largest credit (lowest index on ties).
/// With equal weights this is a plain cyclic deal, so set sizes differ by at
/// most one and user `k` gets subcarriers `k, k + K, k + 2K, ...`.
pub fn allocate_round_robin(n: usize, k: usize, weights: &[f64]) -> Result<Allocation> {
    if k == 0 {
        return Err(Error::Config("at least one user is required".into()));
    }
    if k > n {
        return Err(Error::InfeasibleAllocation {
            users: k,
            subcarriers: n,
        });
    }
    let weights = if weights.is_empty() {
        vec![1.0; k]
    } else {
        weights.to_vec()
    };
    if weights.len() != k {
        return Err(Error::Dimension {
            expected: k,
            found: weights.len(),
        });
    }
    if weights.iter().any(|w| !w.is_finite() || *w <= 0.0) {
        return Err(Error::Config(
            "rate-request weights must be positive".into(),
        ));
    }
    let total: f64 = weights.iter().sum();
    let share: Vec<f64> = weights.iter().map(|w| w / total).collect();

    let mut credit = vec![0.0; k];
    let mut subcarriers = vec![Vec::new(); k];
    for sub in 0..n {
        credit.iter_mut().zip(&share).for_each(|(c, s)| *c += s);
        let mut best = 0;
        for u in 1..k {
            if credit[u] > credit[best] + 1e-12 {
                best = u;
            }
        }
        credit[best] -= 1.0;
        subcarriers[best].push(sub);
    }
    Ok(Allocation {
        subcarriers,
        weights,
    })
}

/// Indices of the `ms` APs with the largest large-scale gain, strongest first.
/// Ties go to the lower AP index.
pub fn select_aps(beta: &[f64], ms: usize) -> Result<Vec<usize>> {
    if ms == 0 || ms > beta.len() {
        return Err(Error::Domain(format!(
            "selection size {ms} outside [1, {}]",
            beta.len()
        )));
    }
    let mut order: Vec<usize> = (0..beta.len()).collect();
    order.sort_by(|&a, &b| match beta[b].total_cmp(&beta[a]) {
        Ordering::Equal => a.cmp(&b),
        other => other,
    });
    order.truncate(ms);
    Ok(order)
}

/// Opportunistic AP sets of every user.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectionResult {
    pub aps: Vec<Vec<usize>>,
    pub size: usize,
}

impl SelectionResult {
    pub fn for_users<'a, I>(columns: I, size: usize) -> Result<Self>
    where
        I: IntoIterator<Item = &'a [f64]>,
    {
        let aps = columns
            .into_iter()
            .map(|col| select_aps(col, size))
            .collect::<Result<_>>()?;
        Ok(Self { aps, size })
    }
}

/// Full-power coefficient `eta_m = 1 / sum(alpha)` over the users AP `m`
/// serves on a subcarrier. With one user per subcarrier this is `1 / alpha`.
pub fn full_power_eta(alphas: &[f64]) -> Result<f64> {
    let total: f64 = alphas.iter().sum();
    if !(total > 0.0) || !total.is_finite() {
        return Err(Error::Domain(
            "full-power control needs a positive estimate variance at every active AP".into(),
        ));
    }
    Ok(1.0 / total)
}

/// Per-AP budget of the selected APs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PowerMode {
    /// Selected APs keep the per-AP budget; deselected APs are silent.
    PowerSaving,
    /// Selected APs are boosted by `M / M_s` so total radiated power matches Full AP.
    EqualTotalPower,
}

impl PowerMode {
    /// Multiplier applied to the transmit SNR of the selected APs.
    pub fn snr_scale(self, m: usize, ms: usize) -> f64 {
        match self {
            PowerMode::PowerSaving => 1.0,
            PowerMode::EqualTotalPower => m as f64 / ms as f64,
        }
    }

    /// Radiated power relative to Full AP.
    pub fn active_power_fraction(self, m: usize, ms: usize) -> f64 {
        match self {
            PowerMode::PowerSaving => ms as f64 / m as f64,
            PowerMode::EqualTotalPower => 1.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            PowerMode::PowerSaving => "power_saving",
            PowerMode::EqualTotalPower => "equal_total_power",
        }
    }
}

impl fmt::Display for PowerMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PowerMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "power_saving" => Ok(PowerMode::PowerSaving),
            "equal_total_power" => Ok(PowerMode::EqualTotalPower),
            other => Err(Error::Config(format!("unknown power mode {other:?}"))),
        }
    }
}

/// Which users enter the full-power normalization of an AP.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EtaRule {
    /// Only the user scheduled on the subcarrier: `eta_mk = 1 / alpha_mk`.
    PerSubcarrier,
    /// All `K` users: `eta_m = 1 / sum_k alpha_mk`.
    Global,
}

impl EtaRule {
    pub fn as_str(self) -> &'static str {
        match self {
            EtaRule::PerSubcarrier => "per_subcarrier",
            EtaRule::Global => "global",
        }
    }
}

impl FromStr for EtaRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "per_subcarrier" => Ok(EtaRule::PerSubcarrier),
            "global" => Ok(EtaRule::Global),
            other => Err(Error::Config(format!("unknown eta rule {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn equal_split() {
        let a = allocate_round_robin(6, 3, &[]).unwrap();
        assert_eq!(a.subcarriers, vec![vec![0, 3], vec![1, 4], vec![2, 5]]);
    }

    #[test]
    fn single_user_takes_everything() {
        let a = allocate_round_robin(7, 1, &[]).unwrap();
        assert_eq!(a.of(0), &[0, 1, 2, 3, 4, 5, 6]);
    }

    #[test]
    fn odd_split() {
        // dealing order 0, 1, 0, 1, 0
        let a = allocate_round_robin(5, 2, &[1.0, 1.0]).unwrap();
        assert_eq!(a.subcarriers, vec![vec![0, 2, 4], vec![1, 3]]);
    }

    #[test]
    fn weighted_split() {
        let a = allocate_round_robin(12, 2, &[2.0, 1.0]).unwrap();
        assert_eq!(a.of(0).len(), 8);
        assert_eq!(a.of(1).len(), 4);
    }

    #[test]
    fn allocation_errors() {
        assert_eq!(
            allocate_round_robin(3, 4, &[]),
            Err(Error::InfeasibleAllocation {
                users: 4,
                subcarriers: 3
            })
        );
        assert!(allocate_round_robin(3, 0, &[]).is_err());
        assert!(allocate_round_robin(6, 2, &[1.0]).is_err());
        assert!(allocate_round_robin(6, 2, &[1.0, 0.0]).is_err());
    }

    #[test]
    fn selection_examples() {
        assert_eq!(select_aps(&[0.1, 0.9, 0.5], 1).unwrap(), vec![1]);
        assert_eq!(select_aps(&[0.1, 0.9, 0.5], 3).unwrap(), vec![1, 2, 0]);
        let tied = [0.1, 0.2, 0.8, 0.3, 0.4, 0.8];
        assert_eq!(select_aps(&tied, 1).unwrap(), vec![2]);
        assert_eq!(select_aps(&tied, 2).unwrap(), vec![2, 5]);
        assert!(select_aps(&tied, 0).is_err());
        assert!(select_aps(&tied, 7).is_err());
    }

    #[test]
    fn eta_examples() {
        let eta = full_power_eta(&[2e-9]).unwrap();
        assert!((eta - 5e8).abs() < 1e-3);
        assert!((eta * 2e-9 - 1.0).abs() < 1e-15);
        assert!((full_power_eta(&[1e-9, 1e-9]).unwrap() - 5e8).abs() < 1e-3);
        assert!(full_power_eta(&[0.0]).is_err());
        assert!(full_power_eta(&[]).is_err());
    }

    #[test]
    fn power_saving_fraction() {
        let f = PowerMode::PowerSaving.active_power_fraction(128, 10);
        assert_eq!(f, 0.078125);
        assert_eq!(format!("{:.2}", (1.0 - f) * 100.0), "92.19");
        assert_eq!(PowerMode::PowerSaving.active_power_fraction(128, 128), 1.0);
        assert_eq!(
            PowerMode::EqualTotalPower.active_power_fraction(128, 10),
            1.0
        );
        assert_eq!(PowerMode::EqualTotalPower.snr_scale(128, 10), 12.8);
    }

    proptest! {
        #[test]
        fn allocation_is_a_partition(
            n in 1usize..300,
            weights in prop::collection::vec(0.01f64..10.0, 1..20),
        ) {
            let k = weights.len();
            prop_assume!(k <= n);
            let a = allocate_round_robin(n, k, &weights).unwrap();
            let mut seen = vec![false; n];
            for set in &a.subcarriers {
                for &s in set {
                    prop_assert!(s < n);
                    prop_assert!(!seen[s]);
                    seen[s] = true;
                }
            }
            prop_assert!(seen.iter().all(|s| *s));
        }

        #[test]
        fn equal_weights_are_balanced(n in 1usize..500, k in 1usize..40) {
            prop_assume!(k <= n);
            let a = allocate_round_robin(n, k, &[]).unwrap();
            let sizes: Vec<usize> = a.subcarriers.iter().map(Vec::len).collect();
            let (lo, hi) = (sizes.iter().min().unwrap(), sizes.iter().max().unwrap());
            prop_assert!(hi - lo <= 1);
        }

        #[test]
        fn selection_nests_and_ignores_scale(
            beta in prop::collection::vec(1e-15f64..1e-6, 1..64),
            exp in -20i32..20,
        ) {
            let m = beta.len();
            // powers of two keep the ordering exact
            let scale = 2f64.powi(exp);
            let scaled: Vec<f64> = beta.iter().map(|b| b * scale).collect();
            for ms in 1..=m {
                let s = select_aps(&beta, ms).unwrap();
                prop_assert_eq!(&s, &select_aps(&scaled, ms).unwrap());
                prop_assert!(s.windows(2).all(|w| beta[w[0]] >= beta[w[1]]));
                if ms < m {
                    let next = select_aps(&beta, ms + 1).unwrap();
                    prop_assert_eq!(&next[..ms], &s[..]);
                }
            }
        }
    }
}
