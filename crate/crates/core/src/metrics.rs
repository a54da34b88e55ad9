//! Distances between two preference orders over the same candidates.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::PreferenceOrder;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricKind {
    Discrete,
    Swap,
    Spearman,
}

impl MetricKind {
    pub const ALL: [MetricKind; 3] = [MetricKind::Discrete, MetricKind::Swap, MetricKind::Spearman];

    pub fn name(self) -> &'static str {
        match self {
            MetricKind::Discrete => "disc",
            MetricKind::Swap => "swap",
            MetricKind::Spearman => "spearman",
        }
    }

    pub fn distance(self, u: &PreferenceOrder, v: &PreferenceOrder) -> Result<u64> {
        check_len(u, v)?;
        Ok(self.distance_unchecked(u, v))
    }

    pub(crate) fn distance_unchecked(self, u: &PreferenceOrder, v: &PreferenceOrder) -> u64 {
        match self {
            MetricKind::Discrete => disc(u, v),
            MetricKind::Swap => swap(u, v),
            MetricKind::Spearman => spear(u, v),
        }
    }

    /// Largest value the metric can take between two orders of length `m`.
    pub fn max_per_vote(self, m: usize) -> u64 {
        let m = m as u64;
        match self {
            MetricKind::Discrete => u64::from(m > 1),
            MetricKind::Swap => m * m.saturating_sub(1) / 2,
            MetricKind::Spearman => m * m / 2,
        }
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MetricKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "disc" | "discrete" => Ok(MetricKind::Discrete),
            "swap" | "kendall" => Ok(MetricKind::Swap),
            "spearman" | "spear" | "footrule" => Ok(MetricKind::Spearman),
            other => Err(format!("unknown metric '{other}'")),
        }
    }
}

fn check_len(u: &PreferenceOrder, v: &PreferenceOrder) -> Result<()> {
    if u.len() != v.len() {
        return Err(Error::size("preference order length", u.len(), v.len()));
    }
    Ok(())
}

/// 0 if the orders are identical, 1 otherwise.
pub fn d_disc(u: &PreferenceOrder, v: &PreferenceOrder) -> Result<u64> {
    check_len(u, v)?;
    Ok(disc(u, v))
}

/// Number of candidate pairs the two orders rank oppositely, which is also
/// the least number of adjacent transpositions turning one into the other.
pub fn d_swap(u: &PreferenceOrder, v: &PreferenceOrder) -> Result<u64> {
    check_len(u, v)?;
    Ok(swap(u, v))
}

/// Spearman footrule: total displacement `Σ_c |pos_u(c) - pos_v(c)|`.
pub fn d_spear(u: &PreferenceOrder, v: &PreferenceOrder) -> Result<u64> {
    check_len(u, v)?;
    Ok(spear(u, v))
}

fn disc(u: &PreferenceOrder, v: &PreferenceOrder) -> u64 {
    u64::from(u.ranking() != v.ranking())
}

fn swap(u: &PreferenceOrder, v: &PreferenceOrder) -> u64 {
    // v's positions read in u's order; discordant pairs are the inversions
    let mut seq: Vec<usize> = u.ranking().iter().map(|&c| v.index_of(c)).collect();
    count_inversions(&mut seq)
}

fn spear(u: &PreferenceOrder, v: &PreferenceOrder) -> u64 {
    u.positions()
        .iter()
        .zip(v.positions())
        .map(|(&a, &b)| a.abs_diff(b) as u64)
        .sum()
}

/// Counts pairs `i < j` with `seq[i] > seq[j]`, sorting `seq` as a side effect.
pub(crate) fn count_inversions(seq: &mut [usize]) -> u64 {
    let mut buf = seq.to_vec();
    merge_count(seq, &mut buf)
}

fn merge_count(seq: &mut [usize], buf: &mut [usize]) -> u64 {
    let n = seq.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut inv = {
        let (l, r) = seq.split_at_mut(mid);
        let (bl, br) = buf.split_at_mut(mid);
        merge_count(l, bl) + merge_count(r, br)
    };
    let (mut i, mut j, mut k) = (0, mid, 0);
    while i < mid && j < n {
        if seq[i] <= seq[j] {
            buf[k] = seq[i];
            i += 1;
        } else {
            buf[k] = seq[j];
            inv += (mid - i) as u64;
            j += 1;
        }
        k += 1;
    }
    buf[k..k + mid - i].copy_from_slice(&seq[i..mid]);
    k += mid - i;
    buf[k..k + n - j].copy_from_slice(&seq[j..n]);
    seq.copy_from_slice(&buf[..n]);
    inv
}
