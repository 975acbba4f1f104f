//! Two explicit subsets of the line with instructive tangent behaviour.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::cloud::PointCloud;

fn check_kmax(kmax: usize) -> Result<()> {
    // 4^(-k^2) stays a normal double up to k = 22
    if !(2..=20).contains(&kmax) {
        return Err(Error::RangeError(format!("kmax = {kmax} must lie in 2..=20")));
    }
    Ok(())
}

/// `{0}` together with the progressions `2^-k + l 4^-k`, `0 <= l <= k`, for `k <= kmax`.
pub fn fixture_progressions(kmax: usize) -> Result<PointCloud> {
    check_kmax(kmax)?;
    let mut xs = vec![0.0];
    for k in 1..=kmax {
        let (a, b) = (2f64.powi(-(k as i32)), 4f64.powi(-(k as i32)));
        xs.extend((0..=k).map(|l| a + l as f64 * b));
    }
    xs.sort_by(f64::total_cmp);
    PointCloud::on_line(xs, 0.0)
}

/// `a_k = 4^(-k^2)`.
pub fn decay_scale(k: usize) -> f64 {
    2f64.powi(-2 * (k * k) as i32)
}

/// `l_k = floor(2^k / k)`.
pub fn block_length(k: usize) -> usize {
    (1usize << k) / k
}

/// The block `a_k (2^k - l) / 2^k` for `0 <= l <= l_k`, all exact dyadic rationals.
pub fn decay_block(k: usize) -> Vec<f64> {
    let a = decay_scale(k);
    let two_k = 2f64.powi(k as i32);
    (0..=block_length(k)).map(|l| a * (two_k - l as f64) / two_k).collect()
}

/// `{0}` together with the blocks `k <= kmax`.
pub fn fixture_fast_decay(kmax: usize) -> Result<PointCloud> {
    check_kmax(kmax)?;
    let mut xs = vec![0.0];
    for k in 1..=kmax {
        xs.extend(decay_block(k));
    }
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    PointCloud::on_line(xs, 0.0)
}

/// Least number of closed intervals of length `r` covering the points `xs`.
/// Greedy left to right is optimal on the line.
pub fn covering_number(xs: &[f64], r: f64) -> u64 {
    let mut sorted = xs.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut count = 0;
    let mut reach = f64::NEG_INFINITY;
    for x in sorted {
        if x > reach {
            count += 1;
            reach = x + r;
        }
    }
    count
}

/// What happens in the window `B(0, a_k)` of the fast-decay set at level `k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayWindow {
    pub k: usize,
    /// Points of `a_k^-1 K` in `[0,1]`.
    pub scaled: Vec<f64>,
    /// `a_{k+1} / a_k`
    pub gap_ratio: f64,
    /// Every scaled point lies in `[0, a_{k+1}/a_k]` or in `[1/k, 1]`.
    pub inclusion: bool,
    /// `k a_{k+1}/a_k <= 1/k`
    pub decay_inequality: bool,
    /// Covering number of the window at scale `2^-k a_k`.
    pub count: u64,
    pub block_length: usize,
    /// `count >= l_k / 2`
    pub count_bound: bool,
}

/// Examine window `k` of `fixture_fast_decay(kmax)`; needs `k < kmax`.
pub fn decay_window(kmax: usize, k: usize) -> Result<DecayWindow> {
    if k == 0 || k >= kmax {
        return Err(Error::RangeError(format!("window k = {k} must lie in 1..{kmax}")));
    }
    let cloud = fixture_fast_decay(kmax)?;
    let a = decay_scale(k);
    let scaled: Vec<f64> = cloud.xs().into_iter().map(|x| x / a).filter(|&x| x <= 1.0).collect();
    let gap_ratio = decay_scale(k + 1) / a;
    let kf = k as f64;
    let inclusion = scaled.iter().all(|&x| x <= gap_ratio || (1.0 / kf..=1.0).contains(&x));
    let count = covering_number(&scaled, 2f64.powi(-(k as i32)));
    let block_length = block_length(k);
    Ok(DecayWindow {
        k,
        scaled,
        gap_ratio,
        inclusion,
        decay_inequality: kf * gap_ratio <= 1.0 / kf,
        count,
        block_length,
        count_bound: 2 * count >= block_length as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn progression_sizes_and_blocks() {
        for kmax in 2..8 {
            let cloud = fixture_progressions(kmax).unwrap();
            assert_eq!(cloud.len(), 1 + (1..=kmax).map(|k| k + 1).sum::<usize>());
        }
        let xs = fixture_progressions(2).unwrap().xs();
        for l in 0..3 {
            assert!(xs.contains(&(0.25 + l as f64 / 16.0)));
        }
        for k in 2..=12usize {
            let (lo, hi) = (2f64.powi(-(k as i32)), 2f64.powi(1 - k as i32));
            assert!(lo + k as f64 * 4f64.powi(-(k as i32)) < hi);
        }
    }

    #[test]
    fn greedy_cover() {
        assert_eq!(covering_number(&[0.0, 0.5, 1.0, 1.6], 0.5), 3);
        assert_eq!(covering_number(&[], 1.0), 0);
    }

    #[test]
    fn blocks_are_exact() {
        assert_eq!(decay_block(2), vec![1.0 / 256.0, 0.75 / 256.0, 0.5 / 256.0]);
        assert_eq!(block_length(8), 32);
        assert!(fixture_fast_decay(1).is_err());
    }

    #[test]
    fn first_window_has_a_midpoint() {
        // block 1 is {a_1, a_1/2, 0}, so 1/2 sits between the two intervals
        let w = decay_window(4, 1).unwrap();
        assert!(!w.inclusion);
        assert!(w.scaled.contains(&0.5));
    }
}
