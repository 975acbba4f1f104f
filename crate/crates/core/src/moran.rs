//! Moran equations and the window exponents of non-autonomous self-similar sets.

use serde::Serialize;

use crate::error::{Error, Result};

const BISECTION_WIDTH: f64 = 1e-10;
const NEWTON_STEPS: usize = 5;

/// The contraction ratios of one step of a non-autonomous system.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioMultiset {
    ratios: Vec<f64>,
}

impl RatioMultiset {
    pub fn new(ratios: Vec<f64>) -> Result<Self> {
        if ratios.is_empty() {
            return Err(Error::EmptyInput("ratio multiset"));
        }
        if let Some(r) = ratios.iter().find(|&&r| !(r > 0.0 && r < 1.0)) {
            return Err(Error::RangeError(format!("ratio {r} is not in (0,1)")));
        }
        Ok(RatioMultiset { ratios })
    }

    pub fn ratios(&self) -> &[f64] {
        &self.ratios
    }

    pub fn len(&self) -> usize {
        self.ratios.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ratios.is_empty()
    }

    pub fn max_ratio(&self) -> f64 {
        self.ratios.iter().copied().fold(0.0, f64::max)
    }

    fn power_sum(&self, s: f64) -> f64 {
        self.ratios.iter().map(|r| r.powf(s)).sum()
    }

    /// `(sum r^s, sum r^s log r)`
    fn power_sum_with_derivative(&self, s: f64) -> (f64, f64) {
        self.ratios.iter().fold((0.0, 0.0), |(v, d), &r| {
            let p = r.powf(s);
            (v + p, d + p * r.ln())
        })
    }
}

/// An eventually periodic sequence of ratio multisets, `u v v v ...`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ColumnSequence {
    pub preperiod: Vec<RatioMultiset>,
    pub period: Vec<RatioMultiset>,
}

impl ColumnSequence {
    pub fn new(preperiod: Vec<RatioMultiset>, period: Vec<RatioMultiset>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::EmptyInput("period of a column sequence"));
        }
        Ok(ColumnSequence { preperiod, period })
    }

    pub fn periodic(period: Vec<RatioMultiset>) -> Result<Self> {
        Self::new(Vec::new(), period)
    }

    /// The `n`-th step (0-based).
    pub fn step(&self, n: usize) -> &RatioMultiset {
        if n < self.preperiod.len() {
            &self.preperiod[n]
        } else {
            &self.period[(n - self.preperiod.len()) % self.period.len()]
        }
    }

    /// Steps `n, n+1, ..., n+m-1`.
    pub fn window(&self, n: usize, m: usize) -> Vec<RatioMultiset> {
        (n..n + m).map(|k| self.step(k).clone()).collect()
    }
}

/// Diagnostics from one root solve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RootInfo {
    pub root: f64,
    pub bisection_steps: usize,
    pub newton_steps: usize,
    pub residual: f64,
}

/// Root of a strictly decreasing `f` on `[0, hi]` with `f(0) >= 0 >= f(hi)`.
/// `f` returns the value and the derivative.
pub(crate) fn decreasing_root(f: impl Fn(f64) -> (f64, f64), hi: f64) -> RootInfo {
    let (f0, _) = f(0.0);
    if f0 <= 0.0 {
        return RootInfo { root: 0.0, bisection_steps: 0, newton_steps: 0, residual: f0.abs() };
    }
    let (mut lo, mut hi) = (0.0, hi);
    let mut bisection_steps = 0;
    while hi - lo > BISECTION_WIDTH {
        let mid = 0.5 * (lo + hi);
        if f(mid).0 > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        bisection_steps += 1;
    }
    let mut s = 0.5 * (lo + hi);
    let mut newton_steps = 0;
    for _ in 0..NEWTON_STEPS {
        let (v, d) = f(s);
        if v == 0.0 || d >= 0.0 {
            break;
        }
        let next = s - v / d;
        newton_steps += 1;
        // the bisection bracket is already tight, stay inside it
        if !(next >= lo - BISECTION_WIDTH && next <= hi + BISECTION_WIDTH) {
            break;
        }
        let done = (next - s).abs() < 1e-16;
        s = next;
        if done {
            break;
        }
    }
    RootInfo { root: s, bisection_steps, newton_steps, residual: f(s).0.abs() }
}

/// Solve `sum r^s = 1`, returning solver diagnostics.
pub fn solve_moran_info(rs: &[f64]) -> Result<RootInfo> {
    let set = RatioMultiset::new(rs.to_vec())?;
    let hi = (set.len() as f64).ln() / (1.0 / set.max_ratio()).ln() + 1.0;
    Ok(decreasing_root(
        |s| {
            let (v, d) = set.power_sum_with_derivative(s);
            (v - 1.0, d)
        },
        hi,
    ))
}

/// The unique `s >= 0` with `sum r^s = 1`.
pub fn solve_moran(rs: &[f64]) -> Result<f64> {
    solve_moran_info(rs).map(|i| i.root)
}

/// Like [`solve_moran`], for an already validated multiset.
pub fn moran_dimension(set: &RatioMultiset) -> f64 {
    solve_moran(set.ratios()).expect("validated multiset")
}

/// Root of `prod_k (sum_{r in window[k]} r^theta) = 1`, found in the log domain.
pub fn theta_window(window: &[RatioMultiset]) -> Result<f64> {
    theta_window_info(window).map(|i| i.root)
}

pub fn theta_window_info(window: &[RatioMultiset]) -> Result<RootInfo> {
    if window.is_empty() {
        return Err(Error::EmptyInput("theta window"));
    }
    let log_count: f64 = window.iter().map(|w| (w.len() as f64).ln()).sum();
    let r_max = window.iter().map(RatioMultiset::max_ratio).fold(0.0, f64::max);
    let hi = log_count / (window.len() as f64 * (1.0 / r_max).ln()) + 1.0;
    Ok(decreasing_root(
        |t| {
            window.iter().fold((0.0, 0.0), |(v, d), w| {
                let (p, dp) = w.power_sum_with_derivative(t);
                (v + p.ln(), d + dp / p)
            })
        },
        hi,
    ))
}

/// Assouad dimension of the non-autonomous self-similar set built from `seq`.
///
/// For an eventually periodic sequence the window exponent of any long window is
/// within `O(1/m)` of the exponent of one period (the preperiod and the phase only
/// touch boundedly many factors), so the limit is the period exponent.
pub fn nonauto_assouad(seq: &ColumnSequence) -> f64 {
    theta_window(&seq.period).expect("period is nonempty")
}

/// Maximum window exponent over all windows of length `m`.
pub fn window_sup(seq: &ColumnSequence, m: usize) -> Result<f64> {
    if m == 0 {
        return Err(Error::RangeError("window length must be positive".into()));
    }
    let starts = seq.preperiod.len() + seq.period.len();
    let mut best = f64::NEG_INFINITY;
    for n in 0..starts {
        best = best.max(theta_window(&seq.window(n, m))?);
    }
    Ok(best)
}

/// Heuristic range for the Assouad dimension of a slice known only through a finite
/// prefix: the limit ignores any finite prefix, so it lies between the smallest and
/// largest Moran dimension over the steps that may occur in the tail.
pub fn assouad_bounds(tail_alphabet: &[RatioMultiset]) -> Result<(f64, f64)> {
    if tail_alphabet.is_empty() {
        return Err(Error::EmptyInput("tail alphabet"));
    }
    let dims: Vec<f64> = tail_alphabet.iter().map(moran_dimension).collect();
    Ok((dims.iter().copied().fold(f64::INFINITY, f64::min), dims.iter().copied().fold(0.0, f64::max)))
}

/// Residual `|prod_k sum r^theta - 1|` of a window exponent.
pub fn theta_residual(window: &[RatioMultiset], theta: f64) -> f64 {
    let log: f64 = window.iter().map(|w| w.power_sum(theta).ln()).sum();
    log.exp_m1().abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ms(r: &[f64]) -> RatioMultiset {
        RatioMultiset::new(r.to_vec()).unwrap()
    }

    #[test]
    fn moran_closed_forms() {
        assert!((solve_moran(&[0.5, 0.5]).unwrap() - 1.0).abs() < 1e-12);
        let golden = ((1.0 + 5f64.sqrt()) / 2.0).log2();
        assert!((solve_moran(&[0.5, 0.25]).unwrap() - golden).abs() < 1e-12);
        assert_eq!(solve_moran(&[0.3]).unwrap(), 0.0);
        assert!((solve_moran(&[1.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0]).unwrap() - 0.72263).abs() < 5e-5);
    }

    #[test]
    fn moran_residual_is_tiny() {
        let rs = [0.1, 0.2, 0.3, 0.35];
        let info = solve_moran_info(&rs).unwrap();
        let sum: f64 = rs.iter().map(|r: &f64| r.powf(info.root)).sum();
        assert!((sum - 1.0).abs() <= 1e-12);
        assert!(info.newton_steps <= NEWTON_STEPS);
    }

    #[test]
    fn moran_rejects_bad_input() {
        assert_eq!(solve_moran(&[]), Err(Error::EmptyInput("ratio multiset")));
        assert!(solve_moran(&[0.5, 1.0]).is_err());
    }

    #[test]
    fn theta_examples() {
        assert!((theta_window(&[ms(&[0.25, 0.25])]).unwrap() - 0.5).abs() < 1e-12);
        assert!((theta_window(&[ms(&[0.25, 0.25]), ms(&[0.25])]).unwrap() - 0.25).abs() < 1e-12);
        let w = vec![ms(&[0.2, 0.3, 0.1]); 7];
        let one = theta_window(&w[..1]).unwrap();
        assert!((theta_window(&w).unwrap() - one).abs() < 1e-12);
        assert!(theta_window(&[]).is_err());
    }

    #[test]
    fn long_windows_do_not_underflow() {
        let w = vec![ms(&[1e-3, 1e-3]); 5000];
        let t = theta_window(&w).unwrap();
        assert!((t - 2f64.ln() / 1e3f64.ln()).abs() < 1e-12);
        assert!(theta_residual(&w, t) < 1e-9);
    }

    #[test]
    fn window_sup_picks_heavier_phase() {
        let seq = ColumnSequence::periodic(vec![ms(&[0.25, 0.25]), ms(&[0.25])]).unwrap();
        assert!((window_sup(&seq, 1).unwrap() - 0.5).abs() < 1e-12);
        assert!((nonauto_assouad(&seq) - 0.25).abs() < 1e-12);
        assert!(window_sup(&seq, 0).is_err());
    }

    #[test]
    fn bounds_cover_the_tail() {
        let (lo, hi) = assouad_bounds(&[ms(&[0.25]), ms(&[0.25, 0.25])]).unwrap();
        assert_eq!(lo, 0.0);
        assert!((hi - 0.5).abs() < 1e-12);
    }
}
