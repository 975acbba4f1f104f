//! Centred packings of balls in a ball, used to test Assouad exponents.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::carpet::{CarpetSystem, EventuallyPeriodicWord};
use crate::error::{Error, Result};
use crate::geometry::cover::{cylinders_to_scale, Valuation};

/// Closed ball centred at the coded point of `center`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CodedBall {
    pub center: EventuallyPeriodicWord,
    pub radius: f64,
}

impl CodedBall {
    pub fn new(center: EventuallyPeriodicWord, radius: f64) -> Self {
        CodedBall { center, radius }
    }
}

fn dist(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - b.0).hypot(a.1 - b.1)
}

/// `sum r_i^alpha / R^alpha` for a packing of `ball`.
///
/// The packing balls have to sit inside `ball` and be pairwise disjoint, otherwise
/// the result is `InvalidPacking`.
pub fn packing_ratio(system: &CarpetSystem, ball: &CodedBall, packing: &[CodedBall], alpha: f64) -> Result<f64> {
    ball.center.validate_for(system)?;
    if !(ball.radius > 0.0) {
        return Err(Error::InvalidPacking(format!("outer radius {} is not positive", ball.radius)));
    }
    let x = system.point(&ball.center);
    let mut centers = Vec::with_capacity(packing.len());
    for (i, b) in packing.iter().enumerate() {
        b.center.validate_for(system)?;
        if !(b.radius > 0.0) {
            return Err(Error::InvalidPacking(format!("ball {i} has radius {}", b.radius)));
        }
        let xi = system.point(&b.center);
        if dist(xi, x) + b.radius > ball.radius * (1.0 + 1e-12) {
            return Err(Error::InvalidPacking(format!("ball {i} is not inside the outer ball")));
        }
        centers.push(xi);
    }
    for i in 0..packing.len() {
        for j in 0..i {
            if dist(centers[i], centers[j]) <= packing[i].radius + packing[j].radius {
                return Err(Error::InvalidPacking(format!("balls {j} and {i} intersect")));
            }
        }
    }
    Ok(packing.iter().map(|b| (b.radius / ball.radius).powf(alpha)).sum())
}

/// Whether `sum r_i^alpha <= c R^alpha`.
pub fn packing_check(system: &CarpetSystem, ball: &CodedBall, packing: &[CodedBall], alpha: f64, c: f64) -> Result<bool> {
    Ok(packing_ratio(system, ball, packing, alpha)? <= c)
}

fn random_word(rng: &mut ChaCha8Rng, n: usize, len: usize) -> Vec<usize> {
    (0..len).map(|_| rng.gen_range(0..n)).collect()
}

/// A random outer ball centred in the carpet together with a greedy packing by
/// balls of radius half the short side of the cylinders at a smaller scale, each
/// centred at a point of its cylinder.
pub fn random_cylinder_packing(system: &CarpetSystem, rng: &mut ChaCha8Rng) -> Result<(CodedBall, Vec<CodedBall>)> {
    let n = system.len();
    let pre = random_word(rng, n, 6);
    let per_len = rng.gen_range(1..=3);
    let center = EventuallyPeriodicWord::new(pre, random_word(rng, n, per_len))?;
    let big_r = 2f64.powf(-rng.gen_range(1.0..4.0));
    let r = big_r * 2f64.powf(-rng.gen_range(2.0..8.0));
    let x = system.point(&center);

    let mut cylinders = cylinders_to_scale(system, r, Valuation::MinSide)?;
    cylinders.retain(|c| c.rect.meets_ball(x, big_r));
    cylinders.shuffle(rng);
    let mut packing: Vec<CodedBall> = Vec::new();
    let mut centers: Vec<(f64, f64)> = Vec::new();
    for c in cylinders {
        let radius = 0.5 * c.rect.width.min(c.rect.height);
        let tail = rng.gen_range(0..n);
        let word = EventuallyPeriodicWord::new(c.word, vec![tail])?;
        let xi = system.point(&word);
        if dist(xi, x) + radius > big_r {
            continue;
        }
        if centers.iter().zip(&packing).any(|(&xj, b)| dist(xi, xj) <= radius + b.radius) {
            continue;
        }
        centers.push(xi);
        packing.push(CodedBall::new(word, radius));
    }
    Ok((CodedBall::new(center, big_r), packing))
}

/// Twice the largest packing ratio at exponent `alpha` over `trials` random
/// cylinder packings drawn with `seed`.
pub fn calibrate_packing_constant(system: &CarpetSystem, alpha: f64, trials: usize, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 1.0f64;
    for _ in 0..trials {
        let (ball, packing) = random_cylinder_packing(system, &mut rng)?;
        worst = worst.max(packing_ratio(system, &ball, &packing, alpha)?);
    }
    Ok(2.0 * worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carpet::{validate, DiagonalMap};

    fn three_map() -> CarpetSystem {
        validate(vec![
            DiagonalMap::new(0.5, 0.25, 0.0, 0.0),
            DiagonalMap::new(0.5, 0.25, 0.0, 0.5),
            DiagonalMap::new(0.5, 0.25, 0.5, 0.25),
        ])
        .unwrap()
    }

    #[test]
    fn singleton_packing_is_the_ball() {
        let sys = three_map();
        let w: EventuallyPeriodicWord = "1:(0,2)".parse().unwrap();
        let ball = CodedBall::new(w.clone(), 0.1);
        let ratio = packing_ratio(&sys, &ball, &[ball.clone()], 1.7).unwrap();
        assert!((ratio - 1.0).abs() < 1e-15);
        assert!(packing_check(&sys, &ball, &[ball.clone()], 1.7, 1.0).unwrap());
    }

    #[test]
    fn bad_packings_are_rejected() {
        let sys = three_map();
        let w: EventuallyPeriodicWord = ":(0)".parse().unwrap();
        let ball = CodedBall::new(w.clone(), 0.1);
        let too_big = CodedBall::new(w.clone(), 0.2);
        assert!(matches!(packing_ratio(&sys, &ball, &[too_big], 1.0), Err(Error::InvalidPacking(_))));
        let small = CodedBall::new(w, 0.01);
        assert!(matches!(packing_ratio(&sys, &ball, &[small.clone(), small], 1.0), Err(Error::InvalidPacking(_))));
    }

    #[test]
    fn area_exponent_always_passes() {
        let sys = three_map();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let (ball, packing) = random_cylinder_packing(&sys, &mut rng).unwrap();
            assert!(packing_check(&sys, &ball, &packing, 2.1, 1.0).unwrap());
        }
    }
}
