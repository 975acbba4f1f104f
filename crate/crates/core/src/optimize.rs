//! Maximization of the Ledrappier-Young dimension of Bernoulli measures.
//!
//! For a weight vector `w` on the maps and an axis `j`, the projected measure has
//! dimension `H(eta_j w)/chi_j(w) + (H(w) - H(eta_j w))/chi_j'(w)`. The optimizer
//! works in softmax coordinates so every iterate stays in the open simplex.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::carpet::{Axis, CarpetSystem};
use crate::error::{Error, Result};

pub const RESTARTS: usize = 16;
pub const GRADIENT_TOL: f64 = 1e-9;
const MAX_ITERATIONS: usize = 20_000;
// restarts that stall above this gradient norm are discarded
const ACCEPT_TOL: f64 = 1e-6;
const FEASIBILITY_TOL: f64 = 1e-12;

/// Natural log entropy with `0 log 0 = 0`.
pub fn entropy(p: &[f64]) -> f64 {
    p.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.ln()).sum()
}

/// The objective for one axis, precomputed from a system.
#[derive(Debug, Clone)]
pub struct LyObjective {
    class_of: Vec<usize>,
    classes: usize,
    /// `-log r_{i,j}`
    lyap_j: Vec<f64>,
    /// `-log r_{i,j'}`
    lyap_other: Vec<f64>,
}

#[derive(Debug, Clone, Copy)]
struct Eval {
    value: f64,
    /// `chi_j - chi_j'`
    gap: f64,
}

impl LyObjective {
    pub fn new(system: &CarpetSystem, axis: Axis) -> Self {
        let n = system.len();
        LyObjective {
            class_of: (0..n).map(|i| system.class_id(i, axis)).collect(),
            classes: system.class_count(axis),
            lyap_j: (0..n).map(|i| -system.ratio(i, axis).ln()).collect(),
            lyap_other: (0..n).map(|i| -system.ratio(i, axis.other()).ln()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.class_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.class_of.is_empty()
    }

    fn class_weights(&self, w: &[f64]) -> Vec<f64> {
        let mut cw = vec![0.0; self.classes];
        for (i, &x) in w.iter().enumerate() {
            cw[self.class_of[i]] += x;
        }
        cw
    }

    /// Objective value at `w`.
    pub fn value(&self, w: &[f64]) -> f64 {
        self.eval(w).value
    }

    /// `chi_j(w) - chi_j'(w)`; the constrained region is where this is `<= 0`.
    pub fn gap(&self, w: &[f64]) -> f64 {
        self.eval(w).gap
    }

    /// Some weight vector satisfies `chi_j <= chi_j'`.
    pub fn feasible_region_nonempty(&self) -> bool {
        self.lyap_j.iter().zip(&self.lyap_other).any(|(a, b)| a <= b)
    }

    fn eval(&self, w: &[f64]) -> Eval {
        let h = entropy(w);
        let e = entropy(&self.class_weights(w));
        let a = dot(w, &self.lyap_j);
        let b = dot(w, &self.lyap_other);
        Eval { value: e / a + (h - e) / b, gap: a - b }
    }

    /// Value of `f - lambda * gap` and its gradient with respect to `w`.
    fn penalized_gradient(&self, w: &[f64], lambda: f64) -> (f64, Vec<f64>) {
        let cw = self.class_weights(w);
        let h = entropy(w);
        let e = entropy(&cw);
        let a = dot(w, &self.lyap_j);
        let b = dot(w, &self.lyap_other);
        let value = e / a + (h - e) / b - lambda * (a - b);
        let grad = (0..w.len())
            .map(|i| {
                let dh = -w[i].max(f64::MIN_POSITIVE).ln() - 1.0;
                let de = -cw[self.class_of[i]].max(f64::MIN_POSITIVE).ln() - 1.0;
                let da = self.lyap_j[i];
                let db = self.lyap_other[i];
                de / a - e * da / (a * a) + (dh - de) / b - (h - e) * db / (b * b) - lambda * (da - db)
            })
            .collect();
        (value, grad)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn softmax(z: &[f64]) -> Vec<f64> {
    let m = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = z.iter().map(|x| (x - m).exp()).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|x| x / s).collect()
}

/// Gradient in softmax coordinates: `w_k (G_k - <w, G>)`.
fn z_gradient(w: &[f64], g: &[f64]) -> Vec<f64> {
    let mean = dot(w, g);
    w.iter().zip(g).map(|(wk, gk)| wk * (gk - mean)).collect()
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Result of one maximization.
#[derive(Debug, Clone, Serialize)]
pub struct Maximum {
    pub value: f64,
    pub argmax: Vec<f64>,
    pub gradient_norm: f64,
    pub iterations: usize,
    pub restarts: usize,
    /// Lagrange multiplier of the constraint `chi_j <= chi_j'` (0 when inactive).
    pub multiplier: f64,
}

struct Ascent {
    z: Vec<f64>,
    value: f64,
    gradient_norm: f64,
    iterations: usize,
}

/// Barzilai-Borwein gradient ascent with step halving.
fn ascend(obj: &LyObjective, lambda: f64, z0: Vec<f64>) -> Ascent {
    let mut z = z0;
    let w = softmax(&z);
    let (mut fz, g) = obj.penalized_gradient(&w, lambda);
    let mut gz = z_gradient(&w, &g);
    let mut step = 1.0;
    let mut iterations = 0;
    while iterations < MAX_ITERATIONS && inf_norm(&gz) >= GRADIENT_TOL {
        iterations += 1;
        let mut t = step;
        let mut accepted = None;
        for _ in 0..60 {
            let zn: Vec<f64> = z.iter().zip(&gz).map(|(a, b)| a + t * b).collect();
            let wn = softmax(&zn);
            let (fnew, gn) = obj.penalized_gradient(&wn, lambda);
            if fnew.is_finite() && fnew >= fz - 1e-15 * fz.abs() {
                accepted = Some((zn, wn, fnew, gn));
                break;
            }
            t *= 0.5;
        }
        let Some((zn, wn, fnew, gn)) = accepted else { break };
        let gzn = z_gradient(&wn, &gn);
        let s: Vec<f64> = zn.iter().zip(&z).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = gzn.iter().zip(&gz).map(|(a, b)| b - a).collect();
        let sy = dot(&s, &y);
        step = if sy > 0.0 { (dot(&s, &s) / sy).clamp(1e-8, 1e4) } else { (2.0 * t).min(1e4) };
        z = zn;
        fz = fnew;
        gz = gzn;
    }
    Ascent { gradient_norm: inf_norm(&gz), z, value: fz, iterations }
}

fn random_start(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect()
}

/// Unconstrained maximum over the open simplex with seeded restarts.
pub fn maximize(obj: &LyObjective, seed: u64) -> Result<Maximum> {
    maximize_penalized(obj, 0.0, seed)
}

fn maximize_penalized(obj: &LyObjective, lambda: f64, seed: u64) -> Result<Maximum> {
    let n = obj.len();
    let mut best: Option<Ascent> = None;
    let mut best_any = f64::NEG_INFINITY;
    let mut iterations = 0;
    for restart in 0..RESTARTS {
        let z0 = if restart == 0 {
            vec![0.0; n]
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(restart as u64));
            random_start(&mut rng, n)
        };
        let run = ascend(obj, lambda, z0);
        iterations += run.iterations;
        best_any = best_any.max(run.value);
        if run.gradient_norm < ACCEPT_TOL && best.as_ref().map_or(true, |b| run.value > b.value) {
            best = Some(run);
        }
    }
    let best = best.ok_or(Error::OptimizerFailure { restarts: RESTARTS, best: best_any })?;
    let w = softmax(&best.z);
    Ok(Maximum {
        value: obj.value(&w),
        argmax: w,
        gradient_norm: best.gradient_norm,
        iterations,
        restarts: RESTARTS,
        multiplier: lambda,
    })
}

/// Maximum over `{w : chi_j(w) <= chi_j'(w)}`, or `None` when that region is empty.
///
/// If the free maximizer is infeasible the constraint is active, and the boundary
/// maximum is found by sweeping the multiplier of `f - lambda (chi_j - chi_j')`.
pub fn maximize_constrained(obj: &LyObjective, seed: u64) -> Result<Option<Maximum>> {
    if !obj.feasible_region_nonempty() {
        return Ok(None);
    }
    let free = maximize(obj, seed)?;
    if obj.gap(&free.argmax) <= FEASIBILITY_TOL {
        return Ok(Some(free));
    }

    let mut lo = 0.0;
    let mut hi = 1.0;
    let mut feasible: Option<Maximum> = None;
    let mut iterations = free.iterations;
    for _ in 0..40 {
        let m = maximize_penalized(obj, hi, seed)?;
        iterations += m.iterations;
        if obj.gap(&m.argmax) <= FEASIBILITY_TOL {
            feasible = Some(m);
            break;
        }
        lo = hi;
        hi *= 2.0;
    }
    let Some(mut feasible) = feasible else {
        return Ok(Some(vertex_fallback(obj)));
    };
    // warm-started bisection on the multiplier
    let mut z = feasible.argmax.iter().map(|x| x.ln()).collect::<Vec<_>>();
    for _ in 0..200 {
        if hi - lo <= 1e-13 * hi.max(1.0) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let run = ascend(obj, mid, z.clone());
        iterations += run.iterations;
        let w = softmax(&run.z);
        if obj.gap(&w) <= FEASIBILITY_TOL {
            hi = mid;
            z = run.z;
            feasible = Maximum {
                value: obj.value(&w),
                argmax: w,
                gradient_norm: run.gradient_norm,
                iterations: 0,
                restarts: RESTARTS,
                multiplier: mid,
            };
        } else {
            lo = mid;
        }
    }
    feasible.iterations = iterations;
    Ok(Some(feasible))
}

fn vertex_fallback(obj: &LyObjective) -> Maximum {
    let n = obj.len();
    let i = (0..n).find(|&i| obj.lyap_j[i] <= obj.lyap_other[i]).expect("feasible vertex");
    let mut w = vec![0.0; n];
    w[i] = 1.0;
    Maximum { value: obj.value(&w), argmax: w, gradient_norm: f64::NAN, iterations: 0, restarts: 0, multiplier: f64::INFINITY }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carpet::{validate, DiagonalMap};

    fn gl3() -> CarpetSystem {
        validate(vec![
            DiagonalMap::new(0.5, 0.25, 0.0, 0.0),
            DiagonalMap::new(0.5, 0.25, 0.0, 0.5),
            DiagonalMap::new(0.5, 0.25, 0.5, 0.0),
        ])
        .unwrap()
    }

    #[test]
    fn entropy_handles_zeros() {
        assert_eq!(entropy(&[1.0, 0.0]), 0.0);
        assert!((entropy(&[0.5, 0.5]) - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let obj = LyObjective::new(&gl3(), Axis::X);
        let w = [0.2, 0.3, 0.5];
        let (_, g) = obj.penalized_gradient(&w, 0.7);
        let f = |w: &[f64]| {
            let e = obj.eval(w);
            e.value - 0.7 * e.gap
        };
        for i in 0..3 {
            let h = 1e-6;
            let mut up = w;
            up[i] += h;
            let mut dn = w;
            dn[i] -= h;
            let fd = (f(&up) - f(&dn)) / (2.0 * h);
            assert!((fd - g[i]).abs() < 1e-6, "{i}: {fd} vs {}", g[i]);
        }
    }

    #[test]
    fn three_map_maximum_is_closed_form() {
        let m = maximize(&LyObjective::new(&gl3(), Axis::X), 0).unwrap();
        assert!((m.value - (1.0 + 2f64.sqrt()).log2()).abs() < 1e-9);
        assert!(m.argmax.iter().all(|&x| x >= 1e-9));
    }

    #[test]
    fn empty_region_gives_none() {
        // every map is wider than tall, so chi_2 <= chi_1 never holds
        let obj = LyObjective::new(&gl3(), Axis::Y);
        assert!(maximize_constrained(&obj, 0).unwrap().is_none());
    }
}
