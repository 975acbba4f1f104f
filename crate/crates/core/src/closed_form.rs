//! Closed-form and variational dimension formulas for Gatzouras-Lalley and
//! Barański carpets.

use serde::Serialize;

use crate::carpet::{Axis, CarpetClass, CarpetSystem, ProbabilityVector};
use crate::error::{Error, Result};
use crate::moran::{decreasing_root, solve_moran};
use crate::optimize::{entropy, maximize, maximize_constrained, LyObjective, Maximum};

/// Weights below this count as touching the boundary of the simplex.
pub const INTERIOR_TOL: f64 = 1e-9;

/// Entropies and Lyapunov exponents of a Bernoulli measure (natural logs).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyStats {
    pub h: f64,
    pub h_eta1: f64,
    pub h_eta2: f64,
    pub chi1: f64,
    pub chi2: f64,
}

pub fn entropy_stats(system: &CarpetSystem, p: &ProbabilityVector) -> Result<EntropyStats> {
    if p.len() != system.len() {
        return Err(Error::WrongShape(format!("{} weights for {} maps", p.len(), system.len())));
    }
    let w = p.weights();
    let projected = |axis: Axis| {
        let mut cw = vec![0.0; system.class_count(axis)];
        for (i, x) in w.iter().enumerate() {
            cw[system.class_id(i, axis)] += x;
        }
        entropy(&cw)
    };
    let chi = |axis: Axis| -> f64 { w.iter().enumerate().map(|(i, x)| -x * system.ratio(i, axis).ln()).sum() };
    Ok(EntropyStats { h: entropy(w), h_eta1: projected(Axis::X), h_eta2: projected(Axis::Y), chi1: chi(Axis::X), chi2: chi(Axis::Y) })
}

#[derive(Debug, Clone, Serialize)]
pub struct SolverDiagnostics {
    /// `|sum r1^{s_eta} r2^{s - s_eta} - 1|` at the reported box dimension.
    pub box_residual: f64,
    pub optimizer_iterations: usize,
    pub optimizer_restarts: usize,
    pub gradient_norm: f64,
    /// Every coordinate of the Hausdorff maximizer is at least `INTERIOR_TOL`.
    pub interior_maximizer: bool,
    /// Moran dimension of each column slice, indexed by column id.
    pub column_exponents: Vec<f64>,
}

/// Dimensions of a Gatzouras-Lalley carpet.
#[derive(Debug, Clone, Serialize)]
pub struct DimensionReport {
    pub dim_proj_box_1: f64,
    /// Only when the row projections are aligned, so the projected system is
    /// self-similar with the open set condition.
    pub dim_proj_box_2: Option<f64>,
    pub dim_b: f64,
    pub dim_h: f64,
    pub dim_a: f64,
    pub dim_l: f64,
    pub argmax_p: Vec<f64>,
    pub diagnostics: SolverDiagnostics,
}

fn require_gl(system: &CarpetSystem) -> Result<()> {
    if system.class() == CarpetClass::GatzourasLalley {
        Ok(())
    } else {
        Err(Error::WrongClass { expected: "GatzourasLalley", found: system.class().to_string() })
    }
}

/// Box dimension of the projection to `axis` when that projection is aligned.
pub fn projected_box_dim(system: &CarpetSystem, axis: Axis) -> Option<f64> {
    if !system.aligned(axis) {
        return None;
    }
    let ratios: Vec<f64> = (0..system.class_count(axis)).map(|c| system.class_ratio(c, axis)).collect();
    Some(solve_moran(&ratios).expect("class ratios are valid"))
}

/// Moran dimension of the slice through each class of `axis`, measured with the
/// orthogonal ratios.
pub fn slice_exponents(system: &CarpetSystem, axis: Axis) -> Vec<f64> {
    (0..system.class_count(axis))
        .map(|c| solve_moran(&system.slice_ratios(c, axis)).expect("slice ratios are valid"))
        .collect()
}

/// Root `s` of `sum_i r1_i^{s_eta} r2_i^{s - s_eta} = 1` and its residual.
pub fn gl_box_dim(system: &CarpetSystem, s_eta: f64) -> (f64, f64) {
    let weights: Vec<(f64, f64)> = system.maps().iter().map(|m| (m.r1.powf(s_eta), m.r2)).collect();
    let total: f64 = weights.iter().map(|w| w.0).sum();
    let r2_max = system.max_ratio(Axis::Y);
    let hi = total.ln().max(0.0) / (1.0 / r2_max).ln() + 1.0;
    let info = decreasing_root(
        |u| {
            weights.iter().fold((-1.0, 0.0), |(v, d), &(c, r)| {
                let p = c * r.powf(u);
                (v + p, d + p * r.ln())
            })
        },
        hi,
    );
    (s_eta + info.root, info.residual)
}

/// Hausdorff dimension of a Gatzouras-Lalley carpet and the maximizing weights.
pub fn gl_hausdorff(system: &CarpetSystem) -> Result<(f64, ProbabilityVector)> {
    let m = gl_hausdorff_seeded(system, 0)?;
    Ok((m.value, ProbabilityVector::new(m.argmax).expect("optimizer stays on the simplex")))
}

pub fn gl_hausdorff_seeded(system: &CarpetSystem, seed: u64) -> Result<Maximum> {
    require_gl(system)?;
    maximize(&LyObjective::new(system, Axis::X), seed)
}

pub fn gl_dims(system: &CarpetSystem) -> Result<DimensionReport> {
    gl_dims_seeded(system, 0)
}

pub fn gl_dims_seeded(system: &CarpetSystem, seed: u64) -> Result<DimensionReport> {
    require_gl(system)?;
    let s_eta = projected_box_dim(system, Axis::X).expect("columns of a GL carpet are aligned");
    let (dim_b, box_residual) = gl_box_dim(system, s_eta);
    let t = slice_exponents(system, Axis::X);
    let t_max = t.iter().copied().fold(0.0, f64::max);
    let t_min = t.iter().copied().fold(f64::INFINITY, f64::min);
    let hd = gl_hausdorff_seeded(system, seed)?;
    Ok(DimensionReport {
        dim_proj_box_1: s_eta,
        dim_proj_box_2: projected_box_dim(system, Axis::Y),
        dim_b,
        dim_h: hd.value,
        dim_a: s_eta + t_max,
        dim_l: s_eta + t_min,
        diagnostics: SolverDiagnostics {
            box_residual,
            optimizer_iterations: hd.iterations,
            optimizer_restarts: hd.restarts,
            gradient_norm: hd.gradient_norm,
            interior_maximizer: hd.argmax.iter().all(|&x| x >= INTERIOR_TOL),
            column_exponents: t,
        },
        argmax_p: hd.argmax,
    })
}

/// Per-axis quantities for a Barański carpet.
#[derive(Debug, Clone, Serialize)]
pub struct BaranskiDirectional {
    pub axis: u8,
    /// Maximum over `{chi_j <= chi_j'}`; `None` when no map has `r_j >= r_j'`.
    pub d: Option<f64>,
    pub argmax: Option<Vec<f64>>,
    pub dim_b_eta: Option<f64>,
    /// Largest slice exponent over the classes of this axis.
    pub t: f64,
    pub t_per_class: Vec<f64>,
    /// `dim_b_eta + t`
    pub a: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BaranskiReport {
    pub directional: [BaranskiDirectional; 2],
    pub dim_h: f64,
    pub dim_a: f64,
}

impl BaranskiReport {
    pub fn axis(&self, axis: Axis) -> &BaranskiDirectional {
        &self.directional[axis.number() as usize - 1]
    }
}

pub fn baranski_dims(system: &CarpetSystem) -> Result<BaranskiReport> {
    baranski_dims_seeded(system, 0)
}

pub fn baranski_dims_seeded(system: &CarpetSystem, seed: u64) -> Result<BaranskiReport> {
    if system.class() == CarpetClass::DiagonalOnly {
        return Err(Error::WrongClass { expected: "Baranski", found: system.class().to_string() });
    }
    let directional = |axis: Axis| -> Result<BaranskiDirectional> {
        let m = maximize_constrained(&LyObjective::new(system, axis), seed)?;
        let t_per_class = slice_exponents(system, axis);
        let t = t_per_class.iter().copied().fold(0.0, f64::max);
        let dim_b_eta = projected_box_dim(system, axis);
        Ok(BaranskiDirectional {
            axis: axis.number(),
            d: m.as_ref().map(|m| m.value),
            argmax: m.map(|m| m.argmax),
            dim_b_eta,
            t,
            t_per_class,
            a: dim_b_eta.map(|b| b + t),
        })
    };
    let directional = [directional(Axis::X)?, directional(Axis::Y)?];
    let dim_h = directional.iter().filter_map(|d| d.d).fold(f64::NEG_INFINITY, f64::max);
    let dim_a = directional.iter().filter_map(|d| d.a).fold(f64::NEG_INFINITY, f64::max);
    Ok(BaranskiReport { directional, dim_h, dim_a })
}

/// Parameters of a 12-map system made of 4 maps of size `alpha1 x beta` and 8 maps
/// of size `alpha2 x beta`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExceptionalShape {
    pub alpha1: f64,
    pub alpha2: f64,
    pub beta: f64,
}

pub fn exceptional_shape(system: &CarpetSystem) -> Result<ExceptionalShape> {
    let maps = system.maps();
    let mismatch = |why: &str| Error::WrongShape(format!("not a two-group 4 + 8 system: {why}"));
    if maps.len() != 12 {
        return Err(mismatch("need 12 maps"));
    }
    let beta = maps[0].r2;
    if maps.iter().any(|m| m.r2 != beta) {
        return Err(mismatch("heights differ"));
    }
    let mut widths: Vec<(f64, usize)> = Vec::new();
    for m in maps {
        match widths.iter_mut().find(|(w, _)| *w == m.r1) {
            Some(slot) => slot.1 += 1,
            None => widths.push((m.r1, 1)),
        }
    }
    widths.sort_by_key(|w| w.1);
    match widths.as_slice() {
        [(a1, 4), (a2, 8)] => Ok(ExceptionalShape { alpha1: *a1, alpha2: *a2, beta }),
        _ => Err(mismatch("need one width shared by 4 maps and another by 8")),
    }
}

/// The two one-parameter dimension functions of a 4 + 8 system, where `p` is the
/// total weight on the 8 narrow maps and each group is weighted uniformly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Reduction {
    pub d1: f64,
    pub d2: f64,
    /// Switch point: `chi_1 <= chi_2` exactly for `p <= p0`.
    pub p0: f64,
}

impl ExceptionalShape {
    pub fn p0(&self) -> f64 {
        (self.alpha1.ln() - self.beta.ln()) / (self.alpha1.ln() - self.alpha2.ln())
    }

    fn chi1(&self, p: f64) -> f64 {
        -p * self.alpha2.ln() - (1.0 - p) * self.alpha1.ln()
    }

    /// `(-p log p - (1-p) log(1-p)) / chi_1(p)`
    pub fn d1(&self, p: f64) -> f64 {
        entropy(&[p, 1.0 - p]) / self.chi1(p)
    }

    /// `log 4 / (-log beta) + (-p log p - (1-p) log(1-p) - log 4) / chi_1(p)`
    pub fn d2(&self, p: f64) -> f64 {
        let log4 = 4f64.ln();
        log4 / -self.beta.ln() + (entropy(&[p, 1.0 - p]) - log4) / self.chi1(p)
    }

    /// The full objective `H(eta_j z)/chi_j + (H(z) - H(eta_j z))/chi_j'` on the
    /// uniform-in-group vector `z(p)`, using the column and row structure of `system`.
    pub fn full_objective(&self, system: &CarpetSystem, axis: Axis, p: f64) -> f64 {
        let w = self.uniform_in_groups(system, p);
        LyObjective::new(system, axis).value(&w)
    }

    fn uniform_in_groups(&self, system: &CarpetSystem, p: f64) -> Vec<f64> {
        system.maps().iter().map(|m| if m.r1 == self.alpha1 { (1.0 - p) / 4.0 } else { p / 8.0 }).collect()
    }
}

pub fn baranski_1d_reduction(system: &CarpetSystem, p: f64) -> Result<Reduction> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::RangeError(format!("p = {p} is not in [0,1]")));
    }
    let shape = exceptional_shape(system)?;
    Ok(Reduction { d1: shape.d1(p), d2: shape.d2(p), p0: shape.p0() })
}

/// Suprema of the one-parameter reduction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReductionSummary {
    pub p0: f64,
    pub sup_d1: f64,
    pub argmax_d1: f64,
    pub sup_d2: f64,
    pub argmax_d2: f64,
    /// `D1` on `[0, p0]` glued to `D2` on `[p0, 1]`.
    pub sup_piecewise: f64,
}

pub fn reduction_summary(system: &CarpetSystem) -> Result<ReductionSummary> {
    let shape = exceptional_shape(system)?;
    let p0 = shape.p0();
    let (argmax_d1, sup_d1) = maximize_1d(|p| shape.d1(p), 0.0, 1.0);
    let (argmax_d2, sup_d2) = maximize_1d(|p| shape.d2(p), 0.0, 1.0);
    let low = maximize_1d(|p| shape.d1(p), 0.0, p0.clamp(0.0, 1.0)).1;
    let high = maximize_1d(|p| shape.d2(p), p0.clamp(0.0, 1.0), 1.0).1;
    Ok(ReductionSummary { p0, sup_d1, argmax_d1, sup_d2, argmax_d2, sup_piecewise: low.max(high) })
}

/// Maximize a continuous function on `[a, b]`: grid scan, then golden section
/// around the best grid point.
pub fn maximize_1d(f: impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    const GRID: usize = 4096;
    if b <= a {
        return (a, f(a));
    }
    let h = (b - a) / GRID as f64;
    let best = (0..=GRID).map(|k| a + h * k as f64).map(|x| (x, f(x))).fold((a, f64::NEG_INFINITY), |m, c| if c.1 > m.1 { c } else { m });
    let (mut lo, mut hi) = ((best.0 - h).max(a), (best.0 + h).min(b));
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..200 {
        if hi - lo < 1e-14 {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        }
    }
    let x = 0.5 * (lo + hi);
    [(x, f(x)), best].into_iter().fold((a, f64::NEG_INFINITY), |m, c| if c.1 > m.1 { c } else { m })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carpet::{validate, DiagonalMap};

    fn two_map() -> CarpetSystem {
        validate(vec![DiagonalMap::new(0.5, 0.25, 0.0, 0.0), DiagonalMap::new(0.5, 0.25, 0.5, 0.5)]).unwrap()
    }

    #[test]
    fn entropy_stats_examples() {
        let sys = two_map();
        let s = entropy_stats(&sys, &ProbabilityVector::uniform(2)).unwrap();
        assert!((s.h - 2f64.ln()).abs() < 1e-15);
        assert!((s.chi2 - 4f64.ln()).abs() < 1e-15);
        let s = entropy_stats(&sys, &ProbabilityVector::new(vec![1.0, 0.0]).unwrap()).unwrap();
        assert_eq!(s.h, 0.0);
        assert!((s.chi1 - 2f64.ln()).abs() < 1e-15);
        assert!(entropy_stats(&sys, &ProbabilityVector::uniform(3)).is_err());
    }

    #[test]
    fn singleton_columns_are_one_dimensional() {
        let r = gl_dims(&two_map()).unwrap();
        for v in [r.dim_proj_box_1, r.dim_b, r.dim_a, r.dim_l] {
            assert!((v - 1.0).abs() < 1e-12, "{v}");
        }
        assert!((r.dim_h - 1.0).abs() < 1e-9);
    }

    #[test]
    fn gl_dims_rejects_baranski() {
        let sys = validate(vec![DiagonalMap::new(0.25, 0.5, 0.0, 0.0), DiagonalMap::new(0.25, 0.5, 0.5, 0.0)]).unwrap();
        assert!(matches!(gl_dims(&sys), Err(Error::WrongClass { .. })));
    }

    #[test]
    fn golden_section_finds_interior_peak() {
        let (x, v) = maximize_1d(|x| -(x - 0.3).powi(2), 0.0, 1.0);
        assert!((x - 0.3).abs() < 1e-7 && v.abs() < 1e-14);
        let (x, _) = maximize_1d(|x| x, 0.0, 1.0);
        assert_eq!(x, 1.0);
    }
}
