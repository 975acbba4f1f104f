//! Symbolic slices and pointwise Assouad dimensions at coded points.

use serde::Serialize;

use crate::carpet::{classify_word, validate, Axis, CarpetClass, CarpetSystem, DiagonalMap, EventuallyPeriodicWord, OmegaClass};
use crate::closed_form::{baranski_dims_seeded, gl_box_dim, gl_dims_seeded, projected_box_dim, BaranskiReport};
use crate::error::{Error, Result};
use crate::geometry::{box_dim_estimate, default_scales, BoxDimEstimate};
use crate::moran::{nonauto_assouad, ColumnSequence, RatioMultiset};

/// Slack used when comparing dimensions computed by different routes.
pub const DIM_TOL: f64 = 1e-9;

/// The column sequence of the slice through `gamma`: each letter is replaced by the
/// orthogonal ratios of the maps in its class on `axis`.
pub fn symbolic_slice(system: &CarpetSystem, gamma: &EventuallyPeriodicWord, axis: Axis) -> Result<ColumnSequence> {
    gamma.validate_for(system)?;
    let step = |l: &usize| RatioMultiset::new(system.slice_ratios(system.class_id(*l, axis), axis)).expect("ratios in (0,1)");
    ColumnSequence::new(gamma.preperiod.iter().map(step).collect(), gamma.period.iter().map(step).collect())
}

#[derive(Debug, Clone, Serialize)]
pub struct PointwiseReport {
    pub axis: u8,
    pub omega_class: OmegaClass,
    pub gamma_limit: f64,
    /// Assouad dimension of the symbolic slice.
    pub fiber_dim: f64,
    /// Box dimension of the projection plus `fiber_dim`.
    pub tangent_dim: f64,
    pub pointwise_assouad: f64,
    /// Box dimension of the carpet used in the maximum.
    pub dim_b: f64,
    /// Present when `dim_b` is an empirical estimate: the same maximum taken with the
    /// ends of the estimate's band.
    pub pointwise_band: Option<(f64, f64)>,
    pub dim_b_estimate: Option<BoxDimEstimate>,
    /// The projected system is not strongly separated, so the point may fail to be
    /// regular and the value is only a lower bound.
    pub regularity_warning: bool,
}

/// Box dimension of a Gatzouras-Lalley carpet without running the Hausdorff optimizer.
pub fn gl_box_dimension(system: &CarpetSystem) -> Result<f64> {
    if system.class() != CarpetClass::GatzourasLalley {
        return Err(Error::WrongClass { expected: "GatzourasLalley", found: system.class().to_string() });
    }
    let s_eta = projected_box_dim(system, Axis::X).expect("columns are aligned");
    Ok(gl_box_dim(system, s_eta).0)
}

pub fn pointwise_assouad_gl(system: &CarpetSystem, gamma: &EventuallyPeriodicWord) -> Result<PointwiseReport> {
    let dim_b = gl_box_dimension(system)?;
    let class = classify_word(system, gamma)?;
    let fiber_dim = nonauto_assouad(&symbolic_slice(system, gamma, Axis::X)?);
    let tangent_dim = projected_box_dim(system, Axis::X).expect("columns are aligned") + fiber_dim;
    Ok(PointwiseReport {
        axis: 1,
        omega_class: class.class,
        gamma_limit: class.gamma_limit,
        fiber_dim,
        tangent_dim,
        pointwise_assouad: dim_b.max(tangent_dim),
        dim_b,
        pointwise_band: None,
        dim_b_estimate: None,
        regularity_warning: !system.eta1_ssc(),
    })
}

/// Pointwise Assouad dimension at a point of a Barański carpet that contracts
/// uniformly faster in one direction.
pub fn pointwise_assouad_baranski(system: &CarpetSystem, gamma: &EventuallyPeriodicWord) -> Result<PointwiseReport> {
    let estimate = box_dim_estimate(system, &default_scales())?;
    pointwise_assouad_baranski_with(system, gamma, estimate)
}

/// Same as [`pointwise_assouad_baranski`] with a precomputed box-dimension estimate.
pub fn pointwise_assouad_baranski_with(
    system: &CarpetSystem,
    gamma: &EventuallyPeriodicWord,
    estimate: BoxDimEstimate,
) -> Result<PointwiseReport> {
    if system.class() != CarpetClass::Baranski {
        return Err(Error::WrongClass { expected: "Baranski", found: system.class().to_string() });
    }
    let class = classify_word(system, gamma)?;
    let axis = match class.class {
        OmegaClass::Omega1 => Axis::X,
        OmegaClass::Omega2 => Axis::Y,
        OmegaClass::Omega0 => {
            return Err(Error::Unsupported(
                "the coding contracts equally in both directions; no formula for such points".into(),
            ))
        }
    };
    if !system.ssc(axis) {
        return Err(Error::Unsupported(format!(
            "the projection to axis {} is not strongly separated",
            axis.number()
        )));
    }
    let fiber_dim = nonauto_assouad(&symbolic_slice(system, gamma, axis)?);
    let tangent_dim = projected_box_dim(system, axis).expect("Baranski projections are aligned") + fiber_dim;
    Ok(PointwiseReport {
        axis: axis.number(),
        omega_class: class.class,
        gamma_limit: class.gamma_limit,
        fiber_dim,
        tangent_dim,
        pointwise_assouad: estimate.value.max(tangent_dim),
        dim_b: estimate.value,
        pointwise_band: Some((estimate.lower.max(tangent_dim), estimate.upper.max(tangent_dim))),
        dim_b_estimate: Some(estimate),
        regularity_warning: false,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LevelSet {
    /// Hausdorff dimension of `{x : dimA(K, x) = alpha}`, `None` when the set is empty.
    pub dim: Option<f64>,
    /// `alpha` is the Assouad dimension, so the level set carries full measure.
    pub full_measure: bool,
}

pub fn level_set_dim(system: &CarpetSystem, alpha: f64) -> Result<LevelSet> {
    level_set_dim_seeded(system, alpha, 0)
}

pub fn level_set_dim_seeded(system: &CarpetSystem, alpha: f64, seed: u64) -> Result<LevelSet> {
    let r = gl_dims_seeded(system, seed)?;
    if alpha < r.dim_b - DIM_TOL || alpha > r.dim_a + DIM_TOL {
        return Ok(LevelSet { dim: None, full_measure: false });
    }
    Ok(LevelSet { dim: Some(r.dim_h), full_measure: (alpha - r.dim_a).abs() <= DIM_TOL })
}

#[derive(Debug, Clone, Serialize)]
pub struct FewLargeTangents {
    pub holds: bool,
    /// Axis `j` with `d_j < d_j'` and `A_j > A_j'`.
    pub witness: Option<u8>,
    pub report: BaranskiReport,
}

/// Whether the points of maximal pointwise Assouad dimension form a set of strictly
/// smaller Hausdorff dimension than the carpet.
pub fn few_large_tangents(system: &CarpetSystem) -> Result<FewLargeTangents> {
    few_large_tangents_seeded(system, 0)
}

pub fn few_large_tangents_seeded(system: &CarpetSystem, seed: u64) -> Result<FewLargeTangents> {
    if system.class() != CarpetClass::Baranski {
        return Err(Error::Unsupported(format!("needs a Baranski system, got {}", system.class())));
    }
    for axis in Axis::BOTH {
        if !system.ssc(axis) {
            return Err(Error::Unsupported(format!("projection to axis {} is not strongly separated", axis.number())));
        }
    }
    let maps = system.maps();
    if !maps.iter().any(|m| m.r1 > m.r2) || !maps.iter().any(|m| m.r1 < m.r2) {
        return Err(Error::Unsupported(
            "needs maps contracting more strongly in each direction (both uniformly contracting classes nonempty)".into(),
        ));
    }
    let report = baranski_dims_seeded(system, seed)?;
    let mut witness = None;
    for axis in Axis::BOTH {
        let (this, other) = (report.axis(axis), report.axis(axis.other()));
        if let (Some(d), Some(d_other), Some(a), Some(a_other)) = (this.d, other.d, this.a, other.a) {
            if d < d_other - DIM_TOL && a > a_other + DIM_TOL {
                witness = Some(axis.number());
            }
        }
    }
    Ok(FewLargeTangents { holds: witness.is_some(), witness, report })
}

/// The 12-map Barański family: four `alpha1 x beta` maps stacked in the left column,
/// and eight `alpha2 x beta` maps in two blocks of four, with
/// `alpha1 = 1/3 - delta`, `alpha2 = 1/6 - delta`, `beta = 1/4 - delta`.
///
/// Gaps are spread evenly, so for `delta > 0` both projections are strongly
/// separated and at `delta = 0` the rectangles tile their rows and columns.
/// Map order: the four wide maps bottom to top, then the lower-left block, then
/// the upper-right block.
pub fn build_exceptional(delta: f64) -> Result<CarpetSystem> {
    if !(0.0..1.0 / 6.0).contains(&delta) {
        return Err(Error::RangeError(format!("delta = {delta} is not in [0, 1/6)")));
    }
    let a1 = 1.0 / 3.0 - delta;
    let a2 = 1.0 / 6.0 - delta;
    let b = 0.25 - delta;
    let gap_x = ((1.0 - a1 - 4.0 * a2) / 4.0).max(0.0);
    let gap_y = ((1.0 - 4.0 * b) / 3.0).max(0.0);
    let row = |i: usize| i as f64 * (b + gap_y);
    let col = |c: usize| a1 + gap_x + c as f64 * (a2 + gap_x);
    let mut maps: Vec<DiagonalMap> = (0..4).map(|i| DiagonalMap::new(a1, b, 0.0, row(i))).collect();
    for (cols, rows) in [([0, 1], [0, 1]), ([2, 3], [2, 3])] {
        for c in cols {
            for i in rows {
                maps.push(DiagonalMap::new(a2, b, col(c), row(i)));
            }
        }
    }
    validate(maps)
}
