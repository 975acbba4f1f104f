//! Diagonal iterated function systems in the plane.
//!
//! A [`CarpetSystem`] is a validated family of maps
//! `T_i(x, y) = (r1 x + d1, r2 y + d2)` together with the column (axis 1) and
//! row (axis 2) equivalence classes that the dimension formulas are built from.

use std::fmt;
use std::ops::{Add, Div, Mul, Sub};
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Rect;

pub type Rational = Ratio<i128>;

/// Tolerance used for geometric comparisons when exact rationals are unavailable.
pub const GEOMETRY_TOL: f64 = 1e-12;
/// Tie tolerance for the limiting Lyapunov ratio used by [`classify_word`].
pub const OMEGA_TIE_TOL: f64 = 1e-12;

/// Coordinate axis. Axis 1 is horizontal, axis 2 is vertical.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    #[serde(rename = "1")]
    X,
    #[serde(rename = "2")]
    Y,
}

impl Axis {
    pub const BOTH: [Axis; 2] = [Axis::X, Axis::Y];

    pub fn other(self) -> Axis {
        match self {
            Axis::X => Axis::Y,
            Axis::Y => Axis::X,
        }
    }

    /// 1 or 2.
    pub fn number(self) -> u8 {
        match self {
            Axis::X => 1,
            Axis::Y => 2,
        }
    }

    pub fn from_number(j: u8) -> Result<Axis> {
        match j {
            1 => Ok(Axis::X),
            2 => Ok(Axis::Y),
            _ => Err(Error::RangeError(format!("axis must be 1 or 2, got {j}"))),
        }
    }

    fn idx(self) -> usize {
        self.number() as usize - 1
    }
}

/// One planar diagonal contraction `(x, y) -> (r1 x + d1, r2 y + d2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagonalMap {
    pub r1: f64,
    pub r2: f64,
    pub d1: f64,
    pub d2: f64,
    exact: Option<[Rational; 4]>,
}

impl DiagonalMap {
    pub fn new(r1: f64, r2: f64, d1: f64, d2: f64) -> Self {
        DiagonalMap { r1, r2, d1, d2, exact: None }
    }

    /// Build from exact rationals `(numerator, denominator)` in the order r1, r2, d1, d2.
    pub fn from_rationals(parts: [(i64, i64); 4]) -> Result<Self> {
        let mut exact = [Rational::from_integer(0); 4];
        for (slot, (n, d)) in exact.iter_mut().zip(parts) {
            if d == 0 {
                return Err(Error::InvalidSystem("zero denominator".into()));
            }
            *slot = Rational::new(n as i128, d as i128);
        }
        let f = |q: Rational| *q.numer() as f64 / *q.denom() as f64;
        Ok(DiagonalMap { r1: f(exact[0]), r2: f(exact[1]), d1: f(exact[2]), d2: f(exact[3]), exact: Some(exact) })
    }

    pub fn ratio(&self, axis: Axis) -> f64 {
        match axis {
            Axis::X => self.r1,
            Axis::Y => self.r2,
        }
    }

    pub fn offset(&self, axis: Axis) -> f64 {
        match axis {
            Axis::X => self.d1,
            Axis::Y => self.d2,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    /// Exact `(numerator, denominator)` pairs in the order r1, r2, d1, d2, when known.
    pub fn rationals(&self) -> Option<[(i128, i128); 4]> {
        self.exact.map(|e| e.map(|q| (*q.numer(), *q.denom())))
    }

    /// Image of the unit square.
    pub fn image(&self) -> Rect {
        Rect::new(self.d1, self.d2, self.r1, self.r2)
    }

    fn exact_parts(&self, axis: Axis) -> Option<(Rational, Rational)> {
        self.exact.map(|e| match axis {
            Axis::X => (e[0], e[2]),
            Axis::Y => (e[1], e[3]),
        })
    }

    /// Same projected similarity on `axis`: exact equality of `(ratio, offset)`.
    fn same_projection(&self, other: &DiagonalMap, axis: Axis) -> bool {
        match (self.exact_parts(axis), other.exact_parts(axis)) {
            (Some(a), Some(b)) => a == b,
            _ => self.ratio(axis) == other.ratio(axis) && self.offset(axis) == other.offset(axis),
        }
    }
}

/// Carpet type as determined by [`validate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CarpetClass {
    GatzourasLalley,
    Baranski,
    DiagonalOnly,
}

impl fmt::Display for CarpetClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CarpetClass::GatzourasLalley => "GatzourasLalley",
            CarpetClass::Baranski => "Baranski",
            CarpetClass::DiagonalOnly => "DiagonalOnly",
        };
        f.write_str(s)
    }
}

/// A validated diagonal IFS with derived column/row structure.
#[derive(Debug, Clone)]
pub struct CarpetSystem {
    maps: Vec<DiagonalMap>,
    class: CarpetClass,
    /// `class_of[axis][i]` is the projected class id of map `i`.
    class_of: [Vec<usize>; 2],
    class_count: [usize; 2],
    ssc: [bool; 2],
    aligned: [bool; 2],
    violations: Vec<String>,
    warnings: Vec<String>,
}

/// One projected similarity together with the maps projecting onto it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProjectedClass {
    pub id: usize,
    pub ratio: f64,
    pub offset: f64,
    pub members: Vec<usize>,
}

// Arithmetic used by the separation checks: exact on rationals, tolerant on floats.
trait Coord: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self> {
    fn one() -> Self;
    fn zero() -> Self;
    fn strictly_less(self, other: Self) -> bool;
}

impl Coord for f64 {
    fn one() -> Self {
        1.0
    }
    fn zero() -> Self {
        0.0
    }
    fn strictly_less(self, other: Self) -> bool {
        self < other - GEOMETRY_TOL
    }
}

impl Coord for Rational {
    fn one() -> Self {
        Rational::from_integer(1)
    }
    fn zero() -> Self {
        Rational::from_integer(0)
    }
    fn strictly_less(self, other: Self) -> bool {
        self < other
    }
}

#[derive(Clone, Copy)]
struct Interval<T> {
    lo: T,
    hi: T,
}

impl<T: Coord> Interval<T> {
    fn open_overlap(&self, other: &Interval<T>) -> bool {
        self.lo.strictly_less(other.hi) && other.lo.strictly_less(self.hi)
    }

    fn closed_disjoint(&self, other: &Interval<T>) -> bool {
        self.hi.strictly_less(other.lo) || other.hi.strictly_less(self.lo)
    }

    fn outside_unit(&self) -> bool {
        self.lo.strictly_less(T::zero()) || T::one().strictly_less(self.hi)
    }
}

struct Geometry<T> {
    // (ratio, offset) per map per axis
    params: Vec<[(T, T); 2]>,
}

impl<T: Coord> Geometry<T> {
    fn interval(&self, i: usize, axis: Axis) -> Interval<T> {
        let (r, d) = self.params[i][axis.idx()];
        Interval { lo: d, hi: d + r }
    }

    fn images_overlap(&self, i: usize, j: usize) -> bool {
        Axis::BOTH.iter().all(|&a| self.interval(i, a).open_overlap(&self.interval(j, a)))
    }

    /// Strong separation of the projected attractor on `axis`, one representative
    /// map per class.
    fn projected_ssc(&self, reps: &[usize], axis: Axis) -> bool {
        if reps.len() < 2 {
            return true;
        }
        let fixed: Vec<T> = reps
            .iter()
            .map(|&i| {
                let (r, d) = self.params[i][axis.idx()];
                d / (T::one() - r)
            })
            .collect();
        let mut lo = fixed[0];
        let mut hi = fixed[0];
        for &p in &fixed[1..] {
            if p.strictly_less(lo) {
                lo = p;
            }
            if hi.strictly_less(p) {
                hi = p;
            }
        }
        let images: Vec<Interval<T>> = reps
            .iter()
            .map(|&i| {
                let (r, d) = self.params[i][axis.idx()];
                Interval { lo: r * lo + d, hi: r * hi + d }
            })
            .collect();
        for a in 0..images.len() {
            for b in a + 1..images.len() {
                if !images[a].closed_disjoint(&images[b]) {
                    return false;
                }
            }
        }
        true
    }
}

struct CheckOutcome {
    overlaps: Vec<(usize, usize)>,
    misaligned: [Vec<(usize, usize)>; 2],
    outside: Vec<usize>,
    ssc: [bool; 2],
}

fn run_checks<T: Coord>(geo: &Geometry<T>, class_of: &[Vec<usize>; 2], reps: &[Vec<usize>; 2]) -> CheckOutcome {
    let n = geo.params.len();
    let mut overlaps = Vec::new();
    let mut misaligned = [Vec::new(), Vec::new()];
    for i in 0..n {
        for j in i + 1..n {
            if geo.images_overlap(i, j) {
                overlaps.push((i, j));
            }
            for axis in Axis::BOTH {
                let same = class_of[axis.idx()][i] == class_of[axis.idx()][j];
                if !same && geo.interval(i, axis).open_overlap(&geo.interval(j, axis)) {
                    misaligned[axis.idx()].push((i, j));
                }
            }
        }
    }
    let outside = (0..n)
        .filter(|&i| Axis::BOTH.iter().any(|&a| geo.interval(i, a).outside_unit()))
        .collect();
    let ssc = [geo.projected_ssc(&reps[0], Axis::X), geo.projected_ssc(&reps[1], Axis::Y)];
    CheckOutcome { overlaps, misaligned, outside, ssc }
}

/// Validate a list of maps and derive the carpet structure.
pub fn validate(maps: Vec<DiagonalMap>) -> Result<CarpetSystem> {
    if maps.len() < 2 {
        return Err(Error::InvalidSystem(format!("need at least 2 maps, got {}", maps.len())));
    }
    for (i, m) in maps.iter().enumerate() {
        for (name, r) in [("r1", m.r1), ("r2", m.r2)] {
            if !(r > 0.0 && r < 1.0) {
                return Err(Error::InvalidSystem(format!("map {i}: {name} = {r} is not in (0,1)")));
            }
        }
        if !(m.d1.is_finite() && m.d2.is_finite()) {
            return Err(Error::InvalidSystem(format!("map {i}: non-finite translation")));
        }
        if let Some(e) = m.exact {
            let zero = Rational::from_integer(0);
            let one = Rational::from_integer(1);
            if e[0] <= zero || e[0] >= one || e[1] <= zero || e[1] >= one {
                return Err(Error::InvalidSystem(format!("map {i}: ratio is not in (0,1)")));
            }
        }
    }

    let mut class_of = [vec![0; maps.len()], vec![0; maps.len()]];
    let mut reps: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
    for axis in Axis::BOTH {
        for i in 0..maps.len() {
            let found = reps[axis.idx()].iter().position(|&r| maps[r].same_projection(&maps[i], axis));
            class_of[axis.idx()][i] = match found {
                Some(c) => c,
                None => {
                    reps[axis.idx()].push(i);
                    reps[axis.idx()].len() - 1
                }
            };
        }
    }

    let outcome = if maps.iter().all(DiagonalMap::is_exact) {
        let geo = Geometry {
            params: maps
                .iter()
                .map(|m| {
                    let e = m.exact.unwrap();
                    [(e[0], e[2]), (e[1], e[3])]
                })
                .collect(),
        };
        run_checks(&geo, &class_of, &reps)
    } else {
        let geo = Geometry { params: maps.iter().map(|m| [(m.r1, m.d1), (m.r2, m.d2)]).collect() };
        run_checks(&geo, &class_of, &reps)
    };

    let mut violations = Vec::new();
    for &(i, j) in &outcome.overlaps {
        violations.push(format!("images of maps {i} and {j} have overlapping interiors"));
    }
    for axis in Axis::BOTH {
        for &(i, j) in &outcome.misaligned[axis.idx()] {
            violations.push(format!(
                "maps {i} and {j} have partially overlapping projections on axis {}",
                axis.number()
            ));
        }
    }
    let not_wider: Vec<usize> = (0..maps.len()).filter(|&i| maps[i].r1 <= maps[i].r2).collect();

    let separated = outcome.overlaps.is_empty();
    let cols_aligned = outcome.misaligned[0].is_empty();
    let rows_aligned = outcome.misaligned[1].is_empty();
    let class = if separated && cols_aligned && not_wider.is_empty() {
        CarpetClass::GatzourasLalley
    } else if separated && cols_aligned && rows_aligned {
        CarpetClass::Baranski
    } else {
        if separated && cols_aligned {
            for i in &not_wider {
                violations.push(format!("map {i} is not strictly wider than tall"));
            }
        }
        CarpetClass::DiagonalOnly
    };

    let warnings = outcome
        .outside
        .iter()
        .map(|i| format!("image of map {i} extends outside the unit square"))
        .collect();

    Ok(CarpetSystem {
        maps,
        class,
        class_count: [reps[0].len(), reps[1].len()],
        class_of,
        ssc: outcome.ssc,
        aligned: [cols_aligned, rows_aligned],
        violations,
        warnings,
    })
}

impl CarpetSystem {
    pub fn maps(&self) -> &[DiagonalMap] {
        &self.maps
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn class(&self) -> CarpetClass {
        self.class
    }

    pub fn violations(&self) -> &[String] {
        &self.violations
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Projected attractor on `axis` is strongly separated.
    pub fn ssc(&self, axis: Axis) -> bool {
        self.ssc[axis.idx()]
    }

    /// Projected images on `axis` are equal or have disjoint interiors, so the
    /// projected system satisfies the open set condition.
    pub fn aligned(&self, axis: Axis) -> bool {
        self.aligned[axis.idx()]
    }

    pub fn eta1_ssc(&self) -> bool {
        self.ssc[0]
    }

    pub fn eta2_ssc(&self) -> bool {
        self.ssc[1]
    }

    /// Projected class id of map `i` on `axis`.
    pub fn class_id(&self, i: usize, axis: Axis) -> usize {
        self.class_of[axis.idx()][i]
    }

    pub fn class_count(&self, axis: Axis) -> usize {
        self.class_count[axis.idx()]
    }

    /// Members of every projected class on `axis`, indexed by class id.
    pub fn partition(&self, axis: Axis) -> Vec<Vec<usize>> {
        let mut parts = vec![Vec::new(); self.class_count(axis)];
        for i in 0..self.len() {
            parts[self.class_id(i, axis)].push(i);
        }
        parts
    }

    pub fn ratio(&self, i: usize, axis: Axis) -> f64 {
        self.maps[i].ratio(axis)
    }

    /// Projected ratio of class `c` on `axis`.
    pub fn class_ratio(&self, c: usize, axis: Axis) -> f64 {
        let rep = (0..self.len()).find(|&i| self.class_id(i, axis) == c).expect("class id in range");
        self.maps[rep].ratio(axis)
    }

    /// Ratios of the maps in class `c` of `axis`, measured in the orthogonal direction.
    pub fn slice_ratios(&self, c: usize, axis: Axis) -> Vec<f64> {
        (0..self.len())
            .filter(|&i| self.class_id(i, axis) == c)
            .map(|i| self.maps[i].ratio(axis.other()))
            .collect()
    }

    pub fn check_letter(&self, letter: usize) -> Result<()> {
        if letter < self.len() {
            Ok(())
        } else {
            Err(Error::IndexError { letter, len: self.len() })
        }
    }

    pub fn check_word(&self, word: &[usize]) -> Result<()> {
        word.iter().try_for_each(|&l| self.check_letter(l))
    }

    /// Product of the `axis` ratios along `word`.
    pub fn word_ratio(&self, word: &[usize], axis: Axis) -> f64 {
        word.iter().map(|&i| self.ratio(i, axis)).product()
    }

    /// Rectangle `T_word([0,1]^2)`.
    pub fn word_rect(&self, word: &[usize]) -> Rect {
        word.iter().fold(Rect::UNIT, |r, &i| r.compose(&self.maps[i].image()))
    }

    /// Coordinates of `pi(gamma)`.
    pub fn point(&self, gamma: &EventuallyPeriodicWord) -> (f64, f64) {
        let per = self.word_rect(&gamma.period);
        // fixed point of the period composite, one coordinate at a time
        let fx = per.x0 / (1.0 - per.width);
        let fy = per.y0 / (1.0 - per.height);
        let pre = self.word_rect(&gamma.preperiod);
        (pre.x0 + pre.width * fx, pre.y0 + pre.height * fy)
    }

    pub fn min_ratio(&self, axis: Axis) -> f64 {
        self.maps.iter().map(|m| m.ratio(axis)).fold(f64::INFINITY, f64::min)
    }

    pub fn max_ratio(&self, axis: Axis) -> f64 {
        self.maps.iter().map(|m| m.ratio(axis)).fold(0.0, f64::max)
    }
}

/// Projected systems `Lambda_j`: one entry per class on `axis`.
pub fn project(system: &CarpetSystem, axis: Axis) -> Vec<ProjectedClass> {
    system
        .partition(axis)
        .into_iter()
        .enumerate()
        .map(|(id, members)| {
            let m = system.maps[members[0]];
            ProjectedClass { id, ratio: m.ratio(axis), offset: m.offset(axis), members }
        })
        .collect()
}

/// Letterwise projection of `word` onto class ids of `axis`.
pub fn column_word(system: &CarpetSystem, word: &[usize], axis: Axis) -> Result<Vec<usize>> {
    word.iter()
        .map(|&l| {
            system.check_letter(l)?;
            Ok(system.class_id(l, axis))
        })
        .collect()
}

/// A coded point `u v v v ...` over the map alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct EventuallyPeriodicWord {
    pub preperiod: Vec<usize>,
    pub period: Vec<usize>,
}

impl EventuallyPeriodicWord {
    pub fn new(preperiod: Vec<usize>, period: Vec<usize>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::EmptyInput("period of an eventually periodic word"));
        }
        Ok(EventuallyPeriodicWord { preperiod, period })
    }

    pub fn periodic(period: Vec<usize>) -> Result<Self> {
        Self::new(Vec::new(), period)
    }

    /// The `n`-th letter (0-based).
    pub fn letter(&self, n: usize) -> usize {
        if n < self.preperiod.len() {
            self.preperiod[n]
        } else {
            self.period[(n - self.preperiod.len()) % self.period.len()]
        }
    }

    /// The prefix `gamma|n`.
    pub fn prefix(&self, n: usize) -> Vec<usize> {
        (0..n).map(|k| self.letter(k)).collect()
    }

    pub fn validate_for(&self, system: &CarpetSystem) -> Result<()> {
        system.check_word(&self.preperiod)?;
        system.check_word(&self.period)
    }

    /// Letter frequencies of the period.
    pub fn period_frequencies(&self, alphabet: usize) -> Vec<f64> {
        let mut q = vec![0.0; alphabet];
        for &l in &self.period {
            q[l] += 1.0;
        }
        let total = self.period.len() as f64;
        q.iter_mut().for_each(|x| *x /= total);
        q
    }
}

impl fmt::Display for EventuallyPeriodicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |w: &[usize]| w.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "{}:({})", join(&self.preperiod), join(&self.period))
    }
}

impl FromStr for EventuallyPeriodicWord {
    type Err = Error;

    /// Parses `u:(v)` where `u` and `v` are comma separated indices and `v` is nonempty.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("expected `u:(v)`, got {s:?}"));
        let (pre, rest) = s.trim().split_once(':').ok_or_else(bad)?;
        let per = rest.trim().strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
        let letters = |part: &str| -> Result<Vec<usize>> {
            let part = part.trim();
            if part.is_empty() {
                return Ok(Vec::new());
            }
            part.split(',')
                .map(|t| t.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad letter {t:?} in {s:?}"))))
                .collect()
        };
        EventuallyPeriodicWord::new(letters(pre)?, letters(per)?)
    }
}

/// A probability vector over the map indices.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbabilityVector {
    weights: Vec<f64>,
}

impl ProbabilityVector {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::EmptyInput("probability vector"));
        }
        if weights.iter().any(|&w| !(w >= 0.0) || !w.is_finite()) {
            return Err(Error::RangeError("probability weights must be nonnegative".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::RangeError(format!("probability weights sum to {total}, not 1")));
        }
        Ok(ProbabilityVector { weights })
    }

    pub fn uniform(n: usize) -> Self {
        ProbabilityVector { weights: vec![1.0 / n as f64; n] }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// The classes of codings by limiting ratio of directional Lyapunov exponents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OmegaClass {
    Omega0,
    Omega1,
    Omega2,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WordClassification {
    pub class: OmegaClass,
    /// `chi_1(q) / chi_2(q)` for the period letter frequencies `q`.
    pub gamma_limit: f64,
}

/// Limit of `Gamma_k` along an eventually periodic word, and the induced class.
pub fn classify_word(system: &CarpetSystem, gamma: &EventuallyPeriodicWord) -> Result<WordClassification> {
    gamma.validate_for(system)?;
    let q = gamma.period_frequencies(system.len());
    let chi = |axis: Axis| -> f64 { q.iter().zip(system.maps()).map(|(p, m)| -p * m.ratio(axis).ln()).sum() };
    let gamma_limit = chi(Axis::X) / chi(Axis::Y);
    let class = if (gamma_limit - 1.0).abs() <= OMEGA_TIE_TOL {
        OmegaClass::Omega0
    } else if gamma_limit < 1.0 {
        OmegaClass::Omega1
    } else {
        OmegaClass::Omega2
    };
    Ok(WordClassification { class, gamma_limit })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gl3() -> CarpetSystem {
        validate(vec![
            DiagonalMap::new(0.5, 0.25, 0.0, 0.0),
            DiagonalMap::new(0.5, 0.25, 0.0, 0.5),
            DiagonalMap::new(0.5, 0.25, 0.5, 0.0),
        ])
        .unwrap()
    }

    #[test]
    fn touching_gl_columns_fail_ssc() {
        let sys = validate(vec![
            DiagonalMap::from_rationals([(1, 2), (1, 4), (0, 1), (0, 1)]).unwrap(),
            DiagonalMap::from_rationals([(1, 2), (1, 4), (1, 2), (0, 1)]).unwrap(),
        ])
        .unwrap();
        assert_eq!(sys.class(), CarpetClass::GatzourasLalley);
        assert!(!sys.eta1_ssc());
    }

    #[test]
    fn tall_maps_in_aligned_rows_are_baranski() {
        let sys = validate(vec![DiagonalMap::new(0.25, 0.5, 0.0, 0.0), DiagonalMap::new(0.25, 0.5, 0.5, 0.0)]).unwrap();
        assert_eq!(sys.class(), CarpetClass::Baranski);
    }

    #[test]
    fn too_few_maps_and_bad_ratios_are_rejected() {
        assert!(matches!(validate(vec![DiagonalMap::new(0.5, 0.5, 0.0, 0.0)]), Err(Error::InvalidSystem(_))));
        let bad = vec![DiagonalMap::new(1.0, 0.5, 0.0, 0.0), DiagonalMap::new(0.5, 0.5, 0.5, 0.0)];
        assert!(matches!(validate(bad), Err(Error::InvalidSystem(_))));
        let bad = vec![DiagonalMap::new(0.5, 0.0, 0.0, 0.0), DiagonalMap::new(0.5, 0.5, 0.5, 0.0)];
        assert!(matches!(validate(bad), Err(Error::InvalidSystem(_))));
    }

    #[test]
    fn overlapping_images_are_diagonal_only() {
        let sys = validate(vec![DiagonalMap::new(0.5, 0.5, 0.0, 0.0), DiagonalMap::new(0.5, 0.5, 0.25, 0.25)]).unwrap();
        assert_eq!(sys.class(), CarpetClass::DiagonalOnly);
        assert!(!sys.violations().is_empty());
    }

    #[test]
    fn near_equal_offsets_are_distinct_columns() {
        let sys = validate(vec![
            DiagonalMap::new(0.25, 0.125, 0.0, 0.0),
            DiagonalMap::new(0.25, 0.125, 1e-14, 0.5),
        ])
        .unwrap();
        assert_eq!(sys.class_count(Axis::X), 2);
        // the two columns overlap as intervals, which breaks alignment
        assert_eq!(sys.class(), CarpetClass::DiagonalOnly);
    }

    #[test]
    fn outside_unit_square_is_a_warning() {
        let sys = validate(vec![DiagonalMap::new(0.5, 0.25, 0.0, 0.0), DiagonalMap::new(0.5, 0.25, 0.75, 0.0)]).unwrap();
        assert_eq!(sys.class(), CarpetClass::GatzourasLalley);
        assert_eq!(sys.warnings().len(), 1);
    }

    #[test]
    fn column_word_projects_letters() {
        let sys = gl3();
        assert_eq!(column_word(&sys, &[], Axis::X).unwrap(), Vec::<usize>::new());
        assert_eq!(column_word(&sys, &[2], Axis::X).unwrap(), vec![1]);
        assert_eq!(column_word(&sys, &[0, 1, 2], Axis::X).unwrap(), vec![0, 0, 1]);
        assert_eq!(column_word(&sys, &[3], Axis::X), Err(Error::IndexError { letter: 3, len: 3 }));
    }

    #[test]
    fn distinct_offsets_give_one_class_per_map() {
        let sys = gl3();
        let rows = project(&sys, Axis::Y);
        // maps 0 and 2 share (r2, d2) = (1/4, 0)
        assert_eq!(rows.len(), 2);
        let sys = validate(vec![DiagonalMap::new(0.3, 0.2, 0.0, 0.0), DiagonalMap::new(0.3, 0.2, 0.5, 0.5)]).unwrap();
        assert_eq!(project(&sys, Axis::X).len(), 2);
    }

    #[test]
    fn gamma_syntax_round_trips() {
        let g: EventuallyPeriodicWord = "2,1:(0,3)".parse().unwrap();
        assert_eq!(g.preperiod, vec![2, 1]);
        assert_eq!(g.period, vec![0, 3]);
        assert_eq!(g.to_string(), "2,1:(0,3)");
        let g: EventuallyPeriodicWord = ":(0)".parse().unwrap();
        assert!(g.preperiod.is_empty());
        assert!("1:()".parse::<EventuallyPeriodicWord>().is_err());
        assert!("1,(0)".parse::<EventuallyPeriodicWord>().is_err());
        assert!(":(x)".parse::<EventuallyPeriodicWord>().is_err());
    }

    #[test]
    fn coded_point_is_the_fixed_point() {
        let sys = gl3();
        let p = sys.point(&":(1)".parse().unwrap());
        assert!((p.0 - 0.0).abs() < 1e-15 && (p.1 - 2.0 / 3.0).abs() < 1e-15);
        let p = sys.point(&"2:(0)".parse().unwrap());
        assert!((p.0 - 0.5).abs() < 1e-15 && p.1.abs() < 1e-15);
    }

    #[test]
    fn classification_of_equal_ratios_is_omega0() {
        let sys = validate(vec![DiagonalMap::new(1.0 / 3.0, 1.0 / 3.0, 0.0, 0.0), DiagonalMap::new(1.0 / 3.0, 1.0 / 3.0, 2.0 / 3.0, 0.0)])
            .unwrap();
        let c = classify_word(&sys, &"0:(1,0)".parse().unwrap()).unwrap();
        assert_eq!(c.class, OmegaClass::Omega0);
        assert!((c.gamma_limit - 1.0).abs() < 1e-15);
    }

    #[test]
    fn probability_vector_checks_sum() {
        assert!(ProbabilityVector::new(vec![0.5, 0.5]).is_ok());
        assert!(ProbabilityVector::new(vec![0.5, 0.6]).is_err());
        assert!(ProbabilityVector::new(vec![-0.5, 1.5]).is_err());
    }
}
