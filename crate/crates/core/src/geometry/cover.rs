//! Symbolic covers: cylinder sections, approximate squares and the counts built
//! from them. Everything here is exact enumeration over words, no rasterizing.

use serde::Serialize;

use crate::carpet::{Axis, CarpetClass, CarpetSystem, EventuallyPeriodicWord};
use crate::error::{Error, Result};
use crate::geometry::Rect;

/// Relative slack for threshold comparisons between products of ratios.
const REL_TOL: f64 = 1e-12;

fn at_most(a: f64, b: f64) -> bool {
    a <= b * (1.0 + REL_TOL)
}

fn at_least(a: f64, b: f64) -> bool {
    a >= b * (1.0 - REL_TOL)
}

fn check_scale(r: f64) -> Result<()> {
    if r > 0.0 && r < 1.0 {
        Ok(())
    } else {
        Err(Error::RangeError(format!("scale {r} is not in (0,1)")))
    }
}

fn require_aligned(system: &CarpetSystem) -> Result<()> {
    if system.class() == CarpetClass::DiagonalOnly {
        Err(Error::WrongClass { expected: "GatzourasLalley or Baranski", found: system.class().to_string() })
    } else {
        Ok(())
    }
}

fn side(rect: &Rect, axis: Axis) -> f64 {
    match axis {
        Axis::X => rect.width,
        Axis::Y => rect.height,
    }
}

/// Shrink `rect` along `axis` by the projected similarity `(ratio, offset)`.
fn narrow(rect: &Rect, axis: Axis, ratio: f64, offset: f64) -> Rect {
    match axis {
        Axis::X => Rect { x0: rect.x0 + rect.width * offset, width: rect.width * ratio, ..*rect },
        Axis::Y => Rect { y0: rect.y0 + rect.height * offset, height: rect.height * ratio, ..*rect },
    }
}

/// How the size of a cylinder is measured when cutting a section.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Valuation {
    /// Contraction along one axis.
    Axis(Axis),
    /// The shorter side of the rectangle.
    MinSide,
}

impl Valuation {
    fn of(self, rect: &Rect) -> f64 {
        match self {
            Valuation::Axis(a) => side(rect, a),
            Valuation::MinSide => rect.width.min(rect.height),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cylinder {
    pub word: Vec<usize>,
    pub rect: Rect,
}

/// The section of words `w` with `v(w) <= r < v(parent of w)`.
pub fn cylinders_to_scale(system: &CarpetSystem, r: f64, valuation: Valuation) -> Result<Vec<Cylinder>> {
    check_scale(r)?;
    let mut out = Vec::new();
    let mut word = Vec::new();
    section_dfs(system, r, valuation, &mut word, Rect::UNIT, &mut out);
    Ok(out)
}

fn section_dfs(system: &CarpetSystem, r: f64, v: Valuation, word: &mut Vec<usize>, rect: Rect, out: &mut Vec<Cylinder>) {
    for (l, m) in system.maps().iter().enumerate() {
        let child = rect.compose(&m.image());
        word.push(l);
        if at_most(v.of(&child), r) {
            out.push(Cylinder { word: word.clone(), rect: child });
        } else {
            section_dfs(system, r, v, word, child, out);
        }
        word.pop();
    }
}

/// An approximate square `P_j(i, u)`: the cylinders extending `base` whose next
/// letters project to the class word `extension` on `axis`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApproxSquare {
    pub base: Vec<usize>,
    /// Axis along which the base rectangle is longer and gets subdivided.
    pub axis: Axis,
    pub extension: Vec<usize>,
    pub rect: Rect,
    /// Short side of the base rectangle; the scale of the square.
    pub rho: f64,
}

impl ApproxSquare {
    pub fn width(&self) -> f64 {
        self.rect.width
    }

    pub fn height(&self) -> f64 {
        self.rect.height
    }

    /// Long side over short side.
    pub fn aspect(&self) -> f64 {
        side(&self.rect, self.axis) / self.rho
    }
}

/// Approximate square `Q_k(gamma)`: extend `gamma|k` along its long axis for as
/// long as the long side stays at least the short side of `gamma|k`.
pub fn approximate_square(system: &CarpetSystem, gamma: &EventuallyPeriodicWord, k: usize) -> Result<ApproxSquare> {
    require_aligned(system)?;
    gamma.validate_for(system)?;
    if k == 0 {
        return Err(Error::RangeError("k must be at least 1".into()));
    }
    let base = gamma.prefix(k);
    let base_rect = system.word_rect(&base);
    let axis = if base_rect.width >= base_rect.height { Axis::X } else { Axis::Y };
    let rho = side(&base_rect, axis.other());
    let mut rect = base_rect;
    let mut extension = Vec::new();
    let mut n = k;
    loop {
        let l = gamma.letter(n);
        let m = system.maps()[l];
        let next = narrow(&rect, axis, m.ratio(axis), m.offset(axis));
        if !at_least(side(&next, axis), rho) {
            break;
        }
        rect = next;
        extension.push(system.class_id(l, axis));
        n += 1;
    }
    Ok(ApproxSquare { base, axis, extension, rect, rho })
}

/// `L_k(gamma)`, the length of `gamma` consumed by `Q_k(gamma)`.
pub fn square_depth(square: &ApproxSquare) -> usize {
    square.base.len() + square.extension.len()
}

/// Walks the partition of symbolic space into approximate squares at scale `r`.
///
/// Base words are cut by their short side (`min side <= r < min side of parent`).
/// A pseudo-cylinder is subdivided along its long axis when every child keeps the
/// long side at least the short side of the base, so the leaves partition the base
/// cylinder and have aspect ratio in `[1, 1/r_min)`.
struct SquareWalker<'a, K, V> {
    system: &'a CarpetSystem,
    r: f64,
    keep: K,
    visit: V,
    word: Vec<usize>,
    ext: Vec<usize>,
    classes: [Vec<(f64, f64)>; 2],
}

impl<'a, K: Fn(&Rect) -> bool, V: FnMut(&[usize], Axis, &[usize], &Rect)> SquareWalker<'a, K, V> {
    fn new(system: &'a CarpetSystem, r: f64, keep: K, visit: V) -> Self {
        let classes = Axis::BOTH.map(|a| (0..system.class_count(a)).map(|c| class_map(system, c, a)).collect());
        SquareWalker { system, r, keep, visit, word: Vec::new(), ext: Vec::new(), classes }
    }

    fn run(&mut self) {
        self.words(Rect::UNIT);
    }

    fn words(&mut self, rect: Rect) {
        for l in 0..self.system.len() {
            let child = rect.compose(&self.system.maps()[l].image());
            if !(self.keep)(&child) {
                continue;
            }
            self.word.push(l);
            if at_most(child.width.min(child.height), self.r) {
                let axis = if child.width >= child.height { Axis::X } else { Axis::Y };
                let rho = side(&child, axis.other());
                self.extend(child, axis, rho);
            } else {
                self.words(child);
            }
            self.word.pop();
        }
    }

    fn extend(&mut self, rect: Rect, axis: Axis, rho: f64) {
        let long = side(&rect, axis);
        let classes = &self.classes[axis.number() as usize - 1];
        let split = classes.iter().all(|&(ratio, _)| at_least(long * ratio, rho));
        if !split {
            (self.visit)(&self.word, axis, &self.ext, &rect);
            return;
        }
        for c in 0..classes.len() {
            let (ratio, offset) = self.classes[axis.number() as usize - 1][c];
            let child = narrow(&rect, axis, ratio, offset);
            if !(self.keep)(&child) {
                continue;
            }
            self.ext.push(c);
            self.extend(child, axis, rho);
            self.ext.pop();
        }
    }
}

fn class_map(system: &CarpetSystem, c: usize, axis: Axis) -> (f64, f64) {
    let i = (0..system.len()).find(|&i| system.class_id(i, axis) == c).expect("class id in range");
    let m = system.maps()[i];
    (m.ratio(axis), m.offset(axis))
}

/// All approximate squares at scale `r`.
pub fn approximate_squares_at_scale(system: &CarpetSystem, r: f64) -> Result<Vec<ApproxSquare>> {
    require_aligned(system)?;
    check_scale(r)?;
    let mut out = Vec::new();
    SquareWalker::new(
        system,
        r,
        |_: &Rect| true,
        |base: &[usize], axis: Axis, ext: &[usize], rect: &Rect| {
            let rho = side(&system.word_rect(base), axis.other());
            out.push(ApproxSquare { base: base.to_vec(), axis, extension: ext.to_vec(), rect: *rect, rho });
        },
    )
    .run();
    Ok(out)
}

/// Number of approximate squares at scale `r`.
pub fn count_squares(system: &CarpetSystem, r: f64) -> Result<u64> {
    require_aligned(system)?;
    check_scale(r)?;
    let mut n = 0u64;
    SquareWalker::new(system, r, |_: &Rect| true, |_: &[usize], _: Axis, _: &[usize], _: &Rect| n += 1).run();
    Ok(n)
}

/// Number of approximate squares at scale `r` meeting the closed ball of radius `big_r`
/// around `pi(gamma)`.
pub fn box_count_ball(system: &CarpetSystem, gamma: &EventuallyPeriodicWord, big_r: f64, r: f64) -> Result<u64> {
    gamma.validate_for(system)?;
    box_count_ball_at(system, system.point(gamma), big_r, r)
}

pub fn box_count_ball_at(system: &CarpetSystem, center: (f64, f64), big_r: f64, r: f64) -> Result<u64> {
    require_aligned(system)?;
    check_scale(r)?;
    if !(big_r >= r && big_r < 1.0) {
        return Err(Error::RangeError(format!("need r <= R < 1, got r = {r}, R = {big_r}")));
    }
    let mut n = 0u64;
    SquareWalker::new(
        system,
        r,
        |rect: &Rect| rect.meets_ball(center, big_r),
        |_: &[usize], _: Axis, _: &[usize], _: &Rect| n += 1,
    )
    .run();
    Ok(n)
}

/// Leaves of the square partition below the pseudo-cylinder `P_axis(base, ext)`.
fn leaves_below(system: &CarpetSystem, base: &[usize], axis: Axis, ext: &[usize]) -> u64 {
    let base_rect = system.word_rect(base);
    let rho = side(&base_rect, axis.other());
    let classes: Vec<(f64, f64)> = (0..system.class_count(axis)).map(|c| class_map(system, c, axis)).collect();
    let long: f64 = ext.iter().fold(side(&base_rect, axis), |acc, &c| acc * classes[c].0);
    fn go(long: f64, rho: f64, classes: &[(f64, f64)]) -> u64 {
        if classes.iter().all(|&(ratio, _)| at_least(long * ratio, rho)) {
            classes.iter().map(|&(ratio, _)| go(long * ratio, rho, classes)).sum()
        } else {
            1
        }
    }
    go(long, rho, &classes)
}

fn check_class_word(system: &CarpetSystem, ext: &[usize], axis: Axis) -> Result<()> {
    match ext.iter().find(|&&c| c >= system.class_count(axis)) {
        Some(&c) => Err(Error::IndexError { letter: c, len: system.class_count(axis) }),
        None => Ok(()),
    }
}

fn is_wide(system: &CarpetSystem, base: &[usize], axis: Axis, ext: &[usize]) -> bool {
    let long = system.word_ratio(base, axis) * ext.iter().map(|&c| system.class_ratio(c, axis)).product::<f64>();
    at_least(long, system.word_ratio(base, axis.other()))
}

/// Number of approximate squares inside the wide pseudo-cylinder `P(i, u)` of a
/// Gatzouras-Lalley carpet, `u` being a word over column ids.
pub fn pseudo_cylinder_count(system: &CarpetSystem, i: &[usize], uj: &[usize]) -> Result<u64> {
    require_aligned(system)?;
    system.check_word(i)?;
    check_class_word(system, uj, Axis::X)?;
    if !is_wide(system, i, Axis::X, uj) {
        return Err(Error::WrongShape("pseudo-cylinder is tall".into()));
    }
    Ok(leaves_below(system, i, Axis::X, uj))
}

/// Number of approximate squares in `P_j(i, u)` for a Barański carpet, wide or tall.
///
/// A tall pseudo-cylinder splits into the cylinders `[ik]` (with `eta_j(k) = u`)
/// that are wide the other way, each covered by its own squares, and the rest,
/// which group into one square per maximal prefix `l` of `k` whose `j'` side is
/// still at least the `j` side of the pseudo-cylinder.
pub fn bar_pseudo_count(system: &CarpetSystem, i: &[usize], uj: &[usize], axis: Axis) -> Result<u64> {
    require_aligned(system)?;
    system.check_word(i)?;
    check_class_word(system, uj, axis)?;
    if is_wide(system, i, axis, uj) {
        return Ok(leaves_below(system, i, axis, uj));
    }
    let h = system.word_ratio(i, axis) * uj.iter().map(|&c| system.class_ratio(c, axis)).product::<f64>();
    let members = system.partition(axis);
    let mut word = i.to_vec();
    fn go(system: &CarpetSystem, word: &mut Vec<usize>, depth: usize, uj: &[usize], members: &[Vec<usize>], axis: Axis, h: f64) -> u64 {
        let other = axis.other();
        if depth == uj.len() {
            // k in the first family: [ik] is wide in the other direction
            return leaves_below(system, word, other, &[]);
        }
        let side_other = system.word_ratio(word, other);
        let mut total = 0;
        let mut stops_here = false;
        for &l in &members[uj[depth]] {
            if at_least(side_other * system.ratio(l, other), h) {
                word.push(l);
                total += go(system, word, depth + 1, uj, members, axis, h);
                word.pop();
            } else {
                stops_here = true;
            }
        }
        total + u64::from(stops_here)
    }
    Ok(go(system, &mut word, 0, uj, &members, axis, h))
}

/// One sample of the covering-number ratio `N_{r delta}(B(x, R)) `.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PsiSample {
    pub center: String,
    pub k: usize,
    pub radius: f64,
    pub count: u64,
    pub psi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PsiEstimate {
    pub delta: f64,
    pub value: f64,
    pub samples: Vec<PsiSample>,
}

/// Largest `log N / log(1/delta)` over the given centers and depths.
///
/// For a center `gamma` and depth `k` the outer ball has diameter `rho(Q_k(gamma))`
/// and the inner scale is `delta` times that.
pub fn psi_estimate(system: &CarpetSystem, delta: f64, samples: &[(EventuallyPeriodicWord, usize)]) -> Result<PsiEstimate> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::RangeError(format!("delta = {delta} is not in (0,1)")));
    }
    if samples.is_empty() {
        return Err(Error::EmptyInput("psi samples"));
    }
    let mut out = Vec::with_capacity(samples.len());
    for (gamma, k) in samples {
        let q = approximate_square(system, gamma, *k)?;
        let radius = 0.5 * q.rho;
        let count = box_count_ball(system, gamma, radius, q.rho * delta)?;
        let psi = (count as f64).ln() / (1.0 / delta).ln();
        out.push(PsiSample { center: gamma.to_string(), k: *k, radius, count, psi });
    }
    let value = out.iter().map(|s| s.psi).fold(f64::NEG_INFINITY, f64::max);
    Ok(PsiEstimate { delta, value, samples: out })
}
