//! Finite point clouds, Hausdorff distances and rescaled approximate squares.

use serde::Serialize;

use crate::carpet::{project, Axis, CarpetClass, CarpetSystem, EventuallyPeriodicWord};
use crate::error::{Error, Result};
use crate::geometry::cover::approximate_square;
use crate::geometry::rect::Rect;

/// A finite set of planar points. Every point of the set it approximates lies
/// within `resolution` of some cloud point; exact finite sets use resolution 0.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointCloud {
    pub points: Vec<(f64, f64)>,
    pub resolution: f64,
}

impl PointCloud {
    pub fn new(points: Vec<(f64, f64)>, resolution: f64) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyInput("point cloud has no points"));
        }
        if !(resolution >= 0.0) {
            return Err(Error::RangeError(format!("resolution {resolution} is negative")));
        }
        Ok(PointCloud { points, resolution })
    }

    /// Points `(x, 0)` on the first axis.
    pub fn on_line(xs: impl IntoIterator<Item = f64>, resolution: f64) -> Result<Self> {
        Self::new(xs.into_iter().map(|x| (x, 0.0)).collect(), resolution)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// First coordinates, for clouds living on a line.
    pub fn xs(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.0).collect()
    }

    /// Cartesian product of the first coordinates of `self` and `other`.
    pub fn product(&self, other: &PointCloud) -> PointCloud {
        let mut points = Vec::with_capacity(self.len() * other.len());
        for &(x, _) in &self.points {
            for &(y, _) in &other.points {
                points.push((x, y));
            }
        }
        PointCloud { points, resolution: self.resolution.hypot(other.resolution) }
    }
}

/// Uniform bucket grid for exact nearest-neighbour queries.
struct Grid<'a> {
    points: &'a [(f64, f64)],
    origin: (f64, f64),
    cell: f64,
    dims: (i64, i64),
    buckets: Vec<Vec<u32>>,
}

impl<'a> Grid<'a> {
    fn new(points: &'a [(f64, f64)]) -> Self {
        let (mut lo, mut hi) = ((f64::INFINITY, f64::INFINITY), (f64::NEG_INFINITY, f64::NEG_INFINITY));
        for &(x, y) in points {
            lo = (lo.0.min(x), lo.1.min(y));
            hi = (hi.0.max(x), hi.1.max(y));
        }
        let span = (hi.0 - lo.0).max(hi.1 - lo.1);
        let extent = ((hi.0 - lo.0).max(span * 1e-3)) * ((hi.1 - lo.1).max(span * 1e-3));
        let mut cell = (extent / points.len() as f64).sqrt();
        if !(cell > 0.0) {
            cell = 1.0;
        }
        let nx = ((hi.0 - lo.0) / cell).floor() as i64 + 1;
        let ny = ((hi.1 - lo.1) / cell).floor() as i64 + 1;
        let mut buckets = vec![Vec::new(); (nx * ny) as usize];
        let mut grid = Grid { points, origin: lo, cell, dims: (nx, ny), buckets: Vec::new() };
        for (i, &p) in points.iter().enumerate() {
            let (cx, cy) = grid.cell_of(p);
            let idx = grid.index(cx.clamp(0, nx - 1), cy.clamp(0, ny - 1));
            buckets[idx].push(i as u32);
        }
        grid.buckets = buckets;
        grid
    }

    fn cell_of(&self, p: (f64, f64)) -> (i64, i64) {
        (((p.0 - self.origin.0) / self.cell).floor() as i64, ((p.1 - self.origin.1) / self.cell).floor() as i64)
    }

    fn index(&self, cx: i64, cy: i64) -> usize {
        (cy * self.dims.0 + cx) as usize
    }

    fn scan(&self, cx: i64, cy: i64, p: (f64, f64), best: &mut f64) {
        if cx < 0 || cy < 0 || cx >= self.dims.0 || cy >= self.dims.1 {
            return;
        }
        for &i in &self.buckets[self.index(cx, cy)] {
            let q = self.points[i as usize];
            let d = (q.0 - p.0).hypot(q.1 - p.1);
            if d < *best {
                *best = d;
            }
        }
    }

    /// Distance from `p` to the nearest stored point.
    fn nearest(&self, p: (f64, f64)) -> f64 {
        let (cx, cy) = self.cell_of(p);
        // rings that can still hold stored points
        let reach = [cx, self.dims.0 - 1 - cx, cy, self.dims.1 - 1 - cy].iter().map(|v| v.abs()).max().unwrap_or(0)
            + self.dims.0.max(self.dims.1);
        let mut best = f64::INFINITY;
        for r in 0..=reach {
            if r == 0 {
                self.scan(cx, cy, p, &mut best);
            } else {
                for dx in -r..=r {
                    self.scan(cx + dx, cy - r, p, &mut best);
                    self.scan(cx + dx, cy + r, p, &mut best);
                }
                for dy in (-r + 1)..r {
                    self.scan(cx - r, cy + dy, p, &mut best);
                    self.scan(cx + r, cy + dy, p, &mut best);
                }
            }
            // anything in ring r + 1 is at least r cells away
            if best <= r as f64 * self.cell {
                break;
            }
        }
        best
    }
}

/// `sup_{a in A} min_{b in B} |a - b|`.
pub fn directed_hausdorff(a: &PointCloud, b: &PointCloud) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyInput("point cloud has no points"));
    }
    let grid = Grid::new(&b.points);
    Ok(a.points.iter().map(|&p| grid.nearest(p)).fold(0.0, f64::max))
}

pub fn hausdorff_distance(a: &PointCloud, b: &PointCloud) -> Result<f64> {
    Ok(directed_hausdorff(a, b)?.max(directed_hausdorff(b, a)?))
}

fn require_gl(system: &CarpetSystem) -> Result<()> {
    if system.class() != CarpetClass::GatzourasLalley {
        return Err(Error::WrongClass { expected: "GatzourasLalley", found: system.class().to_string() });
    }
    Ok(())
}

fn check_resolution(resolution: f64) -> Result<()> {
    if !(resolution > 0.0 && resolution < 1.0) {
        return Err(Error::RangeError(format!("resolution {resolution} must lie in (0,1)")));
    }
    Ok(())
}

/// The carpet inside `Q_k(gamma)`, rescaled so the approximate square becomes the
/// unit square. Cylinders meeting the square are refined until both rescaled sides
/// are at most `resolution`; their rescaled centers inside the unit square are kept.
pub fn tangent_cloud(system: &CarpetSystem, gamma: &EventuallyPeriodicWord, k: usize, resolution: f64) -> Result<PointCloud> {
    require_gl(system)?;
    check_resolution(resolution)?;
    let q = approximate_square(system, gamma, k)?.rect;
    let images: Vec<Rect> = system.maps().iter().map(|m| m.image()).collect();
    let mut points = Vec::new();
    let mut stack = vec![Rect::UNIT];
    while let Some(rect) = stack.pop() {
        for img in &images {
            let child = rect.compose(img);
            if !child.meets(&q) {
                continue;
            }
            if child.width <= resolution * q.width && child.height <= resolution * q.height {
                let (cx, cy) = child.center();
                let p = ((cx - q.x0) / q.width, (cy - q.y0) / q.height);
                if (0.0..=1.0).contains(&p.0) && (0.0..=1.0).contains(&p.1) {
                    points.push(p);
                }
            } else {
                stack.push(child);
            }
        }
    }
    PointCloud::new(points, resolution)
}

/// Centers of a 1-D cover by intervals of length at most `resolution`, refining
/// with the `(ratio, offset)` lists returned by `step(depth)`.
fn interval_cloud(resolution: f64, step: impl Fn(usize) -> Vec<(f64, f64)>) -> Result<PointCloud> {
    let mut xs = Vec::new();
    let mut stack = vec![(0.0f64, 1.0f64, 0usize)];
    while let Some((x0, len, depth)) = stack.pop() {
        if len <= resolution {
            xs.push(x0 + 0.5 * len);
            continue;
        }
        for (r, d) in step(depth) {
            stack.push((x0 + len * d, len * r, depth + 1));
        }
    }
    xs.sort_by(f64::total_cmp);
    PointCloud::on_line(xs, resolution)
}

/// Projection of the carpet to the first axis.
pub fn projection_cloud(system: &CarpetSystem, resolution: f64) -> Result<PointCloud> {
    require_gl(system)?;
    check_resolution(resolution)?;
    let classes: Vec<(f64, f64)> = project(system, Axis::X).iter().map(|c| (c.ratio, c.offset)).collect();
    interval_cloud(resolution, |_| classes.clone())
}

/// The symbolic slice following the columns of `gamma` from position `k` on.
pub fn slice_cloud(system: &CarpetSystem, gamma: &EventuallyPeriodicWord, k: usize, resolution: f64) -> Result<PointCloud> {
    require_gl(system)?;
    check_resolution(resolution)?;
    gamma.validate_for(system)?;
    let columns = system.partition(Axis::X);
    interval_cloud(resolution, |depth| {
        let column = &columns[system.class_id(gamma.letter(k + depth), Axis::X)];
        column.iter().map(|&i| (system.ratio(i, Axis::Y), system.maps()[i].offset(Axis::Y))).collect()
    })
}

/// Projection cloud times slice cloud: the product set the tangent cloud at `k`
/// should be close to.
pub fn product_cloud(system: &CarpetSystem, gamma: &EventuallyPeriodicWord, k: usize, resolution: f64) -> Result<PointCloud> {
    Ok(projection_cloud(system, resolution)?.product(&slice_cloud(system, gamma, k, resolution)?))
}
