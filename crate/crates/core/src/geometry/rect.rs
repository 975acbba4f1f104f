use serde::Serialize;

/// Axis-aligned rectangle `[x0, x0 + width] x [y0, y0 + height]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Rect {
    pub x0: f64,
    pub y0: f64,
    pub width: f64,
    pub height: f64,
}

impl Rect {
    pub const UNIT: Rect = Rect { x0: 0.0, y0: 0.0, width: 1.0, height: 1.0 };

    pub fn new(x0: f64, y0: f64, width: f64, height: f64) -> Self {
        debug_assert!(width > 0.0 && height > 0.0);
        Rect { x0, y0, width, height }
    }

    pub fn x1(&self) -> f64 {
        self.x0 + self.width
    }

    pub fn y1(&self) -> f64 {
        self.y0 + self.height
    }

    pub fn center(&self) -> (f64, f64) {
        (self.x0 + 0.5 * self.width, self.y0 + 0.5 * self.height)
    }

    pub fn diameter(&self) -> f64 {
        self.width.hypot(self.height)
    }

    /// Euclidean distance from `p` to the closed rectangle (zero inside).
    pub fn distance_to(&self, p: (f64, f64)) -> f64 {
        let dx = (self.x0 - p.0).max(0.0).max(p.0 - self.x1());
        let dy = (self.y0 - p.1).max(0.0).max(p.1 - self.y1());
        dx.hypot(dy)
    }

    /// Closed rectangle meets the closed disk `B(center, radius)`.
    pub fn meets_ball(&self, center: (f64, f64), radius: f64) -> bool {
        self.distance_to(center) <= radius
    }

    /// Closed rectangles intersect.
    pub fn meets(&self, other: &Rect) -> bool {
        self.x0 <= other.x1() && other.x0 <= self.x1() && self.y0 <= other.y1() && other.y0 <= self.y1()
    }

    /// Image of `inner` (given in unit-square coordinates) under the affine map taking
    /// the unit square onto `self`.
    pub fn compose(&self, inner: &Rect) -> Rect {
        Rect {
            x0: self.x0 + self.width * inner.x0,
            y0: self.y0 + self.height * inner.y0,
            width: self.width * inner.width,
            height: self.height * inner.height,
        }
    }
}
