//! SVG and CSV output.

use std::fmt::Write;

use crate::carpet::CarpetSystem;
use crate::error::{Error, Result};
use crate::geometry::rect::Rect;

/// Largest number of rectangles `render_svg` will emit.
pub const MAX_RECTS: usize = 1 << 20;

/// Rectangles of all cylinders of length `depth`, in lexicographic word order.
pub fn cylinder_rects(system: &CarpetSystem, depth: usize) -> Result<Vec<Rect>> {
    let total = (system.len() as f64).powi(depth as i32);
    if total > MAX_RECTS as f64 {
        return Err(Error::RangeError(format!("depth {depth} gives {total} rectangles, limit is {MAX_RECTS}")));
    }
    let mut rects = vec![Rect::UNIT];
    for _ in 0..depth {
        rects = rects.iter().flat_map(|r| system.maps().iter().map(move |m| r.compose(&m.image()))).collect();
    }
    Ok(rects)
}

/// Stroke-only SVG of `rects` in the unit square, y axis pointing up.
pub fn rects_svg(rects: &[Rect]) -> String {
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str("<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"0 0 1 1\" width=\"800\" height=\"800\">\n");
    out.push_str("<g fill=\"none\" stroke=\"black\" stroke-width=\"0.001\">\n");
    for r in rects {
        let _ = writeln!(
            out,
            "<rect x=\"{:.4}\" y=\"{:.4}\" width=\"{:.4}\" height=\"{:.4}\"/>",
            r.x0,
            1.0 - r.y1(),
            r.width,
            r.height
        );
    }
    out.push_str("</g>\n</svg>\n");
    out
}

pub fn render_svg(system: &CarpetSystem, depth: usize) -> Result<String> {
    Ok(rects_svg(&cylinder_rects(system, depth)?))
}

/// `scale,count` table.
pub fn scale_count_csv(table: &[(f64, u64)]) -> String {
    let mut out = String::from("scale,count\n");
    for (scale, count) in table {
        let _ = writeln!(out, "{scale},{count}");
    }
    out
}
