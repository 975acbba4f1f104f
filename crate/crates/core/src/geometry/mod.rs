//! Symbolic covers and finite geometric approximations of carpets.

mod cloud;
mod cover;
mod estimate;
mod fixtures;
mod packing;
mod rect;
mod render;

pub use cloud::{
    directed_hausdorff, hausdorff_distance, product_cloud, projection_cloud, slice_cloud, tangent_cloud, PointCloud,
};
pub use cover::{
    approximate_square, approximate_squares_at_scale, bar_pseudo_count, box_count_ball, box_count_ball_at,
    count_squares, cylinders_to_scale, pseudo_cylinder_count, psi_estimate, square_depth, ApproxSquare, Cylinder,
    PsiEstimate, PsiSample, Valuation,
};
pub use estimate::{box_dim_estimate, default_scales, least_squares, log_log_slope, BoxDimEstimate, LinearFit};
pub use fixtures::{
    block_length, covering_number, decay_block, decay_scale, decay_window, fixture_fast_decay, fixture_progressions,
    DecayWindow,
};
pub use packing::{
    calibrate_packing_constant, packing_check, packing_ratio, random_cylinder_packing, CodedBall,
};
pub use rect::Rect;
pub use render::{cylinder_rects, rects_svg, render_svg, scale_count_csv, MAX_RECTS};
