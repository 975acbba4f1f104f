//! Dimension theory for diagonal self-affine carpets.
//!
//! Closed-form box, Hausdorff, Assouad and lower dimensions of Gatzouras-Lalley and
//! Barański carpets, pointwise Assouad dimensions at coded points, and an exact
//! symbolic covering layer used to check them empirically.

pub mod carpet;
pub mod closed_form;
pub mod config;
pub mod error;
pub mod fiber;
pub mod geometry;
pub mod moran;
pub mod optimize;

pub use carpet::{
    classify_word, column_word, project, validate, Axis, CarpetClass, CarpetSystem, DiagonalMap,
    EventuallyPeriodicWord, OmegaClass, ProbabilityVector,
};
pub use error::{Error, Result};
pub use moran::{nonauto_assouad, solve_moran, theta_window, window_sup, ColumnSequence, RatioMultiset};
