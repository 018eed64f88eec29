//! Point generators for subshifts, cylinder observables and the metrics on
//! configuration space.
//!
//! Shifts act by `(t·x)(k) = x(k + t)` throughout, so `f_x(t) = f(t·x)`
//! reads the window around coordinate `t`.

mod metric;
mod observable;
mod point;
mod substitution;

pub use metric::{metric_d, sup_metric_lb, CylinderMetric};
pub use observable::{observable_track, Observable};
pub use point::{PointGen, PointKind, PointSpec};
pub use substitution::SubstitutionPoint;

/// Index into a point's alphabet.
pub type Letter = u8;

/// Default truncation `K` of the cylinder metric.
pub const DEFAULT_TRUNCATION: usize = 16;
