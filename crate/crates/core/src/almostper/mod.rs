//! Averaged orbit metrics, almost-period scans and the finite-scale point
//! classifier.
//!
//! Relative denseness cannot be decided from finitely many shifts, so every
//! verdict is evidence at the recorded budget: the largest gap between
//! almost periods inside the scanned range.

mod averaged;
mod classify;
mod scan;

pub use averaged::{averaged_d, averaged_dn, superlevel_density};
pub use classify::{classify_point, ClassificationReport, ClassifyConfig, Evidence, KindReport};
pub use scan::{almost_period_scan, scan_values, AlmostPeriodScan, BudgetReport, ScanBudget, ScanKind, ScanRow};
