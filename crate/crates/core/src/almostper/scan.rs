use rayon::prelude::*;
use serde::Serialize;

use crate::almostper::averaged::{averaged_d, averaged_dn};
use crate::error::{Error, Result};
use crate::mean::{FolnerSchedule, MeanConfig, ShiftRange, Verdict, Window};
use crate::scalar::Scalar;
use crate::systems::{CylinderMetric, PointGen, DEFAULT_TRUNCATION};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanKind {
    /// Trailing maximum of the partial means of `D(x, t·x)`.
    Mean,
    /// `D_n(x, t·x)` at the budget's window and shift range.
    Weyl,
    /// Finite-horizon lower bound of `sup_s d(s·x, (t + s)·x)`.
    Bohr,
}

impl ScanKind {
    pub const ALL: [ScanKind; 3] = [ScanKind::Mean, ScanKind::Weyl, ScanKind::Bohr];
}

/// Evaluation budgets shared by the three scan kinds.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanBudget<S> {
    pub schedule: FolnerSchedule,
    pub mean_config: MeanConfig<S>,
    /// Window `B_n` used by the Weyl test.
    pub weyl_window: Window,
    pub weyl_shifts: ShiftRange,
    pub bohr_horizon: u64,
    pub truncation: usize,
    /// Largest coordinate modulus the scan may evaluate.
    pub eval_limit: u64,
}

impl<S: Scalar> ScanBudget<S> {
    pub fn new(schedule: FolnerSchedule) -> Self {
        let largest = schedule.largest();
        let weyl_window = Window::new(0, (largest.len / 10).max(1));
        ScanBudget {
            schedule,
            mean_config: MeanConfig::default(),
            weyl_window,
            weyl_shifts: ShiftRange::symmetric(largest.len),
            bohr_horizon: largest.len,
            truncation: DEFAULT_TRUNCATION,
            eval_limit: 1 << 40,
        }
    }

    pub fn report(&self, kind: ScanKind) -> BudgetReport {
        BudgetReport {
            schedule: self.schedule.fingerprint(),
            tail: self.mean_config.tail,
            weyl_window: self.weyl_window,
            weyl_shifts: self.weyl_shifts,
            bohr_horizon: self.bohr_horizon,
            truncation: self.truncation,
            kind,
        }
    }

    fn required_extent(&self, kind: ScanKind, range: u64) -> u64 {
        let k = self.truncation as u64;
        let r = range;
        match kind {
            ScanKind::Mean => {
                let (lo, hi) = self.schedule.hull();
                lo.unsigned_abs().max(hi.unsigned_abs()) + r + k
            }
            ScanKind::Weyl => {
                let a = (self.weyl_window.start + self.weyl_shifts.lo).unsigned_abs();
                let b = (self.weyl_window.end() + self.weyl_shifts.hi).unsigned_abs();
                a.max(b) + r + k
            }
            ScanKind::Bohr => self.bohr_horizon + r + k,
        }
    }
}

/// Budget fingerprint embedded in every scan.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BudgetReport {
    pub kind: ScanKind,
    pub schedule: String,
    pub tail: usize,
    pub weyl_window: Window,
    pub weyl_shifts: ShiftRange,
    pub bohr_horizon: u64,
    pub truncation: usize,
}

impl BudgetReport {
    pub fn fingerprint(&self) -> String {
        match self.kind {
            ScanKind::Mean => format!("mean;{};tail={};K={}", self.schedule, self.tail, self.truncation),
            ScanKind::Weyl => format!(
                "weyl;window=[{},{});shifts=[{},{}];K={}",
                self.weyl_window.start,
                self.weyl_window.end(),
                self.weyl_shifts.lo,
                self.weyl_shifts.hi,
                self.truncation
            ),
            ScanKind::Bohr => format!("bohr;horizon={};K={}", self.bohr_horizon, self.truncation),
        }
    }
}

/// One scanned shift.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow<S> {
    pub t: i64,
    pub value: S,
    /// Verdict of the underlying mean (`Mean` scans only).
    pub converged: Option<bool>,
}

/// The `ε`-almost periods of a point found in `[-T, T]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlmostPeriodScan<S> {
    pub epsilon: S,
    pub kind: ScanKind,
    pub scan_range: (i64, i64),
    pub periods: Vec<i64>,
    /// Largest gap between consecutive periods, range endpoints included.
    pub max_gap: u64,
    pub rows: Vec<ScanRow<S>>,
    pub budget: BudgetReport,
}

impl<S: Scalar> AlmostPeriodScan<S> {
    pub fn only_trivial(&self) -> bool {
        self.periods == [0]
    }

    /// Fraction of scanned `t ≠ 0` whose mean converged.
    pub fn converged_fraction(&self) -> Option<f64> {
        let flags: Vec<bool> = self
            .rows
            .iter()
            .filter(|r| r.t != 0)
            .filter_map(|r| r.converged)
            .collect();
        if flags.is_empty() {
            None
        } else {
            Some(flags.iter().filter(|&&c| c).count() as f64 / flags.len() as f64)
        }
    }

    /// Re-threshold the stored values at another `ε`.
    pub fn rethreshold(&self, epsilon: S) -> Self {
        let periods = periods_below(&self.rows, &epsilon);
        let max_gap = max_gap(&periods, self.scan_range);
        AlmostPeriodScan {
            epsilon,
            periods,
            max_gap,
            ..self.clone()
        }
    }
}

fn periods_below<S: Scalar>(rows: &[ScanRow<S>], epsilon: &S) -> Vec<i64> {
    rows.iter()
        .filter(|r| r.t == 0 || r.value < *epsilon)
        .map(|r| r.t)
        .collect()
}

pub(crate) fn max_gap(periods: &[i64], range: (i64, i64)) -> u64 {
    let mut prev = range.0;
    let mut gap = 0u64;
    for &p in periods.iter().chain(std::iter::once(&range.1)) {
        gap = gap.max((p - prev).unsigned_abs());
        prev = p;
    }
    gap
}

/// Per-`t` values of one scan kind on `[-T, T]`, without thresholding.
pub fn scan_values<S: Scalar>(
    x: &PointGen,
    kind: ScanKind,
    range: u64,
    budget: &ScanBudget<S>,
) -> Result<Vec<ScanRow<S>>> {
    let need = budget.required_extent(kind, range);
    if need > budget.eval_limit {
        return Err(Error::BudgetTooSmall(format!(
            "{kind:?} scan needs coordinates up to {need}, limit is {}",
            budget.eval_limit
        )));
    }
    let metric = CylinderMetric::<S>::new(budget.truncation);
    let r = range as i64;
    (-r..=r)
        .into_par_iter()
        .map(|t| -> Result<ScanRow<S>> {
            match kind {
                ScanKind::Mean => {
                    let est = averaged_d(x, t, &budget.schedule, &metric, &budget.mean_config)?;
                    Ok(ScanRow {
                        t,
                        value: est.tail_max(budget.mean_config.tail),
                        converged: Some(matches!(est.verdict, Verdict::Converged { .. })),
                    })
                }
                ScanKind::Weyl => Ok(ScanRow {
                    t,
                    value: averaged_dn(x, t, budget.weyl_window, budget.weyl_shifts, &metric)?,
                    converged: None,
                }),
                ScanKind::Bohr => Ok(ScanRow {
                    t,
                    value: metric.sup_metric_lb(x, &x.shift(t), budget.bohr_horizon),
                    converged: None,
                }),
            }
        })
        .collect()
}

/// Every `t ∈ [-T, T]` passing the kind's `ε`-test at the recorded budget.
pub fn almost_period_scan<S: Scalar>(
    x: &PointGen,
    epsilon: S,
    kind: ScanKind,
    range: u64,
    budget: &ScanBudget<S>,
) -> Result<AlmostPeriodScan<S>> {
    if epsilon <= S::zero() {
        return Err(Error::invalid("epsilon", "must be positive"));
    }
    let rows = scan_values(x, kind, range, budget)?;
    let scan_range = (-(range as i64), range as i64);
    let periods = periods_below(&rows, &epsilon);
    let max_gap = max_gap(&periods, scan_range);
    Ok(AlmostPeriodScan {
        epsilon,
        kind,
        scan_range,
        periods,
        max_gap,
        rows,
        budget: budget.report(kind),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gap_includes_range_endpoints() {
        assert_eq!(max_gap(&[0], (-500, 500)), 500);
        assert_eq!(max_gap(&[-4, -2, 0, 2, 4], (-4, 4)), 2);
        assert_eq!(max_gap(&[-3, 0, 3], (-5, 5)), 3);
    }

    #[test]
    fn periodic_point_has_its_periods() {
        let x = PointGen::periodic("ABC").unwrap();
        let budget = ScanBudget::<f64>::new(FolnerSchedule::intervals(10, 10).unwrap());
        for kind in ScanKind::ALL {
            let scan = almost_period_scan(&x, 0.05, kind, 30, &budget).unwrap();
            assert_eq!(scan.periods, (-10..=10).map(|k| 3 * k).collect::<Vec<_>>(), "{kind:?}");
            assert_eq!(scan.max_gap, 3);
        }
    }

    #[test]
    fn bernoulli_has_only_the_trivial_period() {
        let x = PointGen::bernoulli(0.5, 42).unwrap();
        let budget = ScanBudget::<f64>::new(FolnerSchedule::intervals(10, 400).unwrap());
        let scan = almost_period_scan(&x, 0.2, ScanKind::Mean, 40, &budget).unwrap();
        assert_eq!(scan.periods, vec![0]);
        assert_eq!(scan.max_gap, 40);
        for row in scan.rows.iter().filter(|r| r.t != 0) {
            assert!((row.value - 0.5).abs() < 0.05, "t={} D={}", row.t, row.value);
        }
    }

    #[test]
    fn budget_limit_is_enforced() {
        let x = PointGen::fibonacci();
        let mut budget = ScanBudget::<f64>::new(FolnerSchedule::intervals(100, 10).unwrap());
        budget.eval_limit = 500;
        assert!(matches!(
            almost_period_scan(&x, 0.1, ScanKind::Mean, 500, &budget),
            Err(Error::BudgetTooSmall(_))
        ));
    }

    #[test]
    fn rethreshold_matches_fresh_scan() {
        let x = PointGen::fibonacci();
        let budget = ScanBudget::<f64>::new(FolnerSchedule::intervals(50, 20).unwrap());
        let a = almost_period_scan(&x, 0.2, ScanKind::Mean, 60, &budget).unwrap();
        let b = almost_period_scan(&x, 0.05, ScanKind::Mean, 60, &budget).unwrap();
        assert_eq!(a.rethreshold(0.05), b);
    }
}
