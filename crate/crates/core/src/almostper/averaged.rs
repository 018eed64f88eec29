use crate::error::Result;
use crate::mean::{partial_means, uniform_mean_mn, FolnerSchedule, MeanConfig, MeanEstimate, ShiftRange, Window};
use crate::scalar::Scalar;
use crate::systems::{CylinderMetric, PointGen};

/// Partial means of `s ↦ d(s·x, (t + s)·x)` along the schedule: the finite
/// form of the averaged metric `D(x, t·x)`.
pub fn averaged_d<S: Scalar>(
    x: &PointGen,
    t: i64,
    schedule: &FolnerSchedule,
    metric: &CylinderMetric<S>,
    config: &MeanConfig<S>,
) -> Result<MeanEstimate<S, S>> {
    let (lo, hi) = schedule.hull();
    let track = metric.mismatch_track(x, t, lo, hi);
    partial_means(&track, schedule, schedule.len(), config)
}

/// `D_n(x, t·x)`: the uniform mean of the mismatch track over the shifted
/// copies `window + s`, `s ∈ shifts`.
pub fn averaged_dn<S: Scalar>(
    x: &PointGen,
    t: i64,
    window: Window,
    shifts: ShiftRange,
    metric: &CylinderMetric<S>,
) -> Result<S> {
    if shifts.is_empty() {
        return Err(crate::Error::EmptyShiftRange);
    }
    let lo = window.start + shifts.lo;
    let hi = window.end() + shifts.hi;
    let track = metric.mismatch_track(x, t, lo, hi);
    uniform_mean_mn(&track, window, shifts).map(|(v, _)| v)
}

/// Density of the superlevel set `{s : d(s·x, (t + s)·x) ≥ δ}` along the
/// schedule.
pub fn superlevel_density<S: Scalar>(
    x: &PointGen,
    t: i64,
    delta: S,
    schedule: &FolnerSchedule,
    metric: &CylinderMetric<S>,
    config: &MeanConfig<S>,
) -> Result<MeanEstimate<S, S>> {
    if delta <= S::zero() {
        return Err(crate::Error::InvalidParameter {
            field: "delta",
            reason: "must be positive".into(),
        });
    }
    let (lo, hi) = schedule.hull();
    let track = metric
        .mismatch_track(x, t, lo, hi)
        .map(|d| if *d >= delta { S::one() } else { S::zero() });
    partial_means(&track, schedule, schedule.len(), config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    type Q = Ratio<i64>;

    fn q(n: i64, d: i64) -> Q {
        Q::new(n, d)
    }

    #[test]
    fn d_vanishes_at_zero_and_periods() {
        let s = FolnerSchedule::intervals(10, 20).unwrap();
        let m = CylinderMetric::<Q>::new(8);
        let cfg = MeanConfig::default();
        let x = PointGen::periodic("AB").unwrap();
        for (t, expect) in [(0, q(0, 1)), (2, q(0, 1)), (1, q(1, 1)), (-3, q(1, 1))] {
            let est = averaged_d(&x, t, &s, &m, &cfg).unwrap();
            assert!(est.partials.iter().all(|(_, a)| *a == expect), "t={t}");
        }
        let b = PointGen::bernoulli(0.5, 7).unwrap();
        let est = averaged_d(&b, 0, &s, &m, &cfg).unwrap();
        assert_eq!(est.tail_max(5), q(0, 1));
    }

    #[test]
    fn dn_cases() {
        let m = CylinderMetric::<Q>::new(8);
        let x = PointGen::periodic("AB").unwrap();
        assert_eq!(
            averaged_dn(&x, 1, Window::new(0, 10), ShiftRange::symmetric(50), &m).unwrap(),
            q(1, 1)
        );
        assert_eq!(
            averaged_dn(&x, 0, Window::new(0, 10), ShiftRange::symmetric(50), &m).unwrap(),
            q(0, 1)
        );

        // the window of ten sites straddling the single mismatch at -1
        let y = PointGen::step();
        let v = averaged_dn(&y, 1, Window::new(0, 10), ShiftRange::symmetric(10_000), &m).unwrap();
        let covered = q(1, 1) + q(2, 1) * (q(1, 2) + q(1, 4) + q(1, 8) + q(1, 16)) + q(1, 32);
        assert_eq!(v, covered / m.normalizer().clone() / q(10, 1));
    }

    #[test]
    fn dn_grows_with_the_shift_budget() {
        let m = CylinderMetric::<f64>::new(8);
        let y = PointGen::fibonacci();
        let w = Window::new(0, 20);
        let mut prev = 0.0;
        for r in [0, 5, 50, 500] {
            let v = averaged_dn(&y, 3, w, ShiftRange::symmetric(r), &m).unwrap();
            assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn superlevel_density_cases() {
        let s = FolnerSchedule::intervals(10, 20).unwrap();
        let m = CylinderMetric::<Q>::new(8);
        let cfg = MeanConfig::default();
        let x = PointGen::periodic("AB").unwrap();
        let est = superlevel_density(&x, 1, q(1, 2), &s, &m, &cfg).unwrap();
        assert_eq!(*est.last(), q(1, 1));
        let est = superlevel_density(&x, 0, q(1, 100), &s, &m, &cfg).unwrap();
        assert_eq!(*est.last(), q(0, 1));
        assert!(superlevel_density(&x, 0, q(0, 1), &s, &m, &cfg).is_err());
    }
}
