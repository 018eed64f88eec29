use serde::Serialize;

use crate::error::Result;
use crate::mean::estimate::{uniform_mean_mn, upper_mean, MeanConfig};
use crate::mean::schedule::{FolnerSchedule, ShiftRange};
use crate::mean::track::Track;
use crate::scalar::{Scalar, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SeminormKind {
    Sup,
    /// Upper mean of `|h|`.
    MeanBar,
    /// Limsup over levels of the uniform mean of `|h|`.
    WeylBar,
}

/// A shift-invariant, monotone, unit-normalized seminorm on bounded tracks.
#[derive(Debug, Clone, PartialEq)]
pub struct AdmissibleSeminorm<S> {
    pub kind: SeminormKind,
    pub schedule: FolnerSchedule,
    /// Shifts `|s| ≤ budget` scanned by `WeylBar`; defaults to
    /// `4·|B_{n_max}|`.
    pub shift_budget: Option<u64>,
    pub config: MeanConfig<S>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeminormValue<S> {
    pub value: S,
    /// Shift budget actually scanned (`WeylBar` only).
    pub shift_budget: Option<u64>,
}

impl<S: Scalar> AdmissibleSeminorm<S> {
    pub fn new(kind: SeminormKind, schedule: FolnerSchedule) -> Self {
        AdmissibleSeminorm {
            kind,
            schedule,
            shift_budget: None,
            config: MeanConfig::default(),
        }
    }

    pub fn with_shift_budget(mut self, budget: u64) -> Self {
        self.shift_budget = Some(budget);
        self
    }

    pub fn effective_budget(&self) -> u64 {
        self.shift_budget
            .unwrap_or_else(|| 4 * self.schedule.largest().len)
    }

    /// Evaluate on the sampled track.
    pub fn eval<V: Value<S>>(&self, samples: &Track<V>) -> Result<SeminormValue<S>> {
        seminorm_eval(self, samples)
    }
}

pub fn seminorm_eval<S: Scalar, V: Value<S>>(
    norm: &AdmissibleSeminorm<S>,
    samples: &Track<V>,
) -> Result<SeminormValue<S>> {
    match norm.kind {
        SeminormKind::Sup => Ok(SeminormValue {
            value: samples
                .values()
                .iter()
                .map(|v| v.modulus())
                .fold(S::zero(), S::max_of),
            shift_budget: None,
        }),
        SeminormKind::MeanBar => Ok(SeminormValue {
            value: upper_mean(samples, &norm.schedule, norm.schedule.len(), &norm.config)?,
            shift_budget: None,
        }),
        SeminormKind::WeylBar => {
            let budget = norm.effective_budget();
            let modulus = samples.map(|v| v.modulus());
            let n_max = norm.schedule.len();
            let k = norm.config.tail.max(1).min(n_max);
            let mut value = S::zero();
            for n in n_max - k + 1..=n_max {
                let w = norm.schedule.window(n).unwrap();
                let (level, _) = uniform_mean_mn(&modulus, w, ShiftRange::symmetric(budget))?;
                value = S::max_of(value, level);
            }
            Ok(SeminormValue {
                value,
                shift_budget: Some(budget),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sup_picks_largest_modulus() {
        let values = vec![0.1, -0.7, 0.3, 0.65, -0.2];
        let track = Track::new(0, values);
        let s = FolnerSchedule::intervals(1, 2).unwrap();
        let n = AdmissibleSeminorm::<f64>::new(SeminormKind::Sup, s);
        assert_eq!(n.eval(&track).unwrap().value, 0.7);
    }

    #[test]
    fn mean_bar_on_parity_indicator() {
        let s = FolnerSchedule::intervals(10, 50).unwrap();
        let track = Track::from_fn(0, 500, |t| if t % 2 != 0 { 1.0_f64 } else { 0.0 });
        let n = AdmissibleSeminorm::new(SeminormKind::MeanBar, s);
        assert!((n.eval(&track).unwrap().value - 0.5).abs() < 1e-12);
    }

    #[test]
    fn weyl_bar_sees_the_right_tail() {
        let sym = FolnerSchedule::symmetric(10, 20).unwrap();
        let budget = 4 * sym.largest().len;
        let r = budget as i64 + sym.largest().len as i64 + 10;
        let step = Track::from_fn(-r, r, |t| if t >= 0 { 1.0_f64 } else { 0.0 });

        let weyl = AdmissibleSeminorm::new(SeminormKind::WeylBar, sym.clone());
        let v = weyl.eval(&step).unwrap();
        assert_eq!(v.value, 1.0);
        assert_eq!(v.shift_budget, Some(budget));

        let mean = AdmissibleSeminorm::new(SeminormKind::MeanBar, sym.clone());
        let m = mean.eval(&step).unwrap().value;
        assert!((m - 0.5).abs() <= 1.0 / sym.largest().len as f64);
    }
}
