//! Følner schedules, characters, window averages and admissible seminorms.
//!
//! All integrals over a window are plain sums over its integer points.

mod estimate;
mod schedule;
mod seminorm;
mod track;

use num_complex::Complex;
use serde::Serialize;

use crate::scalar::{character_conj, reduce_unit, Real};

pub use estimate::{
    partial_means, stabilization_check, uniform_mean_mn, upper_mean, MeanConfig, MeanEstimate,
    StabilizationReport, Verdict,
};
pub use schedule::{FolnerSchedule, ScheduleKind, ShiftRange, Window};
pub use seminorm::{seminorm_eval, AdmissibleSeminorm, SeminormKind, SeminormValue};
pub use track::Track;

/// Character `t ↦ exp(2πi·theta·t)` of the integers, `theta ∈ [0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Character<T> {
    theta: T,
}

impl<T: Real> Character<T> {
    pub fn new(theta: T) -> Self {
        Character {
            theta: reduce_unit(theta),
        }
    }

    pub fn theta(&self) -> T {
        self.theta
    }

    pub fn at(&self, t: i64) -> Complex<T> {
        character_conj(self.theta, t).conj()
    }

    pub fn conj_at(&self, t: i64) -> Complex<T> {
        character_conj(self.theta, t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn character_reduces_mod_one() {
        let c = Character::new(1.25_f64);
        assert_eq!(c.theta(), 0.25);
        assert!((c.at(1) - Complex::new(0.0, 1.0)).norm() < 1e-15);
        assert!((c.at(3) * c.conj_at(3) - Complex::new(1.0, 0.0)).norm() < 1e-15);
    }
}
