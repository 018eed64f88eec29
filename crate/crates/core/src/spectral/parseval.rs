use num_complex::Complex;
use serde::Serialize;

use crate::error::Result;
use crate::mean::{partial_means, FolnerSchedule, MeanConfig, MeanEstimate, Track};
use crate::scalar::Real;
use crate::spectral::fourier::modulate;
use crate::systems::{observable_track, Observable, PointGen};

/// Energy, captured mass and their difference at one schedule stage.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParsevalStage<T> {
    pub n: usize,
    pub energy: T,
    pub captured: T,
    pub defect: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParsevalTrajectory<T> {
    pub thetas: Vec<T>,
    pub energy: MeanEstimate<T, T>,
    pub stages: Vec<ParsevalStage<T>>,
}

impl<T: Real> ParsevalTrajectory<T> {
    pub fn last(&self) -> &ParsevalStage<T> {
        self.stages.last().expect("trajectories are nonempty")
    }

    pub fn defects(&self) -> Vec<T> {
        self.stages.iter().map(|s| s.defect).collect()
    }
}

/// `A_n(|f_x|²) − Σ_θ |A_n(f_x ξ̄_θ)|²` for every stage of the schedule.
pub fn parseval_defect<T: Real>(
    f: &Observable<T>,
    x: &PointGen,
    thetas: &[T],
    schedule: &FolnerSchedule,
    config: &MeanConfig<T>,
) -> Result<ParsevalTrajectory<T>> {
    let (lo, hi) = schedule.hull();
    let track = observable_track(f, x, lo, hi - 1)?;
    parseval_defect_track(&track, thetas, schedule, config)
}

pub fn parseval_defect_track<T: Real>(
    track: &Track<Complex<T>>,
    thetas: &[T],
    schedule: &FolnerSchedule,
    config: &MeanConfig<T>,
) -> Result<ParsevalTrajectory<T>> {
    let n_max = schedule.len();
    let energy_track = track.map(|v| v.norm_sqr());
    let energy = partial_means(&energy_track, schedule, n_max, config)?;
    let coefficients: Vec<MeanEstimate<T, Complex<T>>> = thetas
        .iter()
        .map(|&th| partial_means(&modulate(track, th), schedule, n_max, config))
        .collect::<Result<_>>()?;
    let stages = (0..n_max)
        .map(|i| {
            let e = energy.partials[i].1;
            let captured = coefficients
                .iter()
                .fold(T::zero(), |acc, c| acc + c.partials[i].1.norm_sqr());
            ParsevalStage {
                n: i + 1,
                energy: e,
                captured,
                defect: e - captured,
            }
        })
        .collect();
    Ok(ParsevalTrajectory {
        thetas: thetas.to_vec(),
        energy,
        stages,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn periodic_indicator_defect_vanishes() {
        let f = Observable::<f64>::indicator(0, 2).unwrap();
        let x = PointGen::periodic("AB").unwrap();
        let s = FolnerSchedule::intervals(64, 16).unwrap();
        let traj = parseval_defect(&f, &x, &[0.0, 0.5], &s, &MeanConfig::default()).unwrap();
        for st in &traj.stages {
            assert!(st.defect.abs() < 1e-9, "{st:?}");
        }
    }

    #[test]
    fn zero_observable_has_zero_defect() {
        let f = Observable::<f64>::constant(Complex::new(0.0, 0.0), 2).unwrap();
        let s = FolnerSchedule::intervals(10, 8).unwrap();
        let traj = parseval_defect(&f, &PointGen::fibonacci(), &[0.0, 0.3], &s, &MeanConfig::default()).unwrap();
        assert!(traj.stages.iter().all(|st| st.defect == 0.0));
    }

    #[test]
    fn enlarging_the_frequency_set_lowers_the_defect() {
        let f = Observable::<f64>::indicator(1, 2).unwrap();
        let x = PointGen::fibonacci();
        let s = FolnerSchedule::intervals(100, 10).unwrap();
        let alpha = (5f64.sqrt() - 1.0) / 2.0;
        let a = parseval_defect(&f, &x, &[0.0], &s, &MeanConfig::default()).unwrap();
        let b = parseval_defect(&f, &x, &[0.0, alpha, 1.0 - alpha], &s, &MeanConfig::default()).unwrap();
        for (sa, sb) in a.stages.iter().zip(&b.stages) {
            assert!(sb.defect <= sa.defect + 1e-12);
            assert!(sb.defect >= -1e-12);
        }
    }
}
