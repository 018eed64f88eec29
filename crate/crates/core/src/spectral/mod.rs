//! Fourier–Bohr coefficients along orbits, frequency detection, Parseval
//! defects, eigenfunction samples and Weyl-uniformity evidence.

mod detect;
mod eigen;
mod fourier;
mod parseval;

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mean::{FolnerSchedule, MeanConfig, MeanEstimate, Verdict};
use crate::scalar::Real;
use crate::systems::{observable_track, Observable, PointGen};

pub use detect::{detect_frequencies, golden_section_max, DetectConfig, DetectedFrequency};
pub use eigen::{eigenfunction_sample, weyl_uniform_fb, EigenReport, EigenSample, SampleFlag, WeylUniformity};
pub use fourier::{
    cross_checked_grid, dft_direct, dft_fast, exp_average, fourier_bohr, fourier_bohr_grid, fourier_bohr_track,
    grid_from_samples, modulate, FourierBohrGrid, GridMethod,
};
pub use parseval::{parseval_defect, parseval_defect_track, ParsevalStage, ParsevalTrajectory};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Purity {
    EvidencePurePoint,
    EvidenceNotPurePoint,
    Undecided,
}

/// Pure point when the final defect is below `0.05·energy` and the defect
/// has not increased over the last three stages; not pure point when the
/// final defect exceeds `0.5·energy` and the energy converged.
pub fn purity_verdict<T: Real>(energy: &MeanEstimate<T, T>, defects: &[T]) -> Purity {
    let Some(&last) = defects.last() else {
        return Purity::Undecided;
    };
    let e = *energy.last();
    let slack = T::from_f64_lossy(1e-9) * e.abs().max(T::one());
    let tail = &defects[defects.len().saturating_sub(3)..];
    let settling = tail.len() == 3 && tail.windows(2).all(|p| p[1] <= p[0] + slack);
    if last < T::from_f64_lossy(0.05) * e && settling {
        Purity::EvidencePurePoint
    } else if last > T::from_f64_lossy(0.5) * e && energy.verdict.is_converged() {
        Purity::EvidenceNotPurePoint
    } else {
        Purity::Undecided
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumConfig<T> {
    /// Largest grid size `N`; samples are `f_x(0..N)`.
    pub grid_n: usize,
    /// Increasing grid stages ending at `grid_n`.
    pub stages: Vec<usize>,
    pub detect: DetectConfig<T>,
    /// Number of strongest frequencies fed to the Parseval defect.
    pub top_k: Option<usize>,
    /// Averaging schedule for energies, coefficients and defects.
    pub schedule: FolnerSchedule,
    pub mean: MeanConfig<T>,
    /// Also run the direct transform (quadratic cost).
    pub cross_check: bool,
}

impl<T: Real> SpectrumConfig<T> {
    pub fn new(grid_n: usize, schedule: FolnerSchedule) -> Self {
        SpectrumConfig {
            grid_n,
            stages: vec![grid_n / 4, grid_n / 2, grid_n],
            detect: DetectConfig::default(),
            top_k: None,
            schedule,
            mean: MeanConfig::default(),
            cross_check: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrequencyEntry<T> {
    pub theta: T,
    pub refined_theta: T,
    pub amplitude: Complex<T>,
    pub magnitude: T,
    pub stage_amplitudes: Vec<T>,
    /// Verdict of the coefficient's partial means along the schedule.
    pub trajectory: Verdict<T, Complex<T>>,
    pub limit: Complex<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralReport<T> {
    pub point: String,
    pub observable: String,
    pub grid_n: usize,
    pub stages: Vec<usize>,
    pub threshold: T,
    pub grid_peak: (usize, T),
    pub cross_check: Option<T>,
    pub frequencies: Vec<FrequencyEntry<T>>,
    /// Frequencies used for the defect (the `top_k` strongest).
    pub parseval_thetas: Vec<T>,
    pub energy: MeanEstimate<T, T>,
    pub parseval: Vec<ParsevalStage<T>>,
    pub purity: Purity,
    pub schedule: String,
}

impl<T: Real> SpectralReport<T> {
    pub fn final_defect(&self) -> T {
        self.parseval.last().map(|s| s.defect).unwrap_or_else(T::zero)
    }

    pub fn final_energy(&self) -> T {
        *self.energy.last()
    }
}

/// Grid, detection, Parseval defect and purity verdict in one pass.
pub fn spectral_report<T: Real>(
    f: &Observable<T>,
    x: &PointGen,
    config: &SpectrumConfig<T>,
) -> Result<SpectralReport<T>> {
    if config.grid_n < 2 {
        return Err(Error::invalid("grid_n", "grid needs N >= 2"));
    }
    let samples = observable_track(f, x, 0, config.grid_n as i64 - 1)?;
    let grid = if config.cross_check {
        cross_checked_grid(samples.values())?
    } else {
        grid_from_samples(samples.values(), GridMethod::FastTransform)?
    };
    let sup = samples.values().iter().map(|v| v.norm()).fold(T::zero(), T::max);
    let threshold = config
        .detect
        .threshold
        .unwrap_or_else(|| T::from_f64_lossy(0.02) * sup);
    let detected = detect_frequencies(samples.values(), &config.stages, &config.detect)?;

    let (lo, hi) = config.schedule.hull();
    let orbit = observable_track(f, x, lo, hi - 1)?;
    let frequencies: Vec<FrequencyEntry<T>> = detected
        .iter()
        .map(|d| -> Result<FrequencyEntry<T>> {
            let est = fourier_bohr_track(&orbit, d.refined_theta, &config.schedule, &config.mean)?;
            Ok(FrequencyEntry {
                theta: d.theta,
                refined_theta: d.refined_theta,
                amplitude: d.amplitude,
                magnitude: d.magnitude(),
                stage_amplitudes: d.stage_amplitudes.clone(),
                limit: *est.last(),
                trajectory: est.verdict,
            })
        })
        .collect::<Result<_>>()?;

    let k = config.top_k.unwrap_or(frequencies.len()).min(frequencies.len());
    let thetas: Vec<T> = frequencies[..k].iter().map(|e| e.refined_theta).collect();
    let traj = parseval_defect_track(&orbit, &thetas, &config.schedule, &config.mean)?;
    let purity = purity_verdict(&traj.energy, &traj.defects());

    Ok(SpectralReport {
        point: x.name(),
        observable: f.name().to_string(),
        grid_n: config.grid_n,
        stages: config.stages.clone(),
        threshold,
        grid_peak: grid.peak(),
        cross_check: grid.cross_check,
        frequencies,
        parseval_thetas: thetas,
        energy: traj.energy,
        parseval: traj.stages,
        purity,
        schedule: config.schedule.fingerprint(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn periodic_report_is_pure_point() {
        let f = Observable::<f64>::indicator(0, 2).unwrap();
        let x = PointGen::periodic("AB").unwrap();
        let mut cfg = SpectrumConfig::new(4096, FolnerSchedule::intervals(512, 8).unwrap());
        cfg.cross_check = true;
        let r = spectral_report(&f, &x, &cfg).unwrap();
        assert_eq!(r.frequencies.len(), 2);
        assert!(r.final_defect().abs() < 1e-9);
        assert_eq!(r.purity, Purity::EvidencePurePoint);
        assert!(r.cross_check.unwrap() < 1e-10);
    }

    #[test]
    fn purity_rules() {
        let cfg = MeanConfig::<f64>::default();
        let energy = MeanEstimate::from_partials(vec![(1, 1.0), (2, 1.0), (3, 1.0)], 1.0, &cfg);
        assert_eq!(purity_verdict(&energy, &[0.9, 0.95, 0.97]), Purity::EvidenceNotPurePoint);
        assert_eq!(purity_verdict(&energy, &[0.04, 0.03, 0.02]), Purity::EvidencePurePoint);
        assert_eq!(purity_verdict(&energy, &[0.01, 0.03, 0.02]), Purity::Undecided);
        assert_eq!(purity_verdict(&energy, &[0.2, 0.2, 0.2]), Purity::Undecided);
    }
}
