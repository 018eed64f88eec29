use num_complex::Complex;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mean::{FolnerSchedule, MeanConfig, ShiftRange, Verdict, Window};
use crate::scalar::Real;
use crate::spectral::fourier::{fourier_bohr, modulate};
use crate::systems::{observable_track, Observable, PointGen};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleFlag {
    Converged,
    /// The average oscillates; the value is set to 0.
    Oscillating,
    /// Neither; the last partial is reported but excluded from statistics.
    Undecided,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenSample<T> {
    pub point: String,
    pub value: Complex<T>,
    pub flag: SampleFlag,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenReport<T> {
    pub theta: T,
    pub samples: Vec<EigenSample<T>>,
    /// `max |e(t·x) − ξ(t)·e(x)|` over the points and sampled shifts.
    pub eigen_residual: T,
    /// `max |e| − min |e|` over points whose mean converged.
    pub modulus_spread: T,
    pub shifts: Vec<i64>,
}

fn sample<T: Real>(
    f: &Observable<T>,
    x: &PointGen,
    theta: T,
    schedule: &FolnerSchedule,
    config: &MeanConfig<T>,
) -> Result<(Complex<T>, SampleFlag)> {
    let est = fourier_bohr(f, x, theta, schedule, config)?;
    Ok(match est.verdict {
        Verdict::Converged { limit, .. } => (limit, SampleFlag::Converged),
        Verdict::Oscillating { .. } => (Complex::new(T::zero(), T::zero()), SampleFlag::Oscillating),
        Verdict::Undecided => (*est.last(), SampleFlag::Undecided),
    })
}

/// Sample `e_{f,θ}(x) = A(f_x ξ̄_θ)` at each point, then test the eigen
/// equation `e(t·x) = ξ(t)·e(x)` on the given shifts and the constancy of
/// `|e|` across points.
pub fn eigenfunction_sample<T: Real>(
    f: &Observable<T>,
    theta: T,
    points: &[PointGen],
    schedule: &FolnerSchedule,
    config: &MeanConfig<T>,
    shifts: &[i64],
) -> Result<EigenReport<T>> {
    if points.is_empty() {
        return Err(Error::invalid("points", "need at least one point"));
    }
    let samples: Vec<EigenSample<T>> = points
        .par_iter()
        .map(|x| {
            sample(f, x, theta, schedule, config).map(|(value, flag)| EigenSample {
                point: x.name(),
                value,
                flag,
            })
        })
        .collect::<Result<_>>()?;

    let residuals: Vec<T> = points
        .par_iter()
        .zip(&samples)
        .map(|(x, s)| -> Result<T> {
            let mut worst = T::zero();
            for &t in shifts {
                let (moved, _) = sample(f, &x.shift(t), theta, schedule, config)?;
                let expect = crate::mean::Character::new(theta).at(t) * s.value;
                worst = worst.max((moved - expect).norm());
            }
            Ok(worst)
        })
        .collect::<Result<_>>()?;
    let eigen_residual = residuals.into_iter().fold(T::zero(), T::max);

    let moduli: Vec<T> = samples
        .iter()
        .filter(|s| s.flag != SampleFlag::Undecided)
        .map(|s| s.value.norm())
        .collect();
    let modulus_spread = if moduli.is_empty() {
        T::zero()
    } else {
        let hi = moduli.iter().copied().fold(T::neg_infinity(), T::max);
        let lo = moduli.iter().copied().fold(T::infinity(), T::min);
        hi - lo
    };
    Ok(EigenReport {
        theta,
        samples,
        eigen_residual,
        modulus_spread,
        shifts: shifts.to_vec(),
    })
}

/// Moduli of the shifted-window coefficients `|B|⁻¹ Σ_{t∈B+s} f_x(t)·ξ̄(t)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeylUniformity<T> {
    pub max: T,
    pub min: T,
    pub spread: T,
}

pub fn weyl_uniform_fb<T: Real>(
    f: &Observable<T>,
    x: &PointGen,
    theta: T,
    window: Window,
    shifts: ShiftRange,
) -> Result<WeylUniformity<T>> {
    if shifts.is_empty() {
        return Err(Error::EmptyShiftRange);
    }
    let lo = window.start + shifts.lo;
    let hi = window.end() + shifts.hi;
    let track = modulate(&observable_track(f, x, lo, hi - 1)?, theta);
    let len = T::from_count(window.len);
    let moduli: Vec<T> = (shifts.lo..=shifts.hi)
        .into_par_iter()
        .map(|s| {
            let slice = track.slice(window.shifted(s)).unwrap();
            (slice.iter().fold(Complex::new(T::zero(), T::zero()), |a, v| a + *v) / len).norm()
        })
        .collect();
    let max = moduli.iter().copied().fold(T::neg_infinity(), T::max);
    let min = moduli.iter().copied().fold(T::infinity(), T::min);
    Ok(WeylUniformity {
        max,
        min,
        spread: max - min,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn non_frequency_gives_zero_eigenfunction() {
        let f = Observable::<f64>::indicator(0, 2).unwrap();
        let x = PointGen::periodic("AB").unwrap();
        let s = FolnerSchedule::intervals(10, 20).unwrap();
        let r = eigenfunction_sample(&f, 0.25, &[x.clone(), x.shift(1)], &s, &MeanConfig::default(), &[1, 2]).unwrap();
        assert!(r.samples.iter().all(|e| e.value.norm() < 1e-12));
        assert!(r.eigen_residual < 1e-12);
        assert!(r.modulus_spread < 1e-12);
    }

    #[test]
    fn periodic_eigenfunction_flips_sign() {
        let f = Observable::<f64>::indicator(0, 2).unwrap();
        let x = PointGen::periodic("AB").unwrap();
        let s = FolnerSchedule::intervals(10, 20).unwrap();
        let r = eigenfunction_sample(&f, 0.5, &[x.clone(), x.shift(1)], &s, &MeanConfig::default(), &[1, 3]).unwrap();
        assert!((r.samples[0].value - Complex::new(0.5, 0.0)).norm() < 1e-9);
        assert!((r.samples[1].value + Complex::new(0.5, 0.0)).norm() < 1e-9);
        assert!(r.eigen_residual < 1e-9);
        assert!(r.modulus_spread < 1e-9);
    }

    #[test]
    fn oscillating_points_are_zeroed() {
        let f = Observable::<f64>::indicator(1, 2).unwrap();
        let s = FolnerSchedule::alternating(40).unwrap();
        let r = eigenfunction_sample(&f, 0.0, &[PointGen::step()], &s, &MeanConfig::default(), &[]).unwrap();
        assert_eq!(r.samples[0].flag, SampleFlag::Oscillating);
        assert_eq!(r.samples[0].value, Complex::new(0.0, 0.0));
    }

    #[test]
    fn weyl_uniformity_cases() {
        let c = Observable::constant(Complex::new(0.7, 0.0), 2).unwrap();
        let u = weyl_uniform_fb(&c, &PointGen::fibonacci(), 0.0, Window::new(0, 50), ShiftRange::symmetric(100)).unwrap();
        assert!(u.spread < 1e-12);

        let f = Observable::<f64>::indicator(0, 3).unwrap();
        let x = PointGen::periodic("ABC").unwrap();
        let u = weyl_uniform_fb(&f, &x, 1.0 / 3.0, Window::new(0, 30), ShiftRange::symmetric(200)).unwrap();
        assert!(u.spread < 1e-12, "{u:?}");

        let g = Observable::<f64>::indicator(1, 2).unwrap();
        let u = weyl_uniform_fb(&g, &PointGen::step(), 0.0, Window::new(0, 20), ShiftRange::symmetric(50)).unwrap();
        assert!((u.spread - 1.0).abs() < 1e-12);
    }
}
