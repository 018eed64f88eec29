//! Weighted Dirac combs over the integers, their empirical autocorrelation,
//! tapered diffraction densities and atom estimates.

mod comb;

use num_complex::Complex;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mean::{partial_means, FolnerSchedule, MeanConfig, MeanEstimate, Track};
use crate::scalar::{character_conj, Real};

pub use comb::{nphi_bridge, Kernel, NphiBridge, WeightedComb};

/// Autocorrelation `eta(k) = A(w(·)·conj(w(· − k)))` for `|k| ≤ k_max`.
///
/// Only lags `k ≥ 0` are averaged; negative lags are their conjugates, so
/// Hermitian symmetry holds exactly at every stage.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AutocorrEstimate<T> {
    pub k_max: usize,
    /// Length of the largest window.
    pub window_len: u64,
    /// Estimates for lags `0..=k_max`.
    pub estimates: Vec<MeanEstimate<T, Complex<T>>>,
}

impl<T: Real> AutocorrEstimate<T> {
    pub fn lags(&self) -> impl Iterator<Item = i64> {
        let k = self.k_max as i64;
        -k..=k
    }

    /// Final-stage `eta(k)`.
    pub fn eta(&self, k: i64) -> Complex<T> {
        let v = *self.estimates[k.unsigned_abs() as usize].last();
        if k < 0 {
            v.conj()
        } else {
            v
        }
    }

    /// `eta(k)` at stage `n` (1-based).
    pub fn eta_at(&self, k: i64, n: usize) -> Complex<T> {
        let v = self.estimates[k.unsigned_abs() as usize].partials[n - 1].1;
        if k < 0 {
            v.conj()
        } else {
            v
        }
    }

    pub fn eta0(&self) -> T {
        self.eta(0).re
    }

    pub fn stages(&self) -> usize {
        self.estimates[0].partials.len()
    }

    /// `(k, eta(k))` over all lags.
    pub fn values(&self) -> Vec<(i64, Complex<T>)> {
        self.lags().map(|k| (k, self.eta(k))).collect()
    }
}

pub fn autocorrelation<T: Real>(
    comb: &WeightedComb<T>,
    k_max: usize,
    schedule: &FolnerSchedule,
    config: &MeanConfig<T>,
) -> Result<AutocorrEstimate<T>> {
    let (lo, hi) = schedule.hull();
    let w = comb.track(lo - k_max as i64, hi);
    let estimates = (0..=k_max)
        .into_par_iter()
        .map(|k| {
            let vals = w.values();
            let product = Track::new(
                lo,
                (k_max..vals.len()).map(|i| vals[i] * vals[i - k].conj()).collect(),
            );
            partial_means(&product, schedule, schedule.len(), config)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AutocorrEstimate {
        k_max,
        window_len: schedule.largest().len,
        estimates,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Taper {
    None,
    /// Fejér weights `1 − |k|/(k_max + 1)`.
    Triangular,
}

impl Taper {
    pub fn weight<T: Real>(self, k: i64, k_max: usize) -> T {
        match self {
            Taper::None => T::one(),
            Taper::Triangular => {
                T::one() - T::from_count(k.unsigned_abs()) / T::from_count(k_max as u64 + 1)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiffractionDensity<T> {
    pub taper: Taper,
    pub m: usize,
    pub k_max: usize,
    /// Density at `θ_j = j/m`.
    pub density: Vec<T>,
    pub min: T,
    /// Grid average of the density, which should equal `taper(0)·eta(0)`.
    pub mass: T,
    pub mass_residual: T,
    /// Set when the density dips below `−0.05·eta(0)`.
    pub negative_density: bool,
}

impl<T: Real> DiffractionDensity<T> {
    pub fn theta(&self, j: usize) -> T {
        T::from_count(j as u64) / T::from_count(self.m as u64)
    }
}

/// `Re Σ_{|k|≤k_max} taper(k)·eta(k)·exp(−2πiθk)` on the grid `θ_j = j/m`.
pub fn diffraction_density<T: Real>(eta: &AutocorrEstimate<T>, taper: Taper, m: usize) -> Result<DiffractionDensity<T>> {
    let k_max = eta.k_max;
    if m < 2 * k_max || m == 0 {
        return Err(Error::invalid("m", format!("grid size {m} below 2·k_max = {}", 2 * k_max)));
    }
    let twiddles: Vec<Complex<T>> = (0..m).map(|r| character_conj(T::one() / T::from_count(m as u64), r as i64)).collect();
    let coeffs: Vec<(i64, Complex<T>)> = eta
        .lags()
        .map(|k| (k, eta.eta(k) * taper.weight::<T>(k, k_max)))
        .collect();
    let mm = m as i64;
    let density: Vec<T> = (0..m)
        .into_par_iter()
        .map(|j| {
            coeffs
                .iter()
                .fold(Complex::new(T::zero(), T::zero()), |acc, (k, c)| {
                    acc + *c * twiddles[((j as i64 * k).rem_euclid(mm)) as usize]
                })
                .re
        })
        .collect();
    let min = density.iter().copied().fold(T::infinity(), T::min);
    let mass = density.iter().fold(T::zero(), |a, d| a + *d) / T::from_count(m as u64);
    let eta0 = eta.eta0();
    let expected = taper.weight::<T>(0, k_max) * eta0;
    let mass_residual = (mass - expected).abs() / expected.abs().max(T::min_positive_value());
    Ok(DiffractionDensity {
        taper,
        m,
        k_max,
        min,
        mass,
        mass_residual,
        negative_density: min < -T::from_f64_lossy(0.05) * eta0,
        density,
    })
}

/// Partial values `I_n(θ) = |B_n|⁻² |Σ_{t∈B_n} w(t)·exp(−2πiθt)|²`.
///
/// Every term's character is evaluated directly and every window is summed
/// from scratch, independently of the Fourier–Bohr path.
pub fn bombieri_taylor_atom<T: Real>(
    comb: &WeightedComb<T>,
    theta: T,
    schedule: &FolnerSchedule,
    config: &MeanConfig<T>,
) -> Result<MeanEstimate<T, T>> {
    let partials: Vec<(usize, T)> = schedule
        .windows()
        .par_iter()
        .enumerate()
        .map(|(i, win)| {
            let w = comb.track(win.start, win.end());
            let sum = w
                .iter()
                .fold(Complex::new(T::zero(), T::zero()), |acc, (t, v)| acc + *v * character_conj(theta, t));
            let len = T::from_count(win.len);
            (i + 1, (sum / len).norm_sqr())
        })
        .collect();
    let b = comb.bound();
    Ok(MeanEstimate::from_partials(partials, b * b, config))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AtomEstimate<T> {
    pub theta: T,
    pub mass: T,
    pub estimate: MeanEstimate<T, T>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AtomReport<T> {
    pub atoms: Vec<AtomEstimate<T>>,
    pub eta0: T,
    pub pure_point_fraction: T,
}

/// Ratio of the summed atom masses to `eta0`.
pub fn pure_point_fraction<T: Real>(atoms: &[(T, T)], eta0: T) -> Result<T> {
    if !(eta0 > T::zero()) {
        return Err(Error::invalid("eta0", "eta(0) must be positive"));
    }
    let fraction = atoms.iter().fold(T::zero(), |a, (_, m)| a + *m) / eta0;
    if fraction > T::from_f64_lossy(1.05) {
        return Err(Error::FractionExceedsOne {
            fraction: fraction.to_f64_lossy(),
        });
    }
    Ok(fraction)
}

/// Atom estimates at the given frequencies and their share of `eta(0)`.
pub fn atom_report<T: Real>(
    comb: &WeightedComb<T>,
    thetas: &[T],
    eta0: T,
    schedule: &FolnerSchedule,
    config: &MeanConfig<T>,
) -> Result<AtomReport<T>> {
    let atoms: Vec<AtomEstimate<T>> = thetas
        .iter()
        .map(|&theta| {
            bombieri_taylor_atom(comb, theta, schedule, config).map(|estimate| AtomEstimate {
                theta,
                mass: *estimate.last(),
                estimate,
            })
        })
        .collect::<Result<_>>()?;
    let pairs: Vec<(T, T)> = atoms.iter().map(|a| (a.theta, a.mass)).collect();
    let pure_point_fraction = pure_point_fraction(&pairs, eta0)?;
    Ok(AtomReport {
        atoms,
        eta0,
        pure_point_fraction,
    })
}
