use num_complex::Complex;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{character_conj, circle_distance, reduce_unit, Real};
use crate::spectral::fourier::{dft_fast, exp_average};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DetectConfig<T> {
    /// Absolute amplitude threshold; defaults to `0.02·sup|f|`.
    pub threshold: Option<T>,
    /// Golden-section iterations per peak.
    pub refine_steps: usize,
    pub max_frequencies: usize,
}

impl<T: Real> Default for DetectConfig<T> {
    fn default() -> Self {
        DetectConfig {
            threshold: None,
            refine_steps: 64,
            max_frequencies: 64,
        }
    }
}

/// A frequency that survived detection.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DetectedFrequency<T> {
    /// Grid frequency `j/N` of the peak at the largest stage.
    pub theta: T,
    pub refined_theta: T,
    /// Coefficient at the refined frequency over the largest stage.
    pub amplitude: Complex<T>,
    /// `|A_{N_s}(f_x ξ̄)|` at the refined frequency, one per stage.
    pub stage_amplitudes: Vec<T>,
}

impl<T: Real> DetectedFrequency<T> {
    pub fn magnitude(&self) -> T {
        self.amplitude.norm()
    }
}

/// Maximize `g` on `[a, b]` by golden-section search.
pub fn golden_section_max<T: Real>(mut a: T, mut b: T, steps: usize, g: impl Fn(T) -> T) -> T {
    let inv_phi = (T::from_f64_lossy(5.0).sqrt() - T::one()) / T::from_f64_lossy(2.0);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut gc = g(c);
    let mut gd = g(d);
    for _ in 0..steps {
        if gc >= gd {
            b = d;
            d = c;
            gd = gc;
            c = b - inv_phi * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + inv_phi * (b - a);
            gd = g(d);
        }
    }
    if gc >= gd {
        c
    } else {
        d
    }
}

/// Detect the frequencies of samples `f_x(0..N)`.
///
/// Peaks are extracted one at a time from the largest stage: the strongest
/// grid coefficient of the residual is refined by golden-section search over
/// `[θ_j − 1/N, θ_j + 1/N]`, and its component is subtracted before the
/// next search, so sidelobes of strong peaks are never reported. A peak is
/// kept when its refined coefficient on the original samples reaches the
/// threshold at the largest stage and half the threshold on every prefix
/// stage. Survivors are pairwise at least `1/N` apart and sorted by
/// decreasing amplitude.
pub fn detect_frequencies<T: Real>(
    samples: &[Complex<T>],
    stages: &[usize],
    config: &DetectConfig<T>,
) -> Result<Vec<DetectedFrequency<T>>> {
    let n = samples.len();
    if stages.len() < 2 {
        return Err(Error::invalid("stages", "need at least two grid stages"));
    }
    if stages.windows(2).any(|p| p[1] <= p[0]) || *stages.last().unwrap() != n || stages[0] < 2 {
        return Err(Error::invalid(
            "stages",
            "stages must increase and end at the sample length",
        ));
    }
    let sup = samples.iter().map(|v| v.norm()).fold(T::zero(), T::max);
    let threshold = config
        .threshold
        .unwrap_or_else(|| T::from_f64_lossy(0.02) * sup);
    if sup == T::zero() || threshold <= T::zero() {
        return Ok(Vec::new());
    }

    let nn = T::from_count(n as u64);
    let mut residual = samples.to_vec();
    let mut candidates: Vec<(T, T)> = Vec::new();
    for _ in 0..config.max_frequencies {
        let grid = dft_fast(&residual);
        let (j, peak) = grid
            .iter()
            .enumerate()
            .map(|(j, c)| (j, c.norm()))
            .fold((0, T::zero()), |best, cur| if cur.1 > best.1 { cur } else { best });
        if peak < threshold {
            break;
        }
        let grid_theta = T::from_count(j as u64) / nn;
        let half = T::one() / nn;
        let refined = golden_section_max(grid_theta - half, grid_theta + half, config.refine_steps, |th| {
            exp_average(&residual, 0, th).norm()
        });
        let amp = exp_average(&residual, 0, refined);
        residual
            .par_iter_mut()
            .enumerate()
            .for_each(|(t, v)| *v = *v - amp * character_conj(refined, t as i64).conj());
        candidates.push((grid_theta, reduce_unit(refined)));
    }

    let half_threshold = threshold / T::from_f64_lossy(2.0);
    let mut found: Vec<DetectedFrequency<T>> = candidates
        .into_par_iter()
        .filter_map(|(grid_theta, refined)| {
            let amplitude = exp_average(samples, 0, refined);
            if amplitude.norm() < threshold {
                return None;
            }
            let stage_amplitudes: Vec<T> = stages
                .iter()
                .map(|&m| exp_average(&samples[..m], 0, refined).norm())
                .collect();
            if stage_amplitudes.iter().any(|a| *a < half_threshold) {
                return None;
            }
            Some(DetectedFrequency {
                theta: grid_theta,
                refined_theta: refined,
                amplitude,
                stage_amplitudes,
            })
        })
        .collect();

    found.sort_by(|a, b| {
        b.magnitude()
            .partial_cmp(&a.magnitude())
            .unwrap()
            .then(a.refined_theta.partial_cmp(&b.refined_theta).unwrap())
    });
    let resolution = T::one() / nn;
    let mut kept: Vec<DetectedFrequency<T>> = Vec::new();
    for f in found {
        if kept
            .iter()
            .all(|k| circle_distance(k.refined_theta, f.refined_theta) >= resolution)
        {
            kept.push(f);
        }
    }
    Ok(kept)
}
