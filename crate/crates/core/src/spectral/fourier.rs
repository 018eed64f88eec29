use num_complex::Complex;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mean::{partial_means, FolnerSchedule, MeanConfig, MeanEstimate, Track};
use crate::scalar::{character_conj, Real};
use crate::systems::{observable_track, Observable, PointGen};

const CHUNK: usize = 512;

/// `t ↦ h(t)·exp(-2πi·theta·t)`.
///
/// The character is re-anchored exactly at the start of every chunk and
/// advanced by complex rotation inside it.
pub fn modulate<T: Real>(track: &Track<Complex<T>>, theta: T) -> Track<Complex<T>> {
    let start = track.start();
    let step = character_conj(theta, 1);
    let values: Vec<Complex<T>> = track
        .values()
        .par_chunks(CHUNK)
        .enumerate()
        .flat_map_iter(|(c, chunk)| {
            let mut phase = character_conj(theta, start + (c * CHUNK) as i64);
            chunk.iter().map(move |v| {
                let out = *v * phase;
                phase = phase * step;
                out
            })
        })
        .collect();
    Track::new(start, values)
}

/// `|n|⁻¹ Σ_{t} h(t)·exp(-2πi·theta·t)` over a whole slice starting at
/// coordinate `start`.
pub fn exp_average<T: Real>(values: &[Complex<T>], start: i64, theta: T) -> Complex<T> {
    if values.is_empty() {
        return Complex::new(T::zero(), T::zero());
    }
    let step = character_conj(theta, 1);
    let partial: Vec<Complex<T>> = values
        .par_chunks(CHUNK)
        .enumerate()
        .map(|(c, chunk)| {
            let mut phase = character_conj(theta, start + (c * CHUNK) as i64);
            let mut acc = Complex::new(T::zero(), T::zero());
            for v in chunk {
                acc = acc + *v * phase;
                phase = phase * step;
            }
            acc
        })
        .collect();
    let sum = partial
        .into_iter()
        .fold(Complex::new(T::zero(), T::zero()), |a, b| a + b);
    sum / T::from_count(values.len() as u64)
}

/// Partial means of `f_x·ξ̄_theta` along the schedule.
pub fn fourier_bohr<T: Real>(
    f: &Observable<T>,
    x: &PointGen,
    theta: T,
    schedule: &FolnerSchedule,
    config: &MeanConfig<T>,
) -> Result<MeanEstimate<T, Complex<T>>> {
    let (lo, hi) = schedule.hull();
    let track = observable_track(f, x, lo, hi - 1)?;
    fourier_bohr_track(&track, theta, schedule, config)
}

/// [`fourier_bohr`] on a precomputed track.
pub fn fourier_bohr_track<T: Real>(
    track: &Track<Complex<T>>,
    theta: T,
    schedule: &FolnerSchedule,
    config: &MeanConfig<T>,
) -> Result<MeanEstimate<T, Complex<T>>> {
    let modulated = modulate(track, theta);
    partial_means(&modulated, schedule, schedule.len(), config)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GridMethod {
    Direct,
    FastTransform,
}

/// Coefficients `c_j = N⁻¹ Σ_{t<N} f_x(t)·exp(-2πi·jt/N)` on `θ_j = j/N`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FourierBohrGrid<T> {
    pub n: usize,
    pub amplitudes: Vec<Complex<T>>,
    pub method: GridMethod,
    /// Largest `|fast − direct|` relative to the sup-norm, when both ran.
    pub cross_check: Option<T>,
}

impl<T: Real> FourierBohrGrid<T> {
    pub fn theta(&self, j: usize) -> T {
        T::from_count(j as u64) / T::from_count(self.n as u64)
    }

    /// `(j, |c_j|)` of the largest coefficient.
    pub fn peak(&self) -> (usize, T) {
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(j, c)| (j, c.norm()))
            .fold((0, T::zero()), |best, cur| if cur.1 > best.1 { cur } else { best })
    }
}

/// Plain `O(N²)` transform with an exact integer phase index.
pub fn dft_direct<T: Real>(values: &[Complex<T>]) -> Vec<Complex<T>> {
    let n = values.len();
    let twiddles: Vec<Complex<T>> = (0..n)
        .map(|m| {
            let angle = -T::TAU() * T::from_count(m as u64) / T::from_count(n as u64);
            Complex::new(angle.cos(), angle.sin())
        })
        .collect();
    let scale = T::from_count(n as u64);
    (0..n)
        .into_par_iter()
        .map(|j| {
            let mut acc = Complex::new(T::zero(), T::zero());
            let mut idx = 0usize;
            for v in values {
                acc = acc + *v * twiddles[idx];
                idx += j;
                if idx >= n {
                    idx %= n;
                }
            }
            acc / scale
        })
        .collect()
}

/// Forward FFT scaled by `1/N`.
pub fn dft_fast<T: Real>(values: &[Complex<T>]) -> Vec<Complex<T>> {
    let n = values.len();
    let mut buf = values.to_vec();
    if n == 0 {
        return buf;
    }
    let fft = FftPlanner::<T>::new().plan_fft_forward(n);
    fft.process(&mut buf);
    let scale = T::from_count(n as u64);
    buf.iter_mut().for_each(|c| *c = *c / scale);
    buf
}

/// Grid of coefficients of samples `f_x(0..N)`.
pub fn grid_from_samples<T: Real>(values: &[Complex<T>], method: GridMethod) -> Result<FourierBohrGrid<T>> {
    if values.len() < 2 {
        return Err(Error::invalid("n", "grid needs N >= 2"));
    }
    let amplitudes = match method {
        GridMethod::Direct => dft_direct(values),
        GridMethod::FastTransform => dft_fast(values),
    };
    Ok(FourierBohrGrid {
        n: values.len(),
        amplitudes,
        method,
        cross_check: None,
    })
}

pub fn fourier_bohr_grid<T: Real>(
    f: &Observable<T>,
    x: &PointGen,
    n: usize,
    method: GridMethod,
) -> Result<FourierBohrGrid<T>> {
    if n < 2 {
        return Err(Error::invalid("n", "grid needs N >= 2"));
    }
    let track = observable_track(f, x, 0, n as i64 - 1)?;
    grid_from_samples(track.values(), method)
}

/// Fast grid with the direct transform as an independent cross-check.
pub fn cross_checked_grid<T: Real>(values: &[Complex<T>]) -> Result<FourierBohrGrid<T>> {
    let mut fast = grid_from_samples(values, GridMethod::FastTransform)?;
    let direct = dft_direct(values);
    let sup = values.iter().map(|v| v.norm()).fold(T::zero(), T::max);
    let scale = if sup > T::zero() { sup } else { T::one() };
    let residual = fast
        .amplitudes
        .iter()
        .zip(&direct)
        .map(|(a, b)| (*a - *b).norm())
        .fold(T::zero(), T::max);
    fast.cross_check = Some(residual / scale);
    Ok(fast)
}
