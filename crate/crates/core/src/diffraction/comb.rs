use num_complex::Complex;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mean::Track;
use crate::scalar::Real;
use crate::systems::{observable_track, Letter, Observable, PointGen};

/// Integer-supported Dirac comb `Σ_t w(t)·δ_t` with `w(t) = weight(x(t))`.
#[derive(Debug, Clone)]
pub struct WeightedComb<T> {
    point: PointGen,
    weights: Vec<Complex<T>>,
    name: String,
}

impl<T: Real> WeightedComb<T> {
    pub fn new(point: PointGen, weights: Vec<Complex<T>>, name: impl Into<String>) -> Result<Self> {
        if weights.len() != point.alphabet_size() {
            return Err(Error::invalid(
                "weights",
                format!("need {} weights, got {}", point.alphabet_size(), weights.len()),
            ));
        }
        if weights.iter().any(|w| !w.re.is_finite() || !w.im.is_finite()) {
            return Err(Error::invalid("weights", "weights must be finite"));
        }
        Ok(WeightedComb {
            point,
            weights,
            name: name.into(),
        })
    }

    /// Weight 1 on `letter`, 0 elsewhere.
    pub fn indicator(point: PointGen, letter: Letter) -> Result<Self> {
        let k = point.alphabet_size();
        if letter as usize >= k {
            return Err(Error::invalid("letter", format!("letter {letter} outside alphabet of size {k}")));
        }
        let weights = (0..k)
            .map(|i| if i == letter as usize { Complex::new(T::one(), T::zero()) } else { Complex::new(T::zero(), T::zero()) })
            .collect();
        let name = format!("1[{}]", point.alphabet()[letter as usize]);
        Self::new(point, weights, name)
    }

    pub fn point(&self) -> &PointGen {
        &self.point
    }

    pub fn weights(&self) -> &[Complex<T>] {
        &self.weights
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// `max |weight|`, the translation bound of the comb.
    pub fn bound(&self) -> T {
        self.weights.iter().map(|w| w.norm()).fold(T::zero(), T::max)
    }

    pub fn value(&self, t: i64) -> Complex<T> {
        self.weights[self.point.at(t) as usize]
    }

    /// `w` on `[lo, hi)`.
    pub fn track(&self, lo: i64, hi: i64) -> Track<Complex<T>> {
        if hi <= lo {
            return Track::new(lo, Vec::new());
        }
        let letters = self.point.eval_window(lo, hi - 1);
        Track::new(lo, letters.par_iter().map(|&a| self.weights[a as usize]).collect())
    }

    /// The weight map as a single-site observable.
    pub fn observable(&self) -> Result<Observable<T>> {
        Observable::letter_weights(self.name.clone(), self.weights.clone())
    }

    pub fn shift(&self, t: i64) -> Self {
        WeightedComb {
            point: self.point.shift(t),
            weights: self.weights.clone(),
            name: self.name.clone(),
        }
    }
}

/// Finite kernel `φ` given by `(offset, value)` pairs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Kernel<T> {
    pub offsets: Vec<i64>,
    pub values: Vec<Complex<T>>,
}

impl<T: Real> Kernel<T> {
    pub fn new(offsets: Vec<i64>, values: Vec<Complex<T>>) -> Result<Self> {
        if offsets.is_empty() || offsets.len() != values.len() {
            return Err(Error::invalid("kernel", "offsets and values must be nonempty and of equal length"));
        }
        let mut sorted = offsets.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|p| p[0] == p[1]) {
            return Err(Error::invalid("kernel", "offsets must be distinct"));
        }
        Ok(Kernel { offsets, values })
    }

    pub fn delta() -> Self {
        Kernel {
            offsets: vec![0],
            values: vec![Complex::new(T::one(), T::zero())],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NphiBridge<T> {
    pub start: i64,
    /// `(ω ∗ φ̃)(t)` by direct convolution.
    pub values: Vec<Complex<T>>,
    /// Largest difference to the cylinder-observable track.
    pub residual: T,
}

/// `(ω ∗ φ̃)(t) = Σ_s w(s)·conj(φ(s − t))` for `t ∈ [lo, hi)`, checked
/// against the orbit of the cylinder function `N_φ(ω) = Σ_j w(o_j)·conj(φ_j)`.
pub fn nphi_bridge<T: Real>(comb: &WeightedComb<T>, kernel: &Kernel<T>, lo: i64, hi: i64) -> Result<NphiBridge<T>> {
    if hi <= lo {
        return Err(Error::invalid("range", "need lo < hi"));
    }
    let omin = *kernel.offsets.iter().min().unwrap();
    let omax = *kernel.offsets.iter().max().unwrap();
    let w = comb.track(lo + omin, hi + omax);
    let values: Vec<Complex<T>> = (lo..hi)
        .into_par_iter()
        .map(|t| {
            kernel
                .offsets
                .iter()
                .zip(&kernel.values)
                .fold(Complex::new(T::zero(), T::zero()), |acc, (&o, phi)| {
                    acc + *w.get(t + o).unwrap() * phi.conj()
                })
        })
        .collect();

    let weights = comb.weights().to_vec();
    let conj_phi: Vec<Complex<T>> = kernel.values.iter().map(|v| v.conj()).collect();
    let obs = Observable::from_fn(
        format!("N_phi[{}]", comb.name()),
        kernel.offsets.clone(),
        comb.point().alphabet_size(),
        |pattern| {
            pattern
                .iter()
                .zip(&conj_phi)
                .fold(Complex::new(T::zero(), T::zero()), |acc, (&a, c)| acc + weights[a as usize] * *c)
        },
    )?;
    let other = observable_track(&obs, comb.point(), lo, hi - 1)?;
    let residual = values
        .iter()
        .zip(other.values())
        .map(|(a, b)| (*a - *b).norm())
        .fold(T::zero(), T::max);
    Ok(NphiBridge {
        start: lo,
        values,
        residual,
    })
}
