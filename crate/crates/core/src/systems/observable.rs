use num_complex::Complex;

use crate::error::{Error, Result};
use crate::mean::Track;
use crate::scalar::Real;
use crate::systems::{Letter, PointGen};

const MAX_TABLE: usize = 1 << 20;

/// Cylinder function: a value for every letter pattern on a finite window
/// of offsets.
///
/// Patterns are indexed in base `alphabet_size`, the letter at
/// `window[i]` being digit `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable<T> {
    window: Vec<i64>,
    alphabet_size: usize,
    table: Vec<Complex<T>>,
    name: String,
}

impl<T: Real> Observable<T> {
    pub fn from_table(
        name: impl Into<String>,
        window: Vec<i64>,
        alphabet_size: usize,
        table: Vec<Complex<T>>,
    ) -> Result<Self> {
        if window.is_empty() {
            return Err(Error::invalid("window", "observable window must be nonempty"));
        }
        if alphabet_size == 0 {
            return Err(Error::invalid("alphabet", "alphabet must be nonempty"));
        }
        let expected = table_size(alphabet_size, window.len())?;
        if table.len() != expected {
            return Err(Error::invalid(
                "table",
                format!("expected {expected} entries, got {}", table.len()),
            ));
        }
        if table.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::invalid("table", "values must be finite"));
        }
        Ok(Observable {
            window,
            alphabet_size,
            table,
            name: name.into(),
        })
    }

    /// Tabulate `f` on every pattern over `window`.
    pub fn from_fn(
        name: impl Into<String>,
        window: Vec<i64>,
        alphabet_size: usize,
        f: impl Fn(&[Letter]) -> Complex<T>,
    ) -> Result<Self> {
        let size = table_size(alphabet_size.max(1), window.len())?;
        let mut pattern = vec![0 as Letter; window.len()];
        let table = (0..size)
            .map(|mut idx| {
                for slot in pattern.iter_mut() {
                    *slot = (idx % alphabet_size) as Letter;
                    idx /= alphabet_size;
                }
                f(&pattern)
            })
            .collect();
        Self::from_table(name, window, alphabet_size, table)
    }

    pub fn constant(value: Complex<T>, alphabet_size: usize) -> Result<Self> {
        Self::from_fn(format!("const:{value}"), vec![0], alphabet_size, |_| value)
    }

    /// `1` when the letter at offset 0 is `letter`.
    pub fn indicator(letter: Letter, alphabet_size: usize) -> Result<Self> {
        if letter as usize >= alphabet_size {
            return Err(Error::invalid("letter", "letter outside the alphabet"));
        }
        Self::from_fn(format!("indicator:{letter}"), vec![0], alphabet_size, |p| {
            if p[0] == letter {
                Complex::new(T::one(), T::zero())
            } else {
                Complex::new(T::zero(), T::zero())
            }
        })
    }

    /// Letter weights read at offset 0.
    pub fn letter_weights(name: impl Into<String>, weights: Vec<Complex<T>>) -> Result<Self> {
        let size = weights.len();
        Self::from_table(name, vec![0], size, weights)
    }

    /// `+1` on letter 0, `-1` on every other letter.
    pub fn plus_minus(alphabet_size: usize) -> Result<Self> {
        Self::from_fn("pm1", vec![0], alphabet_size, |p| {
            let v = if p[0] == 0 { T::one() } else { -T::one() };
            Complex::new(v, T::zero())
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn window(&self) -> &[i64] {
        &self.window
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn table(&self) -> &[Complex<T>] {
        &self.table
    }

    pub fn sup_norm(&self) -> T {
        self.table.iter().map(|v| v.norm()).fold(T::zero(), T::max)
    }

    /// Value on the letters read at the window offsets, in window order.
    pub fn eval_pattern(&self, pattern: &[Letter]) -> Complex<T> {
        let mut idx = 0usize;
        for &l in pattern.iter().rev() {
            idx = idx * self.alphabet_size + l as usize;
        }
        self.table[idx]
    }

    /// `f(x)`: the value at the window around coordinate 0.
    pub fn eval_at(&self, x: &PointGen) -> Complex<T> {
        let pattern: Vec<Letter> = self.window.iter().map(|&k| x.at(k)).collect();
        self.eval_pattern(&pattern)
    }
}

fn table_size(alphabet_size: usize, window_len: usize) -> Result<usize> {
    let mut size = 1usize;
    for _ in 0..window_len {
        size = size.saturating_mul(alphabet_size);
        if size > MAX_TABLE {
            return Err(Error::invalid("window", "observable table is too large"));
        }
    }
    Ok(size)
}

/// `t ↦ f(t·x)` for `t ∈ [lo, hi]`.
pub fn observable_track<T: Real>(
    f: &Observable<T>,
    x: &PointGen,
    lo: i64,
    hi: i64,
) -> Result<Track<Complex<T>>> {
    if f.alphabet_size != x.alphabet_size() {
        return Err(Error::invalid(
            "observable",
            format!(
                "alphabet size {} does not match point alphabet {}",
                f.alphabet_size,
                x.alphabet_size()
            ),
        ));
    }
    if hi < lo {
        return Ok(Track::new(lo, Vec::new()));
    }
    let min_off = *f.window.iter().min().unwrap();
    let max_off = *f.window.iter().max().unwrap();
    let letters = x.eval_window(lo + min_off, hi + max_off);
    let mut pattern = vec![0 as Letter; f.window.len()];
    let values = (lo..=hi)
        .map(|t| {
            for (slot, &k) in pattern.iter_mut().zip(&f.window) {
                *slot = letters[(t + k - lo - min_off) as usize];
            }
            f.eval_pattern(&pattern)
        })
        .collect();
    Ok(Track::new(lo, values))
}
