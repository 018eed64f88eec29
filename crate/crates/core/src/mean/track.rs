use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::mean::schedule::{FolnerSchedule, Window};
use crate::scalar::{Scalar, Value};

/// Samples `h(t)` on the contiguous coordinate range `[start, start + len)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Track<V> {
    start: i64,
    values: Vec<V>,
}

impl<V> Track<V> {
    pub fn new(start: i64, values: Vec<V>) -> Self {
        Track { start, values }
    }

    pub fn from_fn(lo: i64, hi_exclusive: i64, mut f: impl FnMut(i64) -> V) -> Self {
        let values = (lo..hi_exclusive).map(&mut f).collect();
        Track { start: lo, values }
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    /// Exclusive end.
    pub fn end(&self) -> i64 {
        self.start + self.values.len() as i64
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[V] {
        &self.values
    }

    pub fn into_values(self) -> Vec<V> {
        self.values
    }

    pub fn get(&self, t: i64) -> Option<&V> {
        if t < self.start {
            return None;
        }
        self.values.get((t - self.start) as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &V)> {
        let start = self.start;
        self.values
            .iter()
            .enumerate()
            .map(move |(i, v)| (start + i as i64, v))
    }

    pub fn map<W>(&self, f: impl FnMut(&V) -> W) -> Track<W> {
        Track {
            start: self.start,
            values: self.values.iter().map(f).collect(),
        }
    }

    /// Pointwise combination of two tracks on their common range.
    pub fn zip_with<W, U>(&self, other: &Track<W>, mut f: impl FnMut(&V, &W) -> U) -> Track<U> {
        let lo = self.start.max(other.start);
        let hi = self.end().min(other.end());
        let values = (lo..hi.max(lo))
            .map(|t| f(self.get(t).unwrap(), other.get(t).unwrap()))
            .collect();
        Track { start: lo, values }
    }

    /// Fails with the first uncovered coordinate of `w`.
    pub fn check_covers(&self, w: Window) -> Result<()> {
        if w.len == 0 {
            return Ok(());
        }
        if w.start < self.start {
            return Err(Error::MissingSamples { t: w.start });
        }
        if w.end() > self.end() {
            return Err(Error::MissingSamples {
                t: self.end().max(w.start),
            });
        }
        Ok(())
    }

    pub fn slice(&self, w: Window) -> Result<&[V]> {
        self.check_covers(w)?;
        let a = (w.start - self.start) as usize;
        Ok(&self.values[a..a + w.len as usize])
    }
}

/// Sequential left-to-right sum of a slice.
pub(crate) fn sum_slice<S: Scalar, V: Value<S>>(values: &[V]) -> V {
    values
        .iter()
        .cloned()
        .fold(V::zero_value(), |acc, v| acc + v)
}

/// Window sums over `B_1..B_{n_max}`.
///
/// A window sharing its left endpoint with an earlier, shorter window
/// extends that running sum to the right; one sharing only its right
/// endpoint extends leftwards. Either way the summation order depends on
/// the schedule alone, so pointwise order of the summands carries over to
/// the sums.
pub(crate) fn window_sums<S: Scalar, V: Value<S>>(
    track: &Track<V>,
    schedule: &FolnerSchedule,
    n_max: usize,
) -> Result<Vec<V>> {
    let mut by_start: HashMap<i64, (i64, V)> = HashMap::new();
    let mut by_end: HashMap<i64, (i64, V)> = HashMap::new();
    let mut out = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let w = schedule
            .window(n)
            .ok_or_else(|| Error::invalid("n_max", format!("schedule has only {} windows", schedule.len())))?;
        track.check_covers(w)?;
        let sum = if let Some((end, acc)) = by_start.get(&w.start).filter(|(end, _)| *end <= w.end()) {
            let ext = Window::new(*end, (w.end() - end) as u64);
            track.slice(ext)?.iter().cloned().fold(acc.clone(), |a, v| a + v)
        } else if let Some((start, acc)) = by_end.get(&w.end()).filter(|(start, _)| *start >= w.start) {
            let ext = Window::new(w.start, (start - w.start) as u64);
            track.slice(ext)?.iter().rev().cloned().fold(acc.clone(), |a, v| a + v)
        } else {
            sum_slice::<S, V>(track.slice(w)?)
        };
        by_start.insert(w.start, (w.end(), sum.clone()));
        by_end.insert(w.end(), (w.start, sum.clone()));
        out.push(sum);
    }
    Ok(out)
}
