use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mean::schedule::{FolnerSchedule, ShiftRange, Window};
use crate::mean::track::{sum_slice, window_sums, Track};
use crate::scalar::{Scalar, Value};

/// Thresholds that turn a partial-mean trajectory into a verdict.
///
/// Tolerances are relative to the sup-norm of the samples inside the
/// scheduled windows.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeanConfig<S> {
    /// Number of trailing partials that stand in for the limsup.
    pub tail: usize,
    pub convergence_tol: S,
    pub oscillation_threshold: S,
}

impl<S: Scalar> Default for MeanConfig<S> {
    fn default() -> Self {
        MeanConfig {
            tail: 5,
            convergence_tol: S::one() / S::from_count(1000),
            oscillation_threshold: S::one() / S::from_count(10),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict<S, V> {
    Converged { limit: V, residual: S },
    /// Bounds are taken over the real parts of the trailing partials.
    Oscillating { liminf: S, limsup: S },
    Undecided,
}

impl<S, V> Verdict<S, V> {
    pub fn is_converged(&self) -> bool {
        matches!(self, Verdict::Converged { .. })
    }

    pub fn is_oscillating(&self) -> bool {
        matches!(self, Verdict::Oscillating { .. })
    }
}

/// Partial window averages `(n, a_n)` and the verdict drawn from their tail.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeanEstimate<S, V> {
    pub partials: Vec<(usize, V)>,
    pub verdict: Verdict<S, V>,
    pub tail_spread: S,
}

impl<S: Scalar, V: Value<S>> MeanEstimate<S, V> {
    /// Assemble an estimate from precomputed partials.
    pub fn from_partials(partials: Vec<(usize, V)>, scale: S, config: &MeanConfig<S>) -> Self {
        let k = config.tail.max(1).min(partials.len());
        let tail: Vec<&V> = partials[partials.len() - k..].iter().map(|(_, a)| a).collect();

        let mut spread = S::zero();
        for (i, a) in tail.iter().enumerate() {
            for b in &tail[i + 1..] {
                spread = S::max_of(spread, a.distance(b));
            }
        }

        let conv = config.convergence_tol.clone() * scale.clone();
        let osc = config.oscillation_threshold.clone() * scale.clone();
        let persistent = tail.len() >= 2 && tail.windows(2).all(|p| p[0].distance(p[1]) >= osc);

        let verdict = if tail.len() >= 2 && (spread < conv || scale == S::zero()) {
            Verdict::Converged {
                limit: tail[tail.len() - 1].clone(),
                residual: spread.clone(),
            }
        } else if persistent && spread >= osc {
            let reals = tail.iter().map(|a| a.real_part());
            let (lo, hi) = reals.fold((None::<S>, None::<S>), |(lo, hi), r| {
                (
                    Some(lo.map_or(r.clone(), |l| S::min_of(l, r.clone()))),
                    Some(hi.map_or(r.clone(), |h| S::max_of(h, r))),
                )
            });
            Verdict::Oscillating {
                liminf: lo.unwrap(),
                limsup: hi.unwrap(),
            }
        } else {
            Verdict::Undecided
        };

        MeanEstimate {
            partials,
            verdict,
            tail_spread: spread,
        }
    }

    /// Last partial average; the finite-scale value of the mean.
    pub fn last(&self) -> &V {
        &self.partials.last().expect("estimates hold at least one partial").1
    }

    /// Largest modulus among the trailing partials: the finite proxy for the
    /// limsup of a nonnegative trajectory.
    pub fn tail_max(&self, tail: usize) -> S {
        let k = tail.max(1).min(self.partials.len());
        self.partials[self.partials.len() - k..]
            .iter()
            .map(|(_, a)| a.modulus())
            .fold(S::zero(), S::max_of)
    }
}

fn max_modulus<S: Scalar, V: Value<S>>(values: &[V]) -> S {
    values.iter().map(|v| v.modulus()).fold(S::zero(), S::max_of)
}

/// Largest modulus over the union of the first `n_max` windows.
fn hull_scale<S: Scalar, V: Value<S>>(track: &Track<V>, schedule: &FolnerSchedule, n_max: usize) -> S {
    let mut spans: Vec<(i64, i64)> = schedule.windows()[..n_max]
        .iter()
        .map(|w| (w.start, w.end()))
        .collect();
    spans.sort_unstable();
    let mut merged: Vec<(i64, i64)> = Vec::new();
    for (a, b) in spans {
        match merged.last_mut() {
            Some(last) if a <= last.1 => last.1 = last.1.max(b),
            _ => merged.push((a, b)),
        }
    }
    merged
        .into_iter()
        .filter_map(|(a, b)| track.slice(Window::new(a, (b - a) as u64)).ok())
        .map(max_modulus::<S, V>)
        .fold(S::zero(), S::max_of)
}

/// Window averages `a_n = |B_n|⁻¹ Σ_{t∈B_n} h(t)` for `n = 1..=n_max`.
pub fn partial_means<S: Scalar, V: Value<S>>(
    samples: &Track<V>,
    schedule: &FolnerSchedule,
    n_max: usize,
    config: &MeanConfig<S>,
) -> Result<MeanEstimate<S, V>> {
    if n_max == 0 {
        return Err(Error::invalid("n_max", "need at least one window"));
    }
    let sums = window_sums::<S, V>(samples, schedule, n_max)?;
    let partials = sums
        .into_iter()
        .enumerate()
        .map(|(i, sum)| {
            let len = S::from_count(schedule.window(i + 1).unwrap().len);
            (i + 1, sum.divide_by(&len))
        })
        .collect();
    let scale = hull_scale(samples, schedule, n_max);
    Ok(MeanEstimate::from_partials(partials, scale, config))
}

/// Finite proxy for the upper mean of `|h|`: the largest of the trailing
/// `config.tail` partial means.
pub fn upper_mean<S: Scalar, V: Value<S>>(
    samples: &Track<V>,
    schedule: &FolnerSchedule,
    n_max: usize,
    config: &MeanConfig<S>,
) -> Result<S> {
    let modulus = samples.map(|v| v.modulus());
    let est = partial_means(&modulus, schedule, n_max, config)?;
    Ok(est.tail_max(config.tail))
}

/// Shifts per block of the sliding sum; each block starts from a fresh sum.
const SLIDE_BLOCK: usize = 256;

/// `sup_s |B|⁻¹ Σ_{t∈B+s} h(t)` over the scanned shifts, with the first
/// shift attaining it.
///
/// Window sums slide by one coordinate between neighbouring shifts, which is
/// exact for rational scalars.
pub fn uniform_mean_mn<S: Scalar>(
    samples: &Track<S>,
    window: Window,
    shifts: ShiftRange,
) -> Result<(S, i64)> {
    if shifts.is_empty() {
        return Err(Error::EmptyShiftRange);
    }
    samples.check_covers(window.shifted(shifts.lo))?;
    samples.check_covers(window.shifted(shifts.hi))?;
    let len = S::from_count(window.len);
    let shift_list: Vec<i64> = shifts.iter().collect();
    let averages: Vec<S> = shift_list
        .par_chunks(SLIDE_BLOCK)
        .flat_map_iter(|block| {
            let mut sum = sum_slice::<S, S>(samples.slice(window.shifted(block[0])).unwrap());
            let mut out = Vec::with_capacity(block.len());
            out.push(sum.clone() / len.clone());
            for &s in &block[1..] {
                let prev = window.shifted(s - 1);
                sum = sum + samples.get(prev.end()).unwrap().clone() - samples.get(prev.start).unwrap().clone();
                out.push(sum.clone() / len.clone());
            }
            out
        })
        .collect();
    let mut best = (averages[0].clone(), shifts.lo);
    for (i, a) in averages.into_iter().enumerate().skip(1) {
        if a > best.0 {
            best = (a, shifts.lo + i as i64);
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilizationReport<S> {
    pub first_n_below: usize,
    pub all_later_below: bool,
    /// `min_{N' ≥ N₀} (ε + slack − M̄_{N'})`; nonnegative when every later
    /// level stays below.
    pub margin: S,
    pub slack: S,
    pub levels: Vec<(usize, S)>,
}

/// Locate the first `N` with `M̄_N(|h|) < ε` and check that every later
/// scanned level stays below `ε + slack`.
///
/// Without an explicit slack, `2·sup|h|/|B_{N₀}|` is used.
pub fn stabilization_check<S: Scalar, V: Value<S>>(
    samples: &Track<V>,
    schedule: &FolnerSchedule,
    epsilon: S,
    shifts: ShiftRange,
    slack: Option<S>,
) -> Result<StabilizationReport<S>> {
    let modulus = samples.map(|v| v.modulus());
    let mut levels = Vec::with_capacity(schedule.len());
    for (i, w) in schedule.windows().iter().enumerate() {
        let (value, _) = uniform_mean_mn(&modulus, *w, shifts)?;
        levels.push((i + 1, value));
    }
    let first = levels.iter().position(|(_, v)| *v < epsilon);
    let Some(first) = first else {
        let smallest = levels
            .iter()
            .map(|(_, v)| v.clone())
            .reduce(S::min_of)
            .unwrap_or_else(S::zero);
        return Err(Error::NeverBelow {
            epsilon: epsilon.to_f64_lossy(),
            smallest: smallest.to_f64_lossy(),
        });
    };
    let slack = slack.unwrap_or_else(|| {
        let sup = max_modulus::<S, V>(samples.values());
        let len = S::from_count(schedule.windows()[first].len);
        S::from_count(2) * sup / len
    });
    let bound = epsilon + slack.clone();
    let margin = levels[first..]
        .iter()
        .map(|(_, v)| bound.clone() - v.clone())
        .reduce(S::min_of)
        .unwrap();
    Ok(StabilizationReport {
        first_n_below: levels[first].0,
        all_later_below: margin >= S::zero(),
        margin,
        slack,
        levels,
    })
}
