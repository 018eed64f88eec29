use serde::Serialize;

use crate::mean::Track;
use crate::scalar::Scalar;
use crate::systems::{Letter, PointGen};

/// Weighted-mismatch metric on configurations:
/// `d(x, y) = C⁻¹ Σ_{|k|≤K} 2^{-|k|}·[x(k) ≠ y(k)]`.
///
/// Weights are dyadic, so with an exact scalar every value is exact.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CylinderMetric<S> {
    truncation: usize,
    weights: Vec<S>,
    normalizer: S,
}

impl<S: Scalar> CylinderMetric<S> {
    pub fn new(truncation: usize) -> Self {
        let two = S::from_count(2);
        let mut weights = vec![S::one()];
        for _ in 0..truncation {
            let next = weights.last().unwrap().clone() / two.clone();
            weights.push(next);
        }
        let normalizer = weights
            .iter()
            .skip(1)
            .fold(weights[0].clone(), |acc, w| acc + w.clone() + w.clone());
        CylinderMetric {
            truncation,
            weights,
            normalizer,
        }
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn normalizer(&self) -> &S {
        &self.normalizer
    }

    /// Weight `2^{-|k|}`.
    pub fn weight(&self, k: i64) -> &S {
        &self.weights[k.unsigned_abs() as usize]
    }

    /// Distance between two letter windows centred at index `K`.
    pub fn distance_letters(&self, x: &[Letter], y: &[Letter]) -> S {
        let kk = self.truncation as i64;
        debug_assert_eq!(x.len(), 2 * self.truncation + 1);
        let mut acc = S::zero();
        for k in -kk..=kk {
            let i = (k + kk) as usize;
            if x[i] != y[i] {
                acc = acc + self.weight(k).clone();
            }
        }
        acc / self.normalizer.clone()
    }

    /// `d(x, y)` on the coordinates `[-K, K]`.
    pub fn distance(&self, x: &PointGen, y: &PointGen) -> S {
        let kk = self.truncation as i64;
        self.distance_letters(&x.eval_window(-kk, kk), &y.eval_window(-kk, kk))
    }

    /// `s ↦ d(s·x, s·y)` for `s ∈ [lo, hi)`.
    pub fn orbit_distance_track(&self, x: &PointGen, y: &PointGen, lo: i64, hi: i64) -> Track<S> {
        if hi <= lo {
            return Track::new(lo, Vec::new());
        }
        let kk = self.truncation as i64;
        let xs = x.eval_window(lo - kk, hi - 1 + kk);
        let ys = y.eval_window(lo - kk, hi - 1 + kk);
        let mismatch: Vec<bool> = xs.iter().zip(&ys).map(|(a, b)| a != b).collect();
        let width = 2 * self.truncation + 1;
        let values = (0..(hi - lo) as usize)
            .map(|i| {
                let mut acc = S::zero();
                for (j, &m) in mismatch[i..i + width].iter().enumerate() {
                    if m {
                        acc = acc + self.weight(j as i64 - kk).clone();
                    }
                }
                acc / self.normalizer.clone()
            })
            .collect();
        Track::new(lo, values)
    }

    /// Mismatch track `s ↦ d(s·x, (t + s)·x)` for `s ∈ [lo, hi)`.
    pub fn mismatch_track(&self, x: &PointGen, t: i64, lo: i64, hi: i64) -> Track<S> {
        self.orbit_distance_track(x, &x.shift(t), lo, hi)
    }

    /// `max_{|s|≤S} d(s·x, s·y)`: a lower bound for the sup-metric,
    /// nondecreasing in the horizon.
    pub fn sup_metric_lb(&self, x: &PointGen, y: &PointGen, horizon: u64) -> S {
        let h = horizon as i64;
        self.orbit_distance_track(x, y, -h, h + 1)
            .values()
            .iter()
            .cloned()
            .fold(S::zero(), S::max_of)
    }
}

/// `d(x, y)` with truncation `K`.
pub fn metric_d<S: Scalar>(x: &PointGen, y: &PointGen, truncation: usize) -> S {
    CylinderMetric::new(truncation).distance(x, y)
}

/// Lower bound for `sup_s d(s·x, s·y)` over `|s| ≤ horizon`.
pub fn sup_metric_lb<S: Scalar>(x: &PointGen, y: &PointGen, horizon: u64, truncation: usize) -> S {
    CylinderMetric::new(truncation).sup_metric_lb(x, y, horizon)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    type Q = Ratio<i64>;

    #[test]
    fn identical_and_opposite_points() {
        let x = PointGen::periodic("AB").unwrap();
        assert_eq!(metric_d::<Q>(&x, &x, 8), Q::from_integer(0));
        assert_eq!(metric_d::<Q>(&x, &x.shift(1), 8), Q::from_integer(1));
        assert_eq!(metric_d::<f64>(&x, &x.shift(1), 16), 1.0);
    }

    #[test]
    fn normalizer_matches_closed_form() {
        let m = CylinderMetric::<Q>::new(3);
        // 1 + 2(1/2 + 1/4 + 1/8)
        assert_eq!(*m.normalizer(), Q::new(11, 4));
    }

    #[test]
    fn sup_metric_on_periodic_and_step() {
        let x = PointGen::periodic("AB").unwrap();
        for s in [0, 5, 40] {
            assert_eq!(sup_metric_lb::<Q>(&x, &x.shift(2), s, 8), Q::from_integer(0));
        }
        let y = PointGen::step();
        let v = sup_metric_lb::<Q>(&y, &y.shift(1), 100, 8);
        // single disagreeing site (-1) seen at the centre of the window
        let m = CylinderMetric::<Q>::new(8);
        assert_eq!(v, Q::from_integer(1) / m.normalizer().clone());
        let small = sup_metric_lb::<Q>(&y, &y.shift(1), 0, 8);
        assert_eq!(small, Q::new(1, 2) / m.normalizer().clone());
    }

    #[test]
    fn orbit_track_matches_pointwise_distance() {
        let x = PointGen::fibonacci();
        let m = CylinderMetric::<Q>::new(5);
        let track = m.mismatch_track(&x, 3, -20, 20);
        for (s, v) in track.iter() {
            assert_eq!(*v, m.distance(&x.shift(s), &x.shift(s + 3)));
        }
    }
}
