use std::sync::Arc;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::systems::substitution::SubstitutionPoint;
use crate::systems::Letter;

#[derive(Debug)]
pub enum PointKind {
    Periodic {
        pattern: Vec<Letter>,
    },
    Substitution {
        system: String,
        point: SubstitutionPoint,
    },
    /// `x(k) = 1` iff `frac(k·alpha + rho) ∈ [1 − alpha, 1)`.
    Sturmian {
        alpha: f64,
        rho: f64,
    },
    /// Independent letters, `P(x(k) = 1) = p`, keyed by `(seed, k)`.
    Bernoulli {
        p: f64,
        seed: u64,
    },
    /// `y(k) = 1` iff `k ≥ 0`.
    Step,
    /// `x(k) = 1` iff `k ∈ [2ⁿ, 2ⁿ + 2ⁿ⁻¹)` for some `n ≥ 1`, for `k > 0`;
    /// `fill` on `k ≤ 0`.
    Block {
        fill: Letter,
    },
}

/// Parameters of a point, as reported in outputs.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PointSpec {
    Periodic { pattern: String },
    Substitution { system: String, rules: Vec<String>, seed: String, power: u32 },
    Sturmian { alpha: f64, rho: f64 },
    Bernoulli { p: f64, seed: u64 },
    Step,
    Block { fill: String },
}

/// A two-sided symbolic sequence evaluated lazily and deterministically.
///
/// Shifting is cheap: `shift(x, t)` reads `x` at `k + t`.
#[derive(Debug, Clone)]
pub struct PointGen {
    kind: Arc<PointKind>,
    alphabet: Arc<Vec<String>>,
    offset: i64,
}

fn binary() -> Arc<Vec<String>> {
    Arc::new(vec!["0".to_string(), "1".to_string()])
}

impl PointGen {
    /// Periodic point `…ABAB…` with `pattern[0]` at coordinate 0; letters
    /// are the distinct characters in order of first appearance.
    pub fn periodic(pattern: &str) -> Result<Self> {
        let mut alphabet: Vec<String> = Vec::new();
        let mut letters = Vec::new();
        for c in pattern.chars() {
            let s = c.to_string();
            let idx = match alphabet.iter().position(|a| *a == s) {
                Some(i) => i,
                None => {
                    alphabet.push(s);
                    alphabet.len() - 1
                }
            };
            letters.push(idx as Letter);
        }
        if letters.is_empty() {
            return Err(Error::invalid("pattern", "periodic pattern must be nonempty"));
        }
        if alphabet.len() > Letter::MAX as usize {
            return Err(Error::invalid("pattern", "too many distinct letters"));
        }
        Ok(Self::from_kind(PointKind::Periodic { pattern: letters }, alphabet))
    }

    pub fn substitution(
        system: &str,
        alphabet: Vec<String>,
        rules: Vec<Vec<Letter>>,
        seed: (Letter, Letter),
    ) -> Result<Self> {
        if alphabet.len() != rules.len() {
            return Err(Error::invalid("rules", "one image per alphabet letter"));
        }
        let point = SubstitutionPoint::new(rules, seed)?;
        Ok(Self::from_kind(
            PointKind::Substitution {
                system: system.to_string(),
                point,
            },
            alphabet,
        ))
    }

    /// `a ↦ ab, b ↦ a`, seed `a|a`.
    pub fn fibonacci() -> Self {
        Self::substitution(
            "fibonacci",
            vec!["a".into(), "b".into()],
            vec![vec![0, 1], vec![0]],
            (0, 0),
        )
        .expect("fibonacci preset is valid")
    }

    /// `0 ↦ 01, 1 ↦ 10`, seed `0|0`.
    pub fn thue_morse() -> Self {
        Self::substitution(
            "thue-morse",
            vec!["0".into(), "1".into()],
            vec![vec![0, 1], vec![1, 0]],
            (0, 0),
        )
        .expect("thue-morse preset is valid")
    }

    /// `a ↦ ab, b ↦ aa`, seed `a|a`.
    pub fn period_doubling() -> Self {
        Self::substitution(
            "period-doubling",
            vec!["a".into(), "b".into()],
            vec![vec![0, 1], vec![0, 0]],
            (0, 0),
        )
        .expect("period-doubling preset is valid")
    }

    pub fn sturmian(alpha: f64, rho: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::invalid("alpha", format!("must lie in (0, 1), got {alpha}")));
        }
        if !rho.is_finite() {
            return Err(Error::invalid("rho", "must be finite"));
        }
        Ok(Self::from_kind(PointKind::Sturmian { alpha, rho }, binary()))
    }

    pub fn bernoulli(p: f64, seed: u64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::invalid("p", format!("must lie in (0, 1), got {p}")));
        }
        Ok(Self::from_kind(PointKind::Bernoulli { p, seed }, binary()))
    }

    pub fn step() -> Self {
        Self::from_kind(PointKind::Step, binary())
    }

    pub fn block() -> Self {
        Self::block_with_fill(0).unwrap()
    }

    pub fn block_with_fill(fill: Letter) -> Result<Self> {
        if fill > 1 {
            return Err(Error::invalid("fill", "fill letter must be 0 or 1"));
        }
        Ok(Self::from_kind(PointKind::Block { fill }, binary()))
    }

    fn from_kind(kind: PointKind, alphabet: impl Into<Arc<Vec<String>>>) -> Self {
        PointGen {
            kind: Arc::new(kind),
            alphabet: alphabet.into(),
            offset: 0,
        }
    }

    pub fn kind(&self) -> &PointKind {
        &self.kind
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet.len()
    }

    pub fn letter_index(&self, name: &str) -> Option<Letter> {
        self.alphabet.iter().position(|a| a == name).map(|i| i as Letter)
    }

    /// Accumulated shift relative to the constructed point.
    pub fn offset(&self) -> i64 {
        self.offset
    }

    /// `(t·x)(k) = x(k + t)`.
    pub fn shift(&self, t: i64) -> Self {
        PointGen {
            kind: Arc::clone(&self.kind),
            alphabet: Arc::clone(&self.alphabet),
            offset: self.offset + t,
        }
    }

    pub fn at(&self, k: i64) -> Letter {
        self.eval_window(k, k)[0]
    }

    /// Letters `x(a..=b)`; empty when `a > b`.
    pub fn eval_window(&self, a: i64, b: i64) -> Vec<Letter> {
        if a > b {
            return Vec::new();
        }
        let (a, b) = (a + self.offset, b + self.offset);
        match &*self.kind {
            PointKind::Periodic { pattern } => {
                let p = pattern.len() as i64;
                (a..=b).map(|k| pattern[k.rem_euclid(p) as usize]).collect()
            }
            PointKind::Substitution { point, .. } => point.window(a, b),
            PointKind::Sturmian { alpha, rho } => {
                let lower = 1.0 - alpha;
                (a..=b)
                    .map(|k| {
                        let v = (k as f64).mul_add(*alpha, *rho);
                        let frac = v - v.floor();
                        Letter::from(frac >= lower && frac < 1.0)
                    })
                    .collect()
            }
            PointKind::Bernoulli { p, seed } => bernoulli_window(*p, *seed, a, b),
            PointKind::Step => (a..=b).map(|k| Letter::from(k >= 0)).collect(),
            PointKind::Block { fill } => (a..=b)
                .map(|k| if k <= 0 { *fill } else { Letter::from(in_block(k)) })
                .collect(),
        }
    }

    /// Human-readable preset-style name.
    pub fn name(&self) -> String {
        let base = match &*self.kind {
            PointKind::Periodic { pattern } => format!("periodic:{}", self.render(pattern)),
            PointKind::Substitution { system, .. } => system.clone(),
            PointKind::Sturmian { alpha, rho } => {
                if *rho == 0.0 {
                    format!("sturmian:{alpha}")
                } else {
                    format!("sturmian:{alpha}:{rho}")
                }
            }
            PointKind::Bernoulli { p, seed } => format!("bernoulli:{p}:{seed}"),
            PointKind::Step => "step".to_string(),
            PointKind::Block { .. } => "block".to_string(),
        };
        if self.offset == 0 {
            base
        } else {
            format!("{base}@{}", self.offset)
        }
    }

    pub fn spec(&self) -> PointSpec {
        match &*self.kind {
            PointKind::Periodic { pattern } => PointSpec::Periodic {
                pattern: self.render(pattern),
            },
            PointKind::Substitution { system, point } => PointSpec::Substitution {
                system: system.clone(),
                rules: point
                    .rules()
                    .iter()
                    .enumerate()
                    .map(|(a, w)| format!("{}->{}", self.alphabet[a], self.render(w)))
                    .collect(),
                seed: format!(
                    "{}|{}",
                    self.alphabet[point.seed().0 as usize],
                    self.alphabet[point.seed().1 as usize]
                ),
                power: point.power(),
            },
            PointKind::Sturmian { alpha, rho } => PointSpec::Sturmian {
                alpha: *alpha,
                rho: *rho,
            },
            PointKind::Bernoulli { p, seed } => PointSpec::Bernoulli { p: *p, seed: *seed },
            PointKind::Step => PointSpec::Step,
            PointKind::Block { fill } => PointSpec::Block {
                fill: self.alphabet[*fill as usize].clone(),
            },
        }
    }

    pub fn render(&self, letters: &[Letter]) -> String {
        letters.iter().map(|&l| self.alphabet[l as usize].as_str()).collect()
    }
}

fn in_block(k: i64) -> bool {
    debug_assert!(k > 0);
    let n = 63 - k.leading_zeros() as i64;
    n >= 1 && k - (1 << n) < (1 << (n - 1))
}

/// Counter-mode draws: coordinate `k` always reads the same 64-bit word of
/// the ChaCha stream, so windows can be evaluated in any order.
fn bernoulli_window(p: f64, seed: u64, a: i64, b: i64) -> Vec<Letter> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pos = (a as i128 - i64::MIN as i128) as u128;
    rng.set_word_pos(2 * pos);
    (a..=b)
        .map(|_| {
            let u = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
            Letter::from(u < p)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn periodic_window() {
        let x = PointGen::periodic("AB").unwrap();
        assert_eq!(x.eval_window(0, 3), vec![0, 1, 0, 1]);
        assert_eq!(x.eval_window(-1, -1), vec![1]);
        assert_eq!(x.render(&x.eval_window(0, 3)), "ABAB");
    }

    #[test]
    fn block_point_follows_dyadic_blocks() {
        let x = PointGen::block();
        assert_eq!(x.eval_window(2, 6), vec![1, 0, 1, 1, 0]);
        assert_eq!(x.eval_window(1, 16), vec![0, 1, 0, 1, 1, 0, 0, 1, 1, 1, 1, 0, 0, 0, 0, 1]);
        assert_eq!(x.eval_window(-3, 0), vec![0; 4]);
        let filled = PointGen::block_with_fill(1).unwrap();
        assert_eq!(filled.eval_window(-3, 0), vec![1; 4]);
    }

    #[test]
    fn sturmian_golden_window() {
        let alpha = (5f64.sqrt() - 1.0) / 2.0;
        let x = PointGen::sturmian(alpha, 0.0).unwrap();
        assert_eq!(x.eval_window(0, 4), vec![0, 1, 0, 1, 1]);
        assert!(PointGen::sturmian(1.5, 0.0).is_err());
    }

    #[test]
    fn step_shift_convention() {
        let y = PointGen::step().shift(-5);
        // (t·y)(k) = y(k + t)
        assert_eq!(y.eval_window(0, 0), vec![0]);
        assert_eq!(y.eval_window(5, 5), vec![1]);
        assert_eq!(y.eval_window(-6, -6), vec![0]);
        assert_eq!(PointGen::step().shift(5).eval_window(-5, -5), vec![1]);
    }

    #[test]
    fn bernoulli_is_reproducible_and_order_independent() {
        let x = PointGen::bernoulli(0.5, 42).unwrap();
        let y = PointGen::bernoulli(0.5, 42).unwrap();
        let w = x.eval_window(-1000, 1000);
        for k in [-1000_i64, -17, 0, 3, 999] {
            assert_eq!(y.at(k), w[(k + 1000) as usize]);
        }
        assert_eq!(y.eval_window(-1000, 1000), w);
        let ones = w.iter().filter(|&&l| l == 1).count();
        assert!((ones as f64 / w.len() as f64 - 0.5).abs() < 0.05);
        let z = PointGen::bernoulli(0.5, 43).unwrap();
        assert_ne!(z.eval_window(-1000, 1000), w);
    }

    #[test]
    fn thue_morse_prefix() {
        let x = PointGen::thue_morse();
        assert_eq!(x.eval_window(0, 7), vec![0, 1, 1, 0, 1, 0, 0, 1]);
    }

    #[test]
    fn period_doubling_prefix() {
        let x = PointGen::period_doubling();
        // abaaabab
        assert_eq!(x.render(&x.eval_window(0, 7)), "abaaabab");
    }
}
