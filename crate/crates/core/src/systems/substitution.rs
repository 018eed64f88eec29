use std::sync::RwLock;

use crate::error::{Error, Result};
use crate::systems::Letter;

/// Two-sided fixed point of a power of a substitution, grown on demand.
///
/// The seed pair `(left, right)` sits at coordinates `(-1, 0)`. With `p` the
/// smallest power such that `σᵖ(right)` starts with `right` and `σᵖ(left)`
/// ends with `left`, the right half is the limit of `σᵖⁿ(right)` and the
/// left half the limit of `σᵖⁿ(left)`.
#[derive(Debug)]
pub struct SubstitutionPoint {
    rules: Vec<Vec<Letter>>,
    seed: (Letter, Letter),
    power: u32,
    cache: RwLock<Halves>,
}

#[derive(Debug, Clone)]
struct Halves {
    right: Vec<Letter>,
    /// Forward order; coordinate `k < 0` lives at `left[left.len() + k]`.
    left: Vec<Letter>,
}

const MAX_POWER: u32 = 1024;

impl SubstitutionPoint {
    pub fn new(rules: Vec<Vec<Letter>>, seed: (Letter, Letter)) -> Result<Self> {
        let size = rules.len();
        if size == 0 {
            return Err(Error::invalid("rules", "substitution needs at least one letter"));
        }
        if rules.iter().any(|w| w.is_empty()) {
            return Err(Error::invalid("rules", "images must be nonempty"));
        }
        if rules.iter().flatten().any(|&l| l as usize >= size) {
            return Err(Error::invalid("rules", "image uses a letter outside the alphabet"));
        }
        if seed.0 as usize >= size || seed.1 as usize >= size {
            return Err(Error::invalid("seed", "seed letter outside the alphabet"));
        }

        let first = |a: Letter| rules[a as usize][0];
        let last = |a: Letter| *rules[a as usize].last().unwrap();
        let mut power = None;
        let (mut l, mut r) = seed;
        for p in 1..=MAX_POWER {
            l = last(l);
            r = first(r);
            if l == seed.0 && r == seed.1 {
                power = Some(p);
                break;
            }
        }
        let power = power.ok_or_else(|| {
            Error::invalid("seed", "no power of the substitution fixes the seed pair")
        })?;

        if !is_legal(&rules, seed) {
            return Err(Error::invalid("seed", "seed pair does not occur in any iterate"));
        }

        let point = SubstitutionPoint {
            rules,
            seed,
            power,
            cache: RwLock::new(Halves {
                right: vec![seed.1],
                left: vec![seed.0],
            }),
        };
        // both halves must actually grow under iteration
        let probe = point.iterate(&[seed.1], 8);
        let probe_left = point.iterate(&[seed.0], 8);
        if probe.len() < 2 || probe_left.len() < 2 {
            return Err(Error::invalid("rules", "seed letters do not grow under iteration"));
        }
        Ok(point)
    }

    pub fn rules(&self) -> &[Vec<Letter>] {
        &self.rules
    }

    pub fn seed(&self) -> (Letter, Letter) {
        self.seed
    }

    pub fn power(&self) -> u32 {
        self.power
    }

    /// Apply the rules once.
    pub fn apply(&self, word: &[Letter]) -> Vec<Letter> {
        apply(&self.rules, word)
    }

    fn iterate(&self, word: &[Letter], times: u32) -> Vec<Letter> {
        let mut w = word.to_vec();
        for _ in 0..times * self.power {
            w = apply(&self.rules, &w);
        }
        w
    }

    /// Letters on the inclusive range `[a, b]`.
    pub fn window(&self, a: i64, b: i64) -> Vec<Letter> {
        self.ensure(a.min(0), b.max(-1));
        let halves = self.cache.read().unwrap();
        (a..=b)
            .map(|k| {
                if k >= 0 {
                    halves.right[k as usize]
                } else {
                    halves.left[(halves.left.len() as i64 + k) as usize]
                }
            })
            .collect()
    }

    fn ensure(&self, lo: i64, hi: i64) {
        let need_right = (hi + 1).max(0) as usize;
        let need_left = (-lo).max(0) as usize;
        {
            let h = self.cache.read().unwrap();
            if h.right.len() >= need_right && h.left.len() >= need_left {
                return;
            }
        }
        let mut h = self.cache.write().unwrap();
        while h.right.len() < need_right {
            h.right = self.iterate(&h.right, 1);
        }
        while h.left.len() < need_left {
            h.left = self.iterate(&h.left, 1);
        }
    }
}

fn apply(rules: &[Vec<Letter>], word: &[Letter]) -> Vec<Letter> {
    let mut out = Vec::with_capacity(word.len() * 2);
    for &l in word {
        out.extend_from_slice(&rules[l as usize]);
    }
    out
}

/// The pair occurs in `σⁿ(a)` for some letter `a` and some `n`.
fn is_legal(rules: &[Vec<Letter>], pair: (Letter, Letter)) -> bool {
    for a in 0..rules.len() as Letter {
        let mut w = vec![a];
        for _ in 0..64 {
            if w.windows(2).any(|p| p[0] == pair.0 && p[1] == pair.1) {
                return true;
            }
            if w.len() > 1 << 16 {
                break;
            }
            let next = apply(rules, &w);
            if next.len() == w.len() && next == w {
                break;
            }
            w = next;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fibonacci() -> SubstitutionPoint {
        SubstitutionPoint::new(vec![vec![0, 1], vec![0]], (0, 0)).unwrap()
    }

    #[test]
    fn fibonacci_power_and_prefix() {
        let p = fibonacci();
        assert_eq!(p.power(), 2);
        // abaababaabaab
        assert_eq!(p.window(0, 12), vec![0, 1, 0, 0, 1, 0, 1, 0, 0, 1, 0, 0, 1]);
    }

    #[test]
    fn fixed_point_is_fixed() {
        let p = fibonacci();
        let right = p.window(0, 400);
        let image = p.apply(&right);
        assert_eq!(&image[..400], &p.window(0, 399)[..]);
        // the left half is only fixed by the power that fixes the seed
        let mut image = p.window(-300, -1);
        for _ in 0..p.power() {
            image = p.apply(&image);
        }
        let n = image.len() as i64;
        assert_eq!(image, p.window(-n, -1));
    }

    #[test]
    fn illegal_or_unfixable_seeds_are_rejected() {
        // "bb" never occurs in the Fibonacci language
        assert!(SubstitutionPoint::new(vec![vec![0, 1], vec![0]], (1, 1)).is_err());
        // right seed b: first letters cycle b -> a -> a, never back to b
        assert!(SubstitutionPoint::new(vec![vec![0, 1], vec![0]], (0, 1)).is_err());
        assert!(SubstitutionPoint::new(vec![vec![0, 2], vec![0]], (0, 0)).is_err());
    }

    #[test]
    fn windows_are_order_independent() {
        let a = fibonacci();
        let b = fibonacci();
        let far = a.window(-5000, 5000);
        let _ = b.window(-3, 3);
        assert_eq!(b.window(-5000, 5000), far);
    }
}
