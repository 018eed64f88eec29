use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Half-open integer interval `[start, start + len)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    pub start: i64,
    pub len: u64,
}

impl Window {
    pub fn new(start: i64, len: u64) -> Self {
        Window { start, len }
    }

    /// Exclusive end.
    pub fn end(&self) -> i64 {
        self.start + self.len as i64
    }

    pub fn shifted(&self, s: i64) -> Window {
        Window {
            start: self.start + s,
            len: self.len,
        }
    }

    pub fn contains(&self, t: i64) -> bool {
        t >= self.start && t < self.end()
    }

    /// Intersection with the half-open range `[lo, hi)`; `None` when empty.
    pub fn clamp(&self, lo: i64, hi: i64) -> Option<Window> {
        let a = self.start.max(lo);
        let b = self.end().min(hi);
        (a < b).then(|| Window::new(a, (b - a) as u64))
    }
}

/// Inclusive range of shifts `lo..=hi` scanned by the uniform means.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftRange {
    pub lo: i64,
    pub hi: i64,
}

impl ShiftRange {
    pub fn new(lo: i64, hi: i64) -> Self {
        ShiftRange { lo, hi }
    }

    pub fn symmetric(radius: u64) -> Self {
        ShiftRange {
            lo: -(radius as i64),
            hi: radius as i64,
        }
    }

    pub fn single(s: i64) -> Self {
        ShiftRange { lo: s, hi: s }
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }

    pub fn contains(&self, s: i64) -> bool {
        s >= self.lo && s <= self.hi
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi
    }

    pub fn count(&self) -> u64 {
        if self.is_empty() {
            0
        } else {
            (self.hi - self.lo) as u64 + 1
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ScheduleKind {
    /// `B_n = [0, base·n)`.
    Intervals { base: u64 },
    /// `B_n = [1, 2^n]`.
    Dyadic,
    /// `B_n = [0, n]` for even `n`, `[-n, 0)` for odd `n`.
    Alternating,
    Custom,
}

/// Følner windows `B_1, B_2, …` (stored 0-based, addressed 1-based).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FolnerSchedule {
    pub kind: ScheduleKind,
    windows: Vec<Window>,
}

impl FolnerSchedule {
    pub fn intervals(base: u64, n_max: usize) -> Result<Self> {
        if base == 0 {
            return Err(Error::invalid("base", "interval base must be positive"));
        }
        check_count(n_max)?;
        let windows = (1..=n_max as u64).map(|n| Window::new(0, base * n)).collect();
        Ok(FolnerSchedule {
            kind: ScheduleKind::Intervals { base },
            windows,
        })
    }

    pub fn dyadic(n_max: usize) -> Result<Self> {
        check_count(n_max)?;
        if n_max > 40 {
            return Err(Error::invalid("n_max", "dyadic schedules stop at n = 40"));
        }
        let windows = (1..=n_max as u32).map(|n| Window::new(1, 1u64 << n)).collect();
        Ok(FolnerSchedule {
            kind: ScheduleKind::Dyadic,
            windows,
        })
    }

    pub fn alternating(n_max: usize) -> Result<Self> {
        check_count(n_max)?;
        let windows = (1..=n_max as i64)
            .map(|n| {
                if n % 2 == 0 {
                    Window::new(0, n as u64 + 1)
                } else {
                    Window::new(-n, n as u64)
                }
            })
            .collect();
        Ok(FolnerSchedule {
            kind: ScheduleKind::Alternating,
            windows,
        })
    }

    /// Arbitrary windows; lengths must be nondecreasing and unbounded in
    /// spirit, which a finite list can only approximate.
    pub fn custom(windows: Vec<Window>) -> Result<Self> {
        check_count(windows.len())?;
        if windows.iter().any(|w| w.len == 0) {
            return Err(Error::invalid("windows", "every window must be nonempty"));
        }
        if windows.windows(2).any(|p| p[1].len < p[0].len) {
            return Err(Error::invalid("windows", "window lengths must not decrease"));
        }
        Ok(FolnerSchedule {
            kind: ScheduleKind::Custom,
            windows,
        })
    }

    /// Symmetric windows `[-n·base, n·base]`.
    pub fn symmetric(base: u64, n_max: usize) -> Result<Self> {
        check_count(n_max)?;
        let windows = (1..=n_max as u64)
            .map(|n| Window::new(-((n * base) as i64), 2 * n * base + 1))
            .collect();
        Self::custom(windows)
    }

    pub fn len(&self) -> usize {
        self.windows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.windows.is_empty()
    }

    /// `B_n`, 1-based.
    pub fn window(&self, n: usize) -> Option<Window> {
        n.checked_sub(1).and_then(|i| self.windows.get(i)).copied()
    }

    pub fn windows(&self) -> &[Window] {
        &self.windows
    }

    /// Schedule restricted to `B_1..B_{n_max}`.
    pub fn truncated(&self, n_max: usize) -> Result<Self> {
        if n_max == 0 || n_max > self.windows.len() {
            return Err(Error::invalid(
                "n_max",
                format!("must lie in 1..={}", self.windows.len()),
            ));
        }
        Ok(FolnerSchedule {
            kind: self.kind.clone(),
            windows: self.windows[..n_max].to_vec(),
        })
    }

    /// Smallest half-open range `[lo, hi)` containing every window.
    pub fn hull(&self) -> (i64, i64) {
        let lo = self.windows.iter().map(|w| w.start).min().unwrap_or(0);
        let hi = self.windows.iter().map(|w| w.end()).max().unwrap_or(0);
        (lo, hi)
    }

    pub fn largest(&self) -> Window {
        *self
            .windows
            .iter()
            .max_by_key(|w| w.len)
            .expect("schedules are nonempty")
    }

    /// Short deterministic description embedded in reports.
    pub fn fingerprint(&self) -> String {
        let (lo, hi) = self.hull();
        let kind = match &self.kind {
            ScheduleKind::Intervals { base } => format!("intervals(base={base})"),
            ScheduleKind::Dyadic => "dyadic".to_string(),
            ScheduleKind::Alternating => "alternating".to_string(),
            ScheduleKind::Custom => "custom".to_string(),
        };
        format!("{kind};n_max={};hull=[{lo},{hi})", self.windows.len())
    }
}

fn check_count(n_max: usize) -> Result<()> {
    if n_max == 0 {
        Err(Error::invalid("n_max", "schedule needs at least one window"))
    } else {
        Ok(())
    }
}
