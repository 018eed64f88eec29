use serde::Serialize;

use crate::almostper::scan::{scan_values, AlmostPeriodScan, ScanBudget, ScanKind};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::systems::PointGen;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Evidence {
    EvidenceFor,
    EvidenceAgainst,
    Undecided,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassifyConfig<S> {
    pub eps_grid: Vec<S>,
    /// Shifts `t ∈ [-T, T]` scanned.
    pub scan_range: u64,
    /// Evidence-for requires `max_gap ≤ gap_threshold · 2T` at every `ε`.
    pub gap_threshold: f64,
}

impl<S: Scalar> ClassifyConfig<S> {
    pub fn new(scan_range: u64) -> Self {
        let hundredth = |n: u64| S::from_count(n) / S::from_count(100);
        ClassifyConfig {
            eps_grid: vec![hundredth(1), hundredth(5), hundredth(10), hundredth(20)],
            scan_range,
            gap_threshold: 0.2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KindReport<S> {
    pub kind: ScanKind,
    pub scans: Vec<AlmostPeriodScan<S>>,
    /// Verdict read off the scans alone.
    pub raw_verdict: Evidence,
    /// Verdict after the seminorm hierarchy is imposed.
    pub verdict: Evidence,
}

/// Finite-scale evidence for mean, Weyl and Bohr almost periodicity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassificationReport<S> {
    pub point: String,
    pub scan_range: u64,
    pub gap_threshold: f64,
    pub kinds: Vec<KindReport<S>>,
}

impl<S> ClassificationReport<S> {
    pub fn verdict(&self, kind: ScanKind) -> Evidence {
        self.kinds
            .iter()
            .find(|k| k.kind == kind)
            .map(|k| k.verdict)
            .unwrap_or(Evidence::Undecided)
    }
}

fn raw_verdict<S: Scalar>(kind: ScanKind, scans: &[AlmostPeriodScan<S>], threshold: f64, range: u64) -> Evidence {
    let width = 2.0 * range as f64;
    if scans.iter().all(|s| s.max_gap as f64 <= threshold * width) {
        return Evidence::EvidenceFor;
    }
    let trivial = scans.iter().any(|s| s.only_trivial());
    let settled = match kind {
        // a failing scan only counts when most of the means actually settled
        ScanKind::Mean => scans
            .first()
            .and_then(|s| s.converged_fraction())
            .is_some_and(|f| f > 0.5),
        ScanKind::Weyl | ScanKind::Bohr => true,
    };
    if trivial && settled {
        Evidence::EvidenceAgainst
    } else {
        Evidence::Undecided
    }
}

/// Impose Bohr ⇒ Weyl ⇒ Mean: a stronger kind keeps evidence-for only if
/// every weaker kind has it, and evidence-against propagates upwards.
pub(crate) fn enforce_hierarchy(raw: [Evidence; 3]) -> [Evidence; 3] {
    let mut out = raw;
    for i in 1..3 {
        let weaker = out[i - 1];
        if out[i] == Evidence::EvidenceFor && weaker != Evidence::EvidenceFor {
            out[i] = Evidence::Undecided;
        }
        if weaker == Evidence::EvidenceAgainst {
            out[i] = Evidence::EvidenceAgainst;
        }
    }
    out
}

pub fn classify_point<S: Scalar>(
    x: &PointGen,
    config: &ClassifyConfig<S>,
    budget: &ScanBudget<S>,
) -> Result<ClassificationReport<S>> {
    if config.eps_grid.is_empty() {
        return Err(Error::invalid("eps_grid", "epsilon grid must be nonempty"));
    }
    if config.eps_grid.iter().any(|e| *e <= S::zero()) {
        return Err(Error::invalid("eps_grid", "epsilons must be positive"));
    }
    let mut reports = Vec::with_capacity(3);
    for kind in ScanKind::ALL {
        let rows = scan_values(x, kind, config.scan_range, budget)?;
        let base = AlmostPeriodScan {
            epsilon: config.eps_grid[0].clone(),
            kind,
            scan_range: (-(config.scan_range as i64), config.scan_range as i64),
            periods: Vec::new(),
            max_gap: 0,
            rows,
            budget: budget.report(kind),
        };
        let scans: Vec<_> = config
            .eps_grid
            .iter()
            .map(|e| base.rethreshold(e.clone()))
            .collect();
        let raw = raw_verdict(kind, &scans, config.gap_threshold, config.scan_range);
        reports.push(KindReport {
            kind,
            scans,
            raw_verdict: raw,
            verdict: raw,
        });
    }
    let adjusted = enforce_hierarchy([reports[0].raw_verdict, reports[1].raw_verdict, reports[2].raw_verdict]);
    for (r, v) in reports.iter_mut().zip(adjusted) {
        r.verdict = v;
    }
    Ok(ClassificationReport {
        point: x.name(),
        scan_range: config.scan_range,
        gap_threshold: config.gap_threshold,
        kinds: reports,
    })
}
