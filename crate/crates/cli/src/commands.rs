use anyhow::Result;
use apspectra::almostper::{
    almost_period_scan, classify_point, ClassifyConfig, ScanBudget, ScanKind,
};
use apspectra::diffraction::{atom_report, autocorrelation, diffraction_density, Taper, WeightedComb};
use apspectra::mean::{FolnerSchedule, MeanConfig, ShiftRange, Window};
use apspectra::spectral::{
    eigenfunction_sample, fourier_bohr_grid, parseval_defect, spectral_report, GridMethod, SpectrumConfig,
};
use apspectra::systems::{observable_track, PointGen, PointSpec};
use apspectra::Error as CoreError;
use clap::ValueEnum;
use serde::Serialize;

use crate::config::{bad, BudgetParams, ConfigError, ExperimentConfig, KindName, TaperName};
use crate::output::{Artifacts, Csv};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Generate,
    Scan,
    Classify,
    Spectrum,
    Parseval,
    Eigen,
    Diffract,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Generate => "generate",
            Command::Scan => "scan",
            Command::Classify => "classify",
            Command::Spectrum => "spectrum",
            Command::Parseval => "parseval",
            Command::Eigen => "eigen",
            Command::Diffract => "diffract",
        }
    }
}

/// Header shared by every JSON report.
#[derive(Serialize)]
struct Envelope<'a, R> {
    command: &'static str,
    config_sha256: &'a str,
    point: PointSpec,
    point_name: String,
    config: &'a ExperimentConfig,
    budget: Vec<String>,
    result: R,
}

pub struct Context<'a> {
    pub config: &'a ExperimentConfig,
    pub hash: &'a str,
}

impl Context<'_> {
    fn envelope<R: Serialize>(&self, cmd: Command, x: &PointGen, budget: Vec<String>, result: R) -> Envelope<'_, R> {
        Envelope {
            command: cmd.name(),
            config_sha256: self.hash,
            point: x.spec(),
            point_name: x.name(),
            config: self.config,
            budget,
            result,
        }
    }

    fn csv(&self, budget: &[String], header: &[&str]) -> Csv {
        Csv::new(&format!("config_sha256={}; budget={}", self.hash, budget.join(" | ")), header)
    }
}

/// Core errors caused by the configuration become validation errors.
fn validate<T>(r: apspectra::Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        CoreError::InvalidParameter { .. } | CoreError::BudgetTooSmall(_) | CoreError::EmptyShiftRange => {
            anyhow::Error::new(ConfigError::from(e))
        }
        other => anyhow::Error::new(other),
    })
}

pub fn run(cmd: Command, ctx: &Context) -> Result<(Artifacts, String)> {
    let cfg = ctx.config;
    let x = cfg.build_point()?;
    match cmd {
        Command::Generate => generate(ctx, &x),
        Command::Scan => scan(ctx, &x, &cfg.build_schedule()?),
        Command::Classify => classify(ctx, &x, &cfg.build_schedule()?),
        Command::Spectrum => spectrum(ctx, &x, &cfg.build_schedule()?),
        Command::Parseval => parseval(ctx, &x, &cfg.build_schedule()?),
        Command::Eigen => eigen(ctx, &x, &cfg.build_schedule()?),
        Command::Diffract => diffract(ctx, &x, &cfg.build_schedule()?),
    }
}

fn generate(ctx: &Context, x: &PointGen) -> Result<(Artifacts, String)> {
    let p = &ctx.config.generate;
    if p.to < p.from {
        return Err(bad("to", "`to` must not precede `from`").into());
    }
    let f = ctx.config.build_observable(x)?;
    let letters = x.eval_window(p.from, p.to);
    let values = validate(observable_track(&f, x, p.from, p.to))?;
    let budget = vec![format!("window=[{},{}]", p.from, p.to)];

    #[derive(Serialize)]
    struct Out {
        from: i64,
        to: i64,
        letters: String,
        observable: String,
    }
    let rendered = x.render(&letters);
    let mut art = Artifacts::default();
    art.json(
        "generate.json",
        &ctx.envelope(
            Command::Generate,
            x,
            budget.clone(),
            Out {
                from: p.from,
                to: p.to,
                letters: rendered.clone(),
                observable: f.name().to_string(),
            },
        ),
    )?;
    let mut csv = ctx.csv(&budget, &["t", "letter", "observable_re", "observable_im"]);
    for ((t, v), l) in values.iter().zip(&letters) {
        csv.row(&[&t, &x.alphabet()[*l as usize], &v.re, &v.im]);
    }
    art.csv("generate.csv", csv);
    let shown: String = rendered.chars().take(64).collect();
    Ok((art, format!("{}[{}..={}] = {shown}", x.name(), p.from, p.to)))
}

fn scan_budget(schedule: &FolnerSchedule, p: &BudgetParams) -> Result<ScanBudget<f64>> {
    let mut b = ScanBudget::<f64>::new(schedule.clone());
    if let Some(w) = p.weyl_window {
        if w == 0 {
            return Err(bad("weyl_window", "must be positive").into());
        }
        b.weyl_window = Window::new(0, w);
    }
    if let Some(s) = p.weyl_shifts {
        b.weyl_shifts = ShiftRange::symmetric(s);
    }
    if let Some(h) = p.bohr_horizon {
        b.bohr_horizon = h;
    }
    if let Some(k) = p.truncation {
        b.truncation = k;
    }
    Ok(b)
}

fn kind_of(k: KindName) -> ScanKind {
    match k {
        KindName::Mean => ScanKind::Mean,
        KindName::Weyl => ScanKind::Weyl,
        KindName::Bohr => ScanKind::Bohr,
    }
}

fn opt_bool(b: Option<bool>) -> &'static str {
    match b {
        Some(true) => "true",
        Some(false) => "false",
        None => "",
    }
}

fn scan(ctx: &Context, x: &PointGen, schedule: &FolnerSchedule) -> Result<(Artifacts, String)> {
    let p = &ctx.config.scan;
    let budget = scan_budget(schedule, &p.budget)?;
    let kind = kind_of(p.kind);
    let result = validate(almost_period_scan(x, p.epsilon, kind, p.range, &budget))?;
    let fp = vec![result.budget.fingerprint()];
    let mut art = Artifacts::default();
    let mut csv = ctx.csv(&fp, &["t", "value", "converged", "period"]);
    for r in &result.rows {
        let is_period = result.periods.binary_search(&r.t).is_ok();
        csv.row(&[&r.t, &r.value, &opt_bool(r.converged), &is_period]);
    }
    let summary = format!(
        "{:?} scan of {} at eps={}: {} periods in [-{},{}], max gap {}",
        kind,
        x.name(),
        p.epsilon,
        result.periods.len(),
        p.range,
        p.range,
        result.max_gap
    );
    art.json("scan.json", &ctx.envelope(Command::Scan, x, fp, &result))?;
    art.csv("scan.csv", csv);
    Ok((art, summary))
}

fn classify(ctx: &Context, x: &PointGen, schedule: &FolnerSchedule) -> Result<(Artifacts, String)> {
    let p = &ctx.config.classify;
    let budget = scan_budget(schedule, &p.budget)?;
    let mut cc = ClassifyConfig::<f64>::new(p.range);
    cc.eps_grid = p.eps_grid.clone();
    cc.gap_threshold = p.gap_threshold;
    let report = validate(classify_point(x, &cc, &budget))?;
    let fp: Vec<String> = ScanKind::ALL.iter().map(|k| budget.report(*k).fingerprint()).collect();
    let mut csv = ctx.csv(&fp, &["kind", "t", "value", "converged"]);
    for k in &report.kinds {
        for r in &k.scans[0].rows {
            csv.row(&[&format!("{:?}", k.kind).to_lowercase(), &r.t, &r.value, &opt_bool(r.converged)]);
        }
    }
    let summary = report
        .kinds
        .iter()
        .map(|k| format!("{:?}={:?}", k.kind, k.verdict))
        .collect::<Vec<_>>()
        .join(" ");
    let mut art = Artifacts::default();
    art.json("classify.json", &ctx.envelope(Command::Classify, x, fp, &report))?;
    art.csv("classify.csv", csv);
    Ok((art, format!("{}: {summary}", x.name())))
}

fn spectrum(ctx: &Context, x: &PointGen, schedule: &FolnerSchedule) -> Result<(Artifacts, String)> {
    let p = &ctx.config.spectrum;
    let f = ctx.config.build_observable(x)?;
    let mut sc = SpectrumConfig::<f64>::new(p.grid_n, schedule.clone());
    if let Some(st) = &p.stages {
        sc.stages = st.clone();
    }
    sc.detect.threshold = p.threshold;
    sc.detect.max_frequencies = p.max_frequencies;
    sc.top_k = p.top_k;
    sc.cross_check = p.cross_check;
    let report = validate(spectral_report(&f, x, &sc))?;
    let grid = validate(fourier_bohr_grid(&f, x, p.grid_n, GridMethod::FastTransform))?;
    let fp = vec![
        format!("grid_n={};stages={:?}", p.grid_n, sc.stages),
        schedule.fingerprint(),
    ];
    let mut grid_csv = ctx.csv(&fp, &["j", "theta", "re", "im", "abs"]);
    for (j, c) in grid.amplitudes.iter().enumerate() {
        grid_csv.row(&[&j, &grid.theta(j), &c.re, &c.im, &c.norm()]);
    }
    let mut freq_csv = ctx.csv(&fp, &["rank", "theta", "refined_theta", "re", "im", "abs"]);
    for (i, e) in report.frequencies.iter().enumerate() {
        freq_csv.row(&[&(i + 1), &e.theta, &e.refined_theta, &e.amplitude.re, &e.amplitude.im, &e.magnitude]);
    }
    let summary = format!(
        "{} frequencies, defect {} of energy {}, {:?}",
        report.frequencies.len(),
        report.final_defect(),
        report.final_energy(),
        report.purity
    );
    let mut art = Artifacts::default();
    art.json("spectrum.json", &ctx.envelope(Command::Spectrum, x, fp, &report))?;
    art.csv("spectrum_grid.csv", grid_csv);
    art.csv("spectrum_frequencies.csv", freq_csv);
    Ok((art, summary))
}

fn parseval(ctx: &Context, x: &PointGen, schedule: &FolnerSchedule) -> Result<(Artifacts, String)> {
    let p = &ctx.config.parseval;
    let f = ctx.config.build_observable(x)?;
    let traj = validate(parseval_defect(&f, x, &p.thetas, schedule, &MeanConfig::default()))?;
    let fp = vec![schedule.fingerprint()];
    let mut csv = ctx.csv(&fp, &["n", "window_len", "energy", "captured", "defect"]);
    for st in &traj.stages {
        let len = schedule.window(st.n).map(|w| w.len).unwrap_or(0);
        csv.row(&[&st.n, &len, &st.energy, &st.captured, &st.defect]);
    }
    let last = traj.last();
    let summary = format!("defect {} of energy {} with {} frequencies", last.defect, last.energy, p.thetas.len());
    let mut art = Artifacts::default();
    art.json("parseval.json", &ctx.envelope(Command::Parseval, x, fp, &traj))?;
    art.csv("parseval.csv", csv);
    Ok((art, summary))
}

fn eigen(ctx: &Context, x: &PointGen, schedule: &FolnerSchedule) -> Result<(Artifacts, String)> {
    let p = &ctx.config.eigen;
    let f = ctx.config.build_observable(x)?;
    let points: Vec<PointGen> = p.points.iter().map(|&s| x.shift(s)).collect();
    let report = validate(eigenfunction_sample(&f, p.theta, &points, schedule, &MeanConfig::default(), &p.shifts))?;
    let fp = vec![schedule.fingerprint()];
    let mut csv = ctx.csv(&fp, &["point", "re", "im", "abs", "flag"]);
    for s in &report.samples {
        csv.row(&[&s.point, &s.value.re, &s.value.im, &s.value.norm(), &format!("{:?}", s.flag).to_lowercase()]);
    }
    let summary = format!(
        "theta={}: modulus spread {}, eigen residual {}",
        p.theta, report.modulus_spread, report.eigen_residual
    );
    let mut art = Artifacts::default();
    art.json("eigen.json", &ctx.envelope(Command::Eigen, x, fp, &report))?;
    art.csv("eigen.csv", csv);
    Ok((art, summary))
}

fn diffract(ctx: &Context, x: &PointGen, schedule: &FolnerSchedule) -> Result<(Artifacts, String)> {
    let p = &ctx.config.diffract;
    let weights = match &p.weights {
        Some(w) => ctx.config.letter_weights(w, x.alphabet_size(), "weights")?,
        None => {
            let f = ctx.config.build_observable(x)?;
            if f.window() != [0] {
                return Err(bad("weights", "observable is not a single-site weight map").into());
            }
            f.table().to_vec()
        }
    };
    let comb = validate(WeightedComb::new(x.clone(), weights, "comb"))?;
    let cfg = MeanConfig::default();
    let eta = validate(autocorrelation(&comb, p.k_max, schedule, &cfg))?;
    let m = p.m.unwrap_or(4 * p.k_max.max(1));
    let taper = match p.taper {
        TaperName::None => Taper::None,
        TaperName::Triangular => Taper::Triangular,
    };
    let density = validate(diffraction_density(&eta, taper, m))?;
    let atoms = atom_report(&comb, &p.atoms, eta.eta0(), schedule, &cfg).map_err(|e| match e {
        CoreError::FractionExceedsOne { fraction } => {
            anyhow::Error::new(bad("atoms", format!("atom masses sum to {fraction} of eta(0)")))
        }
        other => validate::<()>(Err(other)).unwrap_err(),
    })?;
    let fp = vec![format!("k_max={};m={m};taper={:?}", p.k_max, taper), schedule.fingerprint()];

    #[derive(Serialize)]
    struct Out<'a> {
        eta0: f64,
        window_len: u64,
        density_min: f64,
        density_mass: f64,
        mass_residual: f64,
        negative_density: bool,
        atoms: &'a apspectra::diffraction::AtomReport<f64>,
    }
    let mut eta_csv = ctx.csv(&fp, &["lag", "re", "im"]);
    for (k, v) in eta.values() {
        eta_csv.row(&[&k, &v.re, &v.im]);
    }
    let mut dens_csv = ctx.csv(&fp, &["theta", "density"]);
    for (j, d) in density.density.iter().enumerate() {
        dens_csv.row(&[&density.theta(j), d]);
    }
    let summary = format!(
        "eta(0)={}, density min {}, pure point fraction {}",
        eta.eta0(),
        density.min,
        atoms.pure_point_fraction
    );
    let mut art = Artifacts::default();
    art.json(
        "diffract.json",
        &ctx.envelope(
            Command::Diffract,
            x,
            fp,
            Out {
                eta0: eta.eta0(),
                window_len: eta.window_len,
                density_min: density.min,
                density_mass: density.mass,
                mass_residual: density.mass_residual,
                negative_density: density.negative_density,
                atoms: &atoms,
            },
        ),
    )?;
    art.csv("autocorrelation.csv", eta_csv);
    art.csv("density.csv", dens_csv);
    Ok((art, summary))
}
