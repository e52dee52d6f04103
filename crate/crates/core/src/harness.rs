//! Experiment presets, Monte-Carlo orchestration and CSV emission.
//!
//! Every preset writes one CSV artifact (`x,series,y` rows, LF endings)
//! plus a `.meta.txt` sidecar with the run parameters. Trials fan out over
//! a local thread pool with per-trial derived seeds and an order-preserving
//! reduction, so a run is byte-reproducible for a fixed seed regardless of
//! thread count.

use rayon::prelude::*;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::array::{
    compress_geometry, sample_covariance, synthesize_snapshots, ArrayGeometry, SelectionVector,
    SourceEnsemble,
};
use crate::beampattern::{constrained_select, SelectionConfig, Strategy};
use crate::crlb::crlb_single_source;
use crate::estimators::{asn_dnn_estimate, plain_dnn_estimate, root_music, AsnDnnConfig};
use crate::neural::{
    asn_build_dataset, dnn_build_dataset, train, DnnDatasetConfig, Loss, Mlp, OutputActivation,
    TrainConfig,
};
use crate::rng::derive_seed;
use crate::sparse::{pick_peaks, AdmmConfig, AdmmSolver};
use crate::swsha::{
    build_dictionary, build_schedule, difference_coarray, dof, vectorize_virtual, AngleGrid,
};
use crate::{Error, Result};

/// Root mean squared angular error in degrees; inputs are radians.
pub fn rmse_degrees(estimates: &[f64], truth: f64) -> f64 {
    assert!(!estimates.is_empty(), "rmse of an empty estimate list");
    let sum_sq: f64 = estimates
        .iter()
        .map(|e| (e - truth).to_degrees().powi(2))
        .sum();
    (sum_sq / estimates.len() as f64).sqrt()
}

/// Documented reference DOF values of other sparse architectures for the
/// `M = 128, K = 8` comparison (classical nested and coprime arrays and
/// the compressed sparse array), echoed by the dof-table preset.
pub const REFERENCE_DOF_M128_K8: [(&str, usize); 3] =
    [("nested", 19), ("coprime", 15), ("csa", 31)];

/// One experiment run: preset name plus every knob the presets read.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub preset: String,
    pub m: usize,
    pub k: usize,
    /// Slot count; `None` = largest feasible.
    pub l: Option<usize>,
    /// Snapshots per measurement block.
    pub t: usize,
    pub q: usize,
    /// Truth angles (degrees); meaning is preset-specific.
    pub angles_deg: Vec<f64>,
    /// Evaluation SNR sweep (dB).
    pub snr_db: Vec<f64>,
    /// Training SNR sweep (dB) for the regressor datasets.
    pub train_snr_db: Vec<f64>,
    pub delta: f64,
    pub trials: usize,
    pub seed: u64,
    pub out_dir: PathBuf,
    /// Worker threads; `None` = rayon default.
    pub threads: Option<usize>,
    pub wavelength: f64,
    // sparse recovery
    pub alpha: f64,
    pub zeta: f64,
    pub admm_max_iter: usize,
    pub admm_tol: f64,
    pub grid_step_deg: f64,
    // selection search
    pub restarts: usize,
    // network training
    pub epochs: usize,
    pub asn_epochs: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
    pub realizations: usize,
    pub epsilon_deg: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            preset: String::new(),
            m: 128,
            k: 8,
            l: None,
            t: 600,
            q: 16,
            angles_deg: Vec::new(),
            snr_db: vec![-15.0, -10.0, -5.0, 0.0, 5.0, 10.0],
            train_snr_db: vec![-15.0, -10.0, -5.0, 0.0, 5.0, 10.0],
            delta: 0.5,
            trials: 500,
            seed: 0,
            out_dir: PathBuf::from("."),
            threads: None,
            wavelength: 2.0,
            alpha: 0.25,
            zeta: 1.0,
            admm_max_iter: 500,
            admm_tol: 1e-6,
            grid_step_deg: 1.0,
            restarts: 8,
            epochs: 250,
            asn_epochs: 2000,
            batch_size: 32,
            learning_rate: 1e-2,
            realizations: 15,
            epsilon_deg: 0.5,
        }
    }
}

pub const PRESETS: [&str; 6] = [
    "dof-table",
    "swsha-spectrum",
    "swsha-rmse-snr",
    "asndnn-rmse-snr",
    "asndnn-rmse-theta",
    "crlb-delta",
];

impl ExperimentConfig {
    /// Defaults for a named preset.
    pub fn for_preset(preset: &str) -> Result<Self> {
        let mut cfg = Self { preset: preset.to_string(), ..Self::default() };
        match preset {
            "dof-table" => {}
            "swsha-spectrum" => {
                // 16 sources spread across the training range, on-grid
                cfg.angles_deg = (0..16).map(|i| -60.0 + 8.0 * i as f64).collect();
                cfg.snr_db = vec![0.0];
            }
            "swsha-rmse-snr" => {
                cfg.q = 1;
                cfg.angles_deg = vec![-67.131];
            }
            "asndnn-rmse-snr" => {
                cfg.t = 100;
                cfg.q = 1;
                cfg.angles_deg = vec![30.0];
            }
            "asndnn-rmse-theta" => {
                cfg.t = 100;
                cfg.q = 1;
                cfg.snr_db = vec![-15.0];
                cfg.angles_deg = (0..19).map(|i| -45.0 + 5.0 * i as f64).collect();
            }
            "crlb-delta" => {
                cfg.q = 1;
                cfg.angles_deg = vec![30.0];
                cfg.t = 100;
            }
            other => {
                return Err(Error::Usage(format!(
                    "unknown preset '{other}'; expected one of {}",
                    PRESETS.join(", ")
                )))
            }
        }
        Ok(cfg)
    }

    /// Apply one `key = value` override.
    pub fn apply_kv(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        let bad = |what: &str| Error::Usage(format!("bad value '{v}' for key '{what}'"));
        match key.trim() {
            "preset" => self.preset = v.to_string(),
            "m" => self.m = v.parse().map_err(|_| bad("m"))?,
            "k" => self.k = v.parse().map_err(|_| bad("k"))?,
            "l" => self.l = Some(v.parse().map_err(|_| bad("l"))?),
            "t" => self.t = v.parse().map_err(|_| bad("t"))?,
            "q" => self.q = v.parse().map_err(|_| bad("q"))?,
            "angles_deg" => self.angles_deg = parse_list(v).ok_or_else(|| bad("angles_deg"))?,
            "snr_db" => self.snr_db = parse_list(v).ok_or_else(|| bad("snr_db"))?,
            "train_snr_db" => {
                self.train_snr_db = parse_list(v).ok_or_else(|| bad("train_snr_db"))?
            }
            "delta" => self.delta = v.parse().map_err(|_| bad("delta"))?,
            "trials" => self.trials = v.parse().map_err(|_| bad("trials"))?,
            "seed" => self.seed = v.parse().map_err(|_| bad("seed"))?,
            "out_dir" => self.out_dir = PathBuf::from(v),
            "threads" => self.threads = Some(v.parse().map_err(|_| bad("threads"))?),
            "wavelength" => self.wavelength = v.parse().map_err(|_| bad("wavelength"))?,
            "alpha" => self.alpha = v.parse().map_err(|_| bad("alpha"))?,
            "zeta" => self.zeta = v.parse().map_err(|_| bad("zeta"))?,
            "admm_max_iter" => self.admm_max_iter = v.parse().map_err(|_| bad("admm_max_iter"))?,
            "admm_tol" => self.admm_tol = v.parse().map_err(|_| bad("admm_tol"))?,
            "grid_step_deg" => self.grid_step_deg = v.parse().map_err(|_| bad("grid_step_deg"))?,
            "restarts" => self.restarts = v.parse().map_err(|_| bad("restarts"))?,
            "epochs" => self.epochs = v.parse().map_err(|_| bad("epochs"))?,
            "asn_epochs" => self.asn_epochs = v.parse().map_err(|_| bad("asn_epochs"))?,
            "batch_size" => self.batch_size = v.parse().map_err(|_| bad("batch_size"))?,
            "learning_rate" => self.learning_rate = v.parse().map_err(|_| bad("learning_rate"))?,
            "realizations" => self.realizations = v.parse().map_err(|_| bad("realizations"))?,
            "epsilon_deg" => self.epsilon_deg = v.parse().map_err(|_| bad("epsilon_deg"))?,
            other => return Err(Error::Usage(format!("unknown config key '{other}'"))),
        }
        Ok(())
    }

    /// Load `key = value` lines; `#` starts a comment.
    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path)?;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Usage(format!("line {}: expected 'key = value'", lineno + 1))
            })?;
            self.apply_kv(key, value)?;
        }
        Ok(())
    }

    fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Usage("trial count must be at least 1".into()));
        }
        if self.snr_db.is_empty() {
            return Err(Error::Usage("SNR sweep must be nonempty".into()));
        }
        Ok(())
    }

    fn summary(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "preset = {}", self.preset);
        let _ = writeln!(s, "m = {}", self.m);
        let _ = writeln!(s, "k = {}", self.k);
        let _ = writeln!(s, "l = {}", self.l.map_or("auto".into(), |v| v.to_string()));
        let _ = writeln!(s, "t = {}", self.t);
        let _ = writeln!(s, "q = {}", self.q);
        let _ = writeln!(s, "angles_deg = {}", join_list(&self.angles_deg));
        let _ = writeln!(s, "snr_db = {}", join_list(&self.snr_db));
        let _ = writeln!(s, "train_snr_db = {}", join_list(&self.train_snr_db));
        let _ = writeln!(s, "delta = {}", self.delta);
        let _ = writeln!(s, "trials = {}", self.trials);
        let _ = writeln!(s, "seed = {}", self.seed);
        let _ = writeln!(s, "wavelength = {}", self.wavelength);
        let _ = writeln!(s, "alpha = {}", self.alpha);
        let _ = writeln!(s, "zeta = {}", self.zeta);
        let _ = writeln!(s, "admm_max_iter = {}", self.admm_max_iter);
        let _ = writeln!(s, "admm_tol = {}", self.admm_tol);
        let _ = writeln!(s, "grid_step_deg = {}", self.grid_step_deg);
        let _ = writeln!(s, "restarts = {}", self.restarts);
        let _ = writeln!(s, "epochs = {}", self.epochs);
        let _ = writeln!(s, "asn_epochs = {}", self.asn_epochs);
        let _ = writeln!(s, "batch_size = {}", self.batch_size);
        let _ = writeln!(s, "learning_rate = {}", self.learning_rate);
        let _ = writeln!(s, "realizations = {}", self.realizations);
        let _ = writeln!(s, "epsilon_deg = {}", self.epsilon_deg);
        s
    }
}

fn parse_list(v: &str) -> Option<Vec<f64>> {
    let items: std::result::Result<Vec<f64>, _> =
        v.split(',').map(|t| t.trim().parse::<f64>()).collect();
    items.ok().filter(|l| !l.is_empty())
}

fn join_list(v: &[f64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

/// CSV accumulator with the fixed `x,series,y` schema.
struct CsvTable {
    rows: Vec<(String, String, f64)>,
}

impl CsvTable {
    fn new() -> Self {
        Self { rows: Vec::new() }
    }

    fn push(&mut self, x: impl ToString, series: &str, y: f64) {
        self.rows.push((x.to_string(), series.to_string(), y));
    }

    fn body(&self) -> String {
        let mut out = String::from("x,series,y\n");
        for (x, s, y) in &self.rows {
            let _ = writeln!(out, "{x},{s},{y:.9}");
        }
        out
    }
}

fn git_describe() -> String {
    std::process::Command::new("git")
        .args(["describe", "--always", "--dirty"])
        .output()
        .ok()
        .filter(|o| o.status.success())
        .and_then(|o| String::from_utf8(o.stdout).ok())
        .map(|s| s.trim().to_string())
        .unwrap_or_else(|| "unknown".to_string())
}

fn write_artifacts(cfg: &ExperimentConfig, table: &CsvTable) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(&cfg.out_dir)?;
    let csv_path = cfg.out_dir.join(format!("{}.csv", cfg.preset));
    std::fs::write(&csv_path, table.body())?;
    let meta_path = cfg.out_dir.join(format!("{}.meta.txt", cfg.preset));
    let mut meta = cfg.summary();
    let _ = writeln!(meta, "git = {}", git_describe());
    let _ = writeln!(
        meta,
        "note = trial counts are desk-scale; increase 'trials' to approach reference curves"
    );
    std::fs::write(&meta_path, meta)?;
    Ok(vec![csv_path, meta_path])
}

/// Run a preset and write its artifacts; returns the paths written.
pub fn run_preset(cfg: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads.unwrap_or(0))
        .build()
        .map_err(|e| Error::Usage(format!("thread pool: {e}")))?;
    pool.install(|| match cfg.preset.as_str() {
        "dof-table" => dof_table(cfg),
        "swsha-spectrum" => swsha_spectrum(cfg),
        "swsha-rmse-snr" => swsha_rmse_snr(cfg),
        "asndnn-rmse-snr" => asndnn_rmse(cfg, SweepAxis::Snr),
        "asndnn-rmse-theta" => asndnn_rmse(cfg, SweepAxis::Theta),
        "crlb-delta" => crlb_delta(cfg),
        other => Err(Error::Usage(format!(
            "unknown preset '{other}'; expected one of {}",
            PRESETS.join(", ")
        ))),
    })
}

fn dof_table(cfg: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    let schedule = build_schedule(cfg.m, cfg.k, cfg.l)?;
    let coarray = difference_coarray(&schedule.augmented());
    let mut table = CsvTable::new();
    table.push("swsha", "dof", dof(&coarray) as f64);
    table.push("swsha", "lmax", schedule.slot_count() as f64);
    table.push("ula", "dof", (cfg.k - 1) as f64);
    if cfg.m == 128 && cfg.k == 8 {
        for (name, d) in REFERENCE_DOF_M128_K8 {
            table.push(name, "dof", d as f64);
        }
    }
    write_artifacts(cfg, &table)
}

/// Shared kernel of the sparse-recovery presets: one trial = synthesize
/// the stacked covariance, vectorize, solve, pick peaks.
fn swsha_trial(
    cfg: &ExperimentConfig,
    solver: &AdmmSolver<'_>,
    aug: &crate::swsha::AugmentedArray,
    schedule: &crate::swsha::NestedSchedule,
    sources: &SourceEnsemble,
    seed: u64,
) -> Result<Vec<f64>> {
    let r = crate::swsha::synthesize_augmented_covariance(
        schedule,
        sources,
        cfg.t,
        seed,
        cfg.wavelength,
    )?;
    let v = vectorize_virtual(&r, aug)?;
    let spectrum = solver.solve(&v)?;
    pick_peaks(&spectrum, sources.source_count())
}

fn swsha_spectrum(cfg: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    let schedule = build_schedule(cfg.m, cfg.k, cfg.l)?;
    let aug = schedule.augmented();
    let grid = AngleGrid::from_degrees(-90.0, 90.0, cfg.grid_step_deg)?;
    let angles: Vec<f64> = cfg.angles_deg.iter().map(|d| d.to_radians()).collect();
    let sources = SourceEnsemble::equal_power_from_snr(angles, cfg.snr_db[0])?;

    let r = crate::swsha::synthesize_augmented_covariance(
        &schedule,
        &sources,
        cfg.t,
        derive_seed(cfg.seed, 1),
        cfg.wavelength,
    )?;
    let v = vectorize_virtual(&r, &aug)?;
    let dict = build_dictionary(v.lags(), &grid)?;
    let admm = AdmmConfig {
        alpha: cfg.alpha,
        zeta: cfg.zeta,
        max_iter: cfg.admm_max_iter,
        tol: cfg.admm_tol,
    };
    let solver = AdmmSolver::new(&dict, admm)?;
    let spectrum = solver.solve(&v)?;
    let peaks = pick_peaks(&spectrum, cfg.q)?;

    let mut table = CsvTable::new();
    for (a, val) in spectrum.angles().iter().zip(spectrum.values()) {
        table.push(format!("{:.6}", a.to_degrees()), "spectrum", *val);
    }
    for p in peaks {
        table.push(format!("{:.6}", p.to_degrees()), "peak", 1.0);
    }
    for t in &cfg.angles_deg {
        table.push(format!("{t:.6}"), "truth", 1.0);
    }
    write_artifacts(cfg, &table)
}

fn swsha_rmse_snr(cfg: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    if cfg.angles_deg.len() != 1 {
        return Err(Error::Usage("swsha-rmse-snr wants exactly one truth angle".into()));
    }
    let truth = cfg.angles_deg[0].to_radians();
    let schedule = build_schedule(cfg.m, cfg.k, cfg.l)?;
    let aug = schedule.augmented();
    let grid = AngleGrid::from_degrees(-90.0, 90.0, cfg.grid_step_deg)?;
    // lag layout is data-independent, so the dictionary can be built from
    // the analytic covariance's lag map
    let probe = crate::swsha::augmented_covariance_analytic(
        &schedule,
        &SourceEnsemble::single(truth, 1.0, 1.0)?,
        cfg.wavelength,
    )?;
    let lags = vectorize_virtual(&probe, &aug)?.lags().to_vec();
    let dict = build_dictionary(&lags, &grid)?;
    let admm = AdmmConfig {
        alpha: cfg.alpha,
        zeta: cfg.zeta,
        max_iter: cfg.admm_max_iter,
        tol: cfg.admm_tol,
    };
    let solver = AdmmSolver::new(&dict, admm)?;

    let mut table = CsvTable::new();
    for (si, &snr) in cfg.snr_db.iter().enumerate() {
        let sources = SourceEnsemble::equal_power_from_snr(vec![truth], snr)?;
        let estimates: Vec<Result<f64>> = (0..cfg.trials)
            .into_par_iter()
            .map(|trial| {
                let seed = derive_seed(cfg.seed, ((si as u64) << 32) | trial as u64);
                let peaks = swsha_trial(cfg, &solver, &aug, &schedule, &sources, seed)?;
                Ok(peaks[0])
            })
            .collect();
        let estimates: Vec<f64> = estimates.into_iter().collect::<Result<_>>()?;
        table.push(snr, "swsha-lasso", rmse_degrees(&estimates, truth));
    }
    write_artifacts(cfg, &table)
}

fn crlb_delta(cfg: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    let theta = cfg.angles_deg.first().copied().unwrap_or(30.0).to_radians();
    let geometry = ArrayGeometry::ula(cfg.m, cfg.wavelength)?;
    let mut table = CsvTable::new();
    for &delta in &[1.0, 0.5, 0.3] {
        let mut sel_cfg = SelectionConfig::new(delta, cfg.k)?;
        sel_cfg.restarts = cfg.restarts;
        sel_cfg.seed = cfg.seed;
        sel_cfg.strategy = Strategy::GreedySwap;
        let sel = constrained_select(theta, &sel_cfg, &geometry)?;
        for &snr in &cfg.snr_db {
            let gamma = 10f64.powf(snr / 10.0);
            let bound = crlb_single_source(&sel, theta, gamma, cfg.t)?;
            table.push(snr, &format!("crlb-delta-{delta}"), bound.sqrt().to_degrees());
        }
    }
    write_artifacts(cfg, &table)
}

/// The two networks of one pipeline plus the labels they were built from.
pub struct Pipeline {
    pub asn: Mlp,
    pub dnn: Mlp,
    pub labels: Vec<SelectionVector>,
}

/// Selection labels, selection network and regressor for one delta.
pub fn build_pipeline(cfg: &ExperimentConfig, delta: f64) -> Result<Pipeline> {
    let geometry = ArrayGeometry::ula(cfg.m, cfg.wavelength)?;
    let grid = AngleGrid::from_degrees(-60.0, 60.0, 1.0)?;
    let mut sel_cfg = SelectionConfig::new(delta, cfg.k)?;
    sel_cfg.restarts = cfg.restarts;
    sel_cfg.seed = cfg.seed;
    let (asn_data, labels) = asn_build_dataset(&grid, &sel_cfg, &geometry)?;

    let mut asn = Mlp::new_random(
        &[1, 64, 128, cfg.m],
        OutputActivation::Sigmoid,
        derive_seed(cfg.seed, 0xA5),
    )?;
    let asn_cfg = TrainConfig {
        epochs: cfg.asn_epochs,
        batch_size: 16,
        learning_rate: 1e-3,
        seed: derive_seed(cfg.seed, 0xA6),
        loss: Loss::Bce,
    };
    train(&mut asn, &asn_data, &asn_cfg)?;

    let dnn = train_regressor(cfg, &labels, 0xD0 + (delta * 100.0) as u64)?;
    Ok(Pipeline { asn, dnn, labels })
}

/// Train the DOA regressor for a fixed per-angle configuration map.
pub fn train_regressor(
    cfg: &ExperimentConfig,
    selections: &[SelectionVector],
    stream: u64,
) -> Result<Mlp> {
    let geometry = ArrayGeometry::ula(cfg.m, cfg.wavelength)?;
    let grid = AngleGrid::from_degrees(-60.0, 60.0, 1.0)?;
    let data_cfg = DnnDatasetConfig {
        snr_db_sweep: cfg.train_snr_db.clone(),
        realizations: cfg.realizations,
        snapshots: cfg.t,
        seed: derive_seed(cfg.seed, stream),
    };
    let data = dnn_build_dataset(&grid, selections, &geometry, &data_cfg)?;
    let feat = cfg.k * (cfg.k + 1);
    let mut dnn = Mlp::new_random(
        &[feat, 256, 128, 64, 1],
        OutputActivation::Linear,
        derive_seed(cfg.seed, stream ^ 0xFF),
    )?;
    let train_cfg = TrainConfig {
        epochs: cfg.epochs,
        batch_size: cfg.batch_size,
        learning_rate: cfg.learning_rate,
        seed: derive_seed(cfg.seed, stream ^ 0xF0),
        loss: Loss::Mse,
    };
    train(&mut dnn, &data, &train_cfg)?;
    Ok(dnn)
}

enum SweepAxis {
    Snr,
    Theta,
}

/// RMSE sweep of the four estimators (two loop pipelines, the fixed-ULA
/// regressor and root-MUSIC), over SNR or over angle.
fn asndnn_rmse(cfg: &ExperimentConfig, axis: SweepAxis) -> Result<Vec<PathBuf>> {
    let geometry = ArrayGeometry::ula(cfg.m, cfg.wavelength)?;
    let ula = SelectionVector::from_indices(&(1..=cfg.k as u32).collect::<Vec<_>>(), cfg.m)?;
    let ula_geom = compress_geometry(&geometry, &ula)?;

    // three regressor pipelines; the two loop pipelines in parallel
    let (tight, relaxed) = rayon::join(
        || build_pipeline(cfg, 1.0),
        || build_pipeline(cfg, cfg.delta),
    );
    let (tight, relaxed) = (tight?, relaxed?);
    let dnn_ula = train_regressor(cfg, &[ula.clone()], 0x01A)?;

    let rho0 = SelectionVector::boundary_template(cfg.m, cfg.k)?;
    let loop_cfg = AsnDnnConfig {
        epsilon: cfg.epsilon_deg.to_radians(),
        ..AsnDnnConfig::default()
    };
    let clamp = (loop_cfg.angle_min, loop_cfg.angle_max);

    let cases: Vec<(f64, f64)> = match axis {
        SweepAxis::Snr => {
            let theta = cfg.angles_deg.first().copied().unwrap_or(30.0);
            cfg.snr_db.iter().map(|&s| (s, theta)).collect()
        }
        SweepAxis::Theta => {
            let snr = cfg.snr_db[0];
            cfg.angles_deg.iter().map(|&a| (snr, a)).collect()
        }
    };

    let mut table = CsvTable::new();
    for (ci, &(snr, theta_deg)) in cases.iter().enumerate() {
        let theta = theta_deg.to_radians();
        let power = 10f64.powf(snr / 10.0);
        let sources = SourceEnsemble::single(theta, power, 1.0)?;
        let x = match axis {
            SweepAxis::Snr => snr,
            SweepAxis::Theta => theta_deg,
        };

        let series: [(&str, u64); 4] = [
            ("asn-dnn-delta-1", 1),
            ("asn-dnn-delta-low", 2),
            ("dnn-ula", 3),
            ("root-music-ula", 4),
        ];
        for (name, tag) in series {
            let estimates: Vec<Result<f64>> = (0..cfg.trials)
                .into_par_iter()
                .map(|trial| {
                    let seed =
                        derive_seed(cfg.seed, (tag << 56) | ((ci as u64) << 32) | trial as u64);
                    match tag {
                        1 => Ok(asn_dnn_estimate(
                            &tight.asn,
                            &tight.dnn,
                            &geometry,
                            &sources,
                            cfg.t,
                            &rho0,
                            &loop_cfg,
                            seed,
                        )?
                        .theta),
                        2 => Ok(asn_dnn_estimate(
                            &relaxed.asn,
                            &relaxed.dnn,
                            &geometry,
                            &sources,
                            cfg.t,
                            &rho0,
                            &loop_cfg,
                            seed,
                        )?
                        .theta),
                        3 => plain_dnn_estimate(&dnn_ula, &ula_geom, &sources, cfg.t, clamp, seed),
                        _ => {
                            let y = synthesize_snapshots(&ula_geom, &sources, cfg.t, seed)?;
                            let r = sample_covariance(&y)?;
                            Ok(root_music(&r, &ula_geom, 1)?[0])
                        }
                    }
                })
                .collect();
            let estimates: Vec<f64> = estimates.into_iter().collect::<Result<_>>()?;
            table.push(x, name, rmse_degrees(&estimates, theta));
        }
        // single-source bound of each pipeline's configuration at this case
        let gamma = power;
        for (name, pipe) in [("crlb-delta-1", &tight), ("crlb-delta-low", &relaxed)] {
            let sel = &pipe.labels[0];
            let bound = crlb_single_source(sel, theta, gamma, cfg.t)?;
            table.push(x, name, bound.sqrt().to_degrees());
        }
    }
    write_artifacts(cfg, &table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::derived_rng;
    use rand::Rng;
    use rand_distr::StandardNormal;

    #[test]
    fn rmse_basics() {
        let t = 0.5f64;
        assert_eq!(rmse_degrees(&[t, t, t], t), 0.0);
        let one = 1f64.to_radians();
        let r = rmse_degrees(&[t + one, t - one], t);
        assert!((r - 1.0).abs() < 1e-12);
        // order invariance
        let a = rmse_degrees(&[t + one, t - 2.0 * one, t], t);
        let b = rmse_degrees(&[t, t + one, t - 2.0 * one], t);
        assert_eq!(a, b);
    }

    #[test]
    fn rmse_matches_gaussian_sigma() {
        // 5000 draws of truth + N(0, 2 deg): rmse within 5% of 2 degrees
        let mut rng = derived_rng(77, 0);
        let truth = 0.3f64;
        let sigma = 2f64.to_radians();
        let est: Vec<f64> = (0..5000)
            .map(|_| truth + sigma * rng.sample::<f64, _>(StandardNormal))
            .collect();
        let r = rmse_degrees(&est, truth);
        assert!((r - 2.0).abs() < 0.1, "rmse {r}");
    }

    #[test]
    fn config_parsing_roundtrip() {
        let mut cfg = ExperimentConfig::for_preset("dof-table").unwrap();
        cfg.apply_kv("m", "64").unwrap();
        cfg.apply_kv("snr_db", "-10, 0, 10").unwrap();
        cfg.apply_kv("seed", "9").unwrap();
        assert_eq!(cfg.m, 64);
        assert_eq!(cfg.snr_db, vec![-10.0, 0.0, 10.0]);
        assert_eq!(cfg.seed, 9);
        assert!(cfg.apply_kv("nope", "1").is_err());
        assert!(cfg.apply_kv("m", "x").is_err());
        assert!(ExperimentConfig::for_preset("bogus").is_err());
    }

    #[test]
    fn config_file_parsing() {
        let dir = std::env::temp_dir().join(format!("doa_cfg_{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.cfg");
        std::fs::write(&path, "# comment\ntrials = 7\n\nk = 4\n").unwrap();
        let mut cfg = ExperimentConfig::for_preset("dof-table").unwrap();
        cfg.apply_file(&path).unwrap();
        assert_eq!(cfg.trials, 7);
        assert_eq!(cfg.k, 4);
        std::fs::write(&path, "garbage line\n").unwrap();
        assert!(cfg.apply_file(&path).is_err());
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn dof_table_reproduces_reference_values() {
        let dir = std::env::temp_dir().join(format!("doa_dof_{}", std::process::id()));
        let mut cfg = ExperimentConfig::for_preset("dof-table").unwrap();
        cfg.out_dir = dir.clone();
        let paths = run_preset(&cfg).unwrap();
        let body = std::fs::read_to_string(&paths[0]).unwrap();
        assert!(body.starts_with("x,series,y\n"));
        assert!(body.contains("swsha,dof,119.000000000"));
        assert!(body.contains("swsha,lmax,6.000000000"));
        assert!(body.contains("ula,dof,7.000000000"));
        assert!(body.contains("nested,dof,19.000000000"));
        assert!(body.contains("coprime,dof,15.000000000"));
        assert!(body.contains("csa,dof,31.000000000"));
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn dof_table_odd_chain_count() {
        let dir = std::env::temp_dir().join(format!("doa_dof7_{}", std::process::id()));
        let mut cfg = ExperimentConfig::for_preset("dof-table").unwrap();
        cfg.k = 7;
        cfg.out_dir = dir.clone();
        let paths = run_preset(&cfg).unwrap();
        let body = std::fs::read_to_string(&paths[0]).unwrap();
        assert!(body.contains("swsha,dof,127.000000000"));
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn crlb_delta_orderings() {
        let dir = std::env::temp_dir().join(format!("doa_crlbd_{}", std::process::id()));
        let mut cfg = ExperimentConfig::for_preset("crlb-delta").unwrap();
        cfg.out_dir = dir.clone();
        cfg.restarts = 4;
        let paths = run_preset(&cfg).unwrap();
        let body = std::fs::read_to_string(&paths[0]).unwrap();
        // parse rows back per delta
        let mut by_delta: std::collections::HashMap<String, Vec<f64>> = Default::default();
        for line in body.lines().skip(1) {
            let mut parts = line.split(',');
            let _x = parts.next().unwrap();
            let series = parts.next().unwrap().to_string();
            let y: f64 = parts.next().unwrap().parse().unwrap();
            by_delta.entry(series).or_default().push(y);
        }
        let d1 = &by_delta["crlb-delta-1"];
        let d05 = &by_delta["crlb-delta-0.5"];
        let d03 = &by_delta["crlb-delta-0.3"];
        for i in 0..d1.len() {
            assert!(d1[i] <= d05[i] + 1e-12);
            assert!(d05[i] <= d03[i] + 1e-12);
        }
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn preset_rejects_bad_config() {
        let mut cfg = ExperimentConfig::for_preset("dof-table").unwrap();
        cfg.trials = 0;
        assert!(run_preset(&cfg).is_err());
        let mut cfg = ExperimentConfig::for_preset("swsha-rmse-snr").unwrap();
        cfg.angles_deg = vec![1.0, 2.0];
        assert!(run_preset(&cfg).is_err());
    }
}
