//! Command-line front end: schedule design, antenna selection, network
//! training, one-shot estimation and the experiment presets.

use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

use doa_core::array::{
    compress_geometry, sample_covariance, synthesize_snapshots, ArrayGeometry, SelectionVector,
    SourceEnsemble,
};
use doa_core::beampattern::{constrained_select, psl, SelectionConfig, Strategy};
use doa_core::crlb::selection_objective;
use doa_core::estimators::{asn_dnn_estimate, mvdr_estimate, root_music, AsnDnnConfig};
use doa_core::harness::{build_pipeline, run_preset, train_regressor, ExperimentConfig, PRESETS};
use doa_core::neural::Mlp;
use doa_core::sparse::{pick_peaks, AdmmConfig, AdmmSolver};
use doa_core::swsha::{
    build_dictionary, build_schedule, difference_coarray, dof, vectorize_virtual, AngleGrid,
};

#[derive(Parser)]
#[command(name = "doa", about = "Switched hybrid-array DOA estimation workbench", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Exhaustive,
    Greedy,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Mvdr,
    RootMusic,
    Lasso,
    AsnDnn,
}

#[derive(Subcommand)]
enum Command {
    /// Print a switching schedule (one slot per line) and its co-array DOF.
    Design {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
        /// Slot count; defaults to the largest feasible.
        #[arg(long)]
        l: Option<usize>,
        /// Write the slot listing to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search the PSL-constrained selection maximizing the CRLB objective.
    Select {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, allow_hyphen_values = true)]
        theta_deg: f64,
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
        #[arg(long, value_enum, default_value_t = StrategyArg::Greedy)]
        strategy: StrategyArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        restarts: usize,
    },
    /// Train the selection network and regressor for a delta, and the
    /// fixed-subarray baseline regressor; saves .mlp files.
    Train {
        #[arg(long, default_value_t = 128)]
        m: usize,
        #[arg(long, default_value_t = 8)]
        k: usize,
        #[arg(long, default_value_t = 0.5)]
        delta: f64,
        #[arg(long, default_value_t = 100)]
        t: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "models")]
        out_dir: PathBuf,
        #[arg(long, default_value_t = 250)]
        epochs: usize,
        #[arg(long, default_value_t = 15)]
        realizations: usize,
    },
    /// Synthesize one scenario and estimate its DOA.
    Estimate {
        #[arg(long, value_enum)]
        method: Method,
        #[arg(long, allow_hyphen_values = true)]
        theta_deg: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        snr_db: f64,
        #[arg(long, default_value_t = 100)]
        t: usize,
        #[arg(long, default_value_t = 128)]
        m: usize,
        #[arg(long, default_value_t = 8)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Model directory for asn-dnn (as written by `train`).
        #[arg(long, default_value = "models")]
        model_dir: PathBuf,
        /// Write the recovered spectrum CSV here (lasso only).
        #[arg(long)]
        dump_spectrum: Option<PathBuf>,
    },
    /// Run an experiment preset and write its CSV artifacts.
    Run {
        /// One of: dof-table, swsha-spectrum, swsha-rmse-snr,
        /// asndnn-rmse-snr, asndnn-rmse-theta, crlb-delta.
        preset: String,
        /// Flat key = value config file applied before --set overrides.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Override single keys, e.g. --set trials=50.
        #[arg(long = "set")]
        sets: Vec<String>,
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(cli: Cli) -> doa_core::Result<()> {
    match cli.command {
        Command::Design { m, k, l, out } => {
            let schedule = build_schedule(m, k, l)?;
            let coarray = difference_coarray(&schedule.augmented());
            let text = schedule.to_text();
            match out {
                Some(path) => std::fs::write(path, &text)?,
                None => print!("{text}"),
            }
            eprintln!(
                "K1={} K2={} L={} aperture={} dof={}",
                schedule.k1(),
                schedule.k2(),
                schedule.slot_count(),
                schedule.max_element(),
                dof(&coarray)
            );
            Ok(())
        }
        Command::Select { m, k, theta_deg, delta, strategy, seed, restarts } => {
            let geometry = ArrayGeometry::ula(m, 2.0)?;
            let mut cfg = SelectionConfig::new(delta, k)?;
            cfg.strategy = match strategy {
                StrategyArg::Exhaustive => Strategy::Exhaustive,
                StrategyArg::Greedy => Strategy::GreedySwap,
            };
            cfg.seed = seed;
            cfg.restarts = restarts;
            let theta = theta_deg.to_radians();
            let sel = constrained_select(theta, &cfg, &geometry)?;
            let report = psl(&sel, theta, &cfg);
            let idx: Vec<String> =
                sel.selected_indices().iter().map(|i| i.to_string()).collect();
            println!("selection: {{{}}}", idx.join(","));
            println!("objective: {}", selection_objective(&sel));
            println!("psl: {:.6}", report.value);
            Ok(())
        }
        Command::Train { m, k, delta, t, seed, out_dir, epochs, realizations } => {
            let mut cfg = ExperimentConfig::for_preset("asndnn-rmse-snr")?;
            cfg.m = m;
            cfg.k = k;
            cfg.delta = delta;
            cfg.t = t;
            cfg.seed = seed;
            cfg.epochs = epochs;
            cfg.realizations = realizations;
            std::fs::create_dir_all(&out_dir)?;
            let pipe = build_pipeline(&cfg, delta)?;
            pipe.asn.save(&out_dir.join(format!("asn_delta{delta}.mlp")))?;
            pipe.dnn.save(&out_dir.join(format!("dnn_delta{delta}.mlp")))?;
            let ula =
                SelectionVector::from_indices(&(1..=k as u32).collect::<Vec<_>>(), m)?;
            let baseline = train_regressor(&cfg, &[ula], 0x01A)?;
            baseline.save(&out_dir.join("dnn_ula.mlp"))?;
            eprintln!("models written to {}", out_dir.display());
            Ok(())
        }
        Command::Estimate {
            method,
            theta_deg,
            snr_db,
            t,
            m,
            k,
            seed,
            model_dir,
            dump_spectrum,
        } => {
            let theta = theta_deg.to_radians();
            let power = 10f64.powf(snr_db / 10.0);
            let sources = SourceEnsemble::single(theta, power, 1.0)?;
            let full = ArrayGeometry::ula(m, 2.0)?;
            let ula_sel =
                SelectionVector::from_indices(&(1..=k as u32).collect::<Vec<_>>(), m)?;
            let ula_geom = compress_geometry(&full, &ula_sel)?;
            let estimate_deg = match method {
                Method::Mvdr => {
                    let y = synthesize_snapshots(&ula_geom, &sources, t, seed)?;
                    let r = sample_covariance(&y)?;
                    let grid = AngleGrid::from_degrees(-90.0, 90.0, 0.25)?;
                    mvdr_estimate(&r, &ula_geom, &grid)?.to_degrees()
                }
                Method::RootMusic => {
                    let y = synthesize_snapshots(&ula_geom, &sources, t, seed)?;
                    let r = sample_covariance(&y)?;
                    root_music(&r, &ula_geom, 1)?[0].to_degrees()
                }
                Method::Lasso => {
                    let schedule = build_schedule(m, k, None)?;
                    let aug = schedule.augmented();
                    let r = doa_core::swsha::synthesize_augmented_covariance(
                        &schedule, &sources, t, seed, 2.0,
                    )?;
                    let v = vectorize_virtual(&r, &aug)?;
                    let grid = AngleGrid::from_degrees(-90.0, 90.0, 1.0)?;
                    let dict = build_dictionary(v.lags(), &grid)?;
                    let solver = AdmmSolver::new(&dict, AdmmConfig::default())?;
                    let spectrum = solver.solve(&v)?;
                    if let Some(path) = dump_spectrum {
                        std::fs::write(path, spectrum.to_csv())?;
                    }
                    pick_peaks(&spectrum, 1)?[0].to_degrees()
                }
                Method::AsnDnn => {
                    let asn = Mlp::load(&model_dir.join("asn_delta0.5.mlp"))?;
                    let dnn = Mlp::load(&model_dir.join("dnn_delta0.5.mlp"))?;
                    let rho0 = SelectionVector::boundary_template(m, k)?;
                    let est = asn_dnn_estimate(
                        &asn,
                        &dnn,
                        &full,
                        &sources,
                        t,
                        &rho0,
                        &AsnDnnConfig::default(),
                        seed,
                    )?;
                    est.theta.to_degrees()
                }
            };
            println!("{estimate_deg:.4}");
            Ok(())
        }
        Command::Run { preset, config, sets, out_dir, trials, seed } => {
            if !PRESETS.contains(&preset.as_str()) {
                return Err(doa_core::Error::Usage(format!(
                    "unknown preset '{preset}'; expected one of {}",
                    PRESETS.join(", ")
                )));
            }
            let mut cfg = ExperimentConfig::for_preset(&preset)?;
            if let Some(path) = config {
                cfg.apply_file(&path)?;
            }
            for kv in &sets {
                let (key, value) = kv.split_once('=').ok_or_else(|| {
                    doa_core::Error::Usage(format!("--set wants key=value, got '{kv}'"))
                })?;
                cfg.apply_kv(key, value)?;
            }
            if let Some(d) = out_dir {
                cfg.out_dir = d;
            }
            if let Some(n) = trials {
                cfg.trials = n;
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if cfg.threads.is_none() {
                if let Ok(v) = std::env::var("DOA_THREADS") {
                    cfg.threads = Some(v.parse().map_err(|_| {
                        doa_core::Error::Usage(format!("bad DOA_THREADS value '{v}'"))
                    })?);
                }
            }
            let paths = run_preset(&cfg)?;
            for p in paths {
                println!("{}", p.display());
            }
            Ok(())
        }
    }
}
