use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use lab_cli::bench::{run_benchmark, BenchOptions};
use lab_cli::calibrate::{calibrate_thresholds, CalibrateOptions};
use lab_cli::concentration::{run_concentration, ConcentrationOptions, Statistic};
use lab_cli::sweep::{run_phase_sweep, run_trial, tau_for, trial_instance, AlgoId, ExperimentManifest, Grid, NoiseSpec};
use lab_cli::{write_csv, TrialRecord};
use pseudo_moments::{
    build_lb_deg3, build_lb_deg4, deg3_lambda, deg4_lambda, or_uniform, verify_pe, PreconditionTable,
    VerifyTolerances,
};
use tensor_core::rng::{self, ids};
use tensor_core::{DenseTensor, SpikedInstance};

#[derive(Parser)]
#[command(name = "tpca", version, about = "Spiked tensor recovery, certification and lower-bound experiments")]
struct Cli {
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Worker threads for trial-level parallelism.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Draw a spiked instance and write it (binary tensor plus JSON sidecar).
    Gen(InstanceArgs),
    /// Recover the planted vector.
    Recover {
        #[arg(long, value_enum)]
        algo: RecoverAlgo,
        #[command(flatten)]
        source: Source,
    },
    /// Recover with the titi method, then certify the result.
    Certify {
        #[arg(long, value_enum)]
        algo: CertifyAlgo,
        #[command(flatten)]
        source: Source,
    },
    /// Build and verify a lower-bound pseudo-expectation for a Gaussian form.
    Lowerbound {
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(["3", "4"]))]
        degree: String,
        #[arg(long)]
        n: usize,
        /// Defaults to the calibrated constant times the degree's scale.
        #[arg(long)]
        lambda: Option<f64>,
        /// Precondition table; the shipped one when absent.
        #[arg(long)]
        table: Option<PathBuf>,
        /// Fall back to uniform moments when a precondition fails.
        #[arg(long)]
        fallback: bool,
        /// Where to save the moment matrix (with a JSON sidecar).
        #[arg(long)]
        save: Option<PathBuf>,
    },
    /// Fit log-log slopes of random-matrix norms.
    Concentration {
        #[arg(long, value_parser = parse_statistic)]
        statistic: Vec<Statistic>,
        #[arg(long = "n", num_args = 1.., default_values_t = [50, 75, 100, 150, 200, 300])]
        n: Vec<usize>,
        #[arg(long, default_value_t = 10)]
        reps: usize,
        #[arg(long, default_value_t = 30)]
        power_steps: usize,
    },
    /// Matvec and timing comparison of titi, shifted and naive unfolding.
    Bench {
        #[arg(long = "n", num_args = 1.., default_values_t = [200])]
        n: Vec<usize>,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 3.0)]
        tau_mult: f64,
        /// SVG plot path; next to `--out` when absent.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Regenerate the threshold tables from pure-noise draws. A size flag given without values
    /// skips its table.
    Calibrate {
        #[arg(long, num_args = 0.., default_values_t = [10, 20, 30, 50, 75, 100])]
        titi_n: Vec<usize>,
        #[arg(long, num_args = 0.., default_values_t = [4, 5, 6, 8, 10])]
        sdp_n: Vec<usize>,
        #[arg(long, num_args = 0.., default_values_t = [20, 30, 40])]
        lb3_n: Vec<usize>,
        #[arg(long, num_args = 0.., default_values_t = [15, 20, 25])]
        lb4_n: Vec<usize>,
        #[arg(long, default_value_t = 200)]
        reps: usize,
        #[arg(long, default_value_t = 40)]
        lb_reps: usize,
        #[arg(long, default_value_t = 0.99)]
        quantile: f64,
        /// Directory receiving the three JSON tables.
        #[arg(long)]
        dir: PathBuf,
    },
    /// Run an algorithm over a grid of sizes, signal strengths and noise models.
    Sweep {
        /// Read the whole experiment from a JSON manifest instead of the flags below.
        #[arg(long)]
        manifest: Option<PathBuf>,
        #[arg(long, value_parser = parse_algo, default_value = "titi")]
        algo: AlgoId,
        #[arg(long = "n", num_args = 1.., default_values_t = [50])]
        n: Vec<usize>,
        #[arg(long, num_args = 1.., default_values_t = [3])]
        k: Vec<usize>,
        #[arg(long, num_args = 1.., default_values_t = [1.0])]
        tau_mult: Vec<f64>,
        #[arg(long, num_args = 1.., value_parser = parse_noise, default_values = ["iid"])]
        noise: Vec<NoiseSpec>,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        /// Per-cell summary JSON.
        #[arg(long)]
        summary: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum RecoverAlgo {
    Unfold,
    Titi,
    Symmetric,
    Sdp,
}

#[derive(Clone, Copy, ValueEnum)]
enum CertifyAlgo {
    Titi,
    Sdp,
}

#[derive(Args)]
struct InstanceArgs {
    #[arg(long, default_value_t = 50)]
    n: usize,
    #[arg(long, default_value_t = 3)]
    k: usize,
    /// Signal strength; overrides `--tau-mult`.
    #[arg(long)]
    tau: Option<f64>,
    /// `τ = multiplier·n^{k/4}`.
    #[arg(long, default_value_t = 3.0)]
    tau_mult: f64,
    #[arg(long, value_parser = parse_noise, default_value = "iid")]
    noise: NoiseSpec,
}

#[derive(Args)]
struct Source {
    /// Instance written by `tpca gen`; drawn from the flags below when absent.
    #[arg(long)]
    input: Option<PathBuf>,
    #[command(flatten)]
    instance: InstanceArgs,
}

fn parse_statistic(s: &str) -> std::result::Result<Statistic, String> {
    s.parse().map_err(|e: lab_cli::LabError| e.to_string())
}

fn parse_algo(s: &str) -> std::result::Result<AlgoId, String> {
    s.parse().map_err(|e: lab_cli::LabError| e.to_string())
}

fn parse_noise(s: &str) -> std::result::Result<NoiseSpec, String> {
    s.parse().map_err(|e: lab_cli::LabError| e.to_string())
}

fn instance(args: &InstanceArgs, seed: u64) -> Result<SpikedInstance> {
    let tau = args.tau.unwrap_or_else(|| tau_for(args.n, args.k, args.tau_mult));
    Ok(trial_instance(args.n, args.k, tau, args.noise, seed)?)
}

fn load_or_draw(src: &Source, seed: u64) -> Result<SpikedInstance> {
    match &src.input {
        Some(p) => tensor_core::io::load_instance(p).with_context(|| format!("reading {}", p.display())),
        None => instance(&src.instance, seed),
    }
}

fn sink(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(File::create(p).with_context(|| format!("creating {}", p.display()))?),
        None => Box::new(io::stdout().lock()),
    })
}

fn emit_records(cli: &Cli, records: &[TrialRecord]) -> Result<()> {
    let w = sink(&cli.out)?;
    match cli.format {
        Format::Csv => write_csv(w, records)?,
        Format::Json => serde_json::to_writer_pretty(w, records)?,
    }
    Ok(())
}

fn emit_json(cli: &Cli, value: &impl serde::Serialize) -> Result<()> {
    let mut w = sink(&cli.out)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    Ok(())
}

fn gaussian_form(order: usize, n: usize, seed: u64) -> Result<DenseTensor> {
    let mut r = rng::stream(seed, ids::NOISE);
    Ok(DenseTensor::from_vec(order, n, rng::gaussian_vec(&mut r, n.pow(order as u32)))?)
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global()?;
    }
    match &cli.command {
        Command::Gen(args) => {
            let inst = instance(args, cli.seed)?;
            let Some(path) = &cli.out else { bail!("gen needs --out") };
            tensor_core::io::save_instance(path, &inst)?;
            eprintln!("wrote n={} k={} tau={:.4} to {}", inst.n(), inst.order(), inst.tau, path.display());
        }
        Command::Recover { algo, source } => {
            let inst = load_or_draw(source, cli.seed)?;
            let id = match algo {
                RecoverAlgo::Unfold => AlgoId::Unfold,
                RecoverAlgo::Titi => AlgoId::Titi,
                RecoverAlgo::Symmetric => AlgoId::Symmetric,
                RecoverAlgo::Sdp => AlgoId::Sdp,
            };
            emit_records(&cli, &[run_trial(id, &inst, cli.seed)?])?;
        }
        Command::Certify { algo, source } => {
            let inst = load_or_draw(source, cli.seed)?;
            let id = match algo {
                CertifyAlgo::Titi => AlgoId::CertifyTiti,
                CertifyAlgo::Sdp => AlgoId::CertifySdp,
            };
            emit_records(&cli, &[run_trial(id, &inst, cli.seed)?])?;
        }
        Command::Lowerbound { degree, n, lambda, table, fallback, save } => {
            let table = match table {
                Some(p) => PreconditionTable::load(p)?,
                None => PreconditionTable::shipped(),
            };
            let (a, lam, res) = if degree == "3" {
                let a = gaussian_form(3, *n, cli.seed)?;
                let lam = lambda.unwrap_or_else(|| deg3_lambda(*n, table.deg3.lambda_constant));
                let res = build_lb_deg3(&a, lam, &table.deg3);
                (a, lam, res)
            } else {
                let a = gaussian_form(4, *n, cli.seed)?;
                let lam = lambda.unwrap_or_else(|| deg4_lambda(*n, table.deg4.lambda_constant));
                let res = build_lb_deg4(&a, lam, &table.deg4);
                (a, lam, res)
            };
            let pe = if *fallback { or_uniform(res, *n)? } else { res? };
            let value = if a.order() == 3 { pe.moment.cubic_value(&a)? } else { pe.moment.quartic_value(&a)? };
            let report = verify_pe(&pe, &VerifyTolerances { seed: cli.seed, ..Default::default() })?;
            if let Some(p) = save {
                pe.save(p)?;
            }
            emit_json(
                &cli,
                &serde_json::json!({
                    "degree": degree, "n": n, "lambda": lam, "value": value,
                    "provenance": pe.provenance, "params": pe.params, "sphere": pe.sphere,
                    "preconditions": pe.preconditions, "verify": report,
                }),
            )?;
        }
        Command::Concentration { statistic, n, reps, power_steps } => {
            let stats = if statistic.is_empty() { Statistic::ALL.to_vec() } else { statistic.clone() };
            let opts = ConcentrationOptions { power_steps: *power_steps };
            let mut records = Vec::new();
            for s in stats {
                let rec = run_concentration(s, n, *reps, cli.seed, &opts)?;
                eprintln!(
                    "{}: slope {:.3} (95% CI {:.3}..{:.3}), expected {}",
                    s,
                    rec.fit.slope,
                    rec.fit.ci.0,
                    rec.fit.ci.1,
                    s.expected_slope()
                );
                records.push(rec);
            }
            match cli.format {
                Format::Json => emit_json(&cli, &records)?,
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(sink(&cli.out)?);
                    w.write_record(["statistic", "n", "rep", "norm"])?;
                    for r in &records {
                        for p in &r.points {
                            for (rep, v) in p.norms.iter().enumerate() {
                                w.write_record([r.statistic.as_str().to_string(), p.n.to_string(), rep.to_string(), v.to_string()])?;
                            }
                        }
                    }
                    w.flush()?;
                }
            }
        }
        Command::Bench { n, trials, tau_mult, svg } => {
            let out = run_benchmark(&BenchOptions { n: n.clone(), trials: *trials, seed: cli.seed, tau_multiplier: *tau_mult })?;
            emit_records(&cli, &out.records)?;
            let svg_path = svg.clone().or_else(|| cli.out.as_ref().map(|p| p.with_extension("svg")));
            if let Some(p) = svg_path {
                std::fs::write(&p, out.svg())?;
            }
            for s in &out.summary {
                eprintln!("{} n={}: matvecs {:.1} ± {:.1}, {:.3} ms/matvec", s.algo, s.n, s.matvecs_mean, s.matvecs_sd, s.ms_per_matvec);
            }
            for c in &out.operators {
                eprintln!("n={}: titi/gram matvec time ratio {:.1}", c.n, c.ratio());
            }
        }
        Command::Calibrate { titi_n, sdp_n, lb3_n, lb4_n, reps, lb_reps, quantile, dir } => {
            let opts = CalibrateOptions {
                titi_n: titi_n.clone(),
                sdp_n: sdp_n.clone(),
                lb3_n: lb3_n.clone(),
                lb4_n: lb4_n.clone(),
                reps: *reps,
                lb_reps: *lb_reps,
                quantile: *quantile,
                seed: cli.seed,
            };
            calibrate_thresholds(&opts)?.write_dir(dir)?;
            eprintln!("wrote tables to {}", dir.display());
        }
        Command::Sweep { manifest, algo, n, k, tau_mult, noise, trials, summary } => {
            let m = match manifest {
                Some(p) => read_manifest(p)?,
                None => ExperimentManifest {
                    algorithm: *algo,
                    grid: Grid { n: n.clone(), k: k.clone(), tau_multiplier: tau_mult.clone(), noise: noise.clone() },
                    trials: *trials,
                    seed: cli.seed,
                    csv: cli.out.clone(),
                    summary: summary.clone(),
                },
            };
            let out = run_phase_sweep(&m)?;
            match &m.csv {
                Some(p) => write_csv(File::create(p)?, &out.records)?,
                None => emit_records(&cli, &out.records)?,
            }
            if let Some(p) = &m.summary {
                serde_json::to_writer_pretty(File::create(p)?, &out.cells)?;
            }
            for c in &out.cells {
                eprintln!(
                    "{} n={} k={} tau={:.2} {:?}: {} done, {} failed, median corr² {}",
                    c.algo,
                    c.n,
                    c.k,
                    c.tau,
                    c.noise,
                    c.completed,
                    c.failures.len(),
                    c.corr_sq_median.map_or("-".into(), |x| format!("{x:.3}"))
                );
            }
        }
    }
    Ok(())
}

fn read_manifest(p: &Path) -> Result<ExperimentManifest> {
    let f = File::open(p).with_context(|| format!("reading {}", p.display()))?;
    Ok(serde_json::from_reader(f)?)
}
