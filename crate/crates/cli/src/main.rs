use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::json;

use rrg_core::config::{ExperimentConfig, ExperimentKind, GridConfig};
use rrg_core::experiments::output::write_atomic;
use rrg_core::experiments::{Statistic, ZScale};
use rrg_core::graph::{format_edge_list, read_edge_list, Parameters};
use rrg_core::resampling::{apply, propose, woodbury_f};
use rrg_core::resolvent::{local_law_error, sample_pairs};
use rrg_core::rng::{stream, substream, Purpose};
use rrg_core::run::{run, run_file, RunOutcome};
use rrg_core::sampler::{Model, SamplerConfig};
use rrg_core::{Adjacency, Factorization, Point, Result};

/// Worker-thread count; outputs do not depend on it.
const THREADS_ENV: &str = "RRG_THREADS";

#[derive(Parser)]
#[command(name = "rrg", version, about = "Spectral experiments on random regular graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw a random d-regular graph and write it as an edge list.
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        d: usize,
        #[arg(long, default_value = "uniform")]
        model: Model,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Stream index: the same (seed, index) always yields the same graph.
        #[arg(long, default_value_t = 0)]
        index: u64,
        /// Number of graphs, drawn at indices index, index+1, ...
        #[arg(long, default_value_t = 1)]
        count: u64,
        /// Output file (stdout if omitted); with --count > 1, a directory that
        /// receives graph_<index>.txt per graph.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Resolvent diagnostics of a graph at one spectral parameter (JSON).
    Resolvent {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        z_re: f64,
        #[arg(long)]
        z_im: f64,
        #[arg(long, value_enum)]
        report: ResolventReport,
        /// Rows checked by the ward and rowsum reports.
        #[arg(long, default_value_t = 10)]
        rows: usize,
        /// Ball radius of the locallaw report.
        #[arg(long, default_value_t = 3)]
        radius: usize,
        /// Sampled pairs of the locallaw report.
        #[arg(long, default_value_t = 100)]
        pairs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// One local resampling around a vertex.
    Resample {
        #[arg(long)]
        graph: PathBuf,
        /// Center vertex.
        #[arg(long)]
        o: usize,
        #[arg(long, default_value_t = 1)]
        ell: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Tree radius override.
        #[arg(long)]
        tree_radius: Option<usize>,
        #[arg(long)]
        isolation_radius: Option<usize>,
        #[arg(long, value_enum, default_value_t = Emit::Report)]
        emit: Emit,
        /// Spectral parameter for the operator residuals in the report.
        #[arg(long, default_value_t = 0.0)]
        z_re: f64,
        #[arg(long, default_value_t = 2.0)]
        z_im: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one experiment configured by flags.
    Experiment {
        #[arg(value_enum)]
        kind: Kind,
        #[command(flatten)]
        opts: ExperimentOpts,
    },
    /// Run the experiment described by a TOML configuration file.
    Run { config: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum ResolventReport {
    Ward,
    Rowsum,
    Q,
    Locallaw,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    Graph,
    Report,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Esd,
    Sce,
    Loop,
    Edge,
    Exch,
    Avg,
}

#[derive(Clone, Copy, ValueEnum)]
enum Scale {
    Fixed,
    N23,
    Edge,
}

/// Flags mirroring the configuration keys.
#[derive(Args)]
struct ExperimentOpts {
    /// Graph sizes (repeat or comma-separate).
    #[arg(long = "n", required = true, value_delimiter = ',')]
    n_list: Vec<usize>,
    #[arg(long, default_value_t = 3)]
    d: usize,
    #[arg(long, value_delimiter = ',')]
    ell: Vec<usize>,
    #[arg(long, default_value = "uniform")]
    model: Model,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10)]
    samples: usize,
    #[arg(long)]
    radius_exponent: Option<f64>,
    #[arg(long)]
    eta_exponent: Option<f64>,
    #[arg(long, default_value = "lambda2")]
    statistic: Statistic,
    #[arg(long, value_delimiter = ',', requires = "grid_im")]
    grid_re: Vec<f64>,
    #[arg(long, value_delimiter = ',', requires = "grid_re")]
    grid_im: Vec<f64>,
    #[arg(long, value_enum, default_value_t = Scale::Fixed)]
    grid_scale: Scale,
    #[arg(long)]
    tree_radius: Option<usize>,
    #[arg(long)]
    isolation_radius: Option<usize>,
    /// Exit nonzero if a check fails.
    #[arg(long)]
    acceptance: bool,
    /// CSV path (defaults to `<kind>.csv`).
    #[arg(long)]
    out: Option<PathBuf>,
}

impl ExperimentOpts {
    fn into_config(self, kind: Kind) -> ExperimentConfig {
        let kind = match kind {
            Kind::Esd => ExperimentKind::Esd,
            Kind::Sce => ExperimentKind::Sce,
            Kind::Loop => ExperimentKind::Loop,
            Kind::Edge => ExperimentKind::Edge,
            Kind::Exch => ExperimentKind::Exch,
            Kind::Avg => ExperimentKind::Avg,
        };
        let mut cfg = ExperimentConfig::new(kind, self.n_list);
        cfg.d = self.d;
        if !self.ell.is_empty() {
            cfg.ell = self.ell;
        }
        cfg.model = self.model;
        cfg.seed = self.seed;
        cfg.samples = self.samples;
        if let Some(c) = self.radius_exponent {
            cfg.radius_exponent = c;
        }
        if let Some(g) = self.eta_exponent {
            cfg.eta_exponent = g;
        }
        cfg.statistic = self.statistic;
        if !self.grid_re.is_empty() {
            let scale = match self.grid_scale {
                Scale::Fixed => ZScale::Fixed,
                Scale::N23 => ZScale::N23,
                Scale::Edge => ZScale::Edge,
            };
            cfg.grid = Some(GridConfig { re: self.grid_re, im: self.grid_im, scale });
        }
        cfg.radii.tree = self.tree_radius;
        cfg.radii.isolation = self.isolation_radius;
        cfg.acceptance = self.acceptance;
        cfg.output = self.out;
        cfg
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => write_atomic(p, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value");
    s.push('\n');
    s
}

fn resolvent_report(
    graph: &Path,
    point: Point,
    report: ResolventReport,
    rows: usize,
    radius: usize,
    pairs: usize,
    seed: u64,
) -> Result<serde_json::Value> {
    let g = read_edge_list(graph)?;
    let n = g.n();
    let fact = Factorization::new(Adjacency::new(g.clone()))?;
    let cache = fact.resolvent(point)?;
    let picks: Vec<usize> = (0..rows.min(n)).map(|k| k * n / rows.min(n).max(1)).collect();
    let z = json!({"re": point.re(), "im": point.eta()});
    Ok(match report {
        ResolventReport::Ward => {
            let res: Vec<f64> = picks.iter().map(|&i| cache.ward_residual(i)).collect();
            json!({"report": "ward", "z": z, "rows": picks, "residuals": res,
                   "max_residual": res.iter().copied().fold(0.0, f64::max)})
        }
        ResolventReport::Rowsum => {
            let res: Vec<f64> = picks.iter().map(|&i| cache.row_sum_residual(i)).collect();
            json!({"report": "rowsum", "z": z, "rows": picks, "residuals": res,
                   "max_residual": res.iter().copied().fold(0.0, f64::max)})
        }
        ResolventReport::Q => {
            let q = cache.q()?;
            let m = cache.m_n();
            let dz = cache.dz_m_n();
            json!({"report": "q", "z": z, "q": [q.re, q.im], "m_n": [m.re, m.im], "dz_m_n": [dz.re, dz.im]})
        }
        ResolventReport::Locallaw => {
            let mut rng = stream(seed, 0);
            let ps = sample_pairs(&g, pairs, 2 * radius, &mut rng);
            let r = local_law_error(&cache, radius, &ps)?;
            json!({"report": "locallaw", "z": z, "result": r})
        }
    })
}

#[allow(clippy::too_many_arguments)]
fn resample(
    graph: &Path,
    o: usize,
    ell: usize,
    seed: u64,
    tree_radius: Option<usize>,
    isolation_radius: Option<usize>,
    emit_kind: Emit,
    point: Point,
    out: Option<&Path>,
) -> Result<()> {
    let g = read_edge_list(graph)?;
    let mut params = Parameters::new(g.n(), g.d());
    if let Some(r) = tree_radius {
        params = params.with_radius(r);
    }
    if let Some(r) = isolation_radius {
        params = params.with_isolation_radius(r);
    }
    params = params.with_ell(ell);
    let mut rng = substream(seed, 0, Purpose::Resample);
    let s = propose(&g, o, &params, &mut rng)?;
    let sw = apply(&g, &s)?;
    if emit_kind == Emit::Graph {
        return emit(out, &format_edge_list(&sw.graph));
    }
    let op = woodbury_f::<f64>(&g, &sw.graph, &s, &sw.applied, point)?;
    let report = json!({
        "center": o,
        "ell": ell,
        "isolation_radius": s.isolation_radius,
        "mu": s.mu(),
        "admissible": s.admissible_set(),
        "w_size": s.admissible_set().len(),
        "applied": sw.applied,
        "conflicts": sw.conflicts,
        "quads": op.quads,
        "z": {"re": point.re(), "im": point.eta()},
        "woodbury_residual": op.identity_residual,
        "perturbation_residual": op.perturbation_residual,
        "support_leak": op.support_leak,
    });
    emit(out, &pretty(&report))
}

fn report_outcome(o: &RunOutcome) -> ExitCode {
    for c in &o.checks {
        eprintln!("{} {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    eprintln!("wrote {} and {}", o.csv.display(), o.manifest.display());
    ExitCode::from(o.exit_code() as u8)
}

fn configure_threads() -> Result<()> {
    let Ok(v) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = v.trim().parse().map_err(|_| {
        rrg_core::Error::Validation(vec![format!("{THREADS_ENV} = {v:?} is not a thread count")])
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| rrg_core::Error::Validation(vec![e.to_string()]))
}

fn main_inner(cli: Cli) -> Result<ExitCode> {
    configure_threads()?;
    match cli.command {
        Command::Sample { n, d, model, seed, index, count, out } => {
            let cfg = SamplerConfig::new(n, d, model, seed);
            if count == 1 {
                emit(out.as_deref(), &format_edge_list(&cfg.sample_indexed(index)?))?;
            } else {
                let dir = out.ok_or_else(|| {
                    rrg_core::Error::Validation(vec!["--count > 1 needs --out <directory>".into()])
                })?;
                (index..index + count).into_par_iter().try_for_each(|i| {
                    let g = cfg.sample_indexed(i)?;
                    write_atomic(&dir.join(format!("graph_{i}.txt")), format_edge_list(&g).as_bytes())
                })?;
            }
        }
        Command::Resolvent { graph, z_re, z_im, report, rows, radius, pairs, seed } => {
            let p = Point::from_parts(z_re, z_im)?;
            let v = resolvent_report(&graph, p, report, rows, radius, pairs, seed)?;
            print!("{}", pretty(&v));
        }
        Command::Resample { graph, o, ell, seed, tree_radius, isolation_radius, emit, z_re, z_im, out } => {
            let p = Point::from_parts(z_re, z_im)?;
            resample(&graph, o, ell, seed, tree_radius, isolation_radius, emit, p, out.as_deref())?;
        }
        Command::Experiment { kind, opts } => {
            let cfg = opts.into_config(kind);
            let csv = cfg.output_path(Path::new(""), cfg.experiment.name());
            return Ok(report_outcome(&run(&cfg, &csv)?));
        }
        Command::Run { config } => return Ok(report_outcome(&run_file(&config)?)),
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match main_inner(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
