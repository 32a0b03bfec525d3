//! `cubicnet`: spectral networks, phase scans, chambers, walls and BPS data
//! of cubic differentials from the command line.
//!
//! Exit status: 0 on success, 1 on an engine error or a failed wall-crossing
//! check, 2 on a configuration error.

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use cubicnet::bps::{bps_structure, verify_wcf, Sector};
use cubicnet::degeneration::{find_saddles, find_tripods, scan_phases};
use cubicnet::io::{to_json, DifferentialSpec, NetworkDump, ScanDump};
use cubicnet::network::{build, Caps};
use cubicnet::render::{render_svg, Frame};
use cubicnet::spectralcore::compute_spectral_core;
use cubicnet::trajectory::Limits;
use cubicnet::walls::{classify_chamber, trace_wall};
use cubicnet::{Tolerances, C64};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Directory of the content-addressed wall cache.
const CACHE_ENV: &str = "CUBICNET_CACHE_DIR";

#[derive(Parser)]
#[command(name = "cubicnet", version, about = "Spectral networks of polynomial cubic differentials")]
struct Cli {
    /// JSON run configuration; its fields override the flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write JSON here instead of stdout.
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the spectral network at one phase.
    Network(NetworkArgs),
    /// Special phases and core types over a full period of phases.
    Scan(ScanArgs),
    /// Chamber of t in the normalized family.
    Classify(TArgs),
    /// Sample a wall Δ_k in the fundamental domain.
    Walls(WallArgs),
    /// Central charges and active classes.
    Bps(TArgs),
    /// Compare sector products on both sides of a wall.
    VerifyWcf(WcfArgs),
}

fn parse_c64(s: &str) -> Result<C64, String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected re,im, got {s:?}"))?;
    let re = a.trim().parse::<f64>().map_err(|e| format!("{a:?}: {e}"))?;
    let im = b.trim().parse::<f64>().map_err(|e| format!("{b:?}: {e}"))?;
    Ok(C64::new(re, im))
}

#[derive(Clone)]
struct Coeffs(Vec<C64>);

fn parse_coeffs(s: &str) -> Result<Coeffs, String> {
    s.split(';').map(parse_c64).collect::<Result<_, _>>().map(Coeffs)
}

#[derive(Args, Clone)]
struct DiffArgs {
    /// Parameter t of the normalized family, as re,im.
    #[arg(long, value_parser = parse_c64, allow_hyphen_values = true)]
    t: Option<C64>,
    /// Scale α of the normalized family, as re,im.
    #[arg(long, value_parser = parse_c64, allow_hyphen_values = true)]
    alpha: Option<C64>,
    /// Ascending coefficients of P(x) for P(x)dx³, as re,im;re,im;…
    #[arg(long, value_parser = parse_coeffs, allow_hyphen_values = true, conflicts_with = "t")]
    coeffs: Option<Coeffs>,
}

#[derive(Args, Clone)]
struct NetworkArgs {
    #[command(flatten)]
    diff: DiffArgs,
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<f64>,
    #[arg(long)]
    max_generation: Option<usize>,
    #[arg(long)]
    max_trajectories: Option<usize>,
    /// Write an SVG figure.
    #[arg(long)]
    svg: Option<PathBuf>,
    #[arg(long, value_enum)]
    frame: Option<FrameArg>,
}

#[derive(Clone, Copy, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum FrameArg {
    Chart,
    Original,
}

#[derive(Args, Clone)]
struct ScanArgs {
    #[command(flatten)]
    diff: DiffArgs,
    /// Phase samples per period for the saddle sweep.
    #[arg(long)]
    samples: Option<usize>,
}

#[derive(Args, Clone)]
struct TArgs {
    #[command(flatten)]
    diff: DiffArgs,
}

#[derive(Args, Clone)]
struct WallArgs {
    #[arg(long)]
    k: Option<u8>,
    #[arg(long)]
    samples: Option<usize>,
}

#[derive(Args, Clone)]
struct WcfArgs {
    #[arg(long, value_parser = parse_c64, allow_hyphen_values = true)]
    t1: Option<C64>,
    #[arg(long, value_parser = parse_c64, allow_hyphen_values = true)]
    t2: Option<C64>,
    #[arg(long, value_parser = parse_c64, allow_hyphen_values = true)]
    alpha: Option<C64>,
    /// Sector bounds lo,hi in radians.
    #[arg(long, value_parser = parse_c64, allow_hyphen_values = true)]
    sector: Option<C64>,
}

/// Everything a run needs; the JSON form of `--config`.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct RunConfig {
    differential: Option<DifferentialSpec>,
    theta: Option<f64>,
    caps: Option<Caps>,
    tolerances: Option<Tolerances>,
    svg: Option<PathBuf>,
    json: Option<PathBuf>,
    frame: Option<Frame>,
    samples: Option<usize>,
    k: Option<u8>,
    t1: Option<C64>,
    t2: Option<C64>,
    alpha: Option<C64>,
    sector: Option<[f64; 2]>,
}

impl RunConfig {
    fn overlay(self, file: RunConfig) -> RunConfig {
        RunConfig {
            differential: file.differential.or(self.differential),
            theta: file.theta.or(self.theta),
            caps: file.caps.or(self.caps),
            tolerances: file.tolerances.or(self.tolerances),
            svg: file.svg.or(self.svg),
            json: file.json.or(self.json),
            frame: file.frame.or(self.frame),
            samples: file.samples.or(self.samples),
            k: file.k.or(self.k),
            t1: file.t1.or(self.t1),
            t2: file.t2.or(self.t2),
            alpha: file.alpha.or(self.alpha),
            sector: file.sector.or(self.sector),
        }
    }

    fn validate(&self) -> anyhow::Result<()> {
        if let Some(tol) = &self.tolerances {
            tol.validate().map_err(|e| anyhow!(e))?;
        }
        if let Some(c) = &self.caps {
            if c.max_generation == 0 || c.max_trajectories == 0 {
                bail!("caps must be at least 1");
            }
        }
        Ok(())
    }

    fn tol(&self) -> Tolerances {
        self.tolerances.clone().unwrap_or_default()
    }

    fn differential(&self) -> anyhow::Result<&DifferentialSpec> {
        self.differential.as_ref().ok_or_else(|| anyhow!("a differential is required: --t or --coeffs"))
    }

    fn t(&self) -> anyhow::Result<C64> {
        match self.differential()? {
            DifferentialSpec::Normalized { t, .. } => Ok(*t),
            DifferentialSpec::Generic { .. } => bail!("this command needs the normalized family (--t)"),
        }
    }
}

fn diff_spec(d: &DiffArgs) -> Option<DifferentialSpec> {
    if let Some(c) = &d.coeffs {
        return Some(DifferentialSpec::Generic { coefficients: c.0.clone() });
    }
    d.t.map(|t| DifferentialSpec::Normalized { alpha: d.alpha.unwrap_or(C64::new(1.0, 0.0)), t })
}

fn flags_config(cli: &Cli) -> RunConfig {
    let mut c = RunConfig { json: cli.json.clone(), ..Default::default() };
    match &cli.command {
        Command::Network(a) => {
            c.differential = diff_spec(&a.diff);
            c.theta = a.theta;
            if a.max_generation.is_some() || a.max_trajectories.is_some() {
                let d = Caps::default();
                c.caps = Some(Caps {
                    max_generation: a.max_generation.unwrap_or(d.max_generation),
                    max_trajectories: a.max_trajectories.unwrap_or(d.max_trajectories),
                });
            }
            c.svg = a.svg.clone();
            c.frame = a.frame.map(|f| match f {
                FrameArg::Chart => Frame::Chart,
                FrameArg::Original => Frame::Original,
            });
        }
        Command::Scan(a) => {
            c.differential = diff_spec(&a.diff);
            c.samples = a.samples;
        }
        Command::Classify(a) | Command::Bps(a) => c.differential = diff_spec(&a.diff),
        Command::Walls(a) => {
            c.k = a.k;
            c.samples = a.samples;
        }
        Command::VerifyWcf(a) => {
            c.t1 = a.t1;
            c.t2 = a.t2;
            c.alpha = a.alpha;
            c.sector = a.sector.map(|s| [s.re, s.im]);
        }
    }
    c
}

enum Failure {
    Config(anyhow::Error),
    Engine(anyhow::Error),
}

fn engine<T>(r: cubicnet::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| Failure::Engine(e.into()))
}

fn config<T>(r: anyhow::Result<T>) -> Result<T, Failure> {
    r.map_err(Failure::Config)
}

fn emit(cfg: &RunConfig, text: &str) -> Result<(), Failure> {
    match &cfg.json {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())).map_err(Failure::Engine),
        None => {
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            Ok(())
        }
    }
}

/// Content hash of a wall request.
fn wall_key(k: u8, samples: usize, tol: &Tolerances) -> String {
    let payload = serde_json::json!({ "k": k, "grid": samples, "tolerances": tol });
    hex::encode(Sha256::digest(payload.to_string().as_bytes()))
}

#[derive(Serialize, Deserialize)]
struct WallDump {
    k: u8,
    samples: usize,
    points: Vec<C64>,
}

fn cached_wall(dir: Option<&Path>, k: u8, samples: usize, tol: &Tolerances) -> Result<WallDump, Failure> {
    let path = dir.map(|d| d.join(format!("wall-{}.json", wall_key(k, samples, tol))));
    if let Some(p) = &path {
        if let Ok(text) = std::fs::read_to_string(p) {
            if let Ok(w) = serde_json::from_str::<WallDump>(&text) {
                return Ok(w);
            }
        }
    }
    let points = engine(trace_wall(k, samples, tol))?;
    let w = WallDump { k, samples, points };
    if let (Some(p), Some(d)) = (&path, dir) {
        std::fs::create_dir_all(d).and_then(|_| std::fs::write(p, to_json(&w))).map_err(|e| Failure::Engine(e.into()))?;
    }
    Ok(w)
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let mut cfg = flags_config(cli);
    if let Some(p) = &cli.config {
        let text = config(std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display())))?;
        let file: RunConfig = config(serde_json::from_str(&text).context("parsing the run configuration"))?;
        cfg = cfg.overlay(file);
    }
    config(cfg.validate())?;
    let tol = cfg.tol();
    match &cli.command {
        Command::Network(_) => {
            let phi = engine(config(cfg.differential())?.build())?;
            let theta = cfg.theta.unwrap_or(0.0);
            let limits = Limits::for_differential(&phi, &tol);
            let net = build(&phi, theta, &cfg.caps.unwrap_or_default(), &limits, &tol);
            let core = compute_spectral_core(&net).ok();
            if let Some(p) = &cfg.svg {
                let saddles: Vec<Vec<C64>> = if phi.is_normalized() {
                    let s = engine(find_saddles(&phi, &limits, &tol))?;
                    let at_theta: Vec<_> = s
                        .into_iter()
                        .filter(|s| cubicnet::Phase::new(s.phase).cyclic_distance(cubicnet::Phase::new(theta)) < 1e-3)
                        .collect();
                    let mut paths: Vec<Vec<C64>> = at_theta.iter().map(|s| s.path.clone()).collect();
                    let tripods = engine(find_tripods(&phi, &at_theta, &limits, &tol))?;
                    for t in tripods {
                        if cubicnet::Phase::new(t.phase).cyclic_distance(cubicnet::Phase::new(theta)) < 1e-3 {
                            for z in 0..3 {
                                paths.push(vec![phi.zero_chart(t.zeros[z]), t.fermat_point]);
                            }
                        }
                    }
                    paths
                } else {
                    vec![]
                };
                let svg = render_svg(&net, core.as_ref(), &saddles, cfg.frame.unwrap_or_default());
                std::fs::write(p, svg).map_err(|e| Failure::Engine(e.into()))?;
            }
            emit(&cfg, &to_json(&NetworkDump::new(&net, core.as_ref())))
        }
        Command::Scan(_) => {
            let phi = engine(config(cfg.differential())?.build())?;
            let scan = engine(scan_phases(&phi, cfg.samples.unwrap_or(90), &tol))?;
            emit(&cfg, &to_json(&ScanDump::from(&scan)))
        }
        Command::Classify(_) => {
            let t = config(cfg.t())?;
            let r = engine(classify_chamber(t, &tol))?;
            emit(&cfg, &to_json(&r))
        }
        Command::Walls(_) => {
            let k = config(cfg.k.ok_or_else(|| anyhow!("--k is required")))?;
            if !(1..=4).contains(&k) {
                return Err(Failure::Config(anyhow!("k must be 1, 2, 3 or 4")));
            }
            let dir = std::env::var_os(CACHE_ENV).map(PathBuf::from);
            let w = cached_wall(dir.as_deref(), k, cfg.samples.unwrap_or(64), &tol)?;
            emit(&cfg, &to_json(&w))
        }
        Command::Bps(_) => {
            let (t, alpha) = match config(cfg.differential())? {
                DifferentialSpec::Normalized { alpha, t } => (*t, *alpha),
                _ => return Err(Failure::Config(anyhow!("bps needs the normalized family (--t)"))),
            };
            let b = engine(bps_structure(t, alpha, &tol))?;
            emit(&cfg, &to_json(&b))
        }
        Command::VerifyWcf(_) => {
            let t1 = config(cfg.t1.ok_or_else(|| anyhow!("--t1 is required")))?;
            let t2 = config(cfg.t2.ok_or_else(|| anyhow!("--t2 is required")))?;
            let [lo, hi] = config(cfg.sector.ok_or_else(|| anyhow!("--sector is required")))?;
            let alpha = cfg.alpha.unwrap_or(C64::new(1.0, 0.0));
            let r = engine(verify_wcf(t1, t2, alpha, Sector { lo, hi }, &tol))?;
            emit(&cfg, &to_json(&r))?;
            if r.equal {
                Ok(())
            } else {
                Err(Failure::Engine(anyhow!("sector products differ")))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(e)) => {
            eprintln!("configuration error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Engine(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
