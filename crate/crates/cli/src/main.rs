//! `xylab`: runs designs, sweeps and bounds and writes CSV.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use xycodes::analysis::{generalized_min_distance, x_precoder_dmin2};
use xycodes::codes::{design_x_angle, x_precoder_angle, y_precoder_params, PairEncoder};
use xycodes::constellation::YLabeling;
use xycodes::sim::{self, BetaSweep, SimConfig};
use xycodes::Scheme;

#[derive(Parser, Debug)]
#[command(name = "xylab", version, about = "X-/Y-Code MIMO link experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Design tables: X-Code angle, offline Y-Code (a, b), per-β precoder parameters.
    Design(Common),
    /// Error rates over an SNR grid on Rayleigh channels.
    SweepSnr(Common),
    /// Error rates over condition numbers on unit-gain 2x2 channels.
    SweepBeta(Common),
    /// X-Code error versus rotation angle.
    AngleScan {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Mode::Sim)]
        mode: Mode,
    },
    /// 2x2 X-Code union bound curve.
    Bound(Common),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Sim,
    Bound,
}

#[derive(Args, Debug, Default)]
struct Common {
    /// JSON run configuration; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    scheme: Option<Scheme>,
    #[arg(long)]
    nr: Option<usize>,
    #[arg(long)]
    nt: Option<usize>,
    /// PAM size per dimension (X) or codebook size (Y).
    #[arg(long = "mod")]
    m: Option<usize>,
    /// `start:stop:step` in dB, or a comma-separated list.
    #[arg(long)]
    snr: Option<String>,
    /// Comma-separated condition numbers.
    #[arg(long)]
    beta: Option<String>,
    /// Comma-separated rotation angles in radians.
    #[arg(long)]
    theta: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    min_word_errors: Option<u64>,
    #[arg(long)]
    max_words: Option<u64>,
    #[arg(long)]
    y_labeling: Option<YLabeling>,
    #[arg(long)]
    design_snr: Option<f64>,
    #[arg(long)]
    design_samples: Option<usize>,
    /// Simulate `y = Hx + n` in full.
    #[arg(long)]
    full_path: bool,
    /// Output CSV; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_list(s: &str, what: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<f64>().with_context(|| format!("invalid {what} value '{t}'"))
        })
        .collect()
}

/// `a:b:step` (inclusive) or a comma-separated list.
fn parse_snr(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [_] => parse_list(s, "SNR"),
        [a, b, step] => {
            let (a, b, step): (f64, f64, f64) = (
                a.trim().parse().with_context(|| format!("invalid SNR start '{a}'"))?,
                b.trim().parse().with_context(|| format!("invalid SNR stop '{b}'"))?,
                step.trim().parse().with_context(|| format!("invalid SNR step '{step}'"))?,
            );
            if step.is_nan() || step <= 0.0 || !a.is_finite() || !b.is_finite() || b < a {
                bail!("SNR range needs finite start <= stop and a positive step, got '{s}'");
            }
            let n = ((b - a) / step + 1e-9).floor() as usize;
            Ok((0..=n).map(|i| a + i as f64 * step).collect())
        }
        _ => bail!("SNR must be 'start:stop:step' or a comma-separated list, got '{s}'"),
    }
}

fn build_config(c: &Common) -> Result<SimConfig> {
    let mut cfg = match &c.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("cannot read config {}", p.display()))?;
            serde_json::from_str(&text).with_context(|| format!("invalid config {}", p.display()))?
        }
        None => SimConfig::default(),
    };
    if let Some(v) = c.scheme {
        cfg.scheme = v;
    }
    if let Some(v) = c.nr {
        cfg.n_r = v;
        if c.nt.is_none() && c.config.is_none() {
            cfg.n_t = v;
        }
    }
    if let Some(v) = c.nt {
        cfg.n_t = v;
    }
    if let Some(v) = c.m {
        cfg.m = v;
    }
    if let Some(s) = &c.snr {
        cfg.snr_points = parse_snr(s)?;
    }
    if let Some(s) = &c.beta {
        cfg.beta_sweep = Some(BetaSweep {
            betas: parse_list(s, "beta")?,
            unit_total_gain: true,
        });
    }
    if let Some(s) = &c.theta {
        cfg.angle_scan = Some(parse_list(s, "theta")?);
    }
    if let Some(v) = c.seed {
        cfg.seed = v;
    }
    if let Some(v) = c.workers {
        cfg.workers = v;
    }
    if let Some(v) = c.min_word_errors {
        cfg.min_word_errors = v;
    }
    if let Some(v) = c.max_words {
        cfg.max_words = v;
    }
    if let Some(v) = c.y_labeling {
        cfg.y_labeling = v;
    }
    if let Some(v) = c.design_snr {
        cfg.design_snr_db = v;
    }
    if let Some(v) = c.design_samples {
        cfg.design_samples = v;
    }
    if c.full_path {
        cfg.full_path = true;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn require_snr(cfg: &SimConfig) -> Result<()> {
    if cfg.snr_points.is_empty() {
        bail!("no SNR points; pass --snr or set snr_points in the config");
    }
    Ok(())
}

const DEFAULT_BETAS: [f64; 5] = [1.0, 2.0, 3.0, 5.0, 10.0];

fn design_table(cfg: &SimConfig) -> Result<String> {
    let (m, p_t, n_r) = (cfg.m, cfg.p_t, cfg.n_r);
    let mut out = String::from("table,M,pair,beta,theta,a,b,dmin2\n");
    let x = design_x_angle(m)?;
    let g = generalized_min_distance(x.theta, m, p_t, n_r)?;
    writeln!(out, "x-code,{m},,,{},,,{g:e}", x.theta)?;

    let y = SimConfig {
        scheme: Scheme::YCode,
        y_params: None,
        ..cfg.clone()
    }
    .build_design()?;
    for (k, enc) in y.encoders().iter().enumerate() {
        if let PairEncoder::Y { a, b } = enc {
            writeln!(out, "y-code,{m},{},,,{a},{b},", k + 1)?;
        }
    }

    let betas = cfg.beta_sweep.as_ref().map_or(DEFAULT_BETAS.to_vec(), |b| b.betas.clone());
    for beta in betas {
        // Unit total gain: λ_i² + λ_j² = 1.
        let lj = 1.0 / (1.0 + beta * beta).sqrt();
        let li = beta * lj;
        let theta = x_precoder_angle(beta, m)?;
        let d = x_precoder_dmin2(li, lj, m, p_t, n_r)?;
        writeln!(out, "x-precoder,{m},,{beta},{theta},,,{d:e}")?;
        let p = y_precoder_params(beta, m, p_t, n_r, li)?;
        writeln!(out, "y-precoder,{m},,{beta},,{},{},{:e}", p.a, p.b, p.dmin2)?;
    }
    Ok(out)
}

fn bound_csv(curves: &[xycodes::analysis::BoundCurve]) -> String {
    let mut out = String::new();
    for (i, c) in curves.iter().enumerate() {
        let csv = c.to_csv();
        if i == 0 {
            out.push_str(&csv);
        } else {
            out.extend(csv.lines().skip(1).map(|l| format!("{l}\n")));
        }
    }
    out
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Design(c) => {
            let cfg = build_config(&c)?;
            emit(c.out.as_deref(), &design_table(&cfg)?)
        }
        Command::SweepSnr(c) => {
            let cfg = build_config(&c)?;
            require_snr(&cfg)?;
            emit(c.out.as_deref(), &sim::sweep_snr(&cfg)?.to_csv())
        }
        Command::SweepBeta(c) => {
            let cfg = build_config(&c)?;
            require_snr(&cfg)?;
            if cfg.beta_sweep.is_none() {
                bail!("sweep-beta needs --beta or beta_sweep in the config");
            }
            emit(c.out.as_deref(), &sim::sweep_beta(&cfg)?.to_csv())
        }
        Command::AngleScan { common: c, mode } => {
            let mut cfg = build_config(&c)?;
            if c.scheme.is_none() && c.config.is_none() {
                cfg.scheme = Scheme::XCode;
            }
            require_snr(&cfg)?;
            let text = match mode {
                Mode::Sim => sim::angle_scan(&cfg)?.to_csv(),
                Mode::Bound => bound_csv(&sim::angle_scan_bound(&cfg)?),
            };
            emit(c.out.as_deref(), &text)
        }
        Command::Bound(c) => {
            let cfg = build_config(&c)?;
            require_snr(&cfg)?;
            if cfg.n_r != 2 || cfg.n_t != 2 {
                bail!("the closed-form bound is for 2x2 systems");
            }
            let thetas = match &cfg.angle_scan {
                Some(t) => t.clone(),
                None => vec![design_x_angle(cfg.m)?.theta],
            };
            let curves = thetas
                .iter()
                .map(|&t| sim::x_code_bound_curve(cfg.m, t, &cfg.snr_points))
                .collect::<xycodes::Result<Vec<_>>>()?;
            emit(c.out.as_deref(), &bound_csv(&curves))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("xylab: error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
