//! Seeded Monte-Carlo link simulation.
//!
//! Word `w` of a run draws its channel, then its bits, then its noise from
//! substream `w` of the run seed. Words are processed in batches that run in
//! parallel, but batches are merged in index order and the stop rule is
//! checked after each one, so counters depend only on the seed and the
//! configuration.

use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{x_union_bound_2x2, BoundCurve};
use crate::channel::{channel_from_condition, sample_rayleigh_channel, ChannelSample};
use crate::codes::{CodeDesign, Scheme, DEFAULT_DESIGN_SAMPLES, DEFAULT_DESIGN_SNR_DB};
use crate::constellation::YLabeling;
use crate::decoders::{decode_block, decode_rotated};
use crate::error::{Error, Result};
use crate::rng::{complex_normal, random_bits, substream};

/// Words per batch.
pub const BATCH_WORDS: u64 = 1024;
/// Batches dispatched to the pool at once.
const ROUND_BATCHES: u64 = 64;
const DESIGN_SEED_OFFSET: u64 = 0x9E37_79B9_7F4A_7C15;

/// Deterministic-channel sweep over condition numbers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BetaSweep {
    pub betas: Vec<f64>,
    /// Normalize `λ_1² + λ_2² = 1`; the only supported mode.
    #[serde(default = "default_true")]
    pub unit_total_gain: bool,
}

fn default_true() -> bool {
    true
}

/// Run configuration; mirrors the JSON accepted by the command line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimConfig {
    pub scheme: Scheme,
    pub n_r: usize,
    pub n_t: usize,
    pub m: usize,
    pub p_t: f64,
    /// SNR points `γ = P_T/N_0` in dB; `+∞` disables noise.
    pub snr_points: Vec<f64>,
    pub min_word_errors: u64,
    pub max_words: u64,
    pub seed: u64,
    /// Worker threads; 0 uses the pool default.
    pub workers: usize,
    pub beta_sweep: Option<BetaSweep>,
    /// X-Code angles in radians.
    pub angle_scan: Option<Vec<f64>>,
    pub y_labeling: YLabeling,
    /// Fixed Y-Code `(a, b)` per pair; designed offline when absent.
    pub y_params: Option<Vec<(f64, f64)>>,
    pub design_snr_db: f64,
    pub design_samples: usize,
    /// Simulate `y = Hx + n` in full instead of the diagonalized model.
    pub full_path: bool,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            scheme: Scheme::XCode,
            n_r: 2,
            n_t: 2,
            m: 2,
            p_t: 1.0,
            snr_points: Vec::new(),
            min_word_errors: 200,
            max_words: 10_000_000,
            seed: 1,
            workers: 0,
            beta_sweep: None,
            angle_scan: None,
            y_labeling: YLabeling::default(),
            y_params: None,
            design_snr_db: DEFAULT_DESIGN_SNR_DB,
            design_samples: DEFAULT_DESIGN_SAMPLES,
            full_path: false,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.n_r < 2 || !self.n_r.is_multiple_of(2) || self.n_r > self.n_t {
            return bad(format!("need even n_r >= 2 and n_r <= n_t, got {}x{}", self.n_r, self.n_t));
        }
        if self.m < 2 || !self.m.is_power_of_two() {
            return bad(format!("M must be a power of 2 >= 2, got {}", self.m));
        }
        if !(self.p_t > 0.0) || !self.p_t.is_finite() {
            return bad(format!("power budget must be positive, got {}", self.p_t));
        }
        if self.max_words == 0 {
            return bad("max_words must be positive".into());
        }
        if self.snr_points.iter().any(|s| s.is_nan() || *s == f64::NEG_INFINITY) {
            return bad("SNR points must be numbers or +inf".into());
        }
        if let Some(b) = &self.beta_sweep {
            if self.n_r != 2 || self.n_t != 2 {
                return bad("condition-number sweeps need a 2x2 system".into());
            }
            if !b.unit_total_gain {
                return bad("condition-number sweeps only support unit total gain".into());
            }
            if b.betas.iter().any(|x| !(x.is_finite() && *x >= 1.0)) {
                return bad("condition numbers must be finite and >= 1".into());
            }
        }
        if let (Scheme::YCode, Some(p)) = (self.scheme, &self.y_params) {
            if p.len() != self.n_r / 2 {
                return bad(format!("{} Y parameter pairs for {} pairs", p.len(), self.n_r / 2));
            }
        }
        Ok(())
    }

    /// Design for the configured scheme.
    pub fn build_design(&self) -> Result<CodeDesign> {
        self.validate()?;
        let (n_r, m, p_t) = (self.n_r, self.m, self.p_t);
        match self.scheme {
            Scheme::SvdUncoded => CodeDesign::uncoded(n_r, m, p_t),
            Scheme::XCode => CodeDesign::x_code(n_r, m, p_t),
            Scheme::XPrecoder => CodeDesign::x_precoder(n_r, m, p_t),
            Scheme::YPrecoder => CodeDesign::y_precoder(n_r, m, p_t, self.y_labeling),
            Scheme::YCode => match &self.y_params {
                Some(p) => CodeDesign::y_code(n_r, m, p_t, p, self.y_labeling),
                None => CodeDesign::y_code_offline(
                    n_r,
                    self.n_t,
                    m,
                    p_t,
                    self.design_snr_db,
                    self.design_samples,
                    self.seed.wrapping_add(DESIGN_SEED_OFFSET),
                    self.y_labeling,
                ),
            },
        }
    }

    fn pool(&self) -> Result<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build()
            .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))
    }
}

/// Counters of one operating point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OperatingPoint {
    pub scheme: Scheme,
    pub n_r: usize,
    pub n_t: usize,
    pub m: usize,
    pub eta: f64,
    pub snr_db: f64,
    pub beta: Option<f64>,
    pub theta: Option<f64>,
    pub seed: u64,
    pub bits: u64,
    pub bit_errors: u64,
    pub words: u64,
    pub word_errors: u64,
    /// Per pair: erroneous quadrature components (out of `2 · words`).
    pub component_errors: Vec<u64>,
    /// Per pair: words with an error in that pair.
    pub pair_errors: Vec<u64>,
    /// Mean `‖x‖²` over the simulated words.
    pub mean_tx_energy: f64,
    /// Mean `‖n‖²` over the simulated words.
    pub mean_noise_energy: f64,
    /// Stopped on the word cap before reaching the error target.
    pub hit_word_cap: bool,
    pub wall_time_s: f64,
}

impl OperatingPoint {
    pub fn ber(&self) -> f64 {
        ratio(self.bit_errors, self.bits)
    }

    pub fn wep(&self) -> f64 {
        ratio(self.word_errors, self.words)
    }

    /// Per-component error rate of pair `k`.
    pub fn component_error_rate(&self, k: usize) -> f64 {
        ratio(self.component_errors[k], 2 * self.words)
    }

    /// 95% normal-approximation half-width on the WEP.
    pub fn ci95(&self) -> f64 {
        if self.words == 0 {
            return 0.0;
        }
        let p = self.wep();
        1.96 * (p * (1.0 - p) / self.words as f64).sqrt()
    }
}

fn ratio(a: u64, b: u64) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

/// Operating points in run order.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SimResult {
    pub points: Vec<OperatingPoint>,
}

pub const CSV_HEADER: &str =
    "scheme,n_r,n_t,M,eta_bpsHz,snr_db,beta,theta,bits,bit_errors,words,word_errors,ber,wep,ci95,seed";

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

impl SimResult {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for p in &self.points {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                p.scheme,
                p.n_r,
                p.n_t,
                p.m,
                p.eta,
                p.snr_db,
                opt(p.beta),
                opt(p.theta),
                p.bits,
                p.bit_errors,
                p.words,
                p.word_errors,
                p.ber(),
                p.wep(),
                p.ci95(),
                p.seed
            );
        }
        out
    }

    pub fn emit_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv()).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }
}

#[derive(Debug, Clone, Default)]
struct Counters {
    bits: u64,
    bit_errors: u64,
    words: u64,
    word_errors: u64,
    component_errors: Vec<u64>,
    pair_errors: Vec<u64>,
    tx_energy: f64,
    noise_energy: f64,
}

impl Counters {
    fn new(pairs: usize) -> Self {
        Self {
            component_errors: vec![0; pairs],
            pair_errors: vec![0; pairs],
            ..Self::default()
        }
    }

    fn merge(&mut self, o: &Counters) {
        self.bits += o.bits;
        self.bit_errors += o.bit_errors;
        self.words += o.words;
        self.word_errors += o.word_errors;
        for (a, b) in self.component_errors.iter_mut().zip(&o.component_errors) {
            *a += b;
        }
        for (a, b) in self.pair_errors.iter_mut().zip(&o.pair_errors) {
            *a += b;
        }
        self.tx_energy += o.tx_energy;
        self.noise_energy += o.noise_energy;
    }
}

/// Channel source of a run.
#[derive(Debug, Clone)]
enum ChannelSource {
    Rayleigh { n_r: usize, n_t: usize },
    Fixed(ChannelSample),
}

struct PointSpec<'a> {
    design: &'a CodeDesign,
    channel: &'a ChannelSource,
    n0: f64,
    seed: u64,
    full_path: bool,
}

fn simulate_word(spec: &PointSpec<'_>, w: u64, c: &mut Counters, scratch: &mut Scratch) -> Result<()> {
    let mut rng = substream(spec.seed, w);
    let drawn;
    let ch = match spec.channel {
        ChannelSource::Rayleigh { n_r, n_t } => {
            drawn = sample_rayleigh_channel(*n_r, *n_t, &mut rng)?;
            &drawn
        }
        ChannelSource::Fixed(ch) => ch,
    };
    let d = spec.design.adapted(ch)?;
    random_bits(&mut rng, &mut scratch.bits);
    let sd = spec.n0.sqrt();
    for wi in scratch.noise.iter_mut() {
        *wi = complex_normal(&mut rng, 1.0) * sd;
    }
    d.encode_subchannels(&scratch.bits, &mut scratch.z)?;

    let (decoded, energy) = if spec.full_path {
        let x = ch.svd.v.adjoint().mul_vec(&scratch.z)?;
        let mut y = ch.h.mul_vec(&x)?;
        for (yi, ni) in y.iter_mut().zip(&scratch.noise) {
            *yi += ni;
        }
        let e = x.iter().map(|v| v.norm_sqr()).sum::<f64>();
        (decode_block(&y, ch, &d)?, e)
    } else {
        let u0 = d.displacement_vector();
        let lam = ch.singular_values();
        for i in 0..scratch.z.len() {
            scratch.r[i] = (scratch.z[i] - u0[i]) * lam[i] + scratch.noise[i];
        }
        let gains = ch.pair_gains(d.plan());
        decode_rotated(&scratch.r, &gains, &d, &mut scratch.out)?;
        let e = scratch.z.iter().map(|v| v.norm_sqr()).sum::<f64>();
        (std::mem::take(&mut scratch.out), e)
    };

    let cb = d.component_bits();
    let mut word_err = false;
    let mut errs = 0u64;
    for k in 0..d.plan().len() {
        let mut pair_err = false;
        for q in 0..2 {
            let lo = (2 * k + q) * cb;
            let e = (lo..lo + cb).filter(|&i| decoded[i] != scratch.bits[i]).count() as u64;
            errs += e;
            if e > 0 {
                c.component_errors[k] += 1;
                pair_err = true;
            }
        }
        if pair_err {
            c.pair_errors[k] += 1;
            word_err = true;
        }
    }
    c.bits += scratch.bits.len() as u64;
    c.bit_errors += errs;
    c.words += 1;
    c.word_errors += word_err as u64;
    c.tx_energy += energy;
    c.noise_energy += scratch.noise.iter().map(|v| v.norm_sqr()).sum::<f64>();
    if !spec.full_path {
        scratch.out = decoded;
    }
    Ok(())
}

struct Scratch {
    bits: Vec<u8>,
    out: Vec<u8>,
    z: Vec<Complex64>,
    r: Vec<Complex64>,
    noise: Vec<Complex64>,
}

fn run_batch(spec: &PointSpec<'_>, start: u64, end: u64) -> Result<Counters> {
    let n_r = spec.design.n_r();
    let nb = spec.design.bits_per_word();
    let zero = Complex64::new(0.0, 0.0);
    let mut scratch = Scratch {
        bits: vec![0; nb],
        out: vec![0; nb],
        z: vec![zero; n_r],
        r: vec![zero; n_r],
        noise: vec![zero; n_r],
    };
    let mut c = Counters::new(spec.design.plan().len());
    for w in start..end {
        simulate_word(spec, w, &mut c, &mut scratch)?;
    }
    Ok(c)
}

fn snr_to_n0(p_t: f64, snr_db: f64) -> f64 {
    if snr_db == f64::INFINITY {
        0.0
    } else {
        p_t / 10f64.powf(snr_db / 10.0)
    }
}

#[allow(clippy::too_many_arguments)]
fn run_spec(
    cfg: &SimConfig,
    pool: &rayon::ThreadPool,
    design: &CodeDesign,
    channel: &ChannelSource,
    snr_db: f64,
    beta: Option<f64>,
    theta: Option<f64>,
) -> Result<OperatingPoint> {
    let started = Instant::now();
    let spec = PointSpec {
        design,
        channel,
        n0: snr_to_n0(cfg.p_t, snr_db),
        seed: cfg.seed,
        full_path: cfg.full_path,
    };
    let mut total = Counters::new(design.plan().len());
    let n_batches = cfg.max_words.div_ceil(BATCH_WORDS);
    let mut next = 0u64;
    let mut done = false;
    while !done && next < n_batches {
        let round_end = (next + ROUND_BATCHES).min(n_batches);
        let batches: Vec<Result<Counters>> = pool.install(|| {
            (next..round_end)
                .into_par_iter()
                .map(|b| {
                    let start = b * BATCH_WORDS;
                    let end = ((b + 1) * BATCH_WORDS).min(cfg.max_words);
                    run_batch(&spec, start, end)
                })
                .collect()
        });
        for b in batches {
            total.merge(&b?);
            if total.word_errors >= cfg.min_word_errors || total.words >= cfg.max_words {
                done = true;
                break;
            }
        }
        next = round_end;
    }
    let words = total.words.max(1) as f64;
    Ok(OperatingPoint {
        scheme: design.scheme(),
        n_r: design.n_r(),
        n_t: cfg.n_t,
        m: design.m(),
        eta: design.spectral_efficiency(),
        snr_db,
        beta,
        theta,
        seed: cfg.seed,
        bits: total.bits,
        bit_errors: total.bit_errors,
        words: total.words,
        word_errors: total.word_errors,
        component_errors: total.component_errors,
        pair_errors: total.pair_errors,
        mean_tx_energy: total.tx_energy / words,
        mean_noise_energy: total.noise_energy / words,
        hit_word_cap: total.word_errors < cfg.min_word_errors,
        wall_time_s: started.elapsed().as_secs_f64(),
    })
}

fn rayleigh(cfg: &SimConfig) -> ChannelSource {
    ChannelSource::Rayleigh { n_r: cfg.n_r, n_t: cfg.n_t }
}

/// One operating point at `snr_db` over Rayleigh channels.
pub fn run_point(cfg: &SimConfig, snr_db: f64) -> Result<OperatingPoint> {
    let design = cfg.build_design()?;
    run_point_with(cfg, &design, snr_db)
}

/// [`run_point`] with a prebuilt design.
pub fn run_point_with(cfg: &SimConfig, design: &CodeDesign, snr_db: f64) -> Result<OperatingPoint> {
    cfg.validate()?;
    run_spec(cfg, &cfg.pool()?, design, &rayleigh(cfg), snr_db, None, None)
}

/// Every configured SNR point over Rayleigh channels.
pub fn sweep_snr(cfg: &SimConfig) -> Result<SimResult> {
    if cfg.snr_points.is_empty() {
        cfg.validate()?;
        return Ok(SimResult::default());
    }
    let design = cfg.build_design()?;
    sweep_snr_with(cfg, &design)
}

/// [`sweep_snr`] with a prebuilt design.
pub fn sweep_snr_with(cfg: &SimConfig, design: &CodeDesign) -> Result<SimResult> {
    cfg.validate()?;
    let pool = cfg.pool()?;
    let ch = rayleigh(cfg);
    let points = cfg
        .snr_points
        .iter()
        .map(|&s| run_spec(cfg, &pool, design, &ch, s, None, None))
        .collect::<Result<Vec<_>>>()?;
    Ok(SimResult { points })
}

/// Every (β, SNR) point on the deterministic unit-gain 2×2 channel.
pub fn sweep_beta(cfg: &SimConfig) -> Result<SimResult> {
    cfg.validate()?;
    let sweep = cfg
        .beta_sweep
        .as_ref()
        .ok_or_else(|| Error::Config("condition-number sweep needs a beta list".into()))?;
    let design = cfg.build_design()?;
    let pool = cfg.pool()?;
    let mut points = Vec::new();
    for &beta in &sweep.betas {
        let ch = ChannelSource::Fixed(channel_from_condition(beta)?);
        for &s in &cfg.snr_points {
            points.push(run_spec(cfg, &pool, &design, &ch, s, Some(beta), None)?);
        }
    }
    Ok(SimResult { points })
}

fn scan_angles(cfg: &SimConfig) -> Result<&[f64]> {
    cfg.validate()?;
    if cfg.scheme != Scheme::XCode {
        return Err(Error::Config("angle scans apply to the x-code scheme".into()));
    }
    cfg.angle_scan
        .as_deref()
        .ok_or_else(|| Error::Config("angle scan needs a theta list".into()))
}

/// Simulated X-Code error versus the rotation angle.
pub fn angle_scan(cfg: &SimConfig) -> Result<SimResult> {
    let thetas = scan_angles(cfg)?;
    let pool = cfg.pool()?;
    let ch = rayleigh(cfg);
    let mut points = Vec::new();
    for &theta in thetas {
        let design = CodeDesign::x_code_with_angle(cfg.n_r, cfg.m, cfg.p_t, theta)?;
        for &s in &cfg.snr_points {
            points.push(run_spec(cfg, &pool, &design, &ch, s, None, Some(theta))?);
        }
    }
    Ok(SimResult { points })
}

/// 2×2 X-Code union bound on the word error versus the rotation angle, one
/// curve per angle.
pub fn angle_scan_bound(cfg: &SimConfig) -> Result<Vec<BoundCurve>> {
    let thetas = scan_angles(cfg)?;
    if cfg.n_r != 2 || cfg.n_t != 2 {
        return Err(Error::Config("the closed-form bound is for 2x2 systems".into()));
    }
    thetas
        .iter()
        .map(|&theta| x_code_bound_curve(cfg.m, theta, &cfg.snr_points))
        .collect()
}

/// Word-error union bound `1 - (1 - P')²` of the 2×2 X-Code with angle
/// `theta` over `snr_db`.
pub fn x_code_bound_curve(m: usize, theta: f64, snr_db: &[f64]) -> Result<BoundCurve> {
    let mut curve = BoundCurve::new("x-code", format!("M={m};theta={theta}"));
    for &s in snr_db {
        let v = x_union_bound_2x2(theta, m, 10f64.powf(s / 10.0))?;
        curve.push(s, word_bound(v));
    }
    Ok(curve)
}

fn word_bound(v: crate::analysis::BoundValue) -> crate::analysis::BoundValue {
    use crate::analysis::{component_to_word_error, BoundValue};
    match v {
        BoundValue::Finite(p) => BoundValue::Finite(component_to_word_error(p)),
        d => d,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(scheme: Scheme) -> SimConfig {
        SimConfig {
            scheme,
            snr_points: vec![8.0],
            min_word_errors: 50,
            max_words: 20_000,
            seed: 5,
            y_params: Some(vec![(0.5, 0.35)]),
            ..SimConfig::default()
        }
    }

    #[test]
    fn noiseless_has_no_errors() {
        for s in Scheme::ALL {
            let c = SimConfig { snr_points: vec![f64::INFINITY], max_words: 5000, ..cfg(s) };
            let r = sweep_snr(&c).unwrap();
            assert_eq!(r.points[0].word_errors, 0, "{s}");
            assert_eq!(r.points[0].words, 5000);
            assert!(r.points[0].hit_word_cap);
        }
    }

    #[test]
    fn worker_count_does_not_change_counters() {
        for s in [Scheme::XCode, Scheme::YPrecoder] {
            let a = sweep_snr(&SimConfig { workers: 1, ..cfg(s) }).unwrap();
            let b = sweep_snr(&SimConfig { workers: 8, ..cfg(s) }).unwrap();
            assert_eq!(a.to_csv(), b.to_csv());
            assert_eq!(a.points[0].component_errors, b.points[0].component_errors);
        }
    }

    #[test]
    fn stop_rule_honoured() {
        let r = run_point(&cfg(Scheme::SvdUncoded), 5.0).unwrap();
        assert!(r.word_errors >= 50 && !r.hit_word_cap);
        assert_eq!(r.words % BATCH_WORDS, 0);
    }

    #[test]
    fn word_cap_is_exact() {
        let c = SimConfig { max_words: 1500, min_word_errors: u64::MAX, ..cfg(Scheme::XCode) };
        let r = run_point(&c, 10.0).unwrap();
        assert_eq!(r.words, 1500);
        assert!(r.hit_word_cap);
    }

    #[test]
    fn empty_snr_list() {
        let r = sweep_snr(&SimConfig { snr_points: vec![], ..cfg(Scheme::XCode) }).unwrap();
        assert!(r.points.is_empty());
        assert_eq!(r.to_csv(), format!("{CSV_HEADER}\n"));
    }

    #[test]
    fn full_path_agrees_with_fast_path() {
        for s in Scheme::ALL {
            let base = SimConfig { n_t: 3, max_words: 4096, min_word_errors: u64::MAX, ..cfg(s) };
            let fast = run_point(&base, 6.0).unwrap();
            let full = run_point(&SimConfig { full_path: true, ..base }, 6.0).unwrap();
            let (p, q) = (fast.wep(), full.wep());
            let se = (p * (1.0 - p) / 4096.0).sqrt();
            assert!((p - q).abs() <= 4.0 * se.max(1e-3), "{s}: {p} vs {q}");
            assert!((fast.mean_tx_energy - full.mean_tx_energy).abs() < 1e-9);
        }
    }

    #[test]
    fn energy_and_noise_audit() {
        let c = SimConfig { p_t: 2.0, max_words: 100_000, min_word_errors: u64::MAX, ..cfg(Scheme::XCode) };
        let r = run_point(&c, 10.0).unwrap();
        assert!((r.mean_tx_energy - 2.0).abs() < 0.02);
        let n0 = 2.0 / 10.0;
        assert!((r.mean_noise_energy / 2.0 - n0).abs() < 0.01 * n0);
    }

    #[test]
    fn component_counters_consistent() {
        let c = SimConfig { n_r: 4, n_t: 4, max_words: 8192, min_word_errors: u64::MAX, ..cfg(Scheme::XCode) };
        let r = run_point(&c, 6.0).unwrap();
        let pair_sum: u64 = r.pair_errors.iter().sum();
        assert!(r.word_errors <= pair_sum);
        for k in 0..2 {
            assert!(r.pair_errors[k] <= r.component_errors[k]);
            assert!(r.component_errors[k] <= 2 * r.pair_errors[k]);
        }
    }

    #[test]
    fn config_json_round_trip() {
        let c = cfg(Scheme::YCode);
        let js = serde_json::to_string(&c).unwrap();
        let back: SimConfig = serde_json::from_str(&js).unwrap();
        assert_eq!(back, c);
        let partial: SimConfig = serde_json::from_str(r#"{"scheme":"y-precoder","m":4}"#).unwrap();
        assert_eq!(partial.scheme, Scheme::YPrecoder);
        assert_eq!(partial.min_word_errors, 200);
        assert!(serde_json::from_str::<SimConfig>(r#"{"bogus":1}"#).is_err());
    }

    #[test]
    fn invalid_configs_rejected() {
        assert!(run_point(&SimConfig { n_r: 3, ..cfg(Scheme::XCode) }, 5.0).is_err());
        assert!(sweep_beta(&cfg(Scheme::XCode)).is_err());
        assert!(angle_scan(&cfg(Scheme::YCode)).is_err());
    }

    #[test]
    fn csv_written_with_path_errors() {
        let r = SimResult::default();
        let err = r.emit_csv(Path::new("/nonexistent-dir/x.csv")).unwrap_err();
        assert!(err.to_string().contains("/nonexistent-dir/x.csv"));
    }
}
