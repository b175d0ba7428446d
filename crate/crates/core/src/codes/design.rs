use std::borrow::Cow;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::angle::{design_x_angle, x_precoder_angle};
use super::ydesign::{y_code_params_offline, y_precoder_params};
use crate::analysis::EigenPairSample;
use crate::channel::ChannelSample;
use crate::constellation::{
    build_pam, build_y_codebook, y_bits_to_index, y_index_to_coords, GrayCodec, PamAlphabet,
    YLabeling,
};
use crate::error::{dimension, domain, Result};
use crate::linalg::ComplexMatrix;
use crate::pairing::PairingPlan;

/// Transmission scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    SvdUncoded,
    XCode,
    XPrecoder,
    YCode,
    YPrecoder,
}

impl Scheme {
    pub const ALL: [Scheme; 5] = [
        Scheme::SvdUncoded,
        Scheme::XCode,
        Scheme::XPrecoder,
        Scheme::YCode,
        Scheme::YPrecoder,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Self::SvdUncoded => "svd-uncoded",
            Self::XCode => "x-code",
            Self::XPrecoder => "x-precoder",
            Self::YCode => "y-code",
            Self::YPrecoder => "y-precoder",
        }
    }

    /// Encoders are recomputed for every channel realization.
    pub fn is_adaptive(&self) -> bool {
        matches!(self, Self::XPrecoder | Self::YPrecoder)
    }

    pub fn is_y(&self) -> bool {
        matches!(self, Self::YCode | Self::YPrecoder)
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Self::ALL
            .iter()
            .copied()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown scheme '{s}' (expected one of svd-uncoded, x-code, x-precoder, y-code, y-precoder)"))
    }
}

/// 2×2 real encoder of one pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PairEncoder {
    /// Rotation `[[cos θ, sin θ], [-sin θ, cos θ]]`.
    X { theta: f64 },
    /// `[[a, 2a], [2b, 0]]` acting on integer coordinates.
    Y { a: f64, b: f64 },
}

impl PairEncoder {
    pub fn matrix(&self) -> [[f64; 2]; 2] {
        match *self {
            Self::X { theta } => {
                let (s, c) = theta.sin_cos();
                [[c, s], [-s, c]]
            }
            Self::Y { a, b } => [[a, 2.0 * a], [2.0 * b, 0.0]],
        }
    }

    /// Per-quadrature displacement `u⁰` for constellation size `m`.
    pub fn displacement(&self, m: usize) -> [f64; 2] {
        match *self {
            Self::X { .. } => [0.0, 0.0],
            Self::Y { a, b } => [-(m as f64 - 1.0) * a / 2.0, -b],
        }
    }
}

/// `M_k = diag(λ_i, λ_j) A_k`.
pub fn effective_pair_matrix(lambda_i: f64, lambda_j: f64, enc: &PairEncoder) -> [[f64; 2]; 2] {
    let a = enc.matrix();
    [
        [lambda_i * a[0][0], lambda_i * a[0][1]],
        [lambda_j * a[1][0], lambda_j * a[1][1]],
    ]
}

/// Pairing plan, per-pair encoders and constellation of one scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct CodeDesign {
    scheme: Scheme,
    plan: PairingPlan,
    encoders: Vec<PairEncoder>,
    m: usize,
    p_t: f64,
    y_labeling: YLabeling,
    pam: PamAlphabet,
    gray: GrayCodec,
}

impl CodeDesign {
    fn with_encoders(
        scheme: Scheme,
        n_r: usize,
        m: usize,
        p_t: f64,
        encoders: Vec<PairEncoder>,
        y_labeling: YLabeling,
    ) -> Result<Self> {
        let plan = PairingPlan::optimal(n_r)?;
        if !(p_t > 0.0) || !p_t.is_finite() {
            return domain(format!("power budget must be positive, got {p_t}"));
        }
        if encoders.len() != plan.len() {
            return dimension(format!("{} encoders for {} pairs", encoders.len(), plan.len()));
        }
        let pam = build_pam(m, p_t / n_r as f64)?;
        let gray = GrayCodec::new(m)?;
        Ok(Self { scheme, plan, encoders, m, p_t, y_labeling, pam, gray })
    }

    /// Plain SVD transmission: the X structure with `θ = 0`.
    pub fn uncoded(n_r: usize, m: usize, p_t: f64) -> Result<Self> {
        let enc = vec![PairEncoder::X { theta: 0.0 }; n_r / 2];
        Self::with_encoders(Scheme::SvdUncoded, n_r, m, p_t, enc, YLabeling::default())
    }

    /// X-Code with the max-min design angle on every pair.
    pub fn x_code(n_r: usize, m: usize, p_t: f64) -> Result<Self> {
        let theta = design_x_angle(m)?.theta;
        Self::x_code_with_angle(n_r, m, p_t, theta)
    }

    /// X-Code with a caller-chosen angle on every pair.
    pub fn x_code_with_angle(n_r: usize, m: usize, p_t: f64, theta: f64) -> Result<Self> {
        if !(0.0..=std::f64::consts::FRAC_PI_4).contains(&theta) {
            return domain(format!("angle must lie in [0, π/4], got {theta}"));
        }
        let enc = vec![PairEncoder::X { theta }; n_r / 2];
        Self::with_encoders(Scheme::XCode, n_r, m, p_t, enc, YLabeling::default())
    }

    /// X-Precoder; angles are set by [`CodeDesign::adapted`].
    pub fn x_precoder(n_r: usize, m: usize, p_t: f64) -> Result<Self> {
        let enc = vec![PairEncoder::X { theta: std::f64::consts::FRAC_PI_4 }; n_r / 2];
        Self::with_encoders(Scheme::XPrecoder, n_r, m, p_t, enc, YLabeling::default())
    }

    /// Y-Code with explicit `(a_k, b_k)` per pair.
    pub fn y_code(n_r: usize, m: usize, p_t: f64, params: &[(f64, f64)], labeling: YLabeling) -> Result<Self> {
        let enc = params
            .iter()
            .map(|&(a, b)| {
                build_y_codebook(m, a, b)?;
                Ok(PairEncoder::Y { a, b })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::with_encoders(Scheme::YCode, n_r, m, p_t, enc, labeling)
    }

    /// Y-Code whose pair parameters come from the offline search over
    /// Rayleigh eigenvalue draws.
    #[allow(clippy::too_many_arguments)]
    pub fn y_code_offline(
        n_r: usize,
        n_t: usize,
        m: usize,
        p_t: f64,
        design_snr_db: f64,
        samples: usize,
        seed: u64,
        labeling: YLabeling,
    ) -> Result<Self> {
        let plan = PairingPlan::optimal(n_r)?;
        let params = (0..plan.len())
            .map(|k| {
                let s = EigenPairSample::from_rayleigh(n_r, n_t, k, samples, seed)?;
                let d = y_code_params_offline(m, design_snr_db, p_t, n_r, &s)?;
                Ok((d.a, d.b))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::y_code(n_r, m, p_t, &params, labeling)
    }

    /// Y-Precoder; parameters are set by [`CodeDesign::adapted`].
    pub fn y_precoder(n_r: usize, m: usize, p_t: f64, labeling: YLabeling) -> Result<Self> {
        let p = y_precoder_params(1.0, m, p_t, n_r, 1.0)?;
        let enc = vec![PairEncoder::Y { a: p.a, b: p.b }; n_r / 2];
        Self::with_encoders(Scheme::YPrecoder, n_r, m, p_t, enc, labeling)
    }

    /// The design to use on `channel`: adaptive schemes recompute their
    /// encoders from the pair gains, fixed schemes are returned as is.
    pub fn adapted(&self, channel: &ChannelSample) -> Result<Cow<'_, Self>> {
        if channel.n_r() != self.n_r() {
            return dimension(format!("channel has {} receive antennas, design {}", channel.n_r(), self.n_r()));
        }
        if !self.scheme.is_adaptive() {
            return Ok(Cow::Borrowed(self));
        }
        let mut out = self.clone();
        let gains = channel.pair_gains(&self.plan);
        for (enc, &(li, lj)) in out.encoders.iter_mut().zip(&gains) {
            let beta = if lj > 0.0 { (li / lj).max(1.0) } else { f64::INFINITY };
            *enc = match self.scheme {
                Scheme::XPrecoder => PairEncoder::X { theta: x_precoder_angle(beta, self.m)? },
                _ => {
                    let p = y_precoder_params(beta, self.m, self.p_t, self.n_r(), li)?;
                    PairEncoder::Y { a: p.a, b: p.b }
                }
            };
        }
        Ok(Cow::Owned(out))
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn plan(&self) -> &PairingPlan {
        &self.plan
    }

    pub fn encoders(&self) -> &[PairEncoder] {
        &self.encoders
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn power_budget(&self) -> f64 {
        self.p_t
    }

    pub fn n_r(&self) -> usize {
        self.plan.n_r()
    }

    pub fn y_labeling(&self) -> YLabeling {
        self.y_labeling
    }

    pub fn pam(&self) -> &PamAlphabet {
        &self.pam
    }

    pub fn gray(&self) -> &GrayCodec {
        &self.gray
    }

    /// Bits per quadrature component of one pair.
    pub fn component_bits(&self) -> usize {
        let w = self.gray.bit_width();
        if self.scheme.is_y() {
            w
        } else {
            2 * w
        }
    }

    /// Bits carried by one channel use.
    pub fn bits_per_word(&self) -> usize {
        2 * self.component_bits() * self.plan.len()
    }

    /// Spectral efficiency in bit/s/Hz.
    pub fn spectral_efficiency(&self) -> f64 {
        self.bits_per_word() as f64
    }

    /// `u⁰` in subchannel coordinates.
    pub fn displacement_vector(&self) -> Vec<Complex64> {
        let mut u0 = vec![Complex64::new(0.0, 0.0); self.n_r()];
        for (&(i, j), enc) in self.plan.pairs().iter().zip(&self.encoders) {
            let d = enc.displacement(self.m);
            u0[i - 1] = Complex64::new(d[0], d[0]);
            u0[j - 1] = Complex64::new(d[1], d[1]);
        }
        u0
    }

    /// Subchannel vector `z = G u + u⁰` carried by `bits`.
    pub fn encode_subchannels(&self, bits: &[u8], z: &mut [Complex64]) -> Result<()> {
        if bits.len() != self.bits_per_word() {
            return domain(format!("expected {} bits, got {}", self.bits_per_word(), bits.len()));
        }
        if z.len() != self.n_r() {
            return dimension(format!("output has length {}, expected {}", z.len(), self.n_r()));
        }
        let cb = self.component_bits();
        for (k, (&(i, j), enc)) in self.plan.pairs().iter().zip(&self.encoders).enumerate() {
            let block = &bits[2 * cb * k..2 * cb * (k + 1)];
            let re = self.encode_component(enc, &block[..cb])?;
            let im = self.encode_component(enc, &block[cb..])?;
            z[i - 1] = Complex64::new(re[0], im[0]);
            z[j - 1] = Complex64::new(re[1], im[1]);
        }
        Ok(())
    }

    fn encode_component(&self, enc: &PairEncoder, bits: &[u8]) -> Result<[f64; 2]> {
        match *enc {
            PairEncoder::X { .. } => {
                let w = self.gray.bit_width();
                let ui = self.pam.level(self.gray.bits_to_level(&bits[..w])?);
                let uj = self.pam.level(self.gray.bits_to_level(&bits[w..])?);
                let a = enc.matrix();
                Ok([a[0][0] * ui + a[0][1] * uj, a[1][0] * ui + a[1][1] * uj])
            }
            PairEncoder::Y { a, b } => {
                let v = y_bits_to_index(bits, self.m, self.y_labeling)?;
                let (s1, s2) = y_index_to_coords(v);
                let (s1, s2) = (s1 as f64, s2 as f64);
                let d = enc.displacement(self.m);
                Ok([a * s1 + 2.0 * a * s2 + d[0], 2.0 * b * s1 + d[1]])
            }
        }
    }
}

/// The `n_r × n_r` generator `G` with each pair's encoder in the slots
/// `(i, i), (i, j), (j, i), (j, j)`.
pub fn assemble_generator(design: &CodeDesign) -> ComplexMatrix {
    let n = design.n_r();
    let mut g = ComplexMatrix::zeros(n, n);
    for (&(i, j), enc) in design.plan().pairs().iter().zip(design.encoders()) {
        let a = enc.matrix();
        g[(i - 1, i - 1)] = a[0][0].into();
        g[(i - 1, j - 1)] = a[0][1].into();
        g[(j - 1, i - 1)] = a[1][0].into();
        g[(j - 1, j - 1)] = a[1][1].into();
    }
    g
}

/// Transmit vector `x = V†(G u + u⁰)`; adaptive designs are first adapted
/// to `channel`.
pub fn encode_block(bits: &[u8], design: &CodeDesign, channel: &ChannelSample) -> Result<Vec<Complex64>> {
    let d = design.adapted(channel)?;
    let mut z = vec![Complex64::new(0.0, 0.0); d.n_r()];
    d.encode_subchannels(bits, &mut z)?;
    channel.svd.v.adjoint().mul_vec(&z)
}
