//! PAM/QAM alphabets, Gray labelling and the zig-zag Y codebook.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

fn check_power_of_two(m: usize) -> Result<u32> {
    if m < 2 || !m.is_power_of_two() {
        return domain(format!("constellation size must be a power of 2 >= 2, got {m}"));
    }
    Ok(m.trailing_zeros())
}

/// M-PAM alphabet `{τ(2i - (M-1))}` used on each quadrature of an M²-QAM
/// symbol whose average energy is `E_s`.
#[derive(Debug, Clone, PartialEq)]
pub struct PamAlphabet {
    m: usize,
    tau: f64,
    points: Vec<f64>,
}

/// Builds the M-PAM alphabet with `τ = sqrt(3 E_s / (2 (M² - 1)))`.
pub fn build_pam(m: usize, symbol_energy: f64) -> Result<PamAlphabet> {
    check_power_of_two(m)?;
    if !(symbol_energy > 0.0) || !symbol_energy.is_finite() {
        return domain(format!("symbol energy must be positive, got {symbol_energy}"));
    }
    let mf = m as f64;
    let tau = (3.0 * symbol_energy / (2.0 * (mf * mf - 1.0))).sqrt();
    let points = (0..m).map(|i| tau * (2.0 * i as f64 - (mf - 1.0))).collect();
    Ok(PamAlphabet { m, tau, points })
}

impl PamAlphabet {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn level(&self, index: usize) -> f64 {
        self.points[index]
    }

    /// Index of the nearest level; exact midpoints go to the lower index.
    pub fn nearest_index(&self, x: f64) -> usize {
        let pos = (x / self.tau + (self.m as f64 - 1.0)) / 2.0;
        if !(pos > 0.0) {
            return 0;
        }
        let floor = pos.floor();
        let idx = if pos - floor > 0.5 { floor + 1.0 } else { floor };
        (idx as usize).min(self.m - 1)
    }

    /// Average energy of the M²-QAM constellation (both quadratures).
    pub fn qam_energy(&self) -> f64 {
        2.0 * self.points.iter().map(|p| p * p).sum::<f64>() / self.m as f64
    }
}

/// Binary-reflected Gray labelling of `M` levels, most significant bit first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GrayCodec {
    m: usize,
    bit_width: usize,
}

impl GrayCodec {
    pub fn new(m: usize) -> Result<Self> {
        let w = check_power_of_two(m)?;
        Ok(Self {
            m,
            bit_width: w as usize,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn bit_width(&self) -> usize {
        self.bit_width
    }

    /// Level index (0-based, ascending amplitude) carried by `bits`.
    pub fn bits_to_level(&self, bits: &[u8]) -> Result<usize> {
        if bits.len() != self.bit_width {
            return domain(format!(
                "expected {} bits, got {}",
                self.bit_width,
                bits.len()
            ));
        }
        Ok(gray_decode(pack_msb_first(bits)))
    }

    pub fn level_to_bits(&self, level: usize, out: &mut [u8]) -> Result<()> {
        if out.len() != self.bit_width || level >= self.m {
            return domain(format!(
                "level {level} / {} output bits do not fit M = {}",
                out.len(),
                self.m
            ));
        }
        unpack_msb_first(gray_encode(level), out);
        Ok(())
    }
}

pub(crate) fn gray_encode(n: usize) -> usize {
    n ^ (n >> 1)
}

pub(crate) fn gray_decode(mut g: usize) -> usize {
    let mut n = g;
    while g > 1 {
        g >>= 1;
        n ^= g;
    }
    n
}

fn pack_msb_first(bits: &[u8]) -> usize {
    bits.iter().fold(0, |acc, &b| (acc << 1) | (b & 1) as usize)
}

fn unpack_msb_first(value: usize, out: &mut [u8]) {
    let w = out.len();
    for (i, bit) in out.iter_mut().enumerate() {
        *bit = ((value >> (w - 1 - i)) & 1) as u8;
    }
}

/// How information bits select a Y codeword index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum YLabeling {
    /// First bit picks the parity class `s1` (sign of the second
    /// coordinate); the remaining bits Gray-label the amplitude index `s2`.
    ParityGray,
    /// Binary-reflected Gray label of `v - 1`, so codewords adjacent along the
    /// first axis always differ in one bit.
    #[default]
    IndexGray,
}

impl std::str::FromStr for YLabeling {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "parity-gray" | "parity" => Ok(Self::ParityGray),
            "index-gray" | "index" => Ok(Self::IndexGray),
            other => Err(format!("unknown Y labelling '{other}'")),
        }
    }
}

/// Codeword index `v ∈ [1, M]` carried by `bits`.
pub fn y_bits_to_index(bits: &[u8], m: usize, labeling: YLabeling) -> Result<usize> {
    let w = check_power_of_two(m)? as usize;
    if bits.len() != w {
        return domain(format!("expected {w} bits, got {}", bits.len()));
    }
    Ok(match labeling {
        YLabeling::ParityGray => {
            let s1 = (bits[0] & 1) as usize;
            let s2 = gray_decode(pack_msb_first(&bits[1..]));
            s1 + 2 * s2 + 1
        }
        YLabeling::IndexGray => gray_decode(pack_msb_first(bits)) + 1,
    })
}

/// Inverse of [`y_bits_to_index`].
pub fn y_index_to_bits(v: usize, m: usize, labeling: YLabeling, out: &mut [u8]) -> Result<()> {
    let w = check_power_of_two(m)? as usize;
    if out.len() != w || v == 0 || v > m {
        return domain(format!("index {v} / {} bits invalid for M = {m}", out.len()));
    }
    match labeling {
        YLabeling::ParityGray => {
            let s1 = (v - 1) % 2;
            let s2 = (v - 1) / 2;
            out[0] = s1 as u8;
            unpack_msb_first(gray_encode(s2), &mut out[1..]);
        }
        YLabeling::IndexGray => unpack_msb_first(gray_encode(v - 1), out),
    }
    Ok(())
}

/// Integer coordinates `(s1, s2)` of codeword `v` under the generator
/// `[[a, 2a], [2b, 0]]`: `v = s1 + 2 s2 + 1`.
pub fn y_index_to_coords(v: usize) -> (usize, usize) {
    ((v - 1) % 2, (v - 1) / 2)
}

/// The M code vectors `Y(v) = [a((v-1) - (M-1)/2), b(-1)^v]` and the
/// displacement that centres them.
#[derive(Debug, Clone, PartialEq)]
pub struct YCodebook {
    m: usize,
    a: f64,
    b: f64,
    vectors: Vec<[f64; 2]>,
    displacement: [f64; 2],
}

pub fn build_y_codebook(m: usize, a: f64, b: f64) -> Result<YCodebook> {
    check_power_of_two(m)?;
    if !(a >= 0.0) || !(b >= 0.0) || !a.is_finite() || !b.is_finite() {
        return domain(format!("Y codebook needs finite a, b >= 0, got a = {a}, b = {b}"));
    }
    let centre = (m as f64 - 1.0) / 2.0;
    let vectors = (1..=m)
        .map(|v| {
            let sign = if v % 2 == 0 { 1.0 } else { -1.0 };
            [a * ((v - 1) as f64 - centre), b * sign]
        })
        .collect();
    Ok(YCodebook {
        m,
        a,
        b,
        vectors,
        displacement: [-(m as f64 - 1.0) * a / 2.0, -b],
    })
}

/// `a` for a given `b` on the per-pair power curve
/// `b² + a² (M² - 1)/12 = P_T / n_r`.
pub fn y_a_from_b(m: usize, b: f64, p_t: f64, n_r: usize) -> Result<f64> {
    let budget = p_t / n_r as f64;
    if !(b >= 0.0) || b * b > budget * (1.0 + 1e-12) {
        return domain(format!("b = {b} exceeds the per-pair budget {budget}"));
    }
    let mf = m as f64;
    Ok(((budget - b * b).max(0.0) * 12.0 / (mf * mf - 1.0)).sqrt())
}

impl YCodebook {
    /// Codebook on the power curve with fraction `rho = b² / (P_T/n_r)` of
    /// the per-pair budget on the second coordinate.
    pub fn from_power_split(m: usize, rho: f64, p_t: f64, n_r: usize) -> Result<Self> {
        if !(0.0..=1.0).contains(&rho) {
            return domain(format!("power split must lie in [0, 1], got {rho}"));
        }
        let b = (rho * p_t / n_r as f64).sqrt();
        let a = y_a_from_b(m, b, p_t, n_r)?;
        build_y_codebook(m, a, b)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// Code vector `Y(v)`, `v` 1-based.
    pub fn vector(&self, v: usize) -> [f64; 2] {
        self.vectors[v - 1]
    }

    pub fn vectors(&self) -> &[[f64; 2]] {
        &self.vectors
    }

    pub fn displacement(&self) -> [f64; 2] {
        self.displacement
    }

    /// `A [s1, s2]ᵀ + displacement` with `A = [[a, 2a], [2b, 0]]`.
    pub fn generator_point(&self, s1: usize, s2: usize) -> [f64; 2] {
        let (s1, s2) = (s1 as f64, s2 as f64);
        [
            self.a * s1 + 2.0 * self.a * s2 + self.displacement[0],
            2.0 * self.b * s1 + self.displacement[1],
        ]
    }

    /// `b² + a²(M² - 1)/12`, the per-component power of the codebook.
    pub fn power(&self) -> f64 {
        let mf = self.m as f64;
        self.b * self.b + self.a * self.a * (mf * mf - 1.0) / 12.0
    }
}
