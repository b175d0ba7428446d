//! Per-pair maximum-likelihood detection.
//!
//! Each pair sees `r = M_k u + w` independently on its real and imaginary
//! components. X pairs are decoded by a two-level sphere search over the
//! PAM grid, Y pairs by the region decoder, which needs at most three
//! distance evaluations.

use num_complex::Complex64;

use crate::channel::ChannelSample;
use crate::codes::{CodeDesign, PairEncoder};
use crate::constellation::{y_index_to_bits, y_index_to_coords, PamAlphabet};
use crate::error::{dimension, domain, Result};

pub type Mat2 = [[f64; 2]; 2];

/// One quadrature component of a pair: `r = M_k u + w`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairObservation {
    pub r: [f64; 2],
    pub m_k: Mat2,
}

/// `‖r - M c‖²`, evaluated identically by every decoder.
#[inline]
pub fn pair_metric(r: [f64; 2], m_k: &Mat2, c: [f64; 2]) -> f64 {
    let e0 = r[0] - (m_k[0][0] * c[0] + m_k[0][1] * c[1]);
    let e1 = r[1] - (m_k[1][0] * c[0] + m_k[1][1] * c[1]);
    e0 * e0 + e1 * e1
}

/// Exhaustive ML over `candidates`; ties go to the earliest entry, so a
/// lexicographically ordered list gives the lexicographically smallest
/// winner.
pub fn brute_force_ml(r: [f64; 2], m_k: &Mat2, candidates: &[[f64; 2]]) -> Result<usize> {
    if candidates.is_empty() {
        return domain("ML search needs at least one candidate");
    }
    let mut best = (f64::INFINITY, 0);
    for (i, &c) in candidates.iter().enumerate() {
        let d = pair_metric(r, m_k, c);
        if d < best.0 {
            best = (d, i);
        }
    }
    Ok(best.1)
}

/// All `(level_i, level_j)` pairs of the PAM grid in lexicographic index
/// order.
pub fn pam_grid(pam: &PamAlphabet) -> Vec<[f64; 2]> {
    let p = pam.points();
    p.iter().flat_map(|&a| p.iter().map(move |&b| [a, b])).collect()
}

fn consider(best: &mut (f64, usize, usize), d: f64, i: usize, j: usize) {
    if d < best.0 || (d == best.0 && (i, j) < (best.1, best.2)) {
        *best = (d, i, j);
    }
}

/// Exact ML PAM index pair `(i, j)` for an X-type observation.
///
/// After `M = QR`, the second level is enumerated outward from its
/// unconstrained estimate and the search stops once the partial metric
/// exceeds the best full metric; for each second level the best first
/// level is the nearest PAM point, checked together with its neighbours.
pub fn sphere_decode_pair(obs: &PairObservation, pam: &PamAlphabet) -> (usize, usize) {
    let m = pam.m();
    let (r, mk) = (obs.r, &obs.m_k);
    let pts = pam.points();
    let mut best = (f64::INFINITY, 0usize, 0usize);

    let r11 = mk[0][0].hypot(mk[1][0]);
    if r11 == 0.0 {
        for j in 0..m {
            consider(&mut best, pair_metric(r, mk, [pts[0], pts[j]]), 0, j);
        }
        return (best.1, best.2);
    }
    let (c, s) = (mk[0][0] / r11, mk[1][0] / r11);
    let r12 = c * mk[0][1] + s * mk[1][1];
    let r22 = -s * mk[0][1] + c * mk[1][1];
    let y1 = c * r[0] + s * r[1];
    let y2 = -s * r[0] + c * r[1];

    let visit = |j: usize, best: &mut (f64, usize, usize)| -> bool {
        let partial = (y2 - r22 * pts[j]).powi(2);
        if partial > best.0 + 1e-9 * (1.0 + best.0) {
            return false;
        }
        let i0 = pam.nearest_index((y1 - r12 * pts[j]) / r11);
        for i in i0.saturating_sub(1)..=(i0 + 1).min(m - 1) {
            consider(best, pair_metric(r, mk, [pts[i], pts[j]]), i, j);
        }
        true
    };

    if r22 == 0.0 {
        for j in 0..m {
            visit(j, &mut best);
        }
        return (best.1, best.2);
    }
    // Schnorr–Euchner order: nearest second level first, then alternate.
    let centre = pam.nearest_index(y2 / r22);
    visit(centre, &mut best);
    let (mut lo, mut hi) = (centre as isize - 1, centre + 1);
    let (mut lo_open, mut hi_open) = (lo >= 0, hi < m);
    while lo_open || hi_open {
        let take_lo = match (lo_open, hi_open) {
            (true, true) => (y2 - r22 * pts[lo as usize]).abs() <= (y2 - r22 * pts[hi]).abs(),
            (l, _) => l,
        };
        if take_lo {
            lo_open = visit(lo as usize, &mut best) && lo > 0;
            lo -= 1;
        } else {
            hi_open = visit(hi, &mut best) && hi + 1 < m;
            hi += 1;
        }
    }
    (best.1, best.2)
}

/// Outcome of a region decode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegionDecision {
    /// Codeword index, 1-based.
    pub v: usize,
    /// Distance evaluations performed (at most 3).
    pub distances: usize,
}

/// ML codeword of a Y pair with parameters `(a, b)` from at most three
/// candidates.
///
/// The first coordinate, centred on the codebook, selects the strip
/// `ζ = clamp(⌊x/(2λ_i a) + (M + 1)/4⌋, 0, M/2)`; the candidates are
/// `{1, 2}` for `ζ = 0`, `{M - 1, M}` for `ζ = M/2` and
/// `{2ζ, 2ζ + 1, 2ζ + 2}` otherwise.
pub fn y_region_decode(obs: &PairObservation, m: usize, a: f64, b: f64, lambda_i: f64, lambda_j: f64) -> RegionDecision {
    let disp = [-(m as f64 - 1.0) * a / 2.0, -b];
    let scale = lambda_i * a;
    if !(scale > 0.0) {
        // Only the sign of the second coordinate carries information.
        let centred = obs.r[1] + lambda_j * disp[1];
        let v = if lambda_j * b > 0.0 && centred > 0.0 { 2 } else { 1 };
        return RegionDecision { v, distances: 0 };
    }
    let x = obs.r[0] + lambda_i * disp[0];
    let half = (m / 2) as f64;
    let t = (x / (2.0 * scale) + (m as f64 + 1.0) / 4.0).floor();
    let zeta = if t.is_nan() { 0 } else { t.clamp(0.0, half) as usize };
    let (first, last) = if zeta == 0 {
        (1, 2)
    } else if zeta == m / 2 {
        (m - 1, m)
    } else {
        (2 * zeta, 2 * zeta + 2)
    };
    let mut best = (f64::INFINITY, first);
    for v in first..=last {
        let (s1, s2) = y_index_to_coords(v);
        let d = pair_metric(obs.r, &obs.m_k, [s1 as f64, s2 as f64]);
        if d < best.0 {
            best = (d, v);
        }
    }
    RegionDecision {
        v: best.1,
        distances: last - first + 1,
    }
}

/// Integer coordinates of the whole Y codebook in index order.
pub fn y_candidates(m: usize) -> Vec<[f64; 2]> {
    (1..=m)
        .map(|v| {
            let (s1, s2) = y_index_to_coords(v);
            [s1 as f64, s2 as f64]
        })
        .collect()
}

/// `r = U†y - Λu⁰` in subchannel coordinates.
pub fn receive_rotate(y: &[Complex64], channel: &ChannelSample, design: &CodeDesign) -> Result<Vec<Complex64>> {
    if y.len() != channel.n_r() || design.n_r() != channel.n_r() {
        return dimension(format!("received length {} for n_r = {}", y.len(), channel.n_r()));
    }
    let mut r = channel.svd.u.adjoint().mul_vec(y)?;
    let u0 = design.displacement_vector();
    for ((ri, &l), u) in r.iter_mut().zip(channel.singular_values()).zip(u0) {
        *ri -= u * l;
    }
    Ok(r)
}

/// Per-pair observations `(real, imaginary)` of the rotated vector `r`.
pub fn pair_observations(r: &[Complex64], gains: &[(f64, f64)], design: &CodeDesign) -> Vec<(PairObservation, PairObservation)> {
    design
        .plan()
        .pairs()
        .iter()
        .zip(design.encoders())
        .zip(gains)
        .map(|((&(i, j), enc), &(li, lj))| {
            let m_k = crate::codes::effective_pair_matrix(li, lj, enc);
            let (zi, zj) = (r[i - 1], r[j - 1]);
            (
                PairObservation { r: [zi.re, zj.re], m_k },
                PairObservation { r: [zi.im, zj.im], m_k },
            )
        })
        .collect()
}

/// Decodes one quadrature component of pair `enc` into `out`
/// (`design.component_bits()` bits).
pub fn decode_component(
    obs: &PairObservation,
    enc: &PairEncoder,
    gains: (f64, f64),
    design: &CodeDesign,
    out: &mut [u8],
) -> Result<()> {
    match *enc {
        PairEncoder::X { .. } => {
            let (i, j) = sphere_decode_pair(obs, design.pam());
            let w = design.gray().bit_width();
            design.gray().level_to_bits(i, &mut out[..w])?;
            design.gray().level_to_bits(j, &mut out[w..2 * w])
        }
        PairEncoder::Y { a, b } => {
            let d = y_region_decode(obs, design.m(), a, b, gains.0, gains.1);
            y_index_to_bits(d.v, design.m(), design.y_labeling(), out)
        }
    }
}

/// Decodes a rotated vector `r = ΛGu + w` (displacement already removed)
/// with an already adapted design.
pub fn decode_rotated(r: &[Complex64], gains: &[(f64, f64)], design: &CodeDesign, out: &mut [u8]) -> Result<()> {
    if out.len() != design.bits_per_word() || r.len() != design.n_r() {
        return dimension("decode buffers do not match the design");
    }
    let cb = design.component_bits();
    for (k, (re, im)) in pair_observations(r, gains, design).into_iter().enumerate() {
        let enc = &design.encoders()[k];
        let block = &mut out[2 * cb * k..2 * cb * (k + 1)];
        let (first, second) = block.split_at_mut(cb);
        decode_component(&re, enc, gains[k], design, first)?;
        decode_component(&im, enc, gains[k], design, second)?;
    }
    Ok(())
}

/// Bits carried by the received vector `y`, in encoding order.
pub fn decode_block(y: &[Complex64], channel: &ChannelSample, design: &CodeDesign) -> Result<Vec<u8>> {
    let d = design.adapted(channel)?;
    let r = receive_rotate(y, channel, &d)?;
    let gains = channel.pair_gains(d.plan());
    let mut out = vec![0u8; d.bits_per_word()];
    decode_rotated(&r, &gains, &d, &mut out)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{channel_from_condition, sample_rayleigh_channel};
    use crate::codes::encode_block;
    use crate::constellation::{build_pam, YLabeling};
    use crate::rng::{complex_normal, random_bits, substream};
    use rand::Rng;

    fn designs(n_r: usize, m: usize) -> Vec<CodeDesign> {
        let p_t = n_r as f64;
        vec![
            CodeDesign::uncoded(n_r, m, p_t).unwrap(),
            CodeDesign::x_code(n_r, m, p_t).unwrap(),
            CodeDesign::x_precoder(n_r, m, p_t).unwrap(),
            CodeDesign::y_code(n_r, m, p_t, &vec![(0.5, 0.4); n_r / 2], YLabeling::ParityGray).unwrap(),
            CodeDesign::y_precoder(n_r, m, p_t, YLabeling::IndexGray).unwrap(),
        ]
    }

    #[test]
    fn sphere_identity_on_grid_point() {
        let pam = build_pam(4, 1.0).unwrap();
        let obs = PairObservation { r: [pam.level(2), pam.level(0)], m_k: [[1.0, 0.0], [0.0, 1.0]] };
        assert_eq!(sphere_decode_pair(&obs, &pam), (2, 0));
    }

    #[test]
    fn sphere_rank_one_slices() {
        let pam = build_pam(8, 1.0).unwrap();
        let mut rng = substream(1, 1);
        for _ in 0..1000 {
            let r = [rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)];
            let obs = PairObservation { r, m_k: [[1.0, 0.0], [0.0, 0.0]] };
            let (i, j) = sphere_decode_pair(&obs, &pam);
            assert_eq!(i, pam.nearest_index(r[0]));
            assert_eq!(j, 0);
        }
    }

    #[test]
    fn sphere_matches_brute_force() {
        let mut rng = substream(2, 2);
        for trial in 0..20_000 {
            let m = [2usize, 4, 8, 16][trial % 4];
            let pam = build_pam(m, rng.gen_range(0.1..4.0)).unwrap();
            let mk = [[rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)], [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)]];
            let r = [rng.gen_range(-6.0..6.0), rng.gen_range(-6.0..6.0)];
            let grid = pam_grid(&pam);
            let k = brute_force_ml(r, &mk, &grid).unwrap();
            let (i, j) = sphere_decode_pair(&PairObservation { r, m_k: mk }, &pam);
            assert_eq!((i, j), (k / m, k % m));
        }
    }

    #[test]
    fn brute_force_ties_and_single() {
        let id = [[1.0, 0.0], [0.0, 1.0]];
        assert_eq!(brute_force_ml([5.0, 5.0], &id, &[[0.0, 0.0]]).unwrap(), 0);
        assert_eq!(brute_force_ml([0.0, 0.0], &id, &[[-1.0, 0.0], [1.0, 0.0]]).unwrap(), 0);
        assert!(brute_force_ml([0.0, 0.0], &id, &[]).is_err());
    }

    #[test]
    fn region_example_strip() {
        let obs = PairObservation { r: [0.0 + 3.5 * 0.3, 0.0], m_k: [[0.3, 0.6], [0.0, 0.0]] };
        let d = y_region_decode(&obs, 8, 0.3, 0.0, 1.0, 1.0);
        assert!((4..=6).contains(&d.v));
        assert_eq!(d.distances, 3);
    }

    #[test]
    fn region_exact_codeword() {
        let (a, b, li, lj) = (0.4, 0.3, 1.3, 0.7);
        let mk = crate::codes::effective_pair_matrix(li, lj, &PairEncoder::Y { a, b });
        let (s1, s2) = y_index_to_coords(5);
        let r = [mk[0][0] * s1 as f64 + mk[0][1] * s2 as f64, mk[1][0] * s1 as f64];
        assert_eq!(y_region_decode(&PairObservation { r, m_k: mk }, 8, a, b, li, lj).v, 5);
    }

    #[test]
    fn region_matches_brute_force() {
        let mut rng = substream(3, 3);
        for trial in 0..100_000 {
            let m = [2usize, 4, 8, 16][trial % 4];
            let a = rng.gen_range(0.01..2.0);
            let b = rng.gen_range(0.0..2.0);
            let li = rng.gen_range(0.01..3.0);
            let lj = rng.gen_range(0.0..=li);
            let mk = crate::codes::effective_pair_matrix(li, lj, &PairEncoder::Y { a, b });
            let span = li * a * m as f64;
            let r = [rng.gen_range(-0.2 * span..1.2 * span), rng.gen_range(-3.0..3.0) * (lj * b + 0.1)];
            let obs = PairObservation { r, m_k: mk };
            let d = y_region_decode(&obs, m, a, b, li, lj);
            assert!(d.distances <= 3);
            let k = brute_force_ml(r, &mk, &y_candidates(m)).unwrap();
            assert_eq!(d.v, k + 1, "M = {m}, r = {r:?}");
        }
    }

    #[test]
    fn region_degenerate_first_axis() {
        let mk = crate::codes::effective_pair_matrix(1.0, 1.0, &PairEncoder::Y { a: 0.0, b: 0.5 });
        let up = y_region_decode(&PairObservation { r: [0.0, 0.9], m_k: mk }, 4, 0.0, 0.5, 1.0, 1.0);
        let down = y_region_decode(&PairObservation { r: [0.0, 0.1], m_k: mk }, 4, 0.0, 0.5, 1.0, 1.0);
        assert_eq!((up.v, down.v), (2, 1));
    }

    #[test]
    fn noiseless_round_trip() {
        for n_r in [2usize, 4] {
            for m in [2usize, 4] {
                for d in designs(n_r, m) {
                    let mut bits = vec![0u8; d.bits_per_word()];
                    for w in 0..10_000u64 {
                        let mut rng = substream(21, w);
                        let ch = sample_rayleigh_channel(n_r, n_r, &mut rng).unwrap();
                        random_bits(&mut rng, &mut bits);
                        let x = encode_block(&bits, &d, &ch).unwrap();
                        let y = ch.h.mul_vec(&x).unwrap();
                        assert_eq!(decode_block(&y, &ch, &d).unwrap(), bits, "{} n_r={n_r} M={m}", d.scheme());
                    }
                }
            }
        }
    }

    #[test]
    fn rotation_residual_vanishes() {
        let d = CodeDesign::y_code(2, 4, 2.0, &[(0.6, 0.5)], YLabeling::ParityGray).unwrap();
        let mut rng = substream(5, 5);
        let ch = sample_rayleigh_channel(2, 3, &mut rng).unwrap();
        let bits = [1, 0, 0, 1];
        let x = encode_block(&bits, &d, &ch).unwrap();
        let y = ch.h.mul_vec(&x).unwrap();
        let r = receive_rotate(&y, &ch, &d).unwrap();
        let gains = ch.pair_gains(d.plan());
        let obs = pair_observations(&r, &gains, &d);
        let coords = |v: usize| {
            let (s1, s2) = y_index_to_coords(v);
            [s1 as f64, s2 as f64]
        };
        let v_re = crate::constellation::y_bits_to_index(&bits[..2], 4, YLabeling::ParityGray).unwrap();
        let v_im = crate::constellation::y_bits_to_index(&bits[2..], 4, YLabeling::ParityGray).unwrap();
        assert!(pair_metric(obs[0].0.r, &obs[0].0.m_k, coords(v_re)) < 1e-20);
        assert!(pair_metric(obs[0].1.r, &obs[0].1.m_k, coords(v_im)) < 1e-20);
    }

    #[test]
    fn identity_rotation_is_passthrough() {
        let d = CodeDesign::x_code(2, 2, 2.0).unwrap();
        let ch = channel_from_condition(1.0).unwrap();
        let y = vec![Complex64::new(0.3, -0.2), Complex64::new(1.0, 2.0)];
        assert_eq!(receive_rotate(&y, &ch, &d).unwrap(), y);
    }

    #[test]
    fn real_path_ignores_imaginary_inputs() {
        for d in designs(2, 4) {
            let ch = channel_from_condition(2.0).unwrap();
            let d = d.adapted(&ch).unwrap().into_owned();
            let gains = ch.pair_gains(d.plan());
            let bits: Vec<u8> = (0..d.bits_per_word()).map(|i| (i % 3 == 0) as u8).collect();
            let mut z = vec![Complex64::new(0.0, 0.0); 2];
            d.encode_subchannels(&bits, &mut z).unwrap();
            let u0 = d.displacement_vector();
            let r: Vec<Complex64> = z
                .iter()
                .zip(&u0)
                .zip(ch.singular_values())
                .map(|((&zi, &u), &l)| Complex64::new(l * (zi - u).re, f64::NAN))
                .collect();
            let obs = pair_observations(&r, &gains, &d);
            assert!(obs[0].0.r.iter().all(|x| x.is_finite()));
            let mut out = vec![0u8; d.component_bits()];
            decode_component(&obs[0].0, &d.encoders()[0], gains[0], &d, &mut out).unwrap();
            assert_eq!(&out[..], &bits[..d.component_bits()], "{}", d.scheme());
        }
    }

    #[test]
    fn pure_noise_gives_half_ber() {
        for d in designs(2, 4) {
            let (mut errs, mut total) = (0usize, 0usize);
            let mut bits = vec![0u8; d.bits_per_word()];
            let mut w = 0u64;
            while total < 100_000 {
                let mut rng = substream(8, w);
                w += 1;
                let ch = sample_rayleigh_channel(2, 2, &mut rng).unwrap();
                random_bits(&mut rng, &mut bits);
                let x = encode_block(&bits, &d, &ch).unwrap();
                let mut y = ch.h.mul_vec(&x).unwrap();
                for yi in y.iter_mut() {
                    *yi += complex_normal(&mut rng, 1e8);
                }
                let out = decode_block(&y, &ch, &d).unwrap();
                errs += out.iter().zip(&bits).filter(|(a, b)| a != b).count();
                total += bits.len();
            }
            let ber = errs as f64 / total as f64;
            assert!((ber - 0.5).abs() < 0.02, "{}: {ber}", d.scheme());
        }
    }

    #[test]
    fn y_decisions_scale_invariant() {
        let mut rng = substream(6, 6);
        for _ in 0..10_000 {
            let (a, b) = (rng.gen_range(0.1..1.0), rng.gen_range(0.0..1.0));
            let li = rng.gen_range(0.1..2.0);
            let lj = rng.gen_range(0.0..=li);
            let r = [rng.gen_range(-3.0..3.0), rng.gen_range(-2.0..2.0)];
            let base = {
                let mk = crate::codes::effective_pair_matrix(li, lj, &PairEncoder::Y { a, b });
                y_region_decode(&PairObservation { r, m_k: mk }, 4, a, b, li, lj).v
            };
            for c in [0.1, 10.0] {
                let mk = crate::codes::effective_pair_matrix(c * li, c * lj, &PairEncoder::Y { a, b });
                let obs = PairObservation { r: [c * r[0], c * r[1]], m_k: mk };
                let v = y_region_decode(&obs, 4, a, b, c * li, c * lj).v;
                if v != base {
                    // Only a rounding-level tie may flip the decision.
                    let m0 = pair_metric(obs.r, &mk, y_candidates(4)[v - 1]);
                    let m1 = pair_metric(obs.r, &mk, y_candidates(4)[base - 1]);
                    assert!((m0 - m1).abs() <= 1e-9 * m0.max(m1));
                }
            }
        }
    }
}
