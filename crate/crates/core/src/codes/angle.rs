//! Rotation-angle design for X-Codes and X-Precoders.
//!
//! Both problems maximize, over `θ ∈ [0, π/4]`, the smallest of the
//! λ-weighted distances
//!
//! ```text
//! d²(p, q, θ) = λ_i² (p cos θ + q sin θ)² + λ_j² (q cos θ - p sin θ)²
//! ```
//!
//! over integer differences `(p, q)` with `|p|, |q| < M`. The X-Code case is
//! `λ_j = 0`. Each distance is a sinusoid in `2θ`, so the maximum of the
//! lower envelope lies at an endpoint, at a stationary point of one
//! sinusoid, or where two sinusoids cross; all of those are enumerated in
//! closed form.

use std::f64::consts::FRAC_PI_4;

use crate::error::{domain, Result};

/// Integer difference `(p, q)` between two PAM index pairs, scaled by 2τ.
pub type Difference = (i32, i32);

fn check_m(m: usize) -> Result<()> {
    if m < 2 || !m.is_power_of_two() {
        return domain(format!("M must be a power of 2 >= 2, got {m}"));
    }
    Ok(())
}

/// The full difference set `S_M` (all `4M(M-1)` non-zero differences).
pub fn full_difference_set(m: usize) -> Vec<Difference> {
    let r = m as i32 - 1;
    let mut out = Vec::with_capacity(4 * m * (m - 1));
    for p in -r..=r {
        for q in -r..=r {
            if (p, q) != (0, 0) {
                out.push((p, q));
            }
        }
    }
    out
}

/// Does `by` dominate `d` pointwise for every `θ ∈ [0, π/4]` and every
/// `λ_i ≥ λ_j ≥ 0`?
///
/// Writing the distance as `λ_j²(p² + q²) + (λ_i² - λ_j²)(p cos θ + q sin θ)²`
/// this needs a smaller norm and a smaller squared projection; the latter
/// is an integer quadratic in `t = tan θ ∈ [0, 1]`.
fn dominates(by: Difference, d: Difference) -> bool {
    let (p, q) = (d.0 as i64, d.1 as i64);
    let (pp, qq) = (by.0 as i64, by.1 as i64);
    if pp * pp + qq * qq > p * p + q * q {
        return false;
    }
    let c0 = p * p - pp * pp;
    let c1 = 2 * (p * q - pp * qq);
    let c2 = q * q - qq * qq;
    if c0 < 0 || c0 + c1 + c2 < 0 {
        return false;
    }
    // Interior minimum of a convex quadratic at t = -c1 / (2 c2).
    if c2 > 0 && c1 < 0 && -c1 < 2 * c2 {
        return 4 * c0 * c2 - c1 * c1 >= 0;
    }
    true
}

/// A subset of `S_M` on which the min-distance is the same as on the full
/// set for every angle in `[0, π/4]` and every `λ_i ≥ λ_j ≥ 0`.
///
/// One representative of each `±(p, q)` orbit is kept, then every
/// representative dominated by another is dropped.
pub fn reduced_difference_set(m: usize) -> Result<Vec<Difference>> {
    check_m(m)?;
    let reps: Vec<Difference> = full_difference_set(m)
        .into_iter()
        .filter(|&(p, q)| q > 0 || (q == 0 && p > 0))
        .collect();
    Ok(reps
        .iter()
        .copied()
        .filter(|&d| !reps.iter().any(|&o| o != d && dominates(o, d)))
        .collect())
}

/// `d²(p, q, θ)` for gains `(λ_i, λ_j)`.
#[inline]
pub fn weighted_distance(d: Difference, theta: f64, lambda_i: f64, lambda_j: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    let (p, q) = (d.0 as f64, d.1 as f64);
    let e1 = p * c + q * s;
    let e2 = q * c - p * s;
    lambda_i * lambda_i * e1 * e1 + lambda_j * lambda_j * e2 * e2
}

/// Lower envelope `min_{(p,q) ∈ set} d²(p, q, θ)`.
pub fn envelope(set: &[Difference], theta: f64, lambda_i: f64, lambda_j: f64) -> f64 {
    set.iter()
        .map(|&d| weighted_distance(d, theta, lambda_i, lambda_j))
        .fold(f64::INFINITY, f64::min)
}

/// Result of a max-min angle search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleOptimum {
    pub theta: f64,
    /// Envelope value at `theta`.
    pub objective: f64,
}

const TIE_REL: f64 = 1e-12;

/// `argmax_{θ ∈ [0, π/4]} min_{set} d²(p, q, θ)`; ties go to the smaller
/// angle.
pub fn max_min_angle(set: &[Difference], lambda_i: f64, lambda_j: f64) -> AngleOptimum {
    let li2 = lambda_i * lambda_i;
    let lj2 = lambda_j * lambda_j;
    let spread = li2 - lj2;
    // d² = alpha + beta cos 2θ + gamma sin 2θ
    let coeffs: Vec<(f64, f64, f64)> = set
        .iter()
        .map(|&(p, q)| {
            let (p, q) = (p as f64, q as f64);
            (
                (p * p + q * q) * (li2 + lj2) / 2.0,
                spread * (p * p - q * q) / 2.0,
                spread * p * q,
            )
        })
        .collect();

    let half_pi = 2.0 * FRAC_PI_4;
    let mut doubled: Vec<f64> = vec![0.0, half_pi];
    let mut push = |two_theta: f64| {
        // Fold into [0, 2π) then keep what lands in [0, π/2].
        let x = two_theta.rem_euclid(std::f64::consts::TAU);
        if (0.0..=half_pi).contains(&x) {
            doubled.push(x);
        }
    };
    for &(_, b, c) in &coeffs {
        if b != 0.0 || c != 0.0 {
            let phi = c.atan2(b);
            push(phi);
            push(phi + std::f64::consts::PI);
        }
    }
    for i in 0..coeffs.len() {
        for j in (i + 1)..coeffs.len() {
            let da = coeffs[i].0 - coeffs[j].0;
            let db = coeffs[i].1 - coeffs[j].1;
            let dc = coeffs[i].2 - coeffs[j].2;
            let r = db.hypot(dc);
            if r == 0.0 || da.abs() > r {
                continue;
            }
            let psi = dc.atan2(db);
            let off = (-da / r).clamp(-1.0, 1.0).acos();
            push(psi + off);
            push(psi - off);
        }
    }

    let mut candidates: Vec<f64> = doubled.into_iter().map(|x| x / 2.0).collect();
    candidates.sort_by(f64::total_cmp);
    let eval = |t: f64| envelope(set, t, lambda_i, lambda_j);

    let mut best = AngleOptimum {
        theta: 0.0,
        objective: f64::NEG_INFINITY,
    };
    for &t in &candidates {
        let v = eval(t);
        if best.objective == f64::NEG_INFINITY || v > best.objective + TIE_REL * best.objective.abs() {
            best = AngleOptimum { theta: t, objective: v };
        }
    }

    // Local 1e-6 rad grid around the winner guards against rounding in the
    // crossing formulas.
    let centre = best.theta;
    for k in -10i32..=10 {
        let t = (centre + k as f64 * 1e-6).clamp(0.0, FRAC_PI_4);
        let v = eval(t);
        if v > best.objective + TIE_REL * best.objective.abs() {
            best = AngleOptimum { theta: t, objective: v };
        }
    }
    best
}

/// Fixed X-Code angle: maximizes `min_{S_M} (p² + q²) cos²(θ - φ_{p,q})`.
pub fn design_x_angle(m: usize) -> Result<AngleOptimum> {
    let set = reduced_difference_set(m)?;
    Ok(max_min_angle(&set, 1.0, 0.0))
}

/// Per-channel X-Precoder angle for condition number `β = λ_i/λ_j`.
///
/// `M = 2` uses the closed form
/// `θ = π/4` for `β ≤ √3`, else `atan((β² - 1) - sqrt((β² - 1)² - β²))`;
/// larger `M` solve the max-min numerically on the reduced set.
pub fn x_precoder_angle(beta: f64, m: usize) -> Result<f64> {
    check_m(m)?;
    if !(beta >= 1.0) {
        return domain(format!("condition number must be >= 1, got {beta}"));
    }
    if m == 2 {
        return Ok(x_precoder_angle_qpsk(beta));
    }
    let set = reduced_difference_set(m)?;
    let opt = if beta.is_infinite() {
        max_min_angle(&set, 1.0, 0.0)
    } else {
        max_min_angle(&set, beta, 1.0)
    };
    Ok(opt.theta)
}

fn x_precoder_angle_qpsk(beta: f64) -> f64 {
    if beta <= 3f64.sqrt() {
        return FRAC_PI_4;
    }
    if beta.is_infinite() {
        return 0.5f64.atan();
    }
    let b2 = beta * beta;
    let x = b2 - 1.0;
    // x - sqrt(x² - β²) rewritten to avoid cancellation for large β.
    let disc = ((x - beta) * (x + beta)).max(0.0).sqrt();
    (b2 / (x + disc)).atan()
}
