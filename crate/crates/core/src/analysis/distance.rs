//! Minimum-distance quantities for X and Y pairs.

use crate::codes::angle::{envelope, full_difference_set, max_min_angle, reduced_difference_set};
use crate::error::{domain, Result};

fn x_scale(m: usize, p_t: f64, n_r: usize) -> f64 {
    let mf = m as f64;
    6.0 * p_t / (n_r as f64 * (mf * mf - 1.0))
}

/// `g(θ, M) = 6P_T/(n_r(M² - 1)) · min_{S_M} (p cos θ + q sin θ)²`, over
/// the full difference set.
pub fn generalized_min_distance(theta: f64, m: usize, p_t: f64, n_r: usize) -> Result<f64> {
    if m < 2 || !m.is_power_of_two() || n_r == 0 {
        return domain(format!("invalid M = {m} or n_r = {n_r}"));
    }
    Ok(x_scale(m, p_t, n_r) * envelope(&full_difference_set(m), theta, 1.0, 0.0))
}

/// `(p² + q²)(λ_i² cos²(θ - φ) + λ_j² sin²(θ - φ))` with `φ = atan2(q, p)`.
pub fn x_pairwise_distance(p: i32, q: i32, theta: f64, lambda_i: f64, lambda_j: f64) -> f64 {
    let (p, q) = (p as f64, q as f64);
    let phi = q.atan2(p);
    let (s, c) = (theta - phi).sin_cos();
    (p * p + q * q) * (lambda_i * lambda_i * c * c + lambda_j * lambda_j * s * s)
}

/// Squared minimum distance of an X-Precoder pair at its best angle, in
/// received-signal units.
pub fn x_precoder_dmin2(lambda_i: f64, lambda_j: f64, m: usize, p_t: f64, n_r: usize) -> Result<f64> {
    let set = reduced_difference_set(m)?;
    Ok(x_scale(m, p_t, n_r) * max_min_angle(&set, lambda_i, lambda_j).objective)
}

/// Y-codebook minimum distance `min(4λ_i²a², λ_i²a² + 4λ_j²b²)`; for `M = 2`
/// only the second term exists.
pub fn y_dmin(a: f64, b: f64, lambda_i: f64, lambda_j: f64, m: usize) -> f64 {
    let along = lambda_i * lambda_i * a * a;
    let across = along + 4.0 * lambda_j * lambda_j * b * b;
    if m <= 2 {
        across
    } else {
        (4.0 * along).min(across)
    }
}
