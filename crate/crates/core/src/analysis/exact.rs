//! Exact ML pair error of a Y codebook for fixed subchannel gains.
//!
//! In coordinates centred on codeword `v` and reflected so that `v` sits
//! above its opposite-parity neighbours, `v` is decoded correctly when the
//! first noise component stays between the bisectors with `v ± 2` and the
//! second stays above the bisectors with `v ± 1`:
//!
//! ```text
//! n2 > t±(x) = (±2xA - A² - 4B²) / (4B),   A = λ_i a,  B = λ_j b
//! ```
//!
//! The error is accumulated directly (never as `1 - P(correct)`) so small
//! probabilities keep their relative accuracy.

use super::q_function;
use super::quadrature::integrate;
use crate::error::{domain, Result};

const TAIL_SIGMAS: f64 = 10.0;

fn check(a: f64, b: f64, li: f64, lj: f64, n0: f64, m: usize) -> Result<()> {
    if m < 2 || !m.is_power_of_two() {
        return domain(format!("M must be a power of 2 >= 2, got {m}"));
    }
    if !(n0 > 0.0) || !n0.is_finite() {
        return domain(format!("N_0 must be positive and finite, got {n0}"));
    }
    if [a, b, li, lj].iter().any(|x| !(*x >= 0.0) || !x.is_finite()) {
        return domain("Y error needs finite non-negative a, b, λ_i, λ_j");
    }
    Ok(())
}

/// Error probability of codeword `v` (1-based) on one quadrature.
pub fn y_exact_codeword_error(
    a: f64,
    b: f64,
    lambda_i: f64,
    lambda_j: f64,
    n0: f64,
    m: usize,
    v: usize,
) -> Result<f64> {
    check(a, b, lambda_i, lambda_j, n0, m)?;
    if v == 0 || v > m {
        return domain(format!("codeword index {v} outside [1, {m}]"));
    }
    let sigma = (n0 / 2.0).sqrt();
    let big_a = lambda_i * a;
    let big_b = lambda_j * b;
    let has_prev = v >= 2;
    let has_next = v < m;

    if big_a == 0.0 {
        // Only the sign of the second coordinate is observable; ties among
        // equal codewords go to the lowest index, i.e. v ∈ {1, 2}.
        if v > 2 {
            return Ok(1.0);
        }
        if big_b == 0.0 {
            return Ok(if v == 1 { 0.0 } else { 1.0 });
        }
        return Ok(q_function(big_b / sigma));
    }
    if big_b == 0.0 {
        // Plain PAM on the first axis with spacing A.
        let tail = q_function(big_a / (2.0 * sigma));
        return Ok(if has_prev && has_next { 2.0 * tail } else { tail });
    }

    let lo = if v >= 3 { -big_a } else { f64::NEG_INFINITY };
    let hi = if v + 2 <= m { big_a } else { f64::INFINITY };
    let mut err = 0.0;
    if lo.is_finite() {
        err += q_function(big_a / sigma);
    }
    if hi.is_finite() {
        err += q_function(big_a / sigma);
    }

    let denom = 4.0 * big_b;
    let base = big_a * big_a + 4.0 * big_b * big_b;
    let threshold = |x: f64| {
        let up = if has_next { (2.0 * x * big_a - base) / denom } else { f64::NEG_INFINITY };
        let down = if has_prev { (-2.0 * x * big_a - base) / denom } else { f64::NEG_INFINITY };
        up.max(down)
    };
    let norm = 1.0 / (sigma * (2.0 * std::f64::consts::PI).sqrt());
    let integrand = |x: f64| {
        let z = x / sigma;
        norm * (-0.5 * z * z).exp() * q_function(-threshold(x) / sigma)
    };

    let l = lo.max(-TAIL_SIGMAS * sigma);
    let h = hi.min(TAIL_SIGMAS * sigma);
    if l < h {
        if has_prev && has_next && l < 0.0 && h > 0.0 {
            err += integrate(integrand, l, 0.0)?.value;
            err += integrate(integrand, 0.0, h)?.value;
        } else {
            err += integrate(integrand, l, h)?.value;
        }
    }
    Ok(err.min(1.0))
}

/// Average ML error `(1/M) Σ_v P'(v)` of one quadrature of a Y pair with
/// gains `(λ_i, λ_j)` and complex noise variance `N_0`.
///
/// Interior, end and next-to-end codewords each share one value by
/// symmetry, so at most three integrals are evaluated.
pub fn y_exact_pair_error(
    a: f64,
    b: f64,
    lambda_i: f64,
    lambda_j: f64,
    n0: f64,
    m: usize,
) -> Result<f64> {
    check(a, b, lambda_i, lambda_j, n0, m)?;
    let e = |v| y_exact_codeword_error(a, b, lambda_i, lambda_j, n0, m, v);
    if lambda_i * a == 0.0 {
        let total: f64 = (1..=m).map(e).sum::<Result<f64>>()?;
        return Ok(total / m as f64);
    }
    let mf = m as f64;
    let p = match m {
        2 => e(1)?,
        4 => 0.5 * (e(1)? + e(2)?),
        _ => (2.0 * e(1)? + 2.0 * e(2)? + (mf - 4.0) * e(3)?) / mf,
    };
    Ok(p)
}
