//! Parameter design for Y-Codes and Y-Precoders.

use rayon::prelude::*;

use crate::analysis::{tree_sum, y_exact_pair_error, EigenPairSample};
use crate::constellation::YCodebook;
use crate::error::{domain, Result};

/// Closed-form Y-Precoder parameters and the resulting minimum distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct YPrecoderParams {
    pub a: f64,
    pub b: f64,
    /// `d²_min` at `(a, b)` for the supplied `λ_i`.
    pub dmin2: f64,
}

/// Power split maximizing the Y minimum distance for condition number `β`.
///
/// With `M' = (M² - 1)/9`: once `β² ≥ (M² - 1)/3` all power goes to the
/// strong subchannel (`b = 0`); below that threshold the two nearest-pair
/// distances `4λ_i²a²` and `λ_i²a² + 4λ_j²b²` are equalized.
pub fn y_precoder_params(
    beta: f64,
    m: usize,
    p_t: f64,
    n_r: usize,
    lambda_i: f64,
) -> Result<YPrecoderParams> {
    if !(beta >= 1.0) {
        return domain(format!("condition number must be >= 1, got {beta}"));
    }
    if !(p_t > 0.0) || !p_t.is_finite() {
        return domain(format!("power budget must be positive, got {p_t}"));
    }
    if m < 2 || !m.is_power_of_two() || n_r == 0 {
        return domain(format!("invalid M = {m} or n_r = {n_r}"));
    }
    let mf = m as f64;
    let budget = p_t / n_r as f64;
    let threshold = (mf * mf - 1.0) / 3.0;
    let b2 = beta * beta;
    let l2 = lambda_i * lambda_i;
    if b2 >= threshold {
        Ok(YPrecoderParams {
            a: (12.0 * budget / (mf * mf - 1.0)).sqrt(),
            b: 0.0,
            dmin2: 12.0 * budget * l2 / (mf * mf - 1.0),
        })
    } else {
        let m_prime = (mf * mf - 1.0) / 9.0;
        Ok(YPrecoderParams {
            a: (4.0 * budget / (3.0 * (b2 + m_prime))).sqrt(),
            b: beta * (budget / (b2 + m_prime)).sqrt(),
            dmin2: 16.0 * budget * l2 / (3.0 * b2 + (mf * mf - 1.0) / 3.0),
        })
    }
}

/// Power-split grid `ρ = b²/(P_T/n_r) ∈ {0, 0.025, …, 0.975}`.
pub fn power_split_grid() -> Vec<f64> {
    (0..40).map(|i| i as f64 * 0.025).collect()
}

/// Outcome of the offline Y-Code search.
#[derive(Debug, Clone, PartialEq)]
pub struct OfflineYDesign {
    pub a: f64,
    pub b: f64,
    pub rho: f64,
    /// `(ρ, mean exact pair error)` for every grid point.
    pub table: Vec<(f64, f64)>,
}

/// Default design SNR for the offline search, in dB.
pub const DEFAULT_DESIGN_SNR_DB: f64 = 20.0;
/// Default number of eigenvalue draws for the offline search.
pub const DEFAULT_DESIGN_SAMPLES: usize = 10_000;

/// Fixed Y-Code parameters: the grid point whose exact pair error, averaged
/// over the supplied eigenvalue draws at `design_snr_db`, is smallest.
pub fn y_code_params_offline(
    m: usize,
    design_snr_db: f64,
    p_t: f64,
    n_r: usize,
    samples: &EigenPairSample,
) -> Result<OfflineYDesign> {
    if samples.is_empty() {
        return domain("offline Y design needs at least one eigenvalue sample");
    }
    if !design_snr_db.is_finite() {
        return domain(format!("design SNR must be finite, got {design_snr_db}"));
    }
    let n0 = p_t / 10f64.powf(design_snr_db / 10.0);
    let grid = power_split_grid();
    let table: Vec<(f64, f64)> = grid
        .par_iter()
        .map(|&rho| {
            let cb = YCodebook::from_power_split(m, rho, p_t, n_r)?;
            let errs = samples
                .pairs()
                .iter()
                .map(|&(li, lj)| y_exact_pair_error(cb.a(), cb.b(), li, lj, n0, m))
                .collect::<Result<Vec<f64>>>()?;
            Ok((rho, tree_sum(&errs) / errs.len() as f64))
        })
        .collect::<Result<Vec<_>>>()?;
    let (best_rho, _) = table
        .iter()
        .copied()
        .fold((0.0, f64::INFINITY), |acc, (rho, e)| if e < acc.1 { (rho, e) } else { acc });
    let cb = YCodebook::from_power_split(m, best_rho, p_t, n_r)?;
    Ok(OfflineYDesign {
        a: cb.a(),
        b: cb.b(),
        rho: best_rho,
        table,
    })
}
