//! Channel realizations with cached SVD factors.

use rand::Rng;

use crate::error::{dimension, domain, Result};
use crate::linalg::{svd_decompose, ComplexMatrix, SvdFactors};
use crate::pairing::PairingPlan;
use crate::rng::complex_normal;

/// A channel matrix together with its SVD and the condition number of each
/// pair under the cross pairing.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSample {
    pub h: ComplexMatrix,
    pub svd: SvdFactors,
    /// `λ_{i_k} / λ_{j_k}` per pair; infinite when the weak singular value
    /// was clamped to zero.
    pub pair_betas: Vec<f64>,
}

impl ChannelSample {
    pub fn from_matrix(h: ComplexMatrix) -> Result<Self> {
        let n_r = h.rows();
        let plan = PairingPlan::optimal(n_r)?;
        let svd = svd_decompose(&h)?;
        let pair_betas = pair_betas(&svd.singular_values, &plan);
        Ok(Self { h, svd, pair_betas })
    }

    pub fn n_r(&self) -> usize {
        self.h.rows()
    }

    pub fn n_t(&self) -> usize {
        self.h.cols()
    }

    pub fn singular_values(&self) -> &[f64] {
        &self.svd.singular_values
    }

    /// `(λ_{i_k}, λ_{j_k})` for each pair of `plan`.
    pub fn pair_gains(&self, plan: &PairingPlan) -> Vec<(f64, f64)> {
        let lam = self.singular_values();
        plan.pairs()
            .iter()
            .map(|&(i, j)| (lam[i - 1], lam[j - 1]))
            .collect()
    }
}

fn pair_betas(lambda: &[f64], plan: &PairingPlan) -> Vec<f64> {
    plan.pairs()
        .iter()
        .map(|&(i, j)| {
            let (li, lj) = (lambda[i - 1], lambda[j - 1]);
            if lj > 0.0 {
                li / lj
            } else {
                f64::INFINITY
            }
        })
        .collect()
}

fn check_dims(n_r: usize, n_t: usize) -> Result<()> {
    if n_r < 2 || !n_r.is_multiple_of(2) || n_r > n_t {
        return dimension(format!(
            "need even n_r >= 2 and n_r <= n_t, got n_r = {n_r}, n_t = {n_t}"
        ));
    }
    Ok(())
}

/// Rayleigh flat-fading draw: i.i.d. CN(0, 1) entries.
pub fn sample_rayleigh_channel<R: Rng + ?Sized>(
    n_r: usize,
    n_t: usize,
    rng: &mut R,
) -> Result<ChannelSample> {
    check_dims(n_r, n_t)?;
    let h = sample_rayleigh_matrix(n_r, n_t, rng);
    ChannelSample::from_matrix(h)
}

pub(crate) fn sample_rayleigh_matrix<R: Rng + ?Sized>(
    n_r: usize,
    n_t: usize,
    rng: &mut R,
) -> ComplexMatrix {
    let data = (0..n_r * n_t).map(|_| complex_normal(rng, 1.0)).collect();
    ComplexMatrix::from_row_major(n_r, n_t, data).expect("gaussian draws are finite")
}

/// Deterministic 2×2 channel `diag(λ_1, λ_2)` with unit total gain
/// `λ_1² + λ_2² = 1` and condition number `β = λ_1/λ_2`.
pub fn channel_from_condition(beta: f64) -> Result<ChannelSample> {
    if !beta.is_finite() || beta < 1.0 {
        return domain(format!("condition number must be finite and >= 1, got {beta}"));
    }
    let norm = (1.0 + beta * beta).sqrt();
    let lambda = [beta / norm, 1.0 / norm];
    let h = ComplexMatrix::diag_real(&lambda);
    let svd = SvdFactors {
        u: ComplexMatrix::identity(2),
        singular_values: lambda.to_vec(),
        v: ComplexMatrix::identity(2),
    };
    let plan = PairingPlan::optimal(2)?;
    let pair_betas = pair_betas(&svd.singular_values, &plan);
    Ok(ChannelSample { h, svd, pair_betas })
}
