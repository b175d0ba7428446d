//! Distances, error bounds, the exact Y pair error and slope estimation.

mod bounds;
mod distance;
mod exact;
pub mod quadrature;

use rayon::prelude::*;

use crate::channel::sample_rayleigh_channel;
use crate::error::{domain, Error, Result};
use crate::pairing::PairingPlan;
use crate::rng::substream;

pub use bounds::{
    component_to_word_error, generic_asymptotic_bound, overall_word_error,
    union_bound_expectation, x_union_bound_2x2, AsymptoticBound, BoundCurve, BoundValue,
};
pub use distance::{generalized_min_distance, x_precoder_dmin2, x_pairwise_distance, y_dmin};
pub use exact::{y_exact_codeword_error, y_exact_pair_error};

/// Gaussian tail `Q(x) = erfc(x/√2)/2`.
#[inline]
pub fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x / std::f64::consts::SQRT_2)
}

/// Pairwise (tree) summation; the reduction order depends only on the
/// length, so parallel producers give reproducible totals.
pub fn tree_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        2 => xs[0] + xs[1],
        n => {
            let (l, r) = xs.split_at(n / 2);
            tree_sum(l) + tree_sum(r)
        }
    }
}

/// Draws of the paired singular values `(λ_i, λ_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPairSample {
    pairs: Vec<(f64, f64)>,
}

impl EigenPairSample {
    pub fn new(pairs: Vec<(f64, f64)>) -> Result<Self> {
        for &(li, lj) in &pairs {
            if !(lj >= 0.0 && li >= lj && li.is_finite()) {
                return domain(format!("need λ_i >= λ_j >= 0, got ({li}, {lj})"));
            }
        }
        Ok(Self { pairs })
    }

    /// `count` Rayleigh channels, SVD-decomposed, keeping the gains of pair
    /// `k` (0-based) of the cross pairing. Draw `i` uses substream `i`.
    pub fn from_rayleigh(n_r: usize, n_t: usize, k: usize, count: usize, seed: u64) -> Result<Self> {
        let plan = PairingPlan::optimal(n_r)?;
        if k >= plan.len() {
            return domain(format!("pair index {k} out of range for n_r = {n_r}"));
        }
        let pairs = (0..count as u64)
            .into_par_iter()
            .map(|i| {
                let ch = sample_rayleigh_channel(n_r, n_t, &mut substream(seed, i))?;
                Ok(ch.pair_gains(&plan)[k])
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(pairs)
    }

    pub fn pairs(&self) -> &[(f64, f64)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// Negated least-squares slope of `log10 P` against `log10 γ` using the
/// points whose rate lies in `(0, 0.1)`.
pub fn diversity_slope(curve: &[(f64, f64)]) -> Result<f64> {
    let pts: Vec<(f64, f64)> = curve
        .iter()
        .filter(|&&(g, p)| g.is_finite() && p > 0.0 && p < 0.1)
        .map(|&(g, p)| (g / 10.0, p.log10()))
        .collect();
    if pts.len() < 2 {
        return Err(Error::Domain(format!(
            "slope needs at least 2 points with rates in (0, 0.1), got {}",
            pts.len()
        )));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return domain("slope needs at least 2 distinct SNR points");
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Ok(-sxy / sxx)
}
