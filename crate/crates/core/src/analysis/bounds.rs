//! Union bounds and bound curves.

use std::fmt::Write as _;
use std::path::Path;

use super::{q_function, tree_sum, EigenPairSample};
use crate::codes::angle::{full_difference_set, Difference};
use crate::error::{domain, Error, Result};

/// A bound value, or the divergence caused by a vanishing projection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundValue {
    Finite(f64),
    /// `p cos θ + q sin θ = 0` for this difference.
    Divergent { p: i32, q: i32 },
}

impl BoundValue {
    /// Value clamped to `[0, 1]`; divergence reports 1.
    pub fn clamped(&self) -> f64 {
        match *self {
            Self::Finite(v) => v.clamp(0.0, 1.0),
            Self::Divergent { .. } => 1.0,
        }
    }

    /// Raw value; divergence reports `+∞`.
    pub fn raw(&self) -> f64 {
        match *self {
            Self::Finite(v) => v,
            Self::Divergent { .. } => f64::INFINITY,
        }
    }
}

const VANISHING: f64 = 1e-9;

/// Leading-order 2×2 X-Code bound on the per-component error
/// `Σ_{S_M} (70/81)(M² - 1)⁴ γ⁻⁴ / (M² (p cos θ + q sin θ)⁶ (p² + q²))`
/// for linear SNR `gamma`; unclamped.
pub fn x_union_bound_2x2(theta: f64, m: usize, gamma: f64) -> Result<BoundValue> {
    if m < 2 || !m.is_power_of_two() {
        return domain(format!("M must be a power of 2 >= 2, got {m}"));
    }
    if !(gamma > 0.0) {
        return domain(format!("SNR must be positive, got {gamma}"));
    }
    let (s, c) = theta.sin_cos();
    let mf = m as f64;
    let lead = (70.0 / 81.0) * (mf * mf - 1.0).powi(4) * gamma.powi(-4) / (mf * mf);
    let mut terms = Vec::new();
    for (p, q) in full_difference_set(m) {
        let (pf, qf) = (p as f64, q as f64);
        let proj = pf * c + qf * s;
        if proj.abs() < VANISHING * pf.hypot(qf) {
            return Ok(BoundValue::Divergent { p, q });
        }
        terms.push(lead / (proj.powi(6) * (pf * pf + qf * qf)));
    }
    Ok(BoundValue::Finite(tree_sum(&terms)))
}

/// `P_k = 1 - (1 - P'_k)²`: both quadratures of a pair must be right.
pub fn component_to_word_error(p_component: f64) -> f64 {
    let p = p_component.clamp(0.0, 1.0);
    1.0 - (1.0 - p) * (1.0 - p)
}

/// `P = 1 - Π (1 - P_k)` over pairs.
pub fn overall_word_error(pair_errors: &[f64]) -> f64 {
    1.0 - pair_errors.iter().map(|p| 1.0 - p.clamp(0.0, 1.0)).product::<f64>()
}

/// Shape of the generic high-SNR bound for one pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticBound {
    /// `c (|S| - 1) (γ g / (2P_T))^{-δ}`; `+∞` when `g = 0`.
    pub value: f64,
    pub delta: usize,
    /// True when no constant was supplied and `c = 1` was used.
    pub shape_only: bool,
}

/// Generic bound `c_k (|S_k| - 1)(γ g/(2P_T))^{-δ_k}` with
/// `δ_k = (n_t - k + 1)(n_r - k + 1)` for the 1-based pair index `k`.
#[allow(clippy::too_many_arguments)]
pub fn generic_asymptotic_bound(
    k: usize,
    n_r: usize,
    n_t: usize,
    set_size: usize,
    g: f64,
    gamma: f64,
    p_t: f64,
    constant: Option<f64>,
) -> Result<AsymptoticBound> {
    if k == 0 || 2 * k > n_r || n_r > n_t {
        return domain(format!("pair {k} invalid for n_r = {n_r}, n_t = {n_t}"));
    }
    if !(g >= 0.0) || !(gamma > 0.0) || !(p_t > 0.0) || set_size < 2 {
        return domain("bound needs g >= 0, γ > 0, P_T > 0 and |S| >= 2");
    }
    let delta = (n_t - k + 1) * (n_r - k + 1);
    let c = constant.unwrap_or(1.0);
    let value = if g == 0.0 {
        f64::INFINITY
    } else {
        c * (set_size - 1) as f64 * (gamma * g / (2.0 * p_t)).powi(-(delta as i32))
    };
    Ok(AsymptoticBound {
        value,
        delta,
        shape_only: constant.is_none(),
    })
}

/// `multiplicity · mean_s Q(sqrt(d²(λ_i, λ_j) / (2 N_0)))`.
pub fn union_bound_expectation<F>(
    dmin2: F,
    samples: &EigenPairSample,
    n0: f64,
    multiplicity: f64,
) -> Result<f64>
where
    F: Fn(f64, f64) -> Result<f64>,
{
    if samples.is_empty() {
        return domain("union bound needs at least one eigenvalue sample");
    }
    if !(n0 > 0.0) {
        return domain(format!("N_0 must be positive, got {n0}"));
    }
    let terms = samples
        .pairs()
        .iter()
        .map(|&(li, lj)| Ok(q_function((dmin2(li, lj)? / (2.0 * n0)).sqrt())))
        .collect::<Result<Vec<f64>>>()?;
    Ok(multiplicity * tree_sum(&terms) / terms.len() as f64)
}

/// A bound evaluated over an SNR grid.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundCurve {
    pub scheme: String,
    /// Free-form parameter description, e.g. `M=2;theta=0.4636`.
    pub params: String,
    /// `(γ in dB, clamped bound)`.
    pub points: Vec<(f64, f64)>,
    /// Differences responsible for divergent points, if any.
    pub divergent: Vec<Difference>,
}

impl BoundCurve {
    pub fn new(scheme: impl Into<String>, params: impl Into<String>) -> Self {
        Self {
            scheme: scheme.into(),
            params: params.into(),
            points: Vec::new(),
            divergent: Vec::new(),
        }
    }

    pub fn push(&mut self, gamma_db: f64, value: BoundValue) {
        if let BoundValue::Divergent { p, q } = value {
            if !self.divergent.contains(&(p, q)) {
                self.divergent.push((p, q));
            }
        }
        self.points.push((gamma_db, value.clamped()));
    }

    /// Non-increasing in γ once clamped.
    pub fn is_monotone(&self) -> bool {
        self.points.windows(2).all(|w| w[1].1 <= w[0].1)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("gamma_db,value,scheme,params\n");
        for &(g, v) in &self.points {
            let _ = writeln!(out, "{g},{v:e},{},{}", self.scheme, self.params);
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv()).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn x_bound_slope_and_sentinels() {
        let t = 0.5f64.atan();
        let g = 10f64.powf(2.6);
        let a = x_union_bound_2x2(t, 2, g).unwrap().raw();
        let b = x_union_bound_2x2(t, 2, 10.0 * g).unwrap().raw();
        assert!(a.is_finite());
        assert!((a / b - 1e4).abs() < 1e-6);
        assert_eq!(x_union_bound_2x2(0.0, 2, g).unwrap(), BoundValue::Divergent { p: 0, q: -1 });
        match x_union_bound_2x2(t, 4, g).unwrap() {
            BoundValue::Divergent { p, q } => assert_eq!(q, -2 * p),
            v => panic!("expected divergence, got {v:?}"),
        }
    }

    #[test]
    fn generic_bound_deltas() {
        let b = generic_asymptotic_bound(1, 2, 2, 16, 0.2, 100.0, 1.0, None).unwrap();
        assert_eq!(b.delta, 4);
        assert!(b.shape_only);
        assert_eq!(generic_asymptotic_bound(1, 4, 4, 16, 0.2, 1.0, 1.0, None).unwrap().delta, 16);
        assert_eq!(generic_asymptotic_bound(2, 4, 4, 16, 0.2, 1.0, 1.0, None).unwrap().delta, 9);
        let x = generic_asymptotic_bound(2, 4, 4, 16, 0.2, 50.0, 1.0, Some(1.0)).unwrap();
        let y = generic_asymptotic_bound(2, 4, 4, 16, 0.2, 100.0, 1.0, Some(1.0)).unwrap();
        assert!((y.value / x.value - 2f64.powi(-9)).abs() < 1e-15);
        assert!(!x.shape_only);
        let z = generic_asymptotic_bound(1, 2, 2, 16, 0.0, 100.0, 1.0, None).unwrap();
        assert_eq!(z.value, f64::INFINITY);
    }

    #[test]
    fn union_expectation_limits() {
        let s = EigenPairSample::new(vec![(1.0, 0.5)]).unwrap();
        let v = union_bound_expectation(|_, _| Ok(0.0), &s, 1.0, 3.0).unwrap();
        assert_eq!(v, 1.5);
        let v = union_bound_expectation(|_, _| Ok(1e6), &s, 1e-3, 3.0).unwrap();
        assert_eq!(v, 0.0);
        let empty = EigenPairSample::new(vec![]).unwrap();
        assert!(union_bound_expectation(|_, _| Ok(1.0), &empty, 1.0, 1.0).is_err());
    }

    #[test]
    fn word_error_composition() {
        assert!((component_to_word_error(0.1) - 0.19).abs() < 1e-15);
        assert!((overall_word_error(&[0.19, 0.19]) - (1.0 - 0.81 * 0.81)).abs() < 1e-15);
    }

    #[test]
    fn curve_csv_and_monotone() {
        let mut c = BoundCurve::new("x-code", "M=2");
        for db in [10.0, 12.0, 14.0] {
            c.push(db, x_union_bound_2x2(0.5f64.atan(), 2, 10f64.powf(db / 10.0)).unwrap());
        }
        assert!(c.is_monotone());
        let csv = c.to_csv();
        assert!(csv.starts_with("gamma_db,value,scheme,params\n"));
        assert_eq!(csv.lines().count(), 4);
        assert!(c.points.iter().all(|p| (0.0..=1.0).contains(&p.1)));
    }
}
