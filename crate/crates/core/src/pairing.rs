//! Subchannel pairing.

use crate::error::{domain, Result};

/// Pairs of 1-based subchannel indices `(i_k, j_k)` with `i_k < j_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairingPlan {
    n_r: usize,
    pairs: Vec<(usize, usize)>,
}

impl PairingPlan {
    /// Cross pairing `i_k = k`, `j_k = n_r - k + 1`, which pairs the strongest
    /// subchannel with the weakest and so on inward.
    pub fn optimal(n_r: usize) -> Result<Self> {
        if n_r < 2 || !n_r.is_multiple_of(2) {
            return domain(format!("pairing needs an even n_r >= 2, got {n_r}"));
        }
        let pairs = (1..=n_r / 2).map(|k| (k, n_r - k + 1)).collect();
        Ok(Self { n_r, pairs })
    }

    /// Arbitrary plan; indices must partition `1..=n_r` with `i < j` per pair.
    pub fn custom(n_r: usize, pairs: Vec<(usize, usize)>) -> Result<Self> {
        if n_r < 2 || !n_r.is_multiple_of(2) || pairs.len() != n_r / 2 {
            return domain("pairing must cover an even number of subchannels");
        }
        let mut seen = vec![false; n_r + 1];
        for &(i, j) in &pairs {
            if i >= j || i == 0 || j > n_r || seen[i] || seen[j] {
                return domain(format!("invalid pair ({i}, {j}) for n_r = {n_r}"));
            }
            seen[i] = true;
            seen[j] = true;
        }
        Ok(Self { n_r, pairs })
    }

    pub fn n_r(&self) -> usize {
        self.n_r
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Diversity order `(n_t - i_k + 1)(n_r - i_k + 1)` guaranteed for pair `k`
    /// (0-based position in the plan).
    pub fn pair_diversity(&self, k: usize, n_t: usize) -> usize {
        let i = self.pairs[k].0;
        (n_t - i + 1) * (self.n_r - i + 1)
    }

    /// Lower bound on the overall diversity order: the smallest per-pair
    /// guarantee. For the cross pairing this is `(n_r/2 + 1)(n_t - n_r/2 + 1)`.
    pub fn diversity_lower_bound(&self, n_t: usize) -> usize {
        (0..self.pairs.len())
            .map(|k| self.pair_diversity(k, n_t))
            .min()
            .unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cross_pairing_six() {
        let p = PairingPlan::optimal(6).unwrap();
        assert_eq!(p.pairs(), &[(1, 6), (2, 5), (3, 4)]);
    }

    #[test]
    fn single_pair() {
        assert_eq!(PairingPlan::optimal(2).unwrap().pairs(), &[(1, 2)]);
    }

    #[test]
    fn diversity_bound_four_by_four() {
        let p = PairingPlan::optimal(4).unwrap();
        assert_eq!(p.diversity_lower_bound(4), 9);
        assert_eq!(p.pair_diversity(0, 4), 16);
        assert_eq!(p.pair_diversity(1, 4), 9);
    }

    #[test]
    fn odd_rejected() {
        assert!(PairingPlan::optimal(3).is_err());
        assert!(PairingPlan::optimal(0).is_err());
    }

    #[test]
    fn custom_validates_partition() {
        assert!(PairingPlan::custom(4, vec![(1, 2), (3, 4)]).is_ok());
        assert!(PairingPlan::custom(4, vec![(1, 2), (2, 4)]).is_err());
        assert!(PairingPlan::custom(4, vec![(2, 1), (3, 4)]).is_err());
    }
}
