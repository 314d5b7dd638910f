//! Running means, the active arm set and the Hoeffding confidence radius.

use crate::error::{Error, Result};

/// Per-arm running means stored as `(sum, count)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalStats {
    sums: Vec<f64>,
    counts: Vec<u64>,
}

impl EmpiricalStats {
    pub fn new(arms: usize) -> Self {
        Self {
            sums: vec![0.0; arms],
            counts: vec![0; arms],
        }
    }

    pub fn arms(&self) -> usize {
        self.counts.len()
    }

    /// Records reward `y` for `arm`.
    pub fn update(&mut self, arm: usize, y: f64) -> Result<()> {
        if !(0.0..=1.0).contains(&y) {
            return Err(Error::RewardOutOfRange(y));
        }
        let arms = self.arms();
        let (sum, count) = self
            .sums
            .get_mut(arm)
            .zip(self.counts.get_mut(arm))
            .ok_or(Error::ArmOutOfRange { arm, arms })?;
        *sum += y;
        *count += 1;
        Ok(())
    }

    /// Empirical mean, 0 for an arm never observed.
    #[inline]
    pub fn mean(&self, arm: usize) -> f64 {
        match self.counts[arm] {
            0 => 0.0,
            n => (self.sums[arm] / n as f64).min(1.0),
        }
    }

    #[inline]
    pub fn count(&self, arm: usize) -> u64 {
        self.counts[arm]
    }

    pub fn reset(&mut self) {
        self.sums.iter_mut().for_each(|s| *s = 0.0);
        self.counts.iter_mut().for_each(|c| *c = 0);
    }
}

/// Value-returning form of [`EmpiricalStats::update`].
pub fn update_mean(mut stats: EmpiricalStats, arm: usize, y: f64) -> Result<EmpiricalStats> {
    stats.update(arm, y)?;
    Ok(stats)
}

/// Arms still in play, with the index of the current round-robin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActiveSet {
    arms: Vec<usize>,
    round: u64,
}

impl ActiveSet {
    /// The full set `{0, .., arms-1}` at round 1.
    pub fn full(arms: usize) -> Self {
        Self {
            arms: (0..arms).collect(),
            round: 1,
        }
    }

    /// Builds a set from explicit members. Rejects empty or duplicated lists.
    pub fn from_arms(arms: Vec<usize>, round: u64) -> Result<Self> {
        if arms.is_empty() {
            return Err(Error::Contract("active set must be non-empty".into()));
        }
        let mut sorted = arms.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Contract("duplicate arm in active set".into()));
        }
        if round == 0 {
            return Err(Error::Contract("round index starts at 1".into()));
        }
        Ok(Self { arms, round })
    }

    pub fn arms(&self) -> &[usize] {
        &self.arms
    }

    pub fn len(&self) -> usize {
        self.arms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arms.is_empty()
    }

    pub fn round(&self) -> u64 {
        self.round
    }

    pub fn contains(&self, arm: usize) -> bool {
        self.arms.contains(&arm)
    }

    pub(crate) fn advance_round(&mut self) {
        self.round += 1;
    }

    pub(crate) fn retain(&mut self, keep: impl FnMut(&usize) -> bool) {
        self.arms.retain(keep);
        debug_assert!(!self.arms.is_empty());
    }

    /// Empirical leader of the set; ties go to the lowest arm id.
    pub fn leader(&self, stats: &EmpiricalStats) -> usize {
        let mut best = usize::MAX;
        let mut best_mean = f64::NEG_INFINITY;
        for &k in &self.arms {
            let m = stats.mean(k);
            if m > best_mean || (m == best_mean && k < best) {
                best = k;
                best_mean = m;
            }
        }
        best
    }
}

pub(crate) fn check_delta(delta: f64) -> Result<()> {
    if delta > 0.0 && delta <= 0.5 {
        Ok(())
    } else {
        Err(Error::param("delta", format!("{delta} not in (0, 0.5]")))
    }
}

/// Hoeffding radius `sqrt((2 / tau) * ln(4 K tau^2 / delta))` used by the
/// elimination rule after `tau` completed rounds over `arms` arms.
pub fn confidence_radius(tau: u64, arms: usize, delta: f64) -> Result<f64> {
    if tau == 0 {
        return Err(Error::param("tau", "must be at least 1"));
    }
    if arms == 0 {
        return Err(Error::param("arms", "must be at least 1"));
    }
    check_delta(delta)?;
    Ok(radius_unchecked(tau, arms, delta))
}

#[inline]
pub(crate) fn radius_unchecked(tau: u64, arms: usize, delta: f64) -> f64 {
    let tau = tau as f64;
    ((2.0 / tau) * (4.0 * arms as f64 * tau * tau / delta).ln()).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_observation() {
        let s = update_mean(EmpiricalStats::new(2), 0, 0.7).unwrap();
        assert_eq!(s.mean(0), 0.7);
        assert_eq!(s.count(0), 1);
        assert_eq!(s.mean(1), 0.0);
    }

    #[test]
    fn arithmetic_mean() {
        let mut s = EmpiricalStats::new(1);
        for y in [1.0, 0.0, 1.0] {
            s.update(0, y).unwrap();
        }
        assert!((s.mean(0) - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn million_constant_observations() {
        let mut s = EmpiricalStats::new(1);
        for _ in 0..1_000_000 {
            s.update(0, 0.3).unwrap();
        }
        // batch oracle: n * 0.3 / n computed from a pairwise sum
        let batch = pairwise_sum(&vec![0.3; 1_000_000]) / 1e6;
        assert!((s.mean(0) - batch).abs() < 1e-9);
        assert!((s.mean(0) - 0.3).abs() < 1e-9);
    }

    fn pairwise_sum(xs: &[f64]) -> f64 {
        if xs.len() <= 8 {
            xs.iter().sum()
        } else {
            let (a, b) = xs.split_at(xs.len() / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }

    #[test]
    fn rejects_bad_rewards() {
        let mut s = EmpiricalStats::new(1);
        assert!(matches!(s.update(0, 1.5), Err(Error::RewardOutOfRange(_))));
        assert!(s.update(0, -0.1).is_err());
        assert!(s.update(0, f64::NAN).is_err());
        assert!(matches!(s.update(3, 0.5), Err(Error::ArmOutOfRange { .. })));
    }

    #[test]
    fn radius_examples() {
        // sqrt(2 ln 16)
        let r = confidence_radius(1, 2, 0.5).unwrap();
        assert!((r - 2.354_820_045_030_949).abs() < 1e-12, "{r}");
        let r = confidence_radius(100, 20, 0.05).unwrap();
        assert!((r - 0.575_987_834_597_295).abs() < 1e-12, "{r}");
        assert!(confidence_radius(10, 2, 0.1).unwrap() > confidence_radius(10, 2, 0.2).unwrap());
    }

    #[test]
    fn radius_rejects_domain() {
        assert!(confidence_radius(0, 2, 0.1).is_err());
        assert!(confidence_radius(1, 2, 0.0).is_err());
        assert!(confidence_radius(1, 2, 0.6).is_err());
    }

    #[test]
    fn leader_prefers_lowest_on_ties() {
        let set = ActiveSet::from_arms(vec![3, 1, 2], 1).unwrap();
        let stats = EmpiricalStats::new(4);
        assert_eq!(set.leader(&stats), 1);
    }

    #[test]
    fn active_set_validation() {
        assert!(ActiveSet::from_arms(vec![], 1).is_err());
        assert!(ActiveSet::from_arms(vec![1, 1], 1).is_err());
        assert_eq!(ActiveSet::full(3).arms(), &[0, 1, 2]);
    }
}
