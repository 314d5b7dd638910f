//! Closed-form guarantees for the elimination agents.
//!
//! Each [`Bound`] carries an `explicit` value when the constants are known and
//! an `o_argument` value, the expression inside a Landau `O(.)`. The latter
//! is a scaling, never a sharp number.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundInputs {
    pub arms: usize,
    pub delta: f64,
    pub gap: f64,
    pub horizon: Option<u64>,
    /// `N`, the number of optimal-policy segments.
    pub segments: Option<u64>,
    pub phi: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bound {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub explicit: Option<f64>,
    pub o_argument: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub inputs: BoundInputs,
    /// `(64 / D^2) ln(4K / (delta D))` rounds.
    pub tau_star: f64,
    /// Stationary-best-arm identification: `K tau*` steps explicit.
    pub sample_complexity: Bound,
    /// Gap-dependent regret with `delta = 1/T`:
    /// `(K-1)(64/D) ln(4KT/D) + 1`.
    pub regret_gap_dependent: Option<Bound>,
    /// Gap-free regret as stated: `(K-1)(T/K) 4 sqrt((K/T) ln(4T^3/K)) + 1`.
    pub regret_gap_free: Option<Bound>,
    /// The same gap-free bound before simplification,
    /// `(K-1) tau 4 sqrt((2/tau) ln(4K tau^2 / delta)) + delta T` at
    /// `tau = T/K`, `delta = 1/T`.
    pub regret_gap_free_unsimplified: Option<f64>,
    /// With resets: `phi K/(delta D^2) ln(K/(delta D)) + N/phi`.
    pub reset_sample_complexity: Option<Bound>,
    /// With resets, horizon form: `phi T K/D^2 ln(K/(delta D)) + N/phi`.
    pub reset_sample_complexity_horizon: Option<Bound>,
    /// `sqrt(N delta / (K ln(K/delta)))`.
    pub phi_sample_complexity: Option<f64>,
    /// Exact minimizer of `reset_sample_complexity` over `phi`:
    /// `sqrt(N delta D^2 / (K ln(K/(delta D))))`.
    pub phi_sample_complexity_exact: Option<f64>,
    /// `(1/D^2) sqrt(N K ln(K/delta) / delta)`.
    pub tuned_sample_complexity: Option<Bound>,
    /// `phi T K/D ln(KT/D) + N/phi`.
    pub reset_regret: Option<Bound>,
    /// `sqrt(N / (T K ln(KT)))`.
    pub phi_regret: Option<f64>,
    /// `sqrt(N T K ln(KT)) / D`.
    pub tuned_regret: Option<Bound>,
    /// `4(phi T + 1) sqrt((2/phi) K ln(4T^3/K^2)) + N/phi + 1`.
    pub reset_regret_gap_free: Option<f64>,
    /// `sqrt(N) / T^(2/3)`.
    pub phi_gap_free: Option<f64>,
    /// `reset_regret_gap_free` at `phi_gap_free`; scaling
    /// `T^(2/3) sqrt(N K ln(T/K))`.
    pub tuned_regret_gap_free: Option<Bound>,
}

pub fn tau_star(arms: usize, delta: f64, gap: f64) -> f64 {
    64.0 / (gap * gap) * (4.0 * arms as f64 / (delta * gap)).ln()
}

/// `phi K/(delta D^2) ln(K/(delta D)) + N/phi`.
pub fn reset_sample_complexity(arms: usize, delta: f64, gap: f64, segments: f64, phi: f64) -> f64 {
    let k = arms as f64;
    phi * k / (delta * gap * gap) * (k / (delta * gap)).ln() + segments / phi
}

pub fn phi_sample_complexity(arms: usize, delta: f64, segments: f64) -> f64 {
    let k = arms as f64;
    (segments * delta / (k * (k / delta).ln())).sqrt()
}

pub fn phi_regret(arms: usize, horizon: f64, segments: f64) -> f64 {
    let k = arms as f64;
    (segments / (horizon * k * (k * horizon).ln())).sqrt()
}

pub fn phi_gap_free(horizon: f64, segments: f64) -> f64 {
    segments.sqrt() / horizon.powf(2.0 / 3.0)
}

/// `4(phi T + 1) sqrt((2/phi) K ln(4T^3/K^2)) + N/phi + 1`.
pub fn reset_regret_gap_free(arms: usize, horizon: f64, segments: f64, phi: f64) -> f64 {
    let k = arms as f64;
    let log = (4.0 * horizon.powi(3) / (k * k)).ln();
    4.0 * (phi * horizon + 1.0) * (2.0 / phi * k * log).sqrt() + segments / phi + 1.0
}

fn validate(i: &BoundInputs) -> Result<()> {
    if i.arms < 2 {
        return Err(Error::param("K", format!("{} must be >= 2", i.arms)));
    }
    if !(i.delta > 0.0 && i.delta <= 0.5) {
        return Err(Error::param(
            "delta",
            format!("{} must be in (0, 0.5]", i.delta),
        ));
    }
    if !(i.gap > 0.0 && i.gap <= 1.0) {
        return Err(Error::param("gap", format!("{} must be in (0, 1]", i.gap)));
    }
    if let Some(t) = i.horizon {
        if t < i.arms as u64 {
            return Err(Error::param("T", format!("{t} must be >= K = {}", i.arms)));
        }
    }
    if i.segments == Some(0) {
        return Err(Error::param("N", "must be >= 1"));
    }
    if let Some(phi) = i.phi {
        if !(phi > 0.0 && phi <= 1.0) {
            return Err(Error::param("phi", format!("{phi} must be in (0, 1]")));
        }
    }
    Ok(())
}

pub fn bound_calculators(inputs: BoundInputs) -> Result<BoundReport> {
    validate(&inputs)?;
    let BoundInputs {
        arms, delta, gap, ..
    } = inputs;
    let k = arms as f64;
    let t = inputs.horizon.map(|t| t as f64);
    let n = inputs.segments.map(|n| n as f64);
    let phi = inputs.phi;
    let tau_star = tau_star(arms, delta, gap);

    let regret_gap_dependent = t.map(|t| Bound {
        explicit: Some((k - 1.0) * 64.0 / gap * (4.0 * k * t / gap).ln() + 1.0),
        o_argument: (k - 1.0) / gap * (k * t / gap).ln(),
    });
    let regret_gap_free = t.map(|t| Bound {
        explicit: Some(
            (k - 1.0) * (t / k) * 4.0 * ((k / t) * (4.0 * t.powi(3) / k).ln()).sqrt() + 1.0,
        ),
        o_argument: (t * k * (t / k).ln()).sqrt(),
    });
    let regret_gap_free_unsimplified = t.map(|t| {
        let tau = t / k;
        let d = 1.0 / t;
        (k - 1.0) * tau * 4.0 * (2.0 / tau * (4.0 * k * tau * tau / d).ln()).sqrt() + d * t
    });

    let both = |a: Option<f64>, b: Option<f64>| a.zip(b);
    let reset_sample_complexity = both(n, phi).map(|(n, phi)| Bound {
        explicit: None,
        o_argument: reset_sample_complexity(arms, delta, gap, n, phi),
    });
    let reset_sample_complexity_horizon = both(t, n).zip(phi).map(|((t, n), phi)| Bound {
        explicit: None,
        o_argument: phi * t * k / (gap * gap) * (k / (delta * gap)).ln() + n / phi,
    });
    let phi_sc = n.map(|n| phi_sample_complexity(arms, delta, n));
    let phi_sc_exact = n.map(|n| (n * delta * gap * gap / (k * (k / (delta * gap)).ln())).sqrt());
    let tuned_sample_complexity = n.map(|n| Bound {
        explicit: None,
        o_argument: 1.0 / (gap * gap) * (n * k * (k / delta).ln() / delta).sqrt(),
    });
    let reset_regret = both(t, n).zip(phi).map(|((t, n), phi)| Bound {
        explicit: None,
        o_argument: phi * t * k / gap * (k * t / gap).ln() + n / phi,
    });
    let phi_r = both(t, n).map(|(t, n)| phi_regret(arms, t, n));
    let tuned_regret = both(t, n).map(|(t, n)| Bound {
        explicit: None,
        o_argument: (n * t * k * (k * t).ln()).sqrt() / gap,
    });
    let regret_with_resets_gap_free = both(t, n)
        .zip(phi)
        .map(|((t, n), phi)| reset_regret_gap_free(arms, t, n, phi));
    let phi_gf = both(t, n).map(|(t, n)| phi_gap_free(t, n));
    let tuned_regret_gap_free = both(t, n).map(|(t, n)| {
        let phi = phi_gap_free(t, n);
        Bound {
            explicit: Some(reset_regret_gap_free(arms, t, n, phi)),
            o_argument: t.powf(2.0 / 3.0) * (n * k * (t / k).ln()).sqrt(),
        }
    });

    Ok(BoundReport {
        inputs,
        tau_star,
        sample_complexity: Bound {
            explicit: Some(k * tau_star),
            o_argument: k / (gap * gap) * (k / (delta * gap)).ln(),
        },
        regret_gap_dependent,
        regret_gap_free,
        regret_gap_free_unsimplified,
        reset_sample_complexity,
        reset_sample_complexity_horizon,
        phi_sample_complexity: phi_sc,
        phi_sample_complexity_exact: phi_sc_exact,
        tuned_sample_complexity,
        reset_regret,
        phi_regret: phi_r,
        tuned_regret,
        reset_regret_gap_free: regret_with_resets_gap_free,
        phi_gap_free: phi_gf,
        tuned_regret_gap_free,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    fn inputs() -> BoundInputs {
        BoundInputs {
            arms: 20,
            delta: 0.05,
            gap: 0.05,
            horizon: Some(1_000_000),
            segments: Some(10),
            phi: Some(1e-4),
        }
    }

    #[test]
    fn tau_star_examples() {
        assert!(rel(tau_star(2, 0.05, 0.2), 10_695.378_764) < 1e-9);
        assert!(rel(tau_star(5, 0.05, 0.2), 12_161.443_935) < 1e-9);
        assert!(rel(tau_star(2, 0.05, 0.2), 1600.0 * 800f64.ln()) < 1e-14);
    }

    #[test]
    fn corollary_phi_example() {
        assert!(rel(phi_regret(20, 1e6, 10.0), 1.724_586_9e-4) < 1e-7);
    }

    #[test]
    fn gap_free_simplification_drops_sqrt_two() {
        let r = bound_calculators(inputs()).unwrap();
        let printed = r.regret_gap_free.unwrap().explicit.unwrap() - 1.0;
        let full = r.regret_gap_free_unsimplified.unwrap() - 1.0;
        assert!(rel(full / printed, 2f64.sqrt()) < 1e-12);
    }

    #[test]
    fn exact_minimizer() {
        let r = bound_calculators(inputs()).unwrap();
        let phi = r.phi_sample_complexity_exact.unwrap();
        let f = |p| reset_sample_complexity(20, 0.05, 0.05, 10.0, p);
        assert!(f(phi) <= f(phi * 1.001) && f(phi) <= f(phi / 1.001));
    }

    #[test]
    fn all_finite_positive() {
        let r = bound_calculators(inputs()).unwrap();
        let json = serde_json::to_value(&r).unwrap();
        fn walk(v: &serde_json::Value) {
            match v {
                serde_json::Value::Number(n) => {
                    let x = n.as_f64().unwrap();
                    assert!(x.is_finite() && x > 0.0, "{x}");
                }
                serde_json::Value::Object(m) => m.values().for_each(walk),
                serde_json::Value::Array(a) => a.iter().for_each(walk),
                serde_json::Value::Null => panic!("missing value"),
                _ => {}
            }
        }
        walk(&json);
    }

    #[test]
    fn optional_inputs() {
        let r = bound_calculators(BoundInputs {
            horizon: None,
            segments: None,
            phi: None,
            ..inputs()
        })
        .unwrap();
        assert!(r.regret_gap_dependent.is_none());
        assert!(r.tuned_regret.is_none());
        assert!(r.sample_complexity.explicit.is_some());
    }

    #[test]
    fn domain_errors() {
        let bad = [
            BoundInputs {
                arms: 1,
                ..inputs()
            },
            BoundInputs {
                delta: 0.6,
                ..inputs()
            },
            BoundInputs {
                delta: 0.0,
                ..inputs()
            },
            BoundInputs {
                gap: 0.0,
                ..inputs()
            },
            BoundInputs {
                gap: 1.5,
                ..inputs()
            },
            BoundInputs {
                horizon: Some(5),
                ..inputs()
            },
            BoundInputs {
                segments: Some(0),
                ..inputs()
            },
            BoundInputs {
                phi: Some(0.0),
                ..inputs()
            },
            BoundInputs {
                phi: Some(1.1),
                ..inputs()
            },
        ];
        for b in bad {
            assert!(bound_calculators(b).is_err(), "{b:?}");
        }
    }
}
