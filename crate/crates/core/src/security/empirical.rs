//! Monte-Carlo checks of the concentration claims.
//!
//! Each trial draws its own codebook from its own generator, so trials can
//! run in any order or in parallel; the `*_trial` functions are the unit of
//! work and the `summarize` constructors merge them in trial order.

use rand::Rng;

use super::bounds::{chernoff_p1, SecurityParams, TailBound};
use super::prior::PriorDistribution;
use super::states::{conditional_states, eve_state, holevo, measured_mi, Measurement};
use crate::bits::BitString;
use crate::dense::{circuit_state, StateVector};
use crate::error::{Error, Result};
use crate::sampling::{
    sample_circuit, single_qubit_cliffords, MasterSeed, SamplerConfig, SamplerMode,
};
use crate::stabilizer::CliffordCircuit;

/// `K` circuits from `cfg`. The exhaustive single-qubit mode walks the 24
/// elements in order instead of sampling.
pub fn draw_circuits<R: Rng + ?Sized>(
    cfg: &SamplerConfig,
    k: usize,
    rng: &mut R,
) -> Result<Vec<CliffordCircuit>> {
    cfg.validate()?;
    if k == 0 {
        return Err(Error::param("K must be at least 1"));
    }
    if cfg.mode == SamplerMode::SingleQubitExhaustive {
        let all = single_qubit_cliffords();
        return Ok((0..k).map(|i| all[i % all.len()].clone()).collect());
    }
    (0..k).map(|_| sample_circuit(cfg, rng)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChernoffTrial {
    pub lambda_max: f64,
    /// `lambda_max * 2^n - 1`.
    pub empirical_epsilon: f64,
}

/// Largest eigenvalue of Eve's state for one sampled codebook.
pub fn chernoff_trial<R: Rng + ?Sized>(
    cfg: &SamplerConfig,
    k: usize,
    prior: &PriorDistribution,
    rng: &mut R,
) -> Result<ChernoffTrial> {
    if prior.n() != cfg.n {
        return Err(Error::LengthMismatch {
            expected: cfg.n,
            got: prior.n(),
        });
    }
    let circuits = draw_circuits(cfg, k, rng)?;
    let rho = eve_state(&circuits, prior)?;
    let lambda_max = rho.eigenvalues()?[0];
    Ok(ChernoffTrial {
        lambda_max,
        empirical_epsilon: lambda_max * (cfg.n as f64).exp2() - 1.0,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChernoffReport {
    pub trials: Vec<ChernoffTrial>,
    pub epsilon: f64,
    /// Trials with `lambda_max > (1 + epsilon) 2^-n`.
    pub violations: usize,
    pub frequency: f64,
    pub p1: TailBound,
}

impl ChernoffReport {
    pub fn summarize(
        trials: Vec<ChernoffTrial>,
        n: usize,
        k: usize,
        prior: &PriorDistribution,
        epsilon: f64,
    ) -> Result<Self> {
        if trials.is_empty() {
            return Err(Error::param("need at least one trial"));
        }
        let params =
            SecurityParams::new(n, epsilon, 0.0, prior.p_max(), prior.support_size(), 2.0)?;
        let violations = trials
            .iter()
            .filter(|t| t.empirical_epsilon > epsilon)
            .count();
        Ok(ChernoffReport {
            frequency: violations as f64 / trials.len() as f64,
            violations,
            epsilon,
            p1: chernoff_p1(&params, k as f64),
            trials,
        })
    }
}

/// Trial `t` uses stream `t` of `seed`.
pub fn empirical_chernoff(
    cfg: &SamplerConfig,
    k: usize,
    prior: &PriorDistribution,
    epsilon: f64,
    trials: usize,
    seed: MasterSeed,
) -> Result<ChernoffReport> {
    let results = (0..trials as u64)
        .map(|t| chernoff_trial(cfg, k, prior, &mut seed.stream(t)))
        .collect::<Result<_>>()?;
    ChernoffReport::summarize(results, cfg.n, k, prior, epsilon)
}

/// `<phi|rho_x|phi>` for one sampled codebook.
pub fn maurer_trial<R: Rng + ?Sized>(
    cfg: &SamplerConfig,
    k: usize,
    x: &BitString,
    phi: &StateVector,
    rng: &mut R,
) -> Result<f64> {
    if x.len() != cfg.n || phi.n() != cfg.n {
        return Err(Error::DimensionMismatch(format!(
            "x has {} bits and phi {} qubits for an {}-qubit sampler",
            x.len(),
            phi.n(),
            cfg.n
        )));
    }
    let circuits = draw_circuits(cfg, k, rng)?;
    let mut total = 0.0;
    for c in &circuits {
        total += phi.inner(&circuit_state(c, x)?)?.norm_sqr();
    }
    Ok(total / k as f64)
}

#[derive(Clone, Debug, PartialEq)]
pub struct MaurerReport {
    pub values: Vec<f64>,
    pub tau: f64,
    pub gamma: f64,
    /// `(1 - tau) 2^-n`.
    pub threshold: f64,
    /// Raw count of values strictly below the threshold.
    pub tail_count: usize,
    /// `tail_count / trials`, except that `tau = 0` reports 0.
    pub frequency: f64,
    /// `exp(-K tau^2 / (2 gamma))`.
    pub bound: f64,
    /// Binomial standard deviation of a frequency at rate `bound`.
    pub sigma: f64,
}

impl MaurerReport {
    pub fn summarize(values: Vec<f64>, n: usize, k: usize, tau: f64, gamma: f64) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::param("need at least one trial"));
        }
        if !(0.0..=1.0).contains(&tau) {
            return Err(Error::param(format!("tau must lie in [0, 1], got {tau}")));
        }
        if !(gamma >= 1.0 && gamma.is_finite()) {
            return Err(Error::param(format!(
                "gamma must be at least 1, got {gamma}"
            )));
        }
        let threshold = (1.0 - tau) * (-(n as f64)).exp2();
        let tail_count = values.iter().filter(|&&v| v < threshold).count();
        let t = values.len() as f64;
        let bound = (-(k as f64) * tau * tau / (2.0 * gamma)).exp();
        Ok(MaurerReport {
            frequency: if tau == 0.0 {
                0.0
            } else {
                tail_count as f64 / t
            },
            sigma: (bound * (1.0 - bound) / t).sqrt(),
            values,
            tau,
            gamma,
            threshold,
            tail_count,
            bound,
        })
    }

    /// Frequency within `z` binomial deviations of the bound.
    pub fn within(&self, z: f64) -> bool {
        self.frequency <= self.bound + z * self.sigma
    }
}

#[allow(clippy::too_many_arguments)]
pub fn empirical_maurer(
    cfg: &SamplerConfig,
    k: usize,
    x: &BitString,
    phi: &StateVector,
    tau: f64,
    gamma: f64,
    trials: usize,
    seed: MasterSeed,
) -> Result<MaurerReport> {
    let values = (0..trials as u64)
        .map(|t| maurer_trial(cfg, k, x, phi, &mut seed.stream(t)))
        .collect::<Result<_>>()?;
    MaurerReport::summarize(values, cfg.n, k, tau, gamma)
}

#[derive(Clone, Debug, PartialEq)]
pub struct LockingReport {
    pub holevo: f64,
    /// `(label, I(X;Y))` per measurement.
    pub measured: Vec<(String, f64)>,
    pub max_measured: f64,
    /// `holevo - max_measured`.
    pub gap: f64,
    /// `2 n epsilon`.
    pub reference: f64,
    pub prior_entropy: f64,
}

/// Holevo quantity and measured mutual information of each measurement for
/// the codebook `circuits`.
pub fn locking_probe(
    circuits: &[CliffordCircuit],
    prior: &PriorDistribution,
    measurements: &[(String, Measurement)],
    epsilon: f64,
) -> Result<LockingReport> {
    let (w, states) = conditional_states(circuits, prior)?;
    let chi = holevo(&w, &states)?;
    let measured = measurements
        .iter()
        .map(|(label, m)| Ok((label.clone(), measured_mi(m, &w, &states)?)))
        .collect::<Result<Vec<_>>>()?;
    let max_measured = measured.iter().map(|m| m.1).fold(0.0, f64::max);
    Ok(LockingReport {
        holevo: chi,
        max_measured,
        gap: chi - max_measured,
        reference: 2.0 * prior.n() as f64 * epsilon,
        prior_entropy: prior.entropy(),
        measured,
    })
}

/// Mixture consistency: `rho_E` against the prior-weighted conditionals.
pub fn mixture_defect(circuits: &[CliffordCircuit], prior: &PriorDistribution) -> Result<f64> {
    let rho = eve_state(circuits, prior)?;
    let (w, states) = conditional_states(circuits, prior)?;
    let mut sum = crate::dense::CMatrix::zeros(rho.dim());
    for (p, s) in w.iter().zip(&states) {
        sum.add_scaled(*p, s.matrix());
    }
    Ok(rho.matrix().max_abs_diff(&sum))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exhaustive_single_qubit_chernoff() {
        let cfg = SamplerConfig::single_qubit_exhaustive();
        let prior = PriorDistribution::point("0".parse().unwrap()).unwrap();
        let rep = empirical_chernoff(&cfg, 24, &prior, 0.1, 5, MasterSeed(1)).unwrap();
        for t in &rep.trials {
            assert!((t.lambda_max - 0.5).abs() < 1e-14);
            assert!(t.empirical_epsilon.abs() < 1e-13);
        }
        assert_eq!(rep.violations, 0);
    }

    #[test]
    fn single_circuit_gives_p_max() {
        let cfg = SamplerConfig::approx_design(3, 0.1);
        let prior = PriorDistribution::from_entries(
            3,
            vec![("000".parse().unwrap(), 0.7), ("101".parse().unwrap(), 0.3)],
        )
        .unwrap();
        let t = chernoff_trial(&cfg, 1, &prior, &mut MasterSeed(2).stream(0)).unwrap();
        assert!((t.lambda_max - 0.7).abs() < 1e-10);
    }

    #[test]
    fn maurer_tau_zero_convention() {
        let rep = MaurerReport::summarize(vec![0.1, 0.6, 0.4], 1, 10, 0.0, 4.0 / 3.0).unwrap();
        assert_eq!(rep.tail_count, 2);
        assert_eq!(rep.frequency, 0.0);
        assert_eq!(rep.bound, 1.0);
        assert!(MaurerReport::summarize(vec![0.1], 1, 10, 1.5, 2.0).is_err());
        assert!(MaurerReport::summarize(vec![], 1, 10, 0.5, 2.0).is_err());
    }

    #[test]
    fn draw_circuits_exhaustive_order() {
        let cfg = SamplerConfig::single_qubit_exhaustive();
        let cs = draw_circuits(&cfg, 26, &mut MasterSeed(0).stream(0)).unwrap();
        assert_eq!(cs[0], single_qubit_cliffords()[0]);
        assert_eq!(cs[25], single_qubit_cliffords()[1]);
    }
}
