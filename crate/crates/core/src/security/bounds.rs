//! Failure-probability bounds and key lengths.
//!
//! The bounds use natural logarithms as written; key lengths are in bits.

use std::f64::consts::LN_2;

use super::prior::PriorDistribution;
use crate::design::gamma_bound;
use crate::error::{Error, Result};

/// Largest register size accepted, so that `2^n` stays finite.
pub const MAX_BOUND_QUBITS: usize = 1000;

/// Agreement required between a supplied `p_max` and a prior.
pub const P_MAX_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SecurityParams {
    pub n: usize,
    pub epsilon: f64,
    pub delta: f64,
    pub p_max: f64,
    /// Number of code words `M`.
    pub m: f64,
    pub gamma: f64,
}

impl SecurityParams {
    pub fn new(n: usize, epsilon: f64, delta: f64, p_max: f64, m: f64, gamma: f64) -> Result<Self> {
        let p = SecurityParams {
            n,
            epsilon,
            delta,
            p_max,
            m,
            gamma,
        };
        p.validate()?;
        Ok(p)
    }

    /// Uniform prior over all `2^n` strings with `gamma = gamma_bound(delta)`.
    pub fn uniform(n: usize, epsilon: f64, delta: f64) -> Result<Self> {
        let nf = n as f64;
        Self::new(
            n,
            epsilon,
            delta,
            (-nf).exp2(),
            nf.exp2(),
            gamma_bound(delta)?,
        )
    }

    /// Replaces `p_max` by `2^-h_min`.
    pub fn with_min_entropy(mut self, h_min: f64) -> Result<Self> {
        self.p_max = (-h_min).exp2();
        self.validate()?;
        Ok(self)
    }

    pub fn with_gamma(mut self, gamma: f64) -> Result<Self> {
        self.gamma = gamma;
        self.validate()?;
        Ok(self)
    }

    /// Checks that `p_max` agrees with `prior`.
    pub fn check_prior(&self, prior: &PriorDistribution) -> Result<()> {
        if prior.n() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: prior.n(),
            });
        }
        let p = prior.p_max();
        if (p - self.p_max).abs() > P_MAX_TOL {
            return Err(Error::param(format!(
                "p_max {} disagrees with the prior's {p}",
                self.p_max
            )));
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.n > MAX_BOUND_QUBITS {
            return Err(Error::param(format!(
                "n must lie in 1..={MAX_BOUND_QUBITS}"
            )));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::param(format!(
                "epsilon must lie in (0, 1), got {}",
                self.epsilon
            )));
        }
        if !(0.0..1.0).contains(&self.delta) {
            return Err(Error::param(format!(
                "delta must lie in [0, 1), got {}",
                self.delta
            )));
        }
        if !(self.p_max > 0.0 && self.p_max <= 1.0) {
            return Err(Error::param(format!(
                "p_max must lie in (0, 1], got {}",
                self.p_max
            )));
        }
        if !(self.m >= 1.0 && self.m.is_finite()) {
            return Err(Error::param(format!(
                "M must be at least 1, got {}",
                self.m
            )));
        }
        if !(self.gamma >= 1.0 && self.gamma.is_finite()) {
            return Err(Error::param(format!(
                "gamma must be at least 1, got {}",
                self.gamma
            )));
        }
        Ok(())
    }

    pub fn min_entropy(&self) -> f64 {
        -self.p_max.log2()
    }

    fn dim(&self) -> f64 {
        (self.n as f64).exp2()
    }

    /// `ln(20 * 2^n / epsilon)`.
    fn net_log(&self) -> f64 {
        (20.0 * self.dim() / self.epsilon).ln()
    }
}

/// A tail bound `exp(exponent)`; `bound` is clamped to `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailBound {
    pub exponent: f64,
    pub bound: f64,
}

impl TailBound {
    fn from_exponent(exponent: f64) -> Self {
        TailBound {
            exponent,
            bound: exponent.exp().clamp(0.0, 1.0),
        }
    }
}

/// `P1 = exp(n ln 2 - K (eps^2/4) 2^-n / p_max)`.
pub fn chernoff_p1(p: &SecurityParams, k: f64) -> TailBound {
    let e = p.epsilon;
    TailBound::from_exponent(p.n as f64 * LN_2 - k * (e * e / 4.0) / (p.dim() * p.p_max))
}

/// `P2 = exp(2d ln(20 2^n/eps) + eps ln M/(4 p_max) - K eps^3/(128 gamma p_max))`
/// with `d = 2^n`.
pub fn maurer_p2(p: &SecurityParams, k: f64) -> TailBound {
    let e = p.epsilon;
    let exponent = 2.0 * p.dim() * p.net_log() + e * p.m.ln() / (4.0 * p.p_max)
        - k * e * e * e / (128.0 * p.gamma * p.p_max);
    TailBound::from_exponent(exponent)
}

/// `P1 + P2`, clamped to 1.
pub fn failure_bound(p: &SecurityParams, k: f64) -> f64 {
    (chernoff_p1(p, k).bound + maurer_p2(p, k).bound).min(1.0)
}

/// `4 n 2^n p_max ln 2 / eps^2`, where `P1 = 1`.
pub fn chernoff_threshold(p: &SecurityParams) -> f64 {
    4.0 * p.n as f64 * p.dim() * p.p_max * LN_2 / (p.epsilon * p.epsilon)
}

/// `(128 gamma / eps^3) [2^(n+1) p_max ln(20 2^n/eps) + eps ln M / 4]`,
/// where `P2 = 1`.
pub fn maurer_threshold(p: &SecurityParams) -> f64 {
    let e = p.epsilon;
    128.0 * p.gamma / (e * e * e) * (2.0 * p.dim() * p.p_max * p.net_log() + e * p.m.ln() / 4.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    Chernoff,
    Maurer,
}

impl Branch {
    pub fn name(self) -> &'static str {
        match self {
            Branch::Chernoff => "chernoff",
            Branch::Maurer => "maurer",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KeyThreshold {
    pub k_min: f64,
    pub branch: Branch,
    pub chernoff: f64,
    pub maurer: f64,
}

/// The larger of the two thresholds and which one binds.
pub fn key_threshold(p: &SecurityParams) -> KeyThreshold {
    let (c, m) = (chernoff_threshold(p), maurer_threshold(p));
    let (k_min, branch) = if c >= m {
        (c, Branch::Chernoff)
    } else {
        (m, Branch::Maurer)
    };
    KeyThreshold {
        k_min,
        branch,
        chernoff: c,
        maurer: m,
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KeyLength {
    /// `log2` of the threshold.
    pub exact: f64,
    /// `n - H_min + log2 gamma + log2 n + log2(1/eps)`: the leading form
    /// with both hidden constants set to 1, so only approximate.
    pub asymptotic: f64,
}

pub fn key_length_bits(p: &SecurityParams) -> KeyLength {
    let n = p.n as f64;
    KeyLength {
        exact: key_threshold(p).k_min.log2(),
        asymptotic: n - p.min_entropy() + p.gamma.log2() + n.log2() - p.epsilon.log2(),
    }
}

/// Key sizes of the Pauli one-time pad and its approximate variant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Comparison {
    pub qotp: f64,
    pub approx_otp: f64,
}

/// `2n` and `n + log2 n + log2(1/eps^2)`.
pub fn comparison_rows(epsilon: f64, n: usize) -> Result<Comparison> {
    if n == 0 {
        return Err(Error::param("n must be at least 1"));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::param(format!(
            "epsilon must lie in (0, 1), got {epsilon}"
        )));
    }
    let nf = n as f64;
    Ok(Comparison {
        qotp: 2.0 * nf,
        approx_otp: nf + nf.log2() - 2.0 * epsilon.log2(),
    })
}

/// One line of the key-length versus register-size table.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Fig2Row {
    pub n: usize,
    pub log_k_exact: f64,
    pub log_k_asymptotic: f64,
    pub qotp: f64,
    pub approx_otp: f64,
    pub hmin_frac: f64,
    pub epsilon: f64,
}

/// Key length for a prior with `H_min = hmin_frac * n` over `M = 2^n`
/// code words.
pub fn fig2_row(n: usize, epsilon: f64, hmin_frac: f64, gamma: f64) -> Result<Fig2Row> {
    if !(hmin_frac >= 0.0 && hmin_frac <= 1.0) {
        return Err(Error::param(format!(
            "H_min fraction must lie in [0, 1], got {hmin_frac}"
        )));
    }
    let p = SecurityParams::uniform(n, epsilon, 0.0)?
        .with_min_entropy(hmin_frac * n as f64)?
        .with_gamma(gamma)?;
    let len = key_length_bits(&p);
    let cmp = comparison_rows(epsilon, n)?;
    Ok(Fig2Row {
        n,
        log_k_exact: len.exact,
        log_k_asymptotic: len.asymptotic,
        qotp: cmp.qotp,
        approx_otp: cmp.approx_otp,
        hmin_frac,
        epsilon,
    })
}
