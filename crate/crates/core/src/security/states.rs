//! Eve's density matrices and the information she can extract.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::prior::PriorDistribution;
use crate::bits::BitString;
use crate::dense::{circuit_unitary, shannon_entropy, von_neumann_entropy, CMatrix, DensityMatrix};
use crate::error::{Error, Result};
use crate::stabilizer::CliffordCircuit;

fn check_circuits(circuits: &[CliffordCircuit], n: usize) -> Result<()> {
    if circuits.is_empty() {
        return Err(Error::param("need at least one circuit"));
    }
    if let Some(c) = circuits.iter().find(|c| c.n() != n) {
        return Err(Error::LengthMismatch {
            expected: n,
            got: c.n(),
        });
    }
    Ok(())
}

/// `(1/K) sum_k sum_x p(x) C_k|x><x|C_k^dagger`.
pub fn eve_state(circuits: &[CliffordCircuit], prior: &PriorDistribution) -> Result<DensityMatrix> {
    let n = prior.n();
    check_circuits(circuits, n)?;
    crate::dense::check_cutoff(n)?;
    let support = prior.support()?;
    let d = 1usize << n;
    let mut rho = CMatrix::zeros(d);
    let w = 1.0 / circuits.len() as f64;
    let mut col = vec![Complex64::new(0.0, 0.0); d];
    for c in circuits {
        let u = circuit_unitary(c)?;
        for (x, p) in &support {
            let xi = x.basis_index();
            for (y, a) in col.iter_mut().enumerate() {
                *a = u[(y, xi)];
            }
            rho.add_outer(w * p, &col);
        }
    }
    Ok(DensityMatrix::new_unchecked(rho))
}

/// `(1/K) sum_k C_k|x><x|C_k^dagger`.
pub fn conditional_state(circuits: &[CliffordCircuit], x: &BitString) -> Result<DensityMatrix> {
    let n = x.len();
    check_circuits(circuits, n)?;
    let d = 1usize << n;
    crate::dense::check_cutoff(n)?;
    let mut rho = CMatrix::zeros(d);
    let w = 1.0 / circuits.len() as f64;
    for c in circuits {
        let psi = crate::dense::circuit_state(c, x)?;
        rho.add_outer(w, psi.amplitudes());
    }
    Ok(DensityMatrix::new_unchecked(rho))
}

/// Prior weights and the matching conditional states, in support order.
pub fn conditional_states(
    circuits: &[CliffordCircuit],
    prior: &PriorDistribution,
) -> Result<(Vec<f64>, Vec<DensityMatrix>)> {
    crate::dense::check_cutoff(prior.n())?;
    let support = prior.support()?;
    let weights = support.iter().map(|e| e.1).collect();
    let states = support
        .iter()
        .map(|(x, _)| conditional_state(circuits, x))
        .collect::<Result<_>>()?;
    Ok((weights, states))
}

fn check_ensemble(weights: &[f64], states: &[DensityMatrix]) -> Result<usize> {
    if weights.len() != states.len() || states.is_empty() {
        return Err(Error::DimensionMismatch(format!(
            "{} weights for {} states",
            weights.len(),
            states.len()
        )));
    }
    let d = states[0].dim();
    if states.iter().any(|s| s.dim() != d) {
        return Err(Error::DimensionMismatch(
            "states of different dimension".into(),
        ));
    }
    Ok(d)
}

/// `S(sum_x p(x) rho_x) - sum_x p(x) S(rho_x)` in bits.
pub fn holevo(weights: &[f64], states: &[DensityMatrix]) -> Result<f64> {
    let d = check_ensemble(weights, states)?;
    let mut avg = CMatrix::zeros(d);
    let mut cond = 0.0;
    for (p, rho) in weights.iter().zip(states) {
        avg.add_scaled(*p, rho.matrix());
        cond += p * von_neumann_entropy(rho)?;
    }
    let chi = von_neumann_entropy(&DensityMatrix::new_unchecked(avg))? - cond;
    Ok(chi.max(0.0))
}

/// Completeness tolerance for [`Measurement`].
pub const POVM_TOL: f64 = 1e-8;

/// Rank-one POVM `{alpha_y |phi_y><phi_y|}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Measurement {
    d: usize,
    elements: Vec<(f64, Vec<Complex64>)>,
}

impl Measurement {
    /// Checks unit vectors, nonnegative weights and
    /// `sum_y alpha_y |phi_y><phi_y| = I`.
    pub fn new(d: usize, elements: Vec<(f64, Vec<Complex64>)>) -> Result<Self> {
        let mut sum = CMatrix::zeros(d);
        for (a, v) in &elements {
            if v.len() != d {
                return Err(Error::DimensionMismatch(format!(
                    "POVM vector of length {} in dimension {d}",
                    v.len()
                )));
            }
            if !(*a >= 0.0 && a.is_finite()) {
                return Err(Error::param(format!("POVM weight {a} is negative")));
            }
            let norm: f64 = v.iter().map(|c| c.norm_sqr()).sum();
            if (norm - 1.0).abs() > POVM_TOL {
                return Err(Error::param(format!("POVM vector has squared norm {norm}")));
            }
            sum.add_outer(*a, v);
        }
        let defect = sum.max_abs_diff(&CMatrix::identity(d));
        if !(defect <= POVM_TOL) {
            return Err(Error::param(format!(
                "POVM elements do not sum to the identity (defect {defect:.3e})"
            )));
        }
        Ok(Measurement { d, elements })
    }

    /// Projectors onto the columns of a unitary.
    pub fn from_unitary(u: &CMatrix) -> Result<Self> {
        let d = u.dim();
        let elements = (0..d)
            .map(|j| (1.0, (0..d).map(|i| u[(i, j)]).collect()))
            .collect();
        Self::new(d, elements)
    }

    pub fn computational(n: usize) -> Result<Self> {
        crate::dense::check_cutoff(n)?;
        Self::from_unitary(&CMatrix::identity(1 << n))
    }

    /// The basis `C|y>`.
    pub fn clifford_rotated(c: &CliffordCircuit) -> Result<Self> {
        Self::from_unitary(&circuit_unitary(c)?)
    }

    /// A Haar-random orthonormal basis, by Gram-Schmidt on complex
    /// Gaussian vectors.
    pub fn haar_basis<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        crate::dense::check_cutoff(n)?;
        let d = 1usize << n;
        let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(d);
        while basis.len() < d {
            let mut v: Vec<Complex64> = (0..d)
                .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                .collect();
            // two passes of modified Gram-Schmidt keep the basis orthonormal
            for _ in 0..2 {
                for b in &basis {
                    let proj: Complex64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                    for (vi, bi) in v.iter_mut().zip(b) {
                        *vi -= proj * bi;
                    }
                }
            }
            let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-6 {
                continue;
            }
            v.iter_mut().for_each(|c| *c /= norm);
            basis.push(v);
        }
        Self::new(d, basis.into_iter().map(|v| (1.0, v)).collect())
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Outcome distribution `p(y) = alpha_y <phi_y|rho|phi_y>`.
    pub fn probabilities(&self, rho: &DensityMatrix) -> Result<Vec<f64>> {
        if rho.dim() != self.d {
            return Err(Error::DimensionMismatch(format!(
                "measurement in dimension {} applied to dimension {}",
                self.d,
                rho.dim()
            )));
        }
        Ok(self
            .elements
            .iter()
            .map(|(a, v)| (a * rho.expectation(v)).max(0.0))
            .collect())
    }
}

/// `I(X;Y) = H(Y) - H(Y|X)` in bits for the outcome `Y` of `meas`.
pub fn measured_mi(meas: &Measurement, weights: &[f64], states: &[DensityMatrix]) -> Result<f64> {
    check_ensemble(weights, states)?;
    let mut p_y = vec![0.0; meas.len()];
    let mut h_y_given_x = 0.0;
    for (p, rho) in weights.iter().zip(states) {
        let cond = meas.probabilities(rho)?;
        for (acc, q) in p_y.iter_mut().zip(&cond) {
            *acc += p * q;
        }
        h_y_given_x += p * shannon_entropy(cond);
    }
    Ok((shannon_entropy(p_y) - h_y_given_x).max(0.0))
}
