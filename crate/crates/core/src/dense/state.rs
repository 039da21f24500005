use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::eigen::{eigvalsh, HERMITIAN_TOL};
use super::matrix::CMatrix;
use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::stabilizer::{CliffordCircuit, Gate};

/// A pure state on `n` qubits. Amplitude index bit `n-1-q` is qubit `q`,
/// so qubit 0 is the most significant bit.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn basis(x: &BitString) -> Result<Self> {
        super::check_cutoff(x.len())?;
        let d = 1usize << x.len();
        let mut amps = vec![Complex64::new(0.0, 0.0); d];
        amps[x.basis_index()] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n: x.len(), amps })
    }

    /// Normalizes `amps`, which must have length `2^n` and nonzero norm.
    pub fn from_amplitudes(n: usize, mut amps: Vec<Complex64>) -> Result<Self> {
        super::check_cutoff(n)?;
        if amps.len() != 1 << n {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for {n} qubits",
                amps.len()
            )));
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::InvalidState("state vector has zero norm".into()));
        }
        for a in amps.iter_mut() {
            *a /= norm;
        }
        Ok(StateVector { n, amps })
    }

    /// Unit vector with independent complex standard normal entries,
    /// normalized. The distribution is unitarily invariant.
    pub fn haar_random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        super::check_cutoff(n)?;
        let amps = (0..1usize << n)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        Self::from_amplitudes(n, amps)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!(
                "{} vs {} qubits",
                self.n, other.n
            )));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn apply_gate(&mut self, g: &Gate) -> Result<()> {
        g.validate(self.n)?;
        apply_gate_to_amplitudes(self.n, &mut self.amps, *g);
        Ok(())
    }

    pub fn apply_circuit(&mut self, c: &CliffordCircuit) -> Result<()> {
        if c.n() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: c.n(),
            });
        }
        for g in c.gates() {
            apply_gate_to_amplitudes(self.n, &mut self.amps, *g);
        }
        Ok(())
    }
}

/// Applies `g` to a length-`2^n` amplitude vector.
pub(crate) fn apply_gate_to_amplitudes(n: usize, amps: &mut [Complex64], g: Gate) {
    let mask = |q: usize| 1usize << (n - 1 - q);
    let i = Complex64::new(0.0, 1.0);
    let d = amps.len();
    match g {
        Gate::H(q) => {
            let m = mask(q);
            let s = std::f64::consts::FRAC_1_SQRT_2;
            for k in (0..d).filter(|k| k & m == 0) {
                let (a, b) = (amps[k], amps[k | m]);
                amps[k] = (a + b) * s;
                amps[k | m] = (a - b) * s;
            }
        }
        Gate::S(q) | Gate::Sdg(q) | Gate::Z(q) => {
            let m = mask(q);
            let f = match g {
                Gate::S(_) => i,
                Gate::Sdg(_) => -i,
                _ => Complex64::new(-1.0, 0.0),
            };
            for k in (0..d).filter(|k| k & m != 0) {
                amps[k] *= f;
            }
        }
        Gate::X(q) => {
            let m = mask(q);
            for k in (0..d).filter(|k| k & m == 0) {
                amps.swap(k, k | m);
            }
        }
        Gate::Y(q) => {
            let m = mask(q);
            for k in (0..d).filter(|k| k & m == 0) {
                let (a0, a1) = (amps[k], amps[k | m]);
                amps[k] = -i * a1;
                amps[k | m] = i * a0;
            }
        }
        Gate::Cnot(c, t) => {
            let (mc, mt) = (mask(c), mask(t));
            for k in (0..d).filter(|k| k & mc != 0 && k & mt == 0) {
                amps.swap(k, k | mt);
            }
        }
        Gate::Cz(a, b) => {
            let (ma, mb) = (mask(a), mask(b));
            for k in (0..d).filter(|k| k & ma != 0 && k & mb != 0) {
                amps[k] = -amps[k];
            }
        }
        Gate::Swap(a, b) => {
            let (ma, mb) = (mask(a), mask(b));
            for k in (0..d).filter(|k| k & ma != 0 && k & mb == 0) {
                amps.swap(k, (k & !ma) | mb);
            }
        }
    }
}

/// Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(CMatrix);

impl DensityMatrix {
    pub const TOL: f64 = 1e-9;

    /// Validates Hermiticity, trace and positivity.
    pub fn new(m: CMatrix) -> Result<Self> {
        let defect = m.hermitian_defect();
        if !(defect <= HERMITIAN_TOL) {
            return Err(Error::InvalidState(format!(
                "density matrix is not Hermitian (defect {defect:.3e})"
            )));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > Self::TOL || tr.im.abs() > Self::TOL {
            return Err(Error::InvalidState(format!("trace {tr} is not 1")));
        }
        let vals = eigvalsh(&m)?;
        if let Some(&min) = vals.last() {
            if min < -Self::TOL {
                return Err(Error::InvalidState(format!(
                    "negative eigenvalue {min:.3e}"
                )));
            }
        }
        Ok(DensityMatrix(m))
    }

    /// For matrices that are density matrices by construction (convex
    /// mixtures of pure states).
    pub(crate) fn new_unchecked(m: CMatrix) -> Self {
        debug_assert!(m.hermitian_defect() < 1e-8);
        DensityMatrix(m)
    }

    pub fn pure(psi: &StateVector) -> Self {
        let mut m = CMatrix::zeros(psi.dim());
        m.add_outer(1.0, psi.amplitudes());
        DensityMatrix(m)
    }

    pub fn maximally_mixed(n: usize) -> Result<Self> {
        super::check_cutoff(n)?;
        let d = 1usize << n;
        Ok(DensityMatrix(CMatrix::diagonal(&vec![1.0 / d as f64; d])))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        eigvalsh(&self.0)
    }

    /// `<phi|rho|phi>` for a unit vector `phi`.
    pub fn expectation(&self, phi: &[Complex64]) -> f64 {
        self.0.quadratic_form(phi).re
    }
}
