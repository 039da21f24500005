//! Exact dense linear algebra for small registers.
//!
//! Used as the cross-check for the tableau simulator and as the engine for
//! density-matrix security analysis. Every operation refuses registers
//! above [`dense_cutoff`] qubits (12 unless `QLOCK_DENSE_CUTOFF` is set).

mod eigen;
mod matrix;
mod state;

use std::sync::OnceLock;

pub use eigen::{eigvalsh, HERMITIAN_TOL, MAX_SWEEPS, OFF_DIAGONAL_TOL};
pub use matrix::CMatrix;
pub use state::{DensityMatrix, StateVector};

pub(crate) use state::apply_gate_to_amplitudes;

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::stabilizer::CliffordCircuit;

pub const DEFAULT_DENSE_CUTOFF: usize = 12;
/// Environment variable overriding [`DEFAULT_DENSE_CUTOFF`].
pub const DENSE_CUTOFF_ENV: &str = "QLOCK_DENSE_CUTOFF";

/// Largest register the dense backend accepts. Read once per process.
pub fn dense_cutoff() -> usize {
    static CUTOFF: OnceLock<usize> = OnceLock::new();
    *CUTOFF.get_or_init(|| {
        std::env::var(DENSE_CUTOFF_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            // 2^n amplitudes must stay addressable
            .map(|n: usize| n.min(30))
            .unwrap_or(DEFAULT_DENSE_CUTOFF)
    })
}

pub(crate) fn check_cutoff(n: usize) -> Result<()> {
    let cutoff = dense_cutoff();
    if n > cutoff {
        return Err(Error::DenseCutoff { n, cutoff });
    }
    Ok(())
}

/// The `2^n x 2^n` unitary of `c`; entry `(y, x)` is `<y|C|x>`.
pub fn circuit_unitary(c: &CliffordCircuit) -> Result<CMatrix> {
    let n = c.n();
    check_cutoff(n)?;
    let d = 1usize << n;
    let mut u = CMatrix::zeros(d);
    let mut col = vec![num_complex::Complex64::new(0.0, 0.0); d];
    for x in 0..d {
        col.iter_mut()
            .for_each(|a| *a = num_complex::Complex64::new(0.0, 0.0));
        col[x] = num_complex::Complex64::new(1.0, 0.0);
        for g in c.gates() {
            apply_gate_to_amplitudes(n, &mut col, *g);
        }
        for (y, a) in col.iter().enumerate() {
            u[(y, x)] = *a;
        }
    }
    Ok(u)
}

/// `C|x>` as a state vector.
pub fn circuit_state(c: &CliffordCircuit, x: &BitString) -> Result<StateVector> {
    let mut psi = StateVector::basis(x)?;
    psi.apply_circuit(c)?;
    Ok(psi)
}

/// `|<alpha|C|beta>|^2`.
pub fn overlap_prob(alpha: &StateVector, c: &CliffordCircuit, beta: &StateVector) -> Result<f64> {
    if alpha.n() != c.n() || beta.n() != c.n() {
        return Err(Error::DimensionMismatch(format!(
            "vectors on {} and {} qubits with a {}-qubit circuit",
            alpha.n(),
            beta.n(),
            c.n()
        )));
    }
    let mut b = beta.clone();
    b.apply_circuit(c)?;
    Ok(alpha.inner(&b)?.norm_sqr())
}

/// Eigenvalues below this are treated as zero in entropies.
pub const EIGENVALUE_CLIP: f64 = 1e-12;

/// `-sum p log2 p` over a probability vector, with `0 log 0 = 0`.
pub fn shannon_entropy(probs: impl IntoIterator<Item = f64>) -> f64 {
    probs
        .into_iter()
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.log2())
        .sum()
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    let vals = rho.eigenvalues()?;
    Ok(shannon_entropy(vals.into_iter().map(|v| {
        if v < EIGENVALUE_CLIP {
            0.0
        } else {
            v
        }
    })))
}
