//! Cyclic Jacobi eigenvalues for complex Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary and then applies the real symmetric Jacobi rotation that zeroes
//! it. Sweeps stop once the off-diagonal Frobenius norm drops below
//! `OFF_DIAGONAL_TOL * max(1, ||A||_F)`.

use num_complex::Complex64;

use super::matrix::CMatrix;
use crate::error::{Error, Result};

pub const OFF_DIAGONAL_TOL: f64 = 1e-12;
pub const MAX_SWEEPS: usize = 100;
/// Entrywise tolerance on `A - A^dagger` accepted as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-9;

fn off_diagonal_norm(a: &CMatrix) -> f64 {
    let d = a.dim();
    let mut s = 0.0;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Eigenvalues of a Hermitian matrix, sorted in descending order.
pub fn eigvalsh(m: &CMatrix) -> Result<Vec<f64>> {
    let defect = m.hermitian_defect();
    if !(defect <= HERMITIAN_TOL) {
        return Err(Error::InvalidState(format!(
            "matrix is not Hermitian (defect {defect:.3e})"
        )));
    }
    let d = m.dim();
    let mut a = m.clone();
    // symmetrize so that rounding in the input cannot accumulate
    for i in 0..d {
        a[(i, i)] = Complex64::new(a[(i, i)].re, 0.0);
        for j in i + 1..d {
            let v = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
            a[(i, j)] = v;
            a[(j, i)] = v.conj();
        }
    }
    let tol = OFF_DIAGONAL_TOL * a.frobenius_norm().max(1.0);

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) < tol {
            converged = true;
            break;
        }
        for p in 0..d {
            for q in p + 1..d {
                rotate(&mut a, p, q);
            }
        }
    }
    if !converged && off_diagonal_norm(&a) >= tol {
        return Err(Error::Numerical(format!(
            "Jacobi eigensolver did not converge in {MAX_SWEEPS} sweeps"
        )));
    }

    let mut vals: Vec<f64> = (0..d).map(|i| a[(i, i)].re).collect();
    if vals.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical("non-finite eigenvalue".into()));
    }
    vals.sort_by(|x, y| y.total_cmp(x));
    Ok(vals)
}

fn rotate(a: &mut CMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let d = a.dim();
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let phase = apq / r;
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta.is_infinite() {
        0.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let ph_conj = phase.conj();

    let data = a.as_mut_slice();
    for k in 0..d {
        let akp = data[k * d + p];
        let akq = data[k * d + q];
        data[k * d + p] = akp * c - ph_conj * akq * s;
        data[k * d + q] = akp * s + ph_conj * akq * c;
    }
    for k in 0..d {
        let apk = data[p * d + k];
        let aqk = data[q * d + k];
        data[p * d + k] = apk * c - phase * aqk * s;
        data[q * d + k] = apk * s + phase * aqk * c;
    }
    data[p * d + q] = Complex64::new(0.0, 0.0);
    data[q * d + p] = Complex64::new(0.0, 0.0);
    data[p * d + p] = Complex64::new(data[p * d + p].re, 0.0);
    data[q * d + q] = Complex64::new(data[q * d + q].re, 0.0);
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn diagonal_examples() {
        let half = CMatrix::diagonal(&[0.5, 0.5]);
        assert_eq!(eigvalsh(&half).unwrap(), vec![0.5, 0.5]);
        let v = eigvalsh(&CMatrix::diagonal(&[0.3, 0.7])).unwrap();
        assert_eq!(v, vec![0.7, 0.3]);
    }

    #[test]
    fn two_by_two_matches_quadratic_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let a: f64 = rng.random_range(-2.0..2.0);
            let b: f64 = rng.random_range(-2.0..2.0);
            let off = c(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            let m = CMatrix::from_rows(vec![vec![c(a, 0.0), off], vec![off.conj(), c(b, 0.0)]])
                .unwrap();
            // roots of t^2 - (a+b) t + (ab - |off|^2)
            let mean = 0.5 * (a + b);
            let disc = (0.25 * (a - b) * (a - b) + off.norm_sqr()).sqrt();
            let got = eigvalsh(&m).unwrap();
            assert!((got[0] - (mean + disc)).abs() < 1e-10);
            assert!((got[1] - (mean - disc)).abs() < 1e-10);
        }
    }

    #[test]
    fn random_hermitian_trace_and_reconstruction() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for d in [3, 5, 8, 16] {
            let mut m = CMatrix::zeros(d);
            for i in 0..d {
                m[(i, i)] = c(rng.random_range(-1.0..1.0), 0.0);
                for j in i + 1..d {
                    let v = c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                    m[(i, j)] = v;
                    m[(j, i)] = v.conj();
                }
            }
            let vals = eigvalsh(&m).unwrap();
            let tr: f64 = vals.iter().sum();
            assert!((tr - m.trace().re).abs() < 1e-8);
            // sum of squares equals the Frobenius norm squared
            let fro2: f64 = vals.iter().map(|v| v * v).sum();
            assert!((fro2 - m.frobenius_norm().powi(2)).abs() < 1e-8);
            assert!(vals.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = CMatrix::from_rows(vec![
            vec![c(1.0, 0.0), c(1.0, 0.0)],
            vec![c(0.0, 0.0), c(1.0, 0.0)],
        ])
        .unwrap();
        assert!(matches!(eigvalsh(&m), Err(Error::InvalidState(_))));
    }
}
