//! Bit-packed stabilizer simulation of Clifford circuits.

mod circuit;
mod pauli;
mod tableau;

pub use circuit::{CliffordCircuit, Gate};
pub use pauli::PauliRow;
pub use tableau::{BranchProbability, Tableau};

pub(crate) use tableau::parse_canonical_usize;

use crate::bits::BitString;
use crate::error::{Error, Result};

/// `|<y|C|x>|^2` as `Some(s)` meaning `2^-s`, or `None` when it is zero.
///
/// Prepares `|x>`, applies `C` and postselects qubit by qubit on `y`.
pub fn basis_overlap_exponent(
    c: &CliffordCircuit,
    x: &BitString,
    y: &BitString,
) -> Result<Option<u32>> {
    for s in [x, y] {
        if s.len() != c.n() {
            return Err(Error::LengthMismatch {
                expected: c.n(),
                got: s.len(),
            });
        }
    }
    let mut t = Tableau::basis_state(x)?;
    t.apply_circuit(c)?;
    let mut halves = 0u32;
    for q in 0..c.n() {
        match t.measure_postselect(q, y.get(q))? {
            BranchProbability::Zero => return Ok(None),
            BranchProbability::Half => halves += 1,
            BranchProbability::One => {}
        }
    }
    Ok(Some(halves))
}

/// `|<y|C|x>|^2`.
pub fn basis_overlap_prob(c: &CliffordCircuit, x: &BitString, y: &BitString) -> Result<f64> {
    Ok(basis_overlap_exponent(c, x, y)?.map_or(0.0, |s| 0.5f64.powi(s as i32)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overlap_examples() {
        let id = CliffordCircuit::new(3);
        let x: BitString = "101".parse().unwrap();
        assert_eq!(basis_overlap_prob(&id, &x, &x).unwrap(), 1.0);
        let y: BitString = "100".parse().unwrap();
        assert_eq!(basis_overlap_prob(&id, &x, &y).unwrap(), 0.0);

        let h = CliffordCircuit::from_gates(1, vec![Gate::H(0)]).unwrap();
        let p = basis_overlap_prob(&h, &"0".parse().unwrap(), &"1".parse().unwrap()).unwrap();
        assert_eq!(p, 0.5);

        assert!(basis_overlap_prob(&h, &"00".parse().unwrap(), &"1".parse().unwrap()).is_err());
    }
}
