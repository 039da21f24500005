//! Uniform Clifford draws.
//!
//! Two-qubit Cliffords are indexed as `symplectic * 16 + pauli` over the 720
//! elements of `Sp(4, 2)` and the 16 two-qubit Pauli corrections, giving all
//! 11,520 elements modulo global phase.
//!
//! Larger registers are sampled qubit by qubit: pick a uniformly random
//! anticommuting pair of signed Paulis `(P, Q)` on the remaining qubits, find
//! a circuit `U` conjugating `P -> X_i` and `Q -> Z_i`, and emit `U^-1`. The
//! element fixing `X_i` and `Z_i` is then drawn recursively on the other
//! qubits, so every Clifford is hit with equal probability.

use rand::Rng;

use super::enumerate::{single_qubit_cliffords, two_qubit_symplectic_reps};
use crate::stabilizer::{CliffordCircuit, Gate, PauliRow};

pub const SP4_ORDER: usize = 720;
pub const TWO_QUBIT_PAULIS: usize = 16;
pub const TWO_QUBIT_CLIFFORD_ORDER: usize = SP4_ORDER * TWO_QUBIT_PAULIS;
pub const SINGLE_QUBIT_CLIFFORD_ORDER: usize = 24;

fn pauli_gate(letter: usize, q: usize) -> Option<Gate> {
    match letter {
        1 => Some(Gate::X(q)),
        2 => Some(Gate::Y(q)),
        3 => Some(Gate::Z(q)),
        _ => None,
    }
}

/// The two-qubit Clifford with the given index in `0..11520`.
pub fn two_qubit_clifford(index: usize) -> CliffordCircuit {
    assert!(
        index < TWO_QUBIT_CLIFFORD_ORDER,
        "two-qubit Clifford index out of range"
    );
    let (sym, pauli) = (index / TWO_QUBIT_PAULIS, index % TWO_QUBIT_PAULIS);
    let mut c = two_qubit_symplectic_reps()[sym].clone();
    for (q, letter) in [(0, pauli % 4), (1, pauli / 4)] {
        if let Some(g) = pauli_gate(letter, q) {
            c.push(g).expect("two qubits");
        }
    }
    c
}

pub fn sample_two_qubit_clifford<R: Rng + ?Sized>(rng: &mut R) -> CliffordCircuit {
    two_qubit_clifford(rng.random_range(0..TWO_QUBIT_CLIFFORD_ORDER))
}

pub fn sample_single_qubit_clifford<R: Rng + ?Sized>(rng: &mut R) -> CliffordCircuit {
    let all = single_qubit_cliffords();
    all[rng.random_range(0..all.len())].clone()
}

/// Uniformly random signed Pauli on qubits `lo..n`, excluding the identity.
fn random_pauli<R: Rng + ?Sized>(n: usize, lo: usize, rng: &mut R) -> PauliRow {
    loop {
        let mut p = PauliRow::identity(n);
        for q in lo..n {
            p.x.set(q, rng.random());
            p.z.set(q, rng.random());
        }
        if !p.is_identity() {
            p.negative = rng.random();
            return p;
        }
    }
}

fn emit(g: Gate, p: &mut PauliRow, q: &mut PauliRow, out: &mut Vec<Gate>) {
    p.conjugate_by(g);
    q.conjugate_by(g);
    out.push(g);
}

/// Clears the Z part of `p` on `lo..n` with H and S, leaving only X letters.
fn clear_z(p: &mut PauliRow, other: &mut PauliRow, lo: usize, out: &mut Vec<Gate>) {
    for j in lo..p.n() {
        if p.z.get(j) {
            let g = if p.x.get(j) { Gate::S(j) } else { Gate::H(j) };
            emit(g, p, other, out);
        }
    }
}

/// Gates mapping `p -> X_lo` and `q -> Z_lo` by conjugation. Both must be
/// supported on `lo..n` and anticommute.
fn sweep(mut p: PauliRow, mut q: PauliRow, lo: usize) -> Vec<Gate> {
    let n = p.n();
    let mut out = Vec::new();

    clear_z(&mut p, &mut q, lo, &mut out);
    let xs: Vec<usize> = p.x.ones().collect();
    let pivot = xs[0];
    for &j in &xs[1..] {
        emit(Gate::Cnot(pivot, j), &mut p, &mut q, &mut out);
    }
    if pivot != lo {
        emit(Gate::Swap(pivot, lo), &mut p, &mut q, &mut out);
    }

    let z_lo = PauliRow::single_z(n, lo);
    let mut q_unsigned = q.clone();
    q_unsigned.negative = false;
    if q_unsigned != z_lo {
        // P becomes Z_lo; Q anticommutes with it so it has X or Y on lo
        emit(Gate::H(lo), &mut p, &mut q, &mut out);
        clear_z(&mut q, &mut p, lo, &mut out);
        let xs: Vec<usize> = q.x.ones().filter(|&j| j != lo).collect();
        for j in xs {
            emit(Gate::Cnot(lo, j), &mut p, &mut q, &mut out);
        }
        emit(Gate::H(lo), &mut p, &mut q, &mut out);
    }

    if p.negative {
        emit(Gate::Z(lo), &mut p, &mut q, &mut out);
    }
    if q.negative {
        emit(Gate::X(lo), &mut p, &mut q, &mut out);
    }
    debug_assert_eq!(p, PauliRow::single_x(n, lo));
    debug_assert_eq!(q, z_lo);
    out
}

/// Uniformly random element of the `n`-qubit Clifford group, modulo phase.
pub fn sample_uniform_clifford<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CliffordCircuit {
    assert!(n >= 1, "need at least one qubit");
    let mut layers: Vec<Vec<Gate>> = Vec::with_capacity(n);
    for lo in 0..n {
        let p = random_pauli(n, lo, rng);
        let q = loop {
            let q = random_pauli(n, lo, rng);
            if !q.commutes_with(&p) {
                break q;
            }
        };
        layers.push(sweep(p, q, lo));
    }
    // C = U_0^-1 U_1^-1 ... U_{n-1}^-1, so U_{n-1}^-1 is applied first
    let gates = layers
        .into_iter()
        .rev()
        .flat_map(|u| u.into_iter().rev().map(Gate::inverse))
        .collect();
    CliffordCircuit::from_gates(n, gates).expect("sweep gates stay in range")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::enumerate::clifford_key;
    use crate::stabilizer::Tableau;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashSet;

    #[test]
    fn two_qubit_indices_are_distinct_elements() {
        let keys: HashSet<_> = (0..TWO_QUBIT_CLIFFORD_ORDER)
            .map(|i| clifford_key(&two_qubit_clifford(i), true))
            .collect();
        assert_eq!(keys.len(), TWO_QUBIT_CLIFFORD_ORDER);
    }

    #[test]
    fn fragment_then_inverse_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let mut c = sample_two_qubit_clifford(&mut rng);
            let start = Tableau::basis_state(&"01".parse().unwrap()).unwrap();
            let mut t = start.clone();
            c.append(&c.inverse()).unwrap();
            t.apply_circuit(&c).unwrap();
            assert_eq!(t, start);
        }
    }

    #[test]
    fn uniform_sampler_produces_valid_tableaux() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for n in [1, 2, 3, 7, 20, 65] {
            let c = sample_uniform_clifford(n, &mut rng);
            let mut t = Tableau::zero_state(n).unwrap();
            t.apply_circuit(&c).unwrap();
            assert!(t.is_valid(), "n = {n}");
        }
    }

    #[test]
    fn sweep_maps_pair_to_canonical() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let n = 5;
            let lo = 2;
            let p = random_pauli(n, lo, &mut rng);
            let q = loop {
                let q = random_pauli(n, lo, &mut rng);
                if !q.commutes_with(&p) {
                    break q;
                }
            };
            let gates = sweep(p.clone(), q.clone(), lo);
            let (mut p2, mut q2) = (p, q);
            for g in gates {
                assert!(g.qubits().0 >= lo);
                p2.conjugate_by(g);
                q2.conjugate_by(g);
            }
            assert_eq!(p2, PauliRow::single_x(n, lo));
            assert_eq!(q2, PauliRow::single_z(n, lo));
        }
    }
}
