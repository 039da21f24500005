#![allow(dead_code)]

use qlock::stabilizer::{CliffordCircuit, Gate};
use rand::Rng;

/// Uniformly random gate of any of the nine kinds.
pub fn random_gate<R: Rng>(n: usize, rng: &mut R) -> Gate {
    let a = rng.random_range(0..n);
    let kinds = if n >= 2 { 9 } else { 6 };
    let pair = |rng: &mut R| {
        let mut b = rng.random_range(0..n - 1);
        if b >= a {
            b += 1;
        }
        b
    };
    match rng.random_range(0..kinds) {
        0 => Gate::H(a),
        1 => Gate::S(a),
        2 => Gate::Sdg(a),
        3 => Gate::X(a),
        4 => Gate::Y(a),
        5 => Gate::Z(a),
        6 => Gate::Cnot(a, pair(rng)),
        7 => Gate::Cz(a, pair(rng)),
        _ => Gate::Swap(a, pair(rng)),
    }
}

pub fn random_circuit<R: Rng>(n: usize, len: usize, rng: &mut R) -> CliffordCircuit {
    let gates = (0..len).map(|_| random_gate(n, rng)).collect();
    CliffordCircuit::from_gates(n, gates).unwrap()
}
