//! Breadth-first enumeration of small Clifford groups.

use std::collections::{HashSet, VecDeque};
use std::sync::OnceLock;

use crate::stabilizer::{CliffordCircuit, Gate, PauliRow, Tableau};

/// Images of `X_i` and `Z_i` under the circuit, i.e. its tableau acting on
/// the identity. With `with_signs = false` only the symplectic part is kept.
pub fn clifford_key(c: &CliffordCircuit, with_signs: bool) -> Vec<PauliRow> {
    let mut t = Tableau::zero_state(c.n()).expect("n >= 1");
    t.apply_circuit(c).expect("matching width");
    key_of(&t, with_signs)
}

fn key_of(t: &Tableau, with_signs: bool) -> Vec<PauliRow> {
    (0..2 * t.n())
        .map(|r| {
            let mut p = t.row(r);
            if !with_signs {
                p.negative = false;
            }
            p
        })
        .collect()
}

/// One shortest word per group element, in BFS discovery order.
fn bfs(n: usize, generators: &[Gate], with_signs: bool) -> Vec<CliffordCircuit> {
    let start = CliffordCircuit::new(n);
    let start_t = Tableau::zero_state(n).expect("n >= 1");
    let mut seen = HashSet::new();
    seen.insert(key_of(&start_t, with_signs));
    let mut out = vec![start.clone()];
    let mut queue = VecDeque::from([(start, start_t)]);
    while let Some((c, t)) = queue.pop_front() {
        for &g in generators {
            let mut t2 = t.clone();
            t2.apply_gate(&g).expect("generator fits");
            if seen.insert(key_of(&t2, with_signs)) {
                let mut c2 = c.clone();
                c2.push(g).expect("generator fits");
                out.push(c2.clone());
                queue.push_back((c2, t2));
            }
        }
    }
    out
}

/// The 24 single-qubit Cliffords modulo global phase.
pub fn single_qubit_cliffords() -> &'static [CliffordCircuit] {
    static ALL: OnceLock<Vec<CliffordCircuit>> = OnceLock::new();
    ALL.get_or_init(|| bfs(1, &[Gate::H(0), Gate::S(0)], true))
}

/// Representatives of the 720 elements of `Sp(4, 2)`, the two-qubit
/// Clifford group modulo Paulis and phases.
pub fn two_qubit_symplectic_reps() -> &'static [CliffordCircuit] {
    static ALL: OnceLock<Vec<CliffordCircuit>> = OnceLock::new();
    ALL.get_or_init(|| {
        bfs(
            2,
            &[
                Gate::H(0),
                Gate::H(1),
                Gate::S(0),
                Gate::S(1),
                Gate::Cnot(0, 1),
            ],
            false,
        )
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_orders() {
        assert_eq!(single_qubit_cliffords().len(), 24);
        assert_eq!(two_qubit_symplectic_reps().len(), 720);
    }

    #[test]
    fn single_qubit_elements_distinct_with_signs() {
        let keys: HashSet<_> = single_qubit_cliffords()
            .iter()
            .map(|c| clifford_key(c, true))
            .collect();
        assert_eq!(keys.len(), 24);
    }
}
