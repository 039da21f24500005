//! Clifford gates and circuits, plus their text form.
//!
//! A circuit serializes as semicolon-separated gates, e.g.
//! `H 0; SDG 2; CNOT 0 3`. The empty circuit serializes as the empty string.
//! `CNOT a b` has control `a` and target `b`.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    H(usize),
    S(usize),
    Sdg(usize),
    X(usize),
    Y(usize),
    Z(usize),
    Cz(usize, usize),
    Swap(usize, usize),
    Cnot(usize, usize),
}

impl Gate {
    pub fn name(&self) -> &'static str {
        match self {
            Gate::H(_) => "H",
            Gate::S(_) => "S",
            Gate::Sdg(_) => "SDG",
            Gate::X(_) => "X",
            Gate::Y(_) => "Y",
            Gate::Z(_) => "Z",
            Gate::Cz(..) => "CZ",
            Gate::Swap(..) => "SWAP",
            Gate::Cnot(..) => "CNOT",
        }
    }

    pub fn inverse(self) -> Gate {
        match self {
            Gate::S(q) => Gate::Sdg(q),
            Gate::Sdg(q) => Gate::S(q),
            g => g,
        }
    }

    /// One or two qubit indices, in serialization order.
    pub fn qubits(&self) -> (usize, Option<usize>) {
        match *self {
            Gate::H(q) | Gate::S(q) | Gate::Sdg(q) | Gate::X(q) | Gate::Y(q) | Gate::Z(q) => {
                (q, None)
            }
            Gate::Cz(a, b) | Gate::Swap(a, b) | Gate::Cnot(a, b) => (a, Some(b)),
        }
    }

    /// Relabels qubits through `map`.
    pub fn remap(self, map: impl Fn(usize) -> usize) -> Gate {
        match self {
            Gate::H(q) => Gate::H(map(q)),
            Gate::S(q) => Gate::S(map(q)),
            Gate::Sdg(q) => Gate::Sdg(map(q)),
            Gate::X(q) => Gate::X(map(q)),
            Gate::Y(q) => Gate::Y(map(q)),
            Gate::Z(q) => Gate::Z(map(q)),
            Gate::Cz(a, b) => Gate::Cz(map(a), map(b)),
            Gate::Swap(a, b) => Gate::Swap(map(a), map(b)),
            Gate::Cnot(a, b) => Gate::Cnot(map(a), map(b)),
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        let (a, b) = self.qubits();
        for q in std::iter::once(a).chain(b) {
            if q >= n {
                return Err(Error::QubitOutOfRange { index: q, n });
            }
        }
        if b == Some(a) {
            return Err(Error::RepeatedQubit(self.to_string()));
        }
        Ok(())
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.qubits() {
            (a, None) => write!(f, "{} {a}", self.name()),
            (a, Some(b)) => write!(f, "{} {a} {b}", self.name()),
        }
    }
}

impl std::str::FromStr for Gate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Gate> {
        let mut parts = s.split_ascii_whitespace();
        let name = parts.next().ok_or_else(|| Error::param("empty gate"))?;
        let mut index = || -> Result<usize> {
            let tok = parts
                .next()
                .ok_or_else(|| Error::param(format!("gate {name} is missing a qubit index")))?;
            if (tok.len() > 1 && tok.starts_with('0')) || tok.starts_with('+') {
                return Err(Error::param(format!("non-canonical qubit index {tok:?}")));
            }
            tok.parse::<usize>()
                .map_err(|_| Error::param(format!("bad qubit index {tok:?}")))
        };
        let gate = match name {
            "H" => Gate::H(index()?),
            "S" => Gate::S(index()?),
            "SDG" => Gate::Sdg(index()?),
            "X" => Gate::X(index()?),
            "Y" => Gate::Y(index()?),
            "Z" => Gate::Z(index()?),
            "CZ" => Gate::Cz(index()?, index()?),
            "SWAP" => Gate::Swap(index()?, index()?),
            "CNOT" => Gate::Cnot(index()?, index()?),
            other => return Err(Error::param(format!("unknown gate {other:?}"))),
        };
        if parts.next().is_some() {
            return Err(Error::param(format!("trailing tokens after gate {gate}")));
        }
        Ok(gate)
    }
}

/// An ordered list of Clifford gates on `n` qubits. Gates apply in list
/// order, so the unitary is `G_last ... G_first`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CliffordCircuit {
    n: usize,
    gates: Vec<Gate>,
}

impl CliffordCircuit {
    pub fn new(n: usize) -> Self {
        CliffordCircuit {
            n,
            gates: Vec::new(),
        }
    }

    pub fn from_gates(n: usize, gates: Vec<Gate>) -> Result<Self> {
        for g in &gates {
            g.validate(n)?;
        }
        Ok(CliffordCircuit { n, gates })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, g: Gate) -> Result<()> {
        g.validate(self.n)?;
        self.gates.push(g);
        Ok(())
    }

    /// Appends `other`, whose qubit `i` becomes `map[i]` in `self`.
    pub fn append_mapped(&mut self, other: &CliffordCircuit, map: &[usize]) -> Result<()> {
        if map.len() != other.n {
            return Err(Error::LengthMismatch {
                expected: other.n,
                got: map.len(),
            });
        }
        for g in &other.gates {
            self.push(g.remap(|q| map[q]))?;
        }
        Ok(())
    }

    pub fn append(&mut self, other: &CliffordCircuit) -> Result<()> {
        if other.n != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        self.gates.extend_from_slice(&other.gates);
        Ok(())
    }

    /// Reversed gate list with every gate inverted.
    pub fn inverse(&self) -> CliffordCircuit {
        CliffordCircuit {
            n: self.n,
            gates: self.gates.iter().rev().map(|g| g.inverse()).collect(),
        }
    }

    /// Parses the semicolon-separated text form.
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        if text.trim().is_empty() {
            return Ok(CliffordCircuit::new(n));
        }
        let mut c = CliffordCircuit::new(n);
        for piece in text.split(';') {
            c.push(piece.trim().parse()?)?;
        }
        Ok(c)
    }
}

impl fmt::Display for CliffordCircuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, g) in self.gates.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_examples() {
        let c = CliffordCircuit::from_gates(1, vec![Gate::H(0)]).unwrap();
        assert_eq!(c.inverse().gates(), &[Gate::H(0)]);
        let c = CliffordCircuit::from_gates(1, vec![Gate::S(0)]).unwrap();
        assert_eq!(c.inverse().gates(), &[Gate::Sdg(0)]);
        let c =
            CliffordCircuit::from_gates(2, vec![Gate::H(0), Gate::S(1), Gate::Cnot(0, 1)]).unwrap();
        assert_eq!(
            c.inverse().gates(),
            &[Gate::Cnot(0, 1), Gate::Sdg(1), Gate::H(0)]
        );
        assert_eq!(c.inverse().inverse(), c);
    }

    #[test]
    fn text_round_trip() {
        let text = "H 0; SDG 2; CNOT 0 3";
        let c = CliffordCircuit::parse(4, text).unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(c.to_string(), text);
        assert_eq!(CliffordCircuit::parse(3, "").unwrap().to_string(), "");
    }

    #[test]
    fn rejects_bad_gates() {
        assert!(CliffordCircuit::parse(2, "CNOT 0 0").is_err());
        assert!(CliffordCircuit::parse(2, "H 2").is_err());
        assert!(CliffordCircuit::parse(2, "T 0").is_err());
        assert!(CliffordCircuit::parse(2, "H").is_err());
        assert!(CliffordCircuit::parse(2, "H 0 1").is_err());
        assert!(CliffordCircuit::parse(2, "H 0;").is_err());
        assert!(CliffordCircuit::parse(2, "H 01").is_err());
        assert!(CliffordCircuit::parse(2, "H -1").is_err());
    }
}
