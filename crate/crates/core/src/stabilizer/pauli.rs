use std::fmt;

use crate::bits::BitString;

use super::circuit::Gate;

/// A Hermitian n-qubit Pauli operator `±P` stored as x/z bit vectors.
///
/// Qubit `j` carries `I, X, Z, Y` for `(x_j, z_j) = (0,0), (1,0), (0,1), (1,1)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliRow {
    pub x: BitString,
    pub z: BitString,
    /// `true` for a `-1` sign.
    pub negative: bool,
}

impl PauliRow {
    pub fn identity(n: usize) -> Self {
        PauliRow {
            x: BitString::zeros(n),
            z: BitString::zeros(n),
            negative: false,
        }
    }

    pub fn single_x(n: usize, q: usize) -> Self {
        let mut p = Self::identity(n);
        p.x.set(q, true);
        p
    }

    pub fn single_z(n: usize, q: usize) -> Self {
        let mut p = Self::identity(n);
        p.z.set(q, true);
        p
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    pub fn weight(&self) -> usize {
        self.x
            .words()
            .iter()
            .zip(self.z.words())
            .map(|(a, b)| (a | b).count_ones() as usize)
            .sum()
    }

    /// Symplectic inner product is zero.
    pub fn commutes_with(&self, other: &PauliRow) -> bool {
        self.x.dot(&other.z) == self.z.dot(&other.x)
    }

    /// Replaces `self` with `left * self`.
    ///
    /// Returns `false` (leaving the bits multiplied but the sign
    /// meaningless) when the operators anticommute, since the product then
    /// carries an imaginary phase that a Hermitian row cannot hold.
    pub fn mul_left(&mut self, left: &PauliRow) -> bool {
        let mut sum: i64 = 0;
        let words = self.x.words().len();
        for j in 0..words {
            let x1 = left.x.words()[j];
            let z1 = left.z.words()[j];
            let x2 = self.x.words()[j];
            let z2 = self.z.words()[j];
            let pos = (x1 & z1 & z2 & !x2) | (x1 & !z1 & z2 & x2) | (!x1 & z1 & x2 & !z2);
            let neg = (x1 & z1 & x2 & !z2) | (x1 & !z1 & z2 & !x2) | (!x1 & z1 & x2 & z2);
            sum += pos.count_ones() as i64 - neg.count_ones() as i64;
        }
        let total = (2 * self.negative as i64 + 2 * left.negative as i64 + sum).rem_euclid(4);
        self.x.xor_assign(&left.x);
        self.z.xor_assign(&left.z);
        self.negative = total == 2;
        total % 2 == 0
    }

    /// Replaces `self` with `g self g^dagger`.
    pub fn conjugate_by(&mut self, g: Gate) {
        let (x, z) = (&mut self.x, &mut self.z);
        match g {
            Gate::H(a) => {
                let (xa, za) = (x.get(a), z.get(a));
                self.negative ^= xa & za;
                x.set(a, za);
                z.set(a, xa);
            }
            Gate::S(a) => {
                let (xa, za) = (x.get(a), z.get(a));
                self.negative ^= xa & za;
                z.set(a, za ^ xa);
            }
            Gate::Sdg(a) => {
                let (xa, za) = (x.get(a), z.get(a));
                self.negative ^= xa & !za;
                z.set(a, za ^ xa);
            }
            Gate::X(a) => self.negative ^= z.get(a),
            Gate::Z(a) => self.negative ^= x.get(a),
            Gate::Y(a) => self.negative ^= x.get(a) ^ z.get(a),
            Gate::Cnot(a, b) => {
                let (xa, za, xb, zb) = (x.get(a), z.get(a), x.get(b), z.get(b));
                self.negative ^= xa & zb & !(xb ^ za);
                x.set(b, xb ^ xa);
                z.set(a, za ^ zb);
            }
            Gate::Cz(a, b) => {
                let (xa, za, xb, zb) = (x.get(a), z.get(a), x.get(b), z.get(b));
                self.negative ^= xa & xb & (za ^ zb);
                z.set(a, za ^ xb);
                z.set(b, zb ^ xa);
            }
            Gate::Swap(a, b) => {
                let (xa, za, xb, zb) = (x.get(a), z.get(a), x.get(b), z.get(b));
                x.set(a, xb);
                x.set(b, xa);
                z.set(a, zb);
                z.set(b, za);
            }
        }
    }

    /// Single-qubit letter at `q`.
    pub fn letter(&self, q: usize) -> char {
        match (self.x.get(q), self.z.get(q)) {
            (false, false) => 'I',
            (true, false) => 'X',
            (false, true) => 'Z',
            (true, true) => 'Y',
        }
    }
}

impl fmt::Display for PauliRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.negative { "-" } else { "+" })?;
        for q in 0..self.n() {
            write!(f, "{}", self.letter(q))?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliRow({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pauli(s: &str) -> PauliRow {
        let (neg, body) = match s.as_bytes()[0] {
            b'-' => (true, &s[1..]),
            b'+' => (false, &s[1..]),
            _ => (false, s),
        };
        let mut p = PauliRow::identity(body.len());
        p.negative = neg;
        for (q, c) in body.chars().enumerate() {
            match c {
                'X' => p.x.set(q, true),
                'Z' => p.z.set(q, true),
                'Y' => {
                    p.x.set(q, true);
                    p.z.set(q, true)
                }
                _ => {}
            }
        }
        p
    }

    #[test]
    fn products_of_commuting_pairs() {
        // XX * ZZ = -YY
        let mut h = pauli("ZZ");
        assert!(h.mul_left(&pauli("XX")));
        assert_eq!(h, pauli("-YY"));

        // XZ * ZX = YY
        let mut h = pauli("ZX");
        assert!(h.mul_left(&pauli("XZ")));
        assert_eq!(h, pauli("YY"));

        // -Z * Z = -I
        let mut h = pauli("Z");
        assert!(h.mul_left(&pauli("-Z")));
        assert_eq!(h, pauli("-I"));
    }

    #[test]
    fn anticommuting_product_flagged() {
        let mut h = pauli("Z");
        assert!(!h.mul_left(&pauli("X")));
        assert!(!pauli("X").commutes_with(&pauli("Y")));
        assert!(pauli("XX").commutes_with(&pauli("YY")));
    }

    #[test]
    fn phases_across_word_boundary() {
        let n = 130;
        let mut a = PauliRow::identity(n);
        let mut b = PauliRow::identity(n);
        // X on qubit 0 and 129, Z on the same pair: XX * ZZ = (XZ)(XZ) = (-iY)(-iY) = -YY
        for q in [0, 129] {
            a.x.set(q, true);
            b.z.set(q, true);
        }
        assert!(b.mul_left(&a));
        assert!(b.negative);
        assert_eq!(b.letter(0), 'Y');
        assert_eq!(b.letter(129), 'Y');
        assert_eq!(b.weight(), 2);
    }
}
