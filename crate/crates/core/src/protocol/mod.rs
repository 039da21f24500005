//! Keys, codebooks, encryption and decryption.
//!
//! Alice and Bob share a key `k` in `0..K` and a public codebook of `K`
//! Clifford circuits. The message `x` is sent as `C_k|x>`; Bob undoes `C_k`
//! and measures in the computational basis.

mod codebook;

pub use codebook::Codebook;

use rand::Rng;

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::stabilizer::{parse_canonical_usize, Tableau};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SecretKey {
    k: u64,
    key_count: u64,
}

impl SecretKey {
    pub fn new(k: u64, key_count: u64) -> Result<Self> {
        if k >= key_count {
            return Err(Error::param(format!(
                "key {k} out of range for K = {key_count}"
            )));
        }
        Ok(SecretKey { k, key_count })
    }

    pub fn index(&self) -> u64 {
        self.k
    }

    pub fn key_count(&self) -> u64 {
        self.key_count
    }

    /// `ceil(log2 K)`.
    pub fn key_bits(&self) -> u32 {
        key_bits(self.key_count)
    }
}

/// `ceil(log2 K)` for `K >= 1`.
pub fn key_bits(key_count: u64) -> u32 {
    if key_count <= 1 {
        0
    } else {
        u64::BITS - (key_count - 1).leading_zeros()
    }
}

/// Uniform key in `0..K`.
pub fn keygen<R: Rng + ?Sized>(key_count: u64, rng: &mut R) -> Result<SecretKey> {
    if key_count == 0 {
        return Err(Error::param("K must be at least 1"));
    }
    SecretKey::new(rng.random_range(0..key_count), key_count)
}

/// An encrypted message: the stabilizer tableau of `C_k|x>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CipherState {
    tableau: Tableau,
}

impl CipherState {
    pub fn new(tableau: Tableau) -> Result<Self> {
        tableau.validate()?;
        Ok(CipherState { tableau })
    }

    pub fn n(&self) -> usize {
        self.tableau.n()
    }

    pub fn tableau(&self) -> &Tableau {
        &self.tableau
    }

    /// `QDLCT v1 n=<n>` followed by the tableau text.
    pub fn to_text(&self) -> String {
        format!("QDLCT v1 n={}\n{}", self.n(), self.tableau.to_text())
    }

    pub fn parse(text: &str) -> Result<Self> {
        check_ascii_lf(text)?;
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "empty cipher file"))?;
        let n = header
            .strip_prefix("QDLCT v1 n=")
            .and_then(parse_canonical_usize)
            .ok_or_else(|| Error::parse(1, format!("expected `QDLCT v1 n=<n>`, got {header:?}")))?;
        let tableau = Tableau::parse_lines(&mut lines)?;
        if tableau.n() != n {
            return Err(Error::parse(
                2,
                format!("header says n={n}, tableau has {}", tableau.n()),
            ));
        }
        if let Some((ln, _)) = lines.next() {
            return Err(Error::parse(ln, "trailing content after tableau"));
        }
        Ok(CipherState { tableau })
    }
}

pub(crate) fn check_ascii_lf(text: &str) -> Result<()> {
    if let Some(pos) = text.bytes().position(|b| !b.is_ascii() || b == b'\r') {
        let line = text[..pos].matches('\n').count() + 1;
        return Err(Error::parse(
            line,
            "files must be ASCII with LF line endings",
        ));
    }
    Ok(())
}

fn check_key(cb: &Codebook, key: &SecretKey) -> Result<usize> {
    if key.key_count() != cb.key_count() as u64 {
        return Err(Error::param(format!(
            "key is for K = {}, codebook has K = {}",
            key.key_count(),
            cb.key_count()
        )));
    }
    Ok(key.index() as usize)
}

/// `C_k|x>`.
pub fn encrypt(cb: &Codebook, key: &SecretKey, x: &BitString) -> Result<CipherState> {
    let k = check_key(cb, key)?;
    let mut t = Tableau::new_basis_state(cb.n(), x)?;
    t.apply_circuit(cb.circuit(k))?;
    Ok(CipherState { tableau: t })
}

/// The outcome of decryption.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decrypted {
    pub bits: BitString,
    /// True when every qubit had a definite outcome after undoing `C_k`,
    /// which is always the case with the right key.
    pub deterministic: bool,
}

/// Applies `C_k^-1` and measures every qubit. Random outcomes are drawn
/// from `rng`, and the state collapses before the next qubit is read.
pub fn decrypt<R: Rng + ?Sized>(
    cb: &Codebook,
    key: &SecretKey,
    c: &CipherState,
    rng: &mut R,
) -> Result<Decrypted> {
    let k = check_key(cb, key)?;
    if c.n() != cb.n() {
        return Err(Error::LengthMismatch {
            expected: cb.n(),
            got: c.n(),
        });
    }
    let mut t = c.tableau.clone();
    t.apply_circuit(&cb.circuit(k).inverse())?;
    let n = t.n();
    let mut bits = BitString::zeros(n);
    let mut deterministic = true;
    for q in 0..n {
        let b = match t.deterministic_outcome(q)? {
            Some(b) => b,
            None => {
                deterministic = false;
                let b = rng.random::<bool>();
                t.measure_postselect(q, b)?;
                b
            }
        };
        bits.set(q, b);
    }
    Ok(Decrypted {
        bits,
        deterministic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::MasterSeed;
    use crate::stabilizer::CliffordCircuit;

    #[test]
    fn key_lengths() {
        assert_eq!(key_bits(1), 0);
        assert_eq!(key_bits(2), 1);
        assert_eq!(key_bits(3), 2);
        assert_eq!(key_bits(256), 8);
        assert_eq!(key_bits(257), 9);
        assert_eq!(key_bits(u64::MAX), 64);
    }

    #[test]
    fn keygen_examples() {
        let mut rng = MasterSeed(1).stream(0);
        for _ in 0..20 {
            assert_eq!(keygen(1, &mut rng).unwrap().index(), 0);
        }
        assert!(keygen(0, &mut rng).is_err());
        assert_eq!(keygen(256, &mut rng).unwrap().key_bits(), 8);
        assert!(SecretKey::new(4, 4).is_err());
    }

    #[test]
    fn empty_circuit_leaves_basis_state() {
        let cb =
            Codebook::from_circuits(3, 0.5, MasterSeed(0), vec![CliffordCircuit::new(3)]).unwrap();
        let x: BitString = "101".parse().unwrap();
        let key = SecretKey::new(0, 1).unwrap();
        let c = encrypt(&cb, &key, &x).unwrap();
        assert_eq!(c.tableau(), &Tableau::basis_state(&x).unwrap());
        let out = decrypt(&cb, &key, &c, &mut MasterSeed(0).stream(0)).unwrap();
        assert_eq!(
            out,
            Decrypted {
                bits: x,
                deterministic: true
            }
        );
    }

    #[test]
    fn round_trip_exhaustive_small() {
        let cb = Codebook::build(4, 8, 1.0 / 16.0, MasterSeed(42)).unwrap();
        let mut rng = MasterSeed(1).stream(9);
        for k in 0..8 {
            let key = SecretKey::new(k, 8).unwrap();
            for v in 0..16 {
                let x = BitString::from_index(4, v);
                let c = encrypt(&cb, &key, &x).unwrap();
                let out = decrypt(&cb, &key, &c, &mut rng).unwrap();
                assert!(out.deterministic);
                assert_eq!(out.bits, x);
            }
        }
    }

    #[test]
    fn cipher_text_round_trip() {
        let cb = Codebook::build(5, 2, 0.1, MasterSeed(7)).unwrap();
        let key = SecretKey::new(1, 2).unwrap();
        let c = encrypt(&cb, &key, &"11010".parse().unwrap()).unwrap();
        let text = c.to_text();
        assert!(text.starts_with("QDLCT v1 n=5\nn=5\nD "));
        let back = CipherState::parse(&text).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.to_text(), text);

        assert!(CipherState::parse(&text.replace("n=5\nn=5", "n=4\nn=5")).is_err());
        assert!(CipherState::parse(&text.replace('\n', "\r\n")).is_err());
        assert!(CipherState::parse(&format!("{text}extra\n")).is_err());
        assert!(CipherState::parse("").is_err());
    }

    #[test]
    fn key_must_match_codebook() {
        let cb = Codebook::build(2, 4, 0.1, MasterSeed(7)).unwrap();
        let key = SecretKey::new(1, 8).unwrap();
        assert!(encrypt(&cb, &key, &"01".parse().unwrap()).is_err());
        let key = SecretKey::new(1, 4).unwrap();
        assert!(encrypt(&cb, &key, &"011".parse().unwrap()).is_err());
    }
}
