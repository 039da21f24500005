//! Pseudo-random Clifford circuits.
//!
//! * [`SamplerMode::ApproxDesign`]: `L = ceil(c * n * (n + log2(1/delta)))`
//!   uniform two-qubit Cliffords, each on a uniformly random ordered pair of
//!   distinct qubits. A single qubit falls back to one uniform
//!   single-qubit Clifford.
//! * [`SamplerMode::UniformClifford`]: an exact uniform `n`-qubit Clifford.
//! * [`SamplerMode::SingleQubitExhaustive`]: the 24 single-qubit Cliffords;
//!   seeded derivation walks them in order (stream `k` gives element
//!   `k mod 24`).
//!
//! Seeded derivation uses ChaCha20 keyed by the 128-bit master seed
//! (little-endian, zero-padded to 256 bits) with the stream index selecting
//! the ChaCha stream. Interop between implementations goes through the
//! serialized codebook, not through this generator.

mod clifford;
mod enumerate;

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

pub use clifford::{
    sample_single_qubit_clifford, sample_two_qubit_clifford, sample_uniform_clifford,
    two_qubit_clifford, SINGLE_QUBIT_CLIFFORD_ORDER, SP4_ORDER, TWO_QUBIT_CLIFFORD_ORDER,
    TWO_QUBIT_PAULIS,
};
pub use enumerate::{clifford_key, single_qubit_cliffords, two_qubit_symplectic_reps};

use crate::error::{Error, Result};
use crate::stabilizer::CliffordCircuit;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SamplerMode {
    ApproxDesign,
    UniformClifford,
    SingleQubitExhaustive,
}

impl FromStr for SamplerMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "approx" | "approx-design" => Ok(SamplerMode::ApproxDesign),
            "uniform" | "uniform-clifford" => Ok(SamplerMode::UniformClifford),
            "single" | "single-qubit-exhaustive" => Ok(SamplerMode::SingleQubitExhaustive),
            other => Err(Error::param(format!("unknown sampler mode {other:?}"))),
        }
    }
}

impl fmt::Display for SamplerMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SamplerMode::ApproxDesign => "approx-design",
            SamplerMode::UniformClifford => "uniform-clifford",
            SamplerMode::SingleQubitExhaustive => "single-qubit-exhaustive",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SamplerConfig {
    pub n: usize,
    pub delta: f64,
    pub depth_factor: f64,
    pub mode: SamplerMode,
}

impl SamplerConfig {
    pub fn approx_design(n: usize, delta: f64) -> Self {
        SamplerConfig {
            n,
            delta,
            depth_factor: 1.0,
            mode: SamplerMode::ApproxDesign,
        }
    }

    pub fn uniform(n: usize) -> Self {
        SamplerConfig {
            n,
            delta: 0.5,
            depth_factor: 1.0,
            mode: SamplerMode::UniformClifford,
        }
    }

    pub fn single_qubit_exhaustive() -> Self {
        SamplerConfig {
            n: 1,
            delta: 0.5,
            depth_factor: 1.0,
            mode: SamplerMode::SingleQubitExhaustive,
        }
    }

    pub fn with_depth_factor(mut self, c: f64) -> Self {
        self.depth_factor = c;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::param("sampler needs at least one qubit"));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::param(format!(
                "delta must lie in (0, 1), got {}",
                self.delta
            )));
        }
        if !(self.depth_factor > 0.0 && self.depth_factor.is_finite()) {
            return Err(Error::param(format!(
                "depth factor must be positive, got {}",
                self.depth_factor
            )));
        }
        if self.mode == SamplerMode::SingleQubitExhaustive && self.n != 1 {
            return Err(Error::param("single-qubit exhaustive mode requires n = 1"));
        }
        Ok(())
    }

    /// Number of two-qubit fragments in an approximate-design circuit.
    pub fn design_length(&self) -> usize {
        design_length(self.n, self.delta, self.depth_factor)
    }
}

/// `ceil(c * n * (n + log2(1/delta)))`. Values within `1e-9` (relative) of
/// an integer are taken as that integer so `ceil` does not pick up
/// rounding noise.
pub fn design_length(n: usize, delta: f64, depth_factor: f64) -> usize {
    let v = depth_factor * n as f64 * (n as f64 + (1.0 / delta).log2());
    let r = v.round();
    if (v - r).abs() <= 1e-9 * v.abs().max(1.0) {
        r as usize
    } else {
        v.ceil() as usize
    }
}

/// One uniform two-qubit Clifford placed on an ordered qubit pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DesignFragment {
    pub qubits: (usize, usize),
    /// Index into the two-qubit Clifford group, see [`two_qubit_clifford`].
    pub clifford_index: usize,
}

/// The fragments of an approximate-design circuit with `n >= 2`.
pub fn sample_design_fragments<R: Rng + ?Sized>(
    cfg: &SamplerConfig,
    rng: &mut R,
) -> Result<Vec<DesignFragment>> {
    cfg.validate()?;
    let n = cfg.n;
    if n < 2 {
        return Err(Error::param("design fragments need at least two qubits"));
    }
    Ok((0..cfg.design_length())
        .map(|_| {
            let a = rng.random_range(0..n);
            let mut b = rng.random_range(0..n - 1);
            if b >= a {
                b += 1;
            }
            DesignFragment {
                qubits: (a, b),
                clifford_index: rng.random_range(0..TWO_QUBIT_CLIFFORD_ORDER),
            }
        })
        .collect())
}

pub fn fragments_to_circuit(n: usize, fragments: &[DesignFragment]) -> Result<CliffordCircuit> {
    let mut c = CliffordCircuit::new(n);
    for f in fragments {
        c.append_mapped(
            &two_qubit_clifford(f.clifford_index),
            &[f.qubits.0, f.qubits.1],
        )?;
    }
    Ok(c)
}

/// Approximate-design circuit per the module docs.
pub fn sample_design_circuit<R: Rng + ?Sized>(
    cfg: &SamplerConfig,
    rng: &mut R,
) -> Result<CliffordCircuit> {
    cfg.validate()?;
    if cfg.n == 1 {
        return Ok(sample_single_qubit_clifford(rng));
    }
    fragments_to_circuit(cfg.n, &sample_design_fragments(cfg, rng)?)
}

/// One draw from the ensemble selected by `cfg.mode`.
pub fn sample_circuit<R: Rng + ?Sized>(
    cfg: &SamplerConfig,
    rng: &mut R,
) -> Result<CliffordCircuit> {
    cfg.validate()?;
    match cfg.mode {
        SamplerMode::ApproxDesign => sample_design_circuit(cfg, rng),
        SamplerMode::UniformClifford => Ok(sample_uniform_clifford(cfg.n, rng)),
        SamplerMode::SingleQubitExhaustive => Ok(sample_single_qubit_clifford(rng)),
    }
}

/// 128-bit master seed; text form is 32 lowercase hex digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct MasterSeed(pub u128);

impl MasterSeed {
    /// Parses 1 to 32 hex digits (case-insensitive), zero-extended.
    pub fn from_hex(s: &str) -> Result<Self> {
        if s.is_empty() || s.len() > 32 || !s.bytes().all(|b| b.is_ascii_hexdigit()) {
            return Err(Error::param(format!(
                "seed must be 1 to 32 hex digits, got {s:?}"
            )));
        }
        Ok(MasterSeed(
            u128::from_str_radix(s, 16).expect("validated hex"),
        ))
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        MasterSeed(rng.random())
    }

    /// Generator for stream `k`.
    pub fn stream(&self, k: u64) -> ChaCha20Rng {
        let mut key = [0u8; 32];
        key[..16].copy_from_slice(&self.0.to_le_bytes());
        let mut rng = ChaCha20Rng::from_seed(key);
        rng.set_stream(k);
        rng
    }
}

impl fmt::Display for MasterSeed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:032x}", self.0)
    }
}

impl FromStr for MasterSeed {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::from_hex(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SeedContext {
    pub master_seed: MasterSeed,
    pub stream_index: u64,
}

/// Deterministic circuit for `(master_seed, stream_index, cfg)`.
pub fn derive_circuit(ctx: &SeedContext, cfg: &SamplerConfig) -> Result<CliffordCircuit> {
    cfg.validate()?;
    if cfg.mode == SamplerMode::SingleQubitExhaustive {
        let all = single_qubit_cliffords();
        return Ok(all[(ctx.stream_index % all.len() as u64) as usize].clone());
    }
    let mut rng = ctx.master_seed.stream(ctx.stream_index);
    sample_circuit(cfg, &mut rng)
}
