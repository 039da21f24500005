use std::fmt::Write as _;

use super::check_ascii_lf;
use crate::error::{Error, Result};
use crate::sampling::{derive_circuit, MasterSeed, SamplerConfig, SeedContext};
use crate::stabilizer::{parse_canonical_usize, CliffordCircuit};

/// `K` public circuits on `n` qubits.
///
/// The file form is the interop artifact:
///
/// ```text
/// QDLCB v1 n=<n> K=<K> delta=<float> seed=<32 hex digits>
/// 0: <circuit>
/// ...
/// ```
#[derive(Clone, Debug, PartialEq)]
pub struct Codebook {
    n: usize,
    delta: f64,
    master_seed: MasterSeed,
    circuits: Vec<CliffordCircuit>,
}

impl Codebook {
    /// Circuit `k` is `derive_circuit((seed, k))` from the approximate
    /// design sampler.
    pub fn build(n: usize, key_count: usize, delta: f64, master_seed: MasterSeed) -> Result<Self> {
        if key_count == 0 {
            return Err(Error::param("K must be at least 1"));
        }
        let cfg = SamplerConfig::approx_design(n, delta);
        cfg.validate()?;
        let circuits = (0..key_count as u64)
            .map(|k| {
                derive_circuit(
                    &SeedContext {
                        master_seed,
                        stream_index: k,
                    },
                    &cfg,
                )
            })
            .collect::<Result<_>>()?;
        Ok(Codebook {
            n,
            delta,
            master_seed,
            circuits,
        })
    }

    /// Wraps explicit circuits, all on `n` qubits.
    pub fn from_circuits(
        n: usize,
        delta: f64,
        master_seed: MasterSeed,
        circuits: Vec<CliffordCircuit>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::param("codebook needs at least one qubit"));
        }
        if circuits.is_empty() {
            return Err(Error::param("K must be at least 1"));
        }
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::param(format!(
                "delta must lie in (0, 1), got {delta}"
            )));
        }
        if let Some(c) = circuits.iter().find(|c| c.n() != n) {
            return Err(Error::LengthMismatch {
                expected: n,
                got: c.n(),
            });
        }
        Ok(Codebook {
            n,
            delta,
            master_seed,
            circuits,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn key_count(&self) -> usize {
        self.circuits.len()
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn master_seed(&self) -> MasterSeed {
        self.master_seed
    }

    pub fn circuits(&self) -> &[CliffordCircuit] {
        &self.circuits
    }

    pub fn circuit(&self, k: usize) -> &CliffordCircuit {
        &self.circuits[k]
    }

    /// True when every circuit matches its seeded derivation.
    pub fn is_derived(&self) -> Result<bool> {
        let rebuilt = Codebook::build(self.n, self.key_count(), self.delta, self.master_seed)?;
        Ok(rebuilt.circuits == self.circuits)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "QDLCB v1 n={} K={} delta={} seed={}\n",
            self.n,
            self.key_count(),
            self.delta,
            self.master_seed
        );
        for (k, c) in self.circuits.iter().enumerate() {
            if c.is_empty() {
                writeln!(out, "{k}:").expect("string write");
            } else {
                writeln!(out, "{k}: {c}").expect("string write");
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        check_ascii_lf(text)?;
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::parse(1, "empty codebook file"))?;
        let (n, key_count, delta, seed) = parse_header(header)?;
        let mut circuits = Vec::new();
        for (i, line) in lines.enumerate() {
            let ln = i + 2;
            if i >= key_count {
                return Err(Error::parse(
                    ln,
                    format!("more than K = {key_count} circuit lines"),
                ));
            }
            let (idx, body) = line
                .split_once(':')
                .ok_or_else(|| Error::parse(ln, "expected `<k>: <circuit>`"))?;
            if parse_canonical_usize(idx) != Some(i) {
                return Err(Error::parse(ln, format!("expected index {i}, got {idx:?}")));
            }
            let body = match body {
                "" => "",
                b => b
                    .strip_prefix(' ')
                    .filter(|s| !s.is_empty())
                    .ok_or_else(|| Error::parse(ln, "expected one space after the colon"))?,
            };
            let c = CliffordCircuit::parse(n, body).map_err(|e| Error::parse(ln, e.to_string()))?;
            if c.to_string() != body {
                return Err(Error::parse(ln, "circuit text is not in canonical form"));
            }
            circuits.push(c);
        }
        if circuits.len() != key_count {
            return Err(Error::parse(
                circuits.len() + 2,
                format!("expected {key_count} circuits, found {}", circuits.len()),
            ));
        }
        Codebook::from_circuits(n, delta, seed, circuits)
            .map_err(|e| Error::parse(1, e.to_string()))
    }
}

fn parse_header(line: &str) -> Result<(usize, usize, f64, MasterSeed)> {
    let bad = || {
        Error::parse(
            1,
            format!("expected `QDLCB v1 n=<n> K=<K> delta=<float> seed=<hex>`, got {line:?}"),
        )
    };
    let parts: Vec<&str> = line.split(' ').collect();
    if parts.len() != 6 || parts[0] != "QDLCB" || parts[1] != "v1" {
        return Err(bad());
    }
    let field = |i: usize, key: &str| parts[i].strip_prefix(key).ok_or_else(bad);
    let n = parse_canonical_usize(field(2, "n=")?).ok_or_else(bad)?;
    let key_count = parse_canonical_usize(field(3, "K=")?).ok_or_else(bad)?;
    let delta_text = field(4, "delta=")?;
    let delta: f64 = delta_text.parse().map_err(|_| bad())?;
    if delta.to_string() != delta_text {
        return Err(Error::parse(
            1,
            format!("delta {delta_text:?} is not in canonical form"),
        ));
    }
    let seed_hex = field(5, "seed=")?;
    if seed_hex.len() != 32 {
        return Err(Error::parse(1, "seed must be exactly 32 hex digits"));
    }
    let seed = MasterSeed::from_hex(seed_hex).map_err(|e| Error::parse(1, e.to_string()))?;
    Ok((n, key_count, delta, seed))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn build_is_deterministic_with_expected_length() {
        let a = Codebook::build(4, 8, 1.0 / 16.0, MasterSeed(5)).unwrap();
        let b = Codebook::build(4, 8, 1.0 / 16.0, MasterSeed(5)).unwrap();
        assert_eq!(a.to_text(), b.to_text());
        assert!(a.is_derived().unwrap());
        let cfg = SamplerConfig::approx_design(4, 1.0 / 16.0);
        assert_eq!(cfg.design_length(), 32);
    }

    #[test]
    fn text_round_trip() {
        let cb = Codebook::build(3, 5, 0.25, MasterSeed(0xabc)).unwrap();
        let text = cb.to_text();
        assert!(text
            .starts_with("QDLCB v1 n=3 K=5 delta=0.25 seed=00000000000000000000000000000abc\n0: "));
        let back = Codebook::parse(&text).unwrap();
        assert_eq!(back, cb);
        assert_eq!(back.to_text(), text);
    }

    #[test]
    fn empty_circuits_serialize_without_body() {
        let cb = Codebook::from_circuits(2, 0.5, MasterSeed(1), vec![CliffordCircuit::new(2); 2])
            .unwrap();
        let text = cb.to_text();
        assert!(text.ends_with("\n0:\n1:\n"));
        assert_eq!(Codebook::parse(&text).unwrap(), cb);
    }

    #[test]
    fn rejects_malformed() {
        let good = Codebook::build(2, 2, 0.5, MasterSeed(3)).unwrap().to_text();
        let cases = [
            good.replace("K=2", "K=3"),
            good.replace("K=2", "K=1"),
            good.replace("K=2", "K=02"),
            good.replace("v1", "v2"),
            good.replace("delta=0.5", "delta=1.5"),
            good.replace("delta=0.5", "delta=x"),
            good.replace("delta=0.5", "delta=0.50"),
            good.replace("seed=0000", "seed=00"),
            good.replace("1: ", "2: "),
            good.replace("1: ", "1:  "),
            good.replace("1: ", "1:"),
            good.replace("n=2", "n=1"),
            good.replace('\n', "\r\n"),
            String::new(),
        ];
        for (i, bad) in cases.iter().enumerate() {
            assert!(Codebook::parse(bad).is_err(), "case {i} parsed:\n{bad}");
        }
    }
}
