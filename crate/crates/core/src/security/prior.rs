use std::collections::HashSet;

use crate::bits::BitString;
use crate::error::{Error, Result};

/// Probabilities must sum to one within this.
pub const PRIOR_SUM_TOL: f64 = 1e-9;

/// Distribution of the plaintext `x`: uniform over all `2^n` strings or an
/// explicit sparse list.
#[derive(Clone, Debug, PartialEq)]
pub struct PriorDistribution {
    n: usize,
    entries: Vec<(BitString, f64)>,
    uniform: bool,
}

impl PriorDistribution {
    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::param("prior needs at least one bit"));
        }
        Ok(PriorDistribution {
            n,
            entries: Vec::new(),
            uniform: true,
        })
    }

    pub fn point(x: BitString) -> Result<Self> {
        let n = x.len();
        Self::from_entries(n, vec![(x, 1.0)])
    }

    pub fn from_entries(n: usize, entries: Vec<(BitString, f64)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::param("prior needs at least one bit"));
        }
        if entries.is_empty() {
            return Err(Error::param("prior has no entries"));
        }
        let mut seen = HashSet::new();
        let mut total = 0.0;
        for (x, p) in &entries {
            if x.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    got: x.len(),
                });
            }
            if !(*p > 0.0 && p.is_finite()) {
                return Err(Error::param(format!(
                    "probability of {x} must be positive, got {p}"
                )));
            }
            if !seen.insert(x.clone()) {
                return Err(Error::param(format!("{x} listed twice")));
            }
            total += p;
        }
        if (total - 1.0).abs() > PRIOR_SUM_TOL {
            return Err(Error::param(format!("probabilities sum to {total}, not 1")));
        }
        Ok(PriorDistribution {
            n,
            entries,
            uniform: false,
        })
    }

    /// Lines of `<bits> <probability>`; blank lines and `#` comments are
    /// skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        let mut n = None;
        for (i, line) in text.lines().enumerate() {
            let ln = i + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            let (Some(bits), Some(p), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(Error::parse(ln, "expected `<bits> <probability>`"));
            };
            let x: BitString = bits.parse().map_err(|e| Error::parse(ln, format!("{e}")))?;
            let p: f64 = p
                .parse()
                .map_err(|_| Error::parse(ln, format!("bad probability {p:?}")))?;
            if *n.get_or_insert(x.len()) != x.len() {
                return Err(Error::parse(ln, "all strings must have the same length"));
            }
            entries.push((x, p));
        }
        let n = n.ok_or_else(|| Error::parse(1, "prior file has no entries"))?;
        Self::from_entries(n, entries)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_uniform(&self) -> bool {
        self.uniform
    }

    pub fn p_max(&self) -> f64 {
        if self.uniform {
            2f64.powi(-(self.n as i32))
        } else {
            self.entries.iter().map(|e| e.1).fold(0.0, f64::max)
        }
    }

    /// Shannon entropy in bits.
    pub fn entropy(&self) -> f64 {
        if self.uniform {
            self.n as f64
        } else {
            crate::dense::shannon_entropy(self.entries.iter().map(|e| e.1))
        }
    }

    /// Number of strings with nonzero probability, as a float.
    pub fn support_size(&self) -> f64 {
        if self.uniform {
            2f64.powi(self.n as i32)
        } else {
            self.entries.len() as f64
        }
    }

    /// Explicit `(x, p(x))` pairs; uniform priors are expanded, which is
    /// only allowed up to 30 bits.
    pub fn support(&self) -> Result<Vec<(BitString, f64)>> {
        if !self.uniform {
            return Ok(self.entries.clone());
        }
        if self.n > 30 {
            return Err(Error::param(
                "cannot enumerate a uniform prior over more than 30 bits",
            ));
        }
        let d = 1usize << self.n;
        let p = 1.0 / d as f64;
        Ok((0..d)
            .map(|i| (BitString::from_basis_index(self.n, i), p))
            .collect())
    }
}

/// `-log2 max_x p(x)`.
pub fn min_entropy(prior: &PriorDistribution) -> f64 {
    -prior.p_max().log2()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn min_entropy_examples() {
        assert_eq!(min_entropy(&PriorDistribution::uniform(7).unwrap()), 7.0);
        let p = PriorDistribution::from_entries(
            2,
            vec![(bs("00"), 0.5), (bs("01"), 0.25), (bs("11"), 0.25)],
        )
        .unwrap();
        assert_eq!(min_entropy(&p), 1.0);
        assert_eq!(p.entropy(), 1.5);
        assert_eq!(
            min_entropy(&PriorDistribution::point(bs("101")).unwrap()),
            0.0
        );
    }

    #[test]
    fn validation() {
        assert!(PriorDistribution::uniform(0).is_err());
        assert!(PriorDistribution::from_entries(1, vec![]).is_err());
        assert!(PriorDistribution::from_entries(1, vec![(bs("0"), 0.5), (bs("0"), 0.5)]).is_err());
        assert!(PriorDistribution::from_entries(1, vec![(bs("0"), 0.5), (bs("1"), 0.4)]).is_err());
        assert!(PriorDistribution::from_entries(1, vec![(bs("0"), 1.5), (bs("1"), -0.5)]).is_err());
        assert!(PriorDistribution::from_entries(2, vec![(bs("0"), 1.0)]).is_err());
    }

    #[test]
    fn parse_text() {
        let p = PriorDistribution::parse("# a prior\n00 0.5\n\n11 0.5\n").unwrap();
        assert_eq!(p.n(), 2);
        assert_eq!(p.support().unwrap().len(), 2);
        assert!(PriorDistribution::parse("00 0.5\n1 0.5\n").is_err());
        assert!(PriorDistribution::parse("00 x\n").is_err());
        assert!(PriorDistribution::parse("00 1 2\n").is_err());
        assert!(PriorDistribution::parse("").is_err());
    }

    #[test]
    fn uniform_support() {
        let p = PriorDistribution::uniform(3).unwrap();
        let s = p.support().unwrap();
        assert_eq!(s.len(), 8);
        assert!((s.iter().map(|e| e.1).sum::<f64>() - 1.0).abs() < 1e-15);
        assert!(PriorDistribution::uniform(40).unwrap().support().is_err());
    }
}
