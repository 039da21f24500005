//! Design moments and the spread coefficient.
//!
//! For an ensemble of circuits `C` and fixed unit vectors `alpha`, `beta`
//! the first two moments of `X = |<alpha|C|beta>|^2` are compared with the
//! Haar values `M_1 = 1/d` and `M_2 = 2/(d(d+1))`. `mean2` estimates `E[X]`
//! and `mean4` estimates `E[X^2]`.

use num_rational::Ratio;
use rand::Rng;

use crate::bits::BitString;
use crate::dense::{overlap_prob, StateVector};
use crate::error::{Error, Result};
use crate::stabilizer::{basis_overlap_exponent, basis_overlap_prob, CliffordCircuit};

/// `l! (d-1)! / (l+d-1)!`, the `l`-th moment of `|<alpha|U|beta>|^2` for
/// Haar-random `U` in dimension `d`.
pub fn haar_moment(l: u32, d: u64) -> Result<Ratio<u128>> {
    if l == 0 {
        return Err(Error::param("moment order must be at least 1"));
    }
    if d < 2 {
        return Err(Error::param(format!(
            "dimension must be at least 2, got {d}"
        )));
    }
    // l! / (d (d+1) ... (d+l-1)), reduced after each factor
    let mut r = Ratio::from_integer(1u128);
    for j in 0..l as u128 {
        let den = (d as u128)
            .checked_add(j)
            .ok_or_else(|| Error::param("dimension too large"))?;
        r = checked_mul(r, Ratio::new(j + 1, den))?;
    }
    Ok(r)
}

fn checked_mul(a: Ratio<u128>, b: Ratio<u128>) -> Result<Ratio<u128>> {
    // cross-reduce first so the products stay small
    let g1 = gcd(*a.numer(), *b.denom());
    let g2 = gcd(*b.numer(), *a.denom());
    let num = (a.numer() / g1).checked_mul(b.numer() / g2);
    let den = (a.denom() / g2).checked_mul(b.denom() / g1);
    match (num, den) {
        (Some(n), Some(d)) => Ok(Ratio::new(n, d)),
        _ => Err(Error::param("rational moment overflows 128 bits")),
    }
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

/// Floating-point `haar_moment` for any dimension.
pub fn haar_moment_f64(l: u32, d: f64) -> f64 {
    (0..l).fold(1.0, |acc, j| acc * (j + 1) as f64 / (d + j as f64))
}

/// The pair of vectors the moments are taken over.
#[derive(Clone, Debug, PartialEq)]
pub enum Probe {
    /// Computational basis states; overlaps come from the tableau
    /// simulator, so any register size works.
    Basis { alpha: BitString, beta: BitString },
    /// Arbitrary unit vectors; dense, so limited by the dense cutoff.
    Vectors {
        alpha: StateVector,
        beta: StateVector,
    },
}

impl Probe {
    pub fn basis(alpha: BitString, beta: BitString) -> Result<Self> {
        if alpha.len() != beta.len() || alpha.is_empty() {
            return Err(Error::param("probe strings must have equal nonzero length"));
        }
        Ok(Probe::Basis { alpha, beta })
    }

    /// A fixed pair of Haar-random vectors, drawn once.
    pub fn haar<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        let alpha = StateVector::haar_random(n, rng)?;
        let beta = StateVector::haar_random(n, rng)?;
        Ok(Probe::Vectors { alpha, beta })
    }

    pub fn n(&self) -> usize {
        match self {
            Probe::Basis { alpha, .. } => alpha.len(),
            Probe::Vectors { alpha, .. } => alpha.n(),
        }
    }

    /// `|<alpha|C|beta>|^2`.
    pub fn overlap(&self, c: &CliffordCircuit) -> Result<f64> {
        match self {
            Probe::Basis { alpha, beta } => basis_overlap_prob(c, beta, alpha),
            Probe::Vectors { alpha, beta } => overlap_prob(alpha, c, beta),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MomentEstimate {
    pub n: usize,
    pub mean2: f64,
    pub mean4: f64,
    pub stderr2: f64,
    pub stderr4: f64,
    pub samples: u64,
}

impl MomentEstimate {
    /// `d = 2^n` as a float.
    pub fn d(&self) -> f64 {
        2f64.powi(self.n as i32)
    }
}

/// Running sums of `X` and `X^2`. Accumulators over disjoint sample blocks
/// merge exactly, so parallel runs only need a fixed merge order.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct MomentAccumulator {
    count: u64,
    s1: f64,
    s2: f64,
    s4: f64,
}

impl MomentAccumulator {
    pub fn push(&mut self, x: f64) {
        let x2 = x * x;
        self.count += 1;
        self.s1 += x;
        self.s2 += x2;
        self.s4 += x2 * x2;
    }

    pub fn merge(&mut self, other: &MomentAccumulator) {
        self.count += other.count;
        self.s1 += other.s1;
        self.s2 += other.s2;
        self.s4 += other.s4;
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn finish(&self, n: usize) -> Result<MomentEstimate> {
        if self.count == 0 {
            return Err(Error::param("moment estimate needs at least one sample"));
        }
        let k = self.count as f64;
        let (m1, m2) = (self.s1 / k, self.s2 / k);
        let stderr = |mean: f64, sq: f64| {
            if self.count < 2 {
                return 0.0;
            }
            let var = ((sq - k * mean * mean) / (k - 1.0)).max(0.0);
            (var / k).sqrt()
        };
        Ok(MomentEstimate {
            n,
            mean2: m1,
            mean4: m2,
            stderr2: stderr(m1, self.s2),
            stderr4: stderr(m2, self.s4),
            samples: self.count,
        })
    }
}

/// Monte-Carlo moments of `samples` circuits drawn by `draw`.
pub fn estimate_moments<R, F>(
    probe: &Probe,
    samples: u64,
    rng: &mut R,
    mut draw: F,
) -> Result<MomentEstimate>
where
    R: Rng + ?Sized,
    F: FnMut(&mut R) -> Result<CliffordCircuit>,
{
    if samples == 0 {
        return Err(Error::param("moment estimate needs at least one sample"));
    }
    let mut acc = MomentAccumulator::default();
    for _ in 0..samples {
        let c = draw(rng)?;
        acc.push(probe.overlap(&c)?);
    }
    acc.finish(probe.n())
}

/// Moments of the uniform distribution over `circuits`, with zero
/// standard error.
pub fn exact_moments(circuits: &[CliffordCircuit], probe: &Probe) -> Result<MomentEstimate> {
    let mut acc = MomentAccumulator::default();
    for c in circuits {
        acc.push(probe.overlap(c)?);
    }
    let mut est = acc.finish(probe.n())?;
    est.stderr2 = 0.0;
    est.stderr4 = 0.0;
    Ok(est)
}

/// Exact rational `(E[X], E[X^2])` over `circuits` for basis vectors.
/// Stabilizer overlaps are `0` or `2^-s`, so this is exact for `n <= 31`.
pub fn exact_basis_moments(
    circuits: &[CliffordCircuit],
    alpha: &BitString,
    beta: &BitString,
) -> Result<(Ratio<u128>, Ratio<u128>)> {
    if circuits.is_empty() {
        return Err(Error::param("empty ensemble"));
    }
    if alpha.len() > 31 {
        return Err(Error::param("exact moments are limited to 31 qubits"));
    }
    let (mut m1, mut m2) = (Ratio::from_integer(0u128), Ratio::from_integer(0u128));
    for c in circuits {
        if let Some(s) = basis_overlap_exponent(c, beta, alpha)? {
            m1 += Ratio::new(1, 1u128 << s);
            m2 += Ratio::new(1, 1u128 << (2 * s));
        }
    }
    let k = Ratio::from_integer(circuits.len() as u128);
    Ok((m1 / k, m2 / k))
}

/// `E[X^2] / E[X]^2`.
pub fn gamma_of(est: &MomentEstimate) -> Result<f64> {
    if !(est.mean2 > 0.0) {
        return Err(Error::Numerical(
            "gamma undefined: second moment is zero".into(),
        ));
    }
    Ok(est.mean4 / (est.mean2 * est.mean2))
}

/// Delta-method standard error of [`gamma_of`]. The covariance term is
/// dropped; it is positive here, so this overstates the error.
pub fn gamma_stderr(est: &MomentEstimate) -> Result<f64> {
    let g = gamma_of(est)?;
    let a = g * est.stderr4 / est.mean4.max(f64::MIN_POSITIVE);
    let b = 2.0 * g * est.stderr2 / est.mean2;
    Ok((a * a + b * b).sqrt())
}

/// Dimension-free bound `2(1+delta)/(1-delta)^2` on gamma.
pub fn gamma_bound(delta: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&delta) {
        return Err(Error::param(format!(
            "delta must lie in [0, 1), got {delta}"
        )));
    }
    Ok(2.0 * (1.0 + delta) / ((1.0 - delta) * (1.0 - delta)))
}

/// The sharper bound `2d(1+delta)/((d+1)(1-delta)^2)`.
pub fn gamma_bound_dim(delta: f64, d: f64) -> Result<f64> {
    Ok(gamma_bound(delta)? * d / (d + 1.0))
}

pub const DEFAULT_Z: f64 = 3.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MomentCheck {
    pub order: u32,
    pub mean: f64,
    pub haar: f64,
    pub lower: f64,
    pub upper: f64,
    /// Distance to the nearer band edge; negative when outside.
    pub margin: f64,
    pub pass: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DesignReport {
    pub delta: f64,
    pub z: f64,
    pub first: MomentCheck,
    pub second: MomentCheck,
}

impl DesignReport {
    pub fn pass(&self) -> bool {
        self.first.pass && self.second.pass
    }
}

/// Checks `mean_l` against `[(1-delta) M_l - z se, (1+delta) M_l + z se]`
/// for `l = 1, 2`.
pub fn check_design(est: &MomentEstimate, delta: f64, z: f64) -> DesignReport {
    let d = est.d();
    let check = |order: u32, mean: f64, se: f64| {
        let haar = haar_moment_f64(order, d);
        let lower = (1.0 - delta) * haar - z * se;
        let upper = (1.0 + delta) * haar + z * se;
        let margin = (mean - lower).min(upper - mean);
        MomentCheck {
            order,
            mean,
            haar,
            lower,
            upper,
            margin,
            pass: margin >= 0.0,
        }
    };
    DesignReport {
        delta,
        z,
        first: check(1, est.mean2, est.stderr2),
        second: check(2, est.mean4, est.stderr4),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{sample_uniform_clifford, single_qubit_cliffords, MasterSeed};

    fn r(a: u128, b: u128) -> Ratio<u128> {
        Ratio::new(a, b)
    }

    #[test]
    fn haar_moment_examples() {
        assert_eq!(haar_moment(1, 2).unwrap(), r(1, 2));
        assert_eq!(haar_moment(2, 2).unwrap(), r(1, 3));
        assert_eq!(haar_moment(2, 4).unwrap(), r(1, 10));
        assert!(haar_moment(0, 4).is_err());
        assert!(haar_moment(1, 1).is_err());
    }

    #[test]
    fn haar_moment_closed_forms() {
        for d in (2..=4096u64).step_by(7).chain([4096]) {
            assert_eq!(haar_moment(1, d).unwrap(), r(1, d as u128));
            assert_eq!(
                haar_moment(2, d).unwrap(),
                r(2, d as u128 * (d as u128 + 1))
            );
            let f = haar_moment_f64(2, d as f64);
            let want = 2.0 / (d as f64 * (d as f64 + 1.0));
            assert!((f - want).abs() < 1e-15 * want);
        }
    }

    #[test]
    fn identity_ensemble() {
        let zero: BitString = "00".parse().unwrap();
        let probe = Probe::basis(zero.clone(), zero).unwrap();
        let est = exact_moments(&[CliffordCircuit::new(2)], &probe).unwrap();
        assert_eq!((est.mean2, est.mean4), (1.0, 1.0));
        assert_eq!(gamma_of(&est).unwrap(), 1.0);
        let rep = check_design(&est, 0.01, DEFAULT_Z);
        assert!(!rep.first.pass && !rep.pass());
    }

    #[test]
    fn single_qubit_enumeration() {
        let zero: BitString = "0".parse().unwrap();
        let (m1, m2) = exact_basis_moments(single_qubit_cliffords(), &zero, &zero).unwrap();
        assert_eq!((m1, m2), (r(1, 2), r(1, 3)));
        let probe = Probe::basis(zero.clone(), zero).unwrap();
        let est = exact_moments(single_qubit_cliffords(), &probe).unwrap();
        assert!((gamma_of(&est).unwrap() - 4.0 / 3.0).abs() < 1e-15);
        assert!(check_design(&est, 0.01, DEFAULT_Z).pass());
    }

    #[test]
    fn gamma_bounds() {
        assert_eq!(gamma_bound(0.0).unwrap(), 2.0);
        assert!((gamma_bound(1.0 / 3.0).unwrap() - 6.0).abs() < 1e-12);
        assert!(gamma_bound(1.0).is_err());
        let grid: Vec<f64> = (0..100)
            .map(|i| gamma_bound(i as f64 / 100.0).unwrap())
            .collect();
        assert!(grid.windows(2).all(|w| w[1] > w[0]));
        assert!((gamma_bound_dim(0.0, 2.0).unwrap() - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn accumulator_merge_matches_single_pass() {
        let xs = [0.0, 0.5, 1.0, 0.25, 0.125, 0.5, 0.0];
        let mut whole = MomentAccumulator::default();
        xs.iter().for_each(|&x| whole.push(x));
        let (mut a, mut b) = (MomentAccumulator::default(), MomentAccumulator::default());
        xs[..3].iter().for_each(|&x| a.push(x));
        xs[3..].iter().for_each(|&x| b.push(x));
        a.merge(&b);
        assert_eq!(a.finish(1).unwrap(), whole.finish(1).unwrap());
        assert!(MomentAccumulator::default().finish(1).is_err());
    }

    #[test]
    fn uniform_two_qubit_gamma() {
        let mut rng = MasterSeed(3).stream(0);
        let zero: BitString = "00".parse().unwrap();
        let probe = Probe::basis(zero.clone(), zero).unwrap();
        let est = estimate_moments(&probe, 40_000, &mut rng, |r| {
            Ok(sample_uniform_clifford(2, r))
        })
        .unwrap();
        let g = gamma_of(&est).unwrap();
        let se = gamma_stderr(&est).unwrap();
        assert!((g - 1.6).abs() < 3.0 * se, "gamma {g} +- {se}");
    }
}
