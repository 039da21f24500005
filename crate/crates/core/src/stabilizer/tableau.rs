//! Destabilizer/stabilizer tableau in the Aaronson–Gottesman convention.
//!
//! Storage is column-major: for each qubit `q` the x-bits (and z-bits) of all
//! `2n` rows are packed into `ceil(2n / 64)` words, so a gate touches
//! `O(n / 64)` words. Rows `0..n` are destabilizers, rows `n..2n`
//! stabilizers. Row signs are packed the same way.

use std::fmt;

use crate::bits::{words_for, BitString, WORD};
use crate::error::{Error, Result};

use super::circuit::{CliffordCircuit, Gate};
use super::pauli::PauliRow;

/// Probability of a postselected computational-basis outcome.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BranchProbability {
    Zero,
    Half,
    One,
}

impl BranchProbability {
    pub fn as_f64(self) -> f64 {
        match self {
            BranchProbability::Zero => 0.0,
            BranchProbability::Half => 0.5,
            BranchProbability::One => 1.0,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Tableau {
    n: usize,
    /// Words per column.
    stride: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    sign: Vec<u64>,
}

#[inline]
fn bit(words: &[u64], i: usize) -> bool {
    (words[i / WORD] >> (i % WORD)) & 1 == 1
}

#[inline]
fn put(words: &mut [u64], i: usize, v: bool) {
    let m = 1u64 << (i % WORD);
    if v {
        words[i / WORD] |= m;
    } else {
        words[i / WORD] &= !m;
    }
}

impl Tableau {
    /// The computational basis state `|x>`; qubit `i` is stabilized by
    /// `(-1)^{x_i} Z_i` and destabilized by `X_i`.
    pub fn basis_state(x: &BitString) -> Result<Self> {
        let n = x.len();
        if n == 0 {
            return Err(Error::param("a tableau needs at least one qubit"));
        }
        let stride = words_for(2 * n);
        let mut t = Tableau {
            n,
            stride,
            x: vec![0; n * stride],
            z: vec![0; n * stride],
            sign: vec![0; stride],
        };
        for q in 0..n {
            put(&mut t.x[q * stride..(q + 1) * stride], q, true);
            put(&mut t.z[q * stride..(q + 1) * stride], n + q, true);
            if x.get(q) {
                put(&mut t.sign, n + q, true);
            }
        }
        Ok(t)
    }

    /// Checked form of [`Tableau::basis_state`] that also validates `|x| = n`.
    pub fn new_basis_state(n: usize, x: &BitString) -> Result<Self> {
        if x.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: x.len(),
            });
        }
        Self::basis_state(x)
    }

    /// `|0...0>`, whose rows are also the tableau of the identity Clifford.
    pub fn zero_state(n: usize) -> Result<Self> {
        Self::basis_state(&BitString::zeros(n))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn row(&self, r: usize) -> PauliRow {
        assert!(r < 2 * self.n, "row {r} out of range");
        let mut p = PauliRow::identity(self.n);
        for q in 0..self.n {
            let col = q * self.stride..(q + 1) * self.stride;
            if bit(&self.x[col.clone()], r) {
                p.x.set(q, true);
            }
            if bit(&self.z[col], r) {
                p.z.set(q, true);
            }
        }
        p.negative = bit(&self.sign, r);
        p
    }

    fn set_row(&mut self, r: usize, p: &PauliRow) {
        debug_assert_eq!(p.n(), self.n);
        for q in 0..self.n {
            let col = q * self.stride..(q + 1) * self.stride;
            put(&mut self.x[col.clone()], r, p.x.get(q));
            put(&mut self.z[col], r, p.z.get(q));
        }
        put(&mut self.sign, r, p.negative);
    }

    pub fn destabilizer(&self, i: usize) -> PauliRow {
        assert!(i < self.n);
        self.row(i)
    }

    pub fn stabilizer(&self, i: usize) -> PauliRow {
        assert!(i < self.n);
        self.row(self.n + i)
    }

    pub fn stabilizers(&self) -> Vec<PauliRow> {
        (0..self.n).map(|i| self.stabilizer(i)).collect()
    }

    pub fn destabilizers(&self) -> Vec<PauliRow> {
        (0..self.n).map(|i| self.destabilizer(i)).collect()
    }

    /// Conjugates every row by `g`.
    pub fn apply_gate(&mut self, g: &Gate) -> Result<()> {
        g.validate(self.n)?;
        self.apply_unchecked(*g);
        Ok(())
    }

    pub fn apply_circuit(&mut self, c: &CliffordCircuit) -> Result<()> {
        if c.n() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: c.n(),
            });
        }
        // gates were validated when the circuit was built
        for g in c.gates() {
            self.apply_unchecked(*g);
        }
        Ok(())
    }

    fn apply_unchecked(&mut self, g: Gate) {
        let w = self.stride;
        match g {
            Gate::H(a) => {
                for j in 0..w {
                    let (xa, za) = (self.x[a * w + j], self.z[a * w + j]);
                    self.sign[j] ^= xa & za;
                    self.x[a * w + j] = za;
                    self.z[a * w + j] = xa;
                }
            }
            Gate::S(a) => {
                for j in 0..w {
                    let (xa, za) = (self.x[a * w + j], self.z[a * w + j]);
                    self.sign[j] ^= xa & za;
                    self.z[a * w + j] = za ^ xa;
                }
            }
            Gate::Sdg(a) => {
                for j in 0..w {
                    let (xa, za) = (self.x[a * w + j], self.z[a * w + j]);
                    self.sign[j] ^= xa & !za;
                    self.z[a * w + j] = za ^ xa;
                }
            }
            Gate::X(a) => {
                for j in 0..w {
                    self.sign[j] ^= self.z[a * w + j];
                }
            }
            Gate::Z(a) => {
                for j in 0..w {
                    self.sign[j] ^= self.x[a * w + j];
                }
            }
            Gate::Y(a) => {
                for j in 0..w {
                    self.sign[j] ^= self.x[a * w + j] ^ self.z[a * w + j];
                }
            }
            Gate::Cnot(a, b) => {
                for j in 0..w {
                    let (xa, za) = (self.x[a * w + j], self.z[a * w + j]);
                    let (xb, zb) = (self.x[b * w + j], self.z[b * w + j]);
                    self.sign[j] ^= xa & zb & !(xb ^ za);
                    self.x[b * w + j] = xb ^ xa;
                    self.z[a * w + j] = za ^ zb;
                }
            }
            Gate::Cz(a, b) => {
                for j in 0..w {
                    let (xa, za) = (self.x[a * w + j], self.z[a * w + j]);
                    let (xb, zb) = (self.x[b * w + j], self.z[b * w + j]);
                    self.sign[j] ^= xa & xb & (za ^ zb);
                    self.z[a * w + j] = za ^ xb;
                    self.z[b * w + j] = zb ^ xa;
                }
            }
            Gate::Swap(a, b) => {
                for j in 0..w {
                    self.x.swap(a * w + j, b * w + j);
                    self.z.swap(a * w + j, b * w + j);
                }
            }
        }
    }

    fn x_col(&self, q: usize) -> &[u64] {
        &self.x[q * self.stride..(q + 1) * self.stride]
    }

    /// First stabilizer row with an X or Y on `qubit`.
    fn random_pivot(&self, qubit: usize) -> Option<usize> {
        let col = self.x_col(qubit);
        (self.n..2 * self.n).find(|&r| bit(col, r))
    }

    /// The outcome of measuring `Z_qubit`, if it is deterministic.
    pub fn deterministic_outcome(&self, qubit: usize) -> Result<Option<bool>> {
        self.check_qubit(qubit)?;
        if self.random_pivot(qubit).is_some() {
            return Ok(None);
        }
        let col = self.x_col(qubit).to_vec();
        let mut acc = PauliRow::identity(self.n);
        for i in (0..self.n).filter(|&i| bit(&col, i)) {
            let ok = acc.mul_left(&self.row(self.n + i));
            debug_assert!(ok, "stabilizer rows must commute");
        }
        Ok(Some(acc.negative))
    }

    /// Postselects a `Z_qubit` measurement on `outcome`.
    ///
    /// Deterministic outcomes leave the state unchanged and report
    /// probability one or zero. Random outcomes have probability one half
    /// and the state is projected onto the requested branch. No randomness
    /// is consumed.
    pub fn measure_postselect(&mut self, qubit: usize, outcome: bool) -> Result<BranchProbability> {
        self.check_qubit(qubit)?;
        match self.random_pivot(qubit) {
            None => {
                let det = self.deterministic_outcome(qubit)?.expect("deterministic");
                Ok(if det == outcome {
                    BranchProbability::One
                } else {
                    BranchProbability::Zero
                })
            }
            Some(p) => {
                self.project(qubit, p, outcome);
                Ok(BranchProbability::Half)
            }
        }
    }

    /// Random-outcome projection with pivot stabilizer row `p`.
    fn project(&mut self, qubit: usize, p: usize, outcome: bool) {
        let n = self.n;
        let w = self.stride;
        // rows (other than p and its paired destabilizer) that anticommute
        // with Z_qubit get multiplied by row p
        let mut target: Vec<u64> = self.x_col(qubit).to_vec();
        put(&mut target, p, false);
        put(&mut target, p - n, false);

        let mut c0 = vec![0u64; w];
        let mut c1 = vec![0u64; w];
        for q in 0..n {
            let px = bit(&self.x[q * w..(q + 1) * w], p);
            let pz = bit(&self.z[q * w..(q + 1) * w], p);
            if !px && !pz {
                continue;
            }
            for j in 0..w {
                let t = target[j];
                let x2 = self.x[q * w + j];
                let z2 = self.z[q * w + j];
                let (pos, neg) = match (px, pz) {
                    (true, true) => (z2 & !x2, x2 & !z2),
                    (true, false) => (z2 & x2, z2 & !x2),
                    _ => (x2 & !z2, x2 & z2),
                };
                let (pos, neg) = (pos & t, neg & t);
                // bit-sliced mod-4 counter: += pos, -= neg
                c1[j] ^= c0[j] & pos;
                c0[j] ^= pos;
                c0[j] ^= neg;
                c1[j] ^= c0[j] & neg;
                if px {
                    self.x[q * w + j] ^= t;
                }
                if pz {
                    self.z[q * w + j] ^= t;
                }
            }
        }
        let sp = if bit(&self.sign, p) { u64::MAX } else { 0 };
        for j in 0..w {
            debug_assert_eq!(c0[j] & target[j], 0, "imaginary phase in row product");
            self.sign[j] ^= target[j] & (sp ^ c1[j]);
        }

        let pivot = self.row(p);
        self.set_row(p - n, &pivot);
        let mut z = PauliRow::single_z(n, qubit);
        z.negative = outcome;
        self.set_row(p, &z);
    }

    fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit >= self.n {
            return Err(Error::QubitOutOfRange {
                index: qubit,
                n: self.n,
            });
        }
        Ok(())
    }

    /// Checks the symplectic-basis invariants: stabilizers commute pairwise,
    /// destabilizers commute pairwise, destabilizer `i` anticommutes with
    /// stabilizer `i` only, and the `2n` rows have full GF(2) rank.
    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        let rows: Vec<PauliRow> = (0..2 * n).map(|r| self.row(r)).collect();
        for i in 0..2 * n {
            for j in i + 1..2 * n {
                let should_anticommute = j == i + n && i < n;
                if rows[i].commutes_with(&rows[j]) == should_anticommute {
                    return Err(Error::InvalidState(format!(
                        "rows {i} and {j} have the wrong commutation relation"
                    )));
                }
            }
        }
        if gf2_rank(&rows) != 2 * n {
            return Err(Error::InvalidState(
                "tableau rows are linearly dependent".into(),
            ));
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    /// Text form: `n=<n>` then `2n` lines `D|S <x-bits> <z-bits> <+|->`,
    /// destabilizers first. Every line ends with LF.
    pub fn to_text(&self) -> String {
        let mut out = format!("n={}\n", self.n);
        for r in 0..2 * self.n {
            let p = self.row(r);
            let tag = if r < self.n { 'D' } else { 'S' };
            let sign = if p.negative { '-' } else { '+' };
            out.push_str(&format!("{tag} {} {} {sign}\n", p.x, p.z));
        }
        out
    }

    /// Parses [`Tableau::to_text`] output and validates the invariants.
    pub fn parse_text(text: &str) -> Result<Self> {
        Self::parse_lines(&mut text.lines().enumerate().map(|(i, l)| (i + 1, l)))
    }

    /// Parses a tableau from a line iterator yielding `(line_number, line)`.
    pub(crate) fn parse_lines<'a, I>(lines: &mut I) -> Result<Self>
    where
        I: Iterator<Item = (usize, &'a str)>,
    {
        let (hline, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "missing tableau header"))?;
        let n: usize = header
            .strip_prefix("n=")
            .and_then(|s| parse_canonical_usize(s))
            .ok_or_else(|| Error::parse(hline, format!("expected `n=<n>`, got {header:?}")))?;
        if n == 0 {
            return Err(Error::parse(hline, "tableau must have at least one qubit"));
        }
        let mut rows = Vec::new();
        for r in 0..2 * n {
            let (ln, line) = lines
                .next()
                .ok_or_else(|| Error::parse(hline + r + 1, format!("expected {} rows", 2 * n)))?;
            let expect_tag = if r < n { "D" } else { "S" };
            let parts: Vec<&str> = line.split(' ').collect();
            if parts.len() != 4 || parts[0] != expect_tag {
                return Err(Error::parse(
                    ln,
                    format!("expected `{expect_tag} <x-bits> <z-bits> <+|->`"),
                ));
            }
            let x: BitString = parts[1]
                .parse()
                .map_err(|e| Error::parse(ln, format!("{e}")))?;
            let z: BitString = parts[2]
                .parse()
                .map_err(|e| Error::parse(ln, format!("{e}")))?;
            if x.len() != n || z.len() != n {
                return Err(Error::parse(
                    ln,
                    format!("row must have {n} bits per block"),
                ));
            }
            let negative = match parts[3] {
                "+" => false,
                "-" => true,
                s => return Err(Error::parse(ln, format!("bad sign {s:?}"))),
            };
            rows.push(PauliRow { x, z, negative });
        }
        let stride = words_for(2 * n);
        let mut t = Tableau {
            n,
            stride,
            x: vec![0; n * stride],
            z: vec![0; n * stride],
            sign: vec![0; stride],
        };
        for (r, p) in rows.iter().enumerate() {
            t.set_row(r, p);
        }
        t.validate()
            .map_err(|e| Error::parse(hline, format!("malformed tableau: {e}")))?;
        Ok(t)
    }
}

pub(crate) fn parse_canonical_usize(s: &str) -> Option<usize> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) || (s.len() > 1 && s.starts_with('0'))
    {
        return None;
    }
    s.parse().ok()
}

fn gf2_rank(rows: &[PauliRow]) -> usize {
    let mut m: Vec<Vec<u64>> = rows
        .iter()
        .map(|p| p.x.words().iter().chain(p.z.words()).copied().collect())
        .collect();
    let n = rows.first().map_or(0, |p| p.n());
    let half = words_for(n);
    let mut rank = 0;
    for col in 0..2 * n {
        let (wi, b) = if col < n {
            (col / WORD, col % WORD)
        } else {
            (half + (col - n) / WORD, (col - n) % WORD)
        };
        let Some(piv) = (rank..m.len()).find(|&r| (m[r][wi] >> b) & 1 == 1) else {
            continue;
        };
        m.swap(rank, piv);
        let pivot = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != rank && (row[wi] >> b) & 1 == 1 {
                for (a, p) in row.iter_mut().zip(&pivot) {
                    *a ^= p;
                }
            }
        }
        rank += 1;
    }
    rank
}

impl fmt::Debug for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Tableau(n={})", self.n)?;
        for r in 0..2 * self.n {
            writeln!(
                f,
                "  {} {}",
                if r < self.n { 'D' } else { 'S' },
                self.row(r)
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn basis_state_rows() {
        let t = Tableau::new_basis_state(1, &bs("0")).unwrap();
        assert_eq!(t.stabilizer(0).to_string(), "+Z");
        assert_eq!(t.destabilizer(0).to_string(), "+X");

        let t = Tableau::new_basis_state(2, &bs("10")).unwrap();
        assert_eq!(t.stabilizer(0).to_string(), "-ZI");
        assert_eq!(t.stabilizer(1).to_string(), "+IZ");

        let t = Tableau::new_basis_state(3, &bs("000")).unwrap();
        let s: Vec<String> = t.stabilizers().iter().map(|p| p.to_string()).collect();
        assert_eq!(s, ["+ZII", "+IZI", "+IIZ"]);

        assert!(Tableau::new_basis_state(3, &bs("00")).is_err());
        assert!(Tableau::basis_state(&bs("")).is_err());
    }

    #[test]
    fn gate_examples() {
        let mut t = Tableau::zero_state(1).unwrap();
        t.apply_gate(&Gate::H(0)).unwrap();
        assert_eq!(t.stabilizer(0).to_string(), "+X");

        // S X S^dag = Y: start from |+>
        t.apply_gate(&Gate::S(0)).unwrap();
        assert_eq!(t.stabilizer(0).to_string(), "+Y");

        let mut t = Tableau::zero_state(2).unwrap();
        t.apply_gate(&Gate::H(0)).unwrap();
        t.apply_gate(&Gate::Cnot(0, 1)).unwrap();
        assert_eq!(t.stabilizer(0).to_string(), "+XX");
        assert_eq!(t.stabilizer(1).to_string(), "+ZZ");

        assert!(matches!(
            t.apply_gate(&Gate::H(2)),
            Err(Error::QubitOutOfRange { index: 2, n: 2 })
        ));
    }

    #[test]
    fn postselection_examples() {
        let mut t = Tableau::zero_state(1).unwrap();
        let before = t.clone();
        assert_eq!(
            t.measure_postselect(0, false).unwrap(),
            BranchProbability::One
        );
        assert_eq!(t, before);
        assert_eq!(
            t.measure_postselect(0, true).unwrap(),
            BranchProbability::Zero
        );
        assert_eq!(t, before);

        t.apply_gate(&Gate::H(0)).unwrap();
        assert_eq!(
            t.measure_postselect(0, false).unwrap(),
            BranchProbability::Half
        );
        assert_eq!(t.stabilizer(0).to_string(), "+Z");
        assert_eq!(
            t.measure_postselect(0, false).unwrap(),
            BranchProbability::One
        );
        assert!(t.measure_postselect(1, false).is_err());
    }

    #[test]
    fn bell_pair_measurement_correlates() {
        let mut t = Tableau::zero_state(2).unwrap();
        t.apply_gate(&Gate::H(0)).unwrap();
        t.apply_gate(&Gate::Cnot(0, 1)).unwrap();
        assert_eq!(
            t.measure_postselect(0, true).unwrap(),
            BranchProbability::Half
        );
        assert!(t.is_valid());
        assert_eq!(t.deterministic_outcome(1).unwrap(), Some(true));
    }

    #[test]
    fn text_round_trip_and_rejects() {
        let mut t = Tableau::basis_state(&bs("101")).unwrap();
        t.apply_gate(&Gate::H(1)).unwrap();
        t.apply_gate(&Gate::Cnot(1, 2)).unwrap();
        t.apply_gate(&Gate::S(0)).unwrap();
        let text = t.to_text();
        let back = Tableau::parse_text(&text).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.to_text(), text);

        assert!(Tableau::parse_text("n=1\nD 1 0 +\nS 1 0 +\n").is_err());
        assert!(Tableau::parse_text("n=1\nD 1 0 +\n").is_err());
        assert!(Tableau::parse_text("n=1\nS 0 1 +\nD 1 0 +\n").is_err());
        assert!(Tableau::parse_text("n=0\n").is_err());
        assert!(Tableau::parse_text("n=01\nD 1 0 +\nS 0 1 +\n").is_err());
        assert!(Tableau::parse_text("n=1\nD 1 0 *\nS 0 1 +\n").is_err());
        assert!(Tableau::parse_text("n=99999999999\n").is_err());
    }
}
