//! Phase-tracked Pauli strings and complex-weighted Pauli sums.
//!
//! A [`PauliString`] is stored in symplectic form: one X mask and one Z mask
//! per register, packed into 64-bit words, plus a global phase `i^k`. The
//! single-qubit letters are encoded as
//!
//! ```text
//! I = (x=0, z=0)   X = (1, 0)   Z = (0, 1)   Y = (1, 1)   with Y = i·X·Z
//! ```
//!
//! so every product phase follows from word-level popcounts.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

/// Default magnitude below which sum coefficients are dropped.
pub const DEFAULT_PRUNE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PauliError {
    #[error("register size mismatch: {left} vs {right} qubits")]
    RegisterMismatch { left: usize, right: usize },
    #[error("qubit {qubit} out of range for a {n_qubits}-qubit register")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },
    #[error("prune tolerance must be non-negative, got {0}")]
    NegativeTolerance(f64),
    #[error("cannot parse Pauli letter token `{0}`")]
    BadToken(String),
}

/// Single-qubit Pauli letter. The identity is never stored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    X,
    Y,
    Z,
}

impl Letter {
    fn bits(self) -> (bool, bool) {
        match self {
            Letter::X => (true, false),
            Letter::Y => (true, true),
            Letter::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Option<Letter> {
        match (x, z) {
            (false, false) => None,
            (true, false) => Some(Letter::X),
            (true, true) => Some(Letter::Y),
            (false, true) => Some(Letter::Z),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

fn n_words(n_qubits: usize) -> usize {
    n_qubits.div_ceil(64)
}

fn popcount_and(a: &[u64], b: &[u64]) -> u32 {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones()).sum()
}

/// Phase-free letter pattern, used as the key of a [`PauliSum`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliKey {
    x: Vec<u64>,
    z: Vec<u64>,
}

impl PauliKey {
    pub fn x_words(&self) -> &[u64] {
        &self.x
    }

    pub fn z_words(&self) -> &[u64] {
        &self.z
    }

    pub fn weight(&self) -> usize {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(x, z)| (x | z).count_ones() as usize)
            .sum()
    }

    pub fn is_identity(&self) -> bool {
        self.x.iter().chain(&self.z).all(|w| *w == 0)
    }

    /// Ascending `(qubit, letter)` pairs.
    pub fn letters(&self) -> impl Iterator<Item = (usize, Letter)> + '_ {
        letters_of(&self.x, &self.z)
    }

    /// Renders as `X0 Z3 Y5`, or `I` for the identity.
    pub fn render(&self) -> String {
        render_of(&self.x, &self.z)
    }
}

fn letters_of<'a>(x: &'a [u64], z: &'a [u64]) -> impl Iterator<Item = (usize, Letter)> + 'a {
    x.iter().zip(z).enumerate().flat_map(|(w, (&xw, &zw))| {
        let mut mask = xw | zw;
        std::iter::from_fn(move || {
            if mask == 0 {
                return None;
            }
            let b = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            let letter = Letter::from_bits(xw >> b & 1 == 1, zw >> b & 1 == 1)?;
            Some((w * 64 + b, letter))
        })
    })
}

fn render_of(x: &[u64], z: &[u64]) -> String {
    let parts: Vec<String> = letters_of(x, z)
        .map(|(q, l)| format!("{}{}", l.as_char(), q))
        .collect();
    if parts.is_empty() {
        "I".to_string()
    } else {
        parts.join(" ")
    }
}

/// A tensor product of single-qubit Paulis with a global factor `i^phase`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    n_qubits: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    phase: u8,
}

impl PauliString {
    pub fn identity(n_qubits: usize) -> Self {
        let w = n_words(n_qubits);
        PauliString {
            n_qubits,
            x: vec![0; w],
            z: vec![0; w],
            phase: 0,
        }
    }

    pub fn single(n_qubits: usize, qubit: usize, letter: Letter) -> Result<Self, PauliError> {
        Self::from_letters(n_qubits, [(qubit, letter)])
    }

    /// Builds a string from `(qubit, letter)` pairs. Repeated qubits are
    /// multiplied in the given order.
    pub fn from_letters<I>(n_qubits: usize, letters: I) -> Result<Self, PauliError>
    where
        I: IntoIterator<Item = (usize, Letter)>,
    {
        let mut out = Self::identity(n_qubits);
        for (qubit, letter) in letters {
            if qubit >= n_qubits {
                return Err(PauliError::QubitOutOfRange { qubit, n_qubits });
            }
            let mut factor = Self::identity(n_qubits);
            factor.set_bits(qubit, letter);
            out = out.multiply(&factor)?;
        }
        Ok(out)
    }

    /// Z on every qubit in `qubits`.
    pub fn z_chain<I: IntoIterator<Item = usize>>(n_qubits: usize, qubits: I) -> Result<Self, PauliError> {
        let mut out = Self::identity(n_qubits);
        for q in qubits {
            if q >= n_qubits {
                return Err(PauliError::QubitOutOfRange { qubit: q, n_qubits });
            }
            out.z[q / 64] ^= 1 << (q % 64);
        }
        Ok(out)
    }

    fn set_bits(&mut self, qubit: usize, letter: Letter) {
        let (x, z) = letter.bits();
        let (w, b) = (qubit / 64, qubit % 64);
        if x {
            self.x[w] |= 1 << b;
        }
        if z {
            self.z[w] |= 1 << b;
        }
    }

    pub fn with_phase(mut self, phase_power: u8) -> Self {
        self.phase = phase_power % 4;
        self
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Exponent `k` of the global factor `i^k`.
    pub fn phase_power(&self) -> u8 {
        self.phase
    }

    pub fn phase_factor(&self) -> Complex64 {
        i_pow(self.phase)
    }

    pub fn letter(&self, qubit: usize) -> Option<Letter> {
        if qubit >= self.n_qubits {
            return None;
        }
        let (w, b) = (qubit / 64, qubit % 64);
        Letter::from_bits(self.x[w] >> b & 1 == 1, self.z[w] >> b & 1 == 1)
    }

    pub fn letters(&self) -> impl Iterator<Item = (usize, Letter)> + '_ {
        letters_of(&self.x, &self.z)
    }

    pub fn key(&self) -> PauliKey {
        PauliKey {
            x: self.x.clone(),
            z: self.z.clone(),
        }
    }

    pub fn from_key(n_qubits: usize, key: &PauliKey) -> Self {
        PauliString {
            n_qubits,
            x: key.x.clone(),
            z: key.z.clone(),
            phase: 0,
        }
    }

    pub fn x_words(&self) -> &[u64] {
        &self.x
    }

    pub fn z_words(&self) -> &[u64] {
        &self.z
    }

    /// Number of non-identity letters.
    pub fn weight(&self) -> usize {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(x, z)| (x | z).count_ones() as usize)
            .sum()
    }

    pub fn is_identity_up_to_phase(&self) -> bool {
        self.x.iter().chain(&self.z).all(|w| *w == 0)
    }

    fn check_register(&self, other: &PauliString) -> Result<(), PauliError> {
        if self.n_qubits != other.n_qubits {
            return Err(PauliError::RegisterMismatch {
                left: self.n_qubits,
                right: other.n_qubits,
            });
        }
        Ok(())
    }

    /// Exact product `self · other`.
    pub fn multiply(&self, other: &PauliString) -> Result<PauliString, PauliError> {
        self.check_register(other)?;
        let x: Vec<u64> = self.x.iter().zip(&other.x).map(|(a, b)| a ^ b).collect();
        let z: Vec<u64> = self.z.iter().zip(&other.z).map(|(a, b)| a ^ b).collect();
        // i^{x1 z1} X^x1 Z^z1 · i^{x2 z2} X^x2 Z^z2 = i^{x1z1 + x2z2 + 2 z1x2 - x3z3} σ3
        let mut k = self.phase as i64 + other.phase as i64;
        k += popcount_and(&self.x, &self.z) as i64;
        k += popcount_and(&other.x, &other.z) as i64;
        k += 2 * popcount_and(&self.z, &other.x) as i64;
        k -= popcount_and(&x, &z) as i64;
        Ok(PauliString {
            n_qubits: self.n_qubits,
            x,
            z,
            phase: k.rem_euclid(4) as u8,
        })
    }

    /// True iff the two strings commute (even symplectic overlap).
    pub fn commutes(&self, other: &PauliString) -> Result<bool, PauliError> {
        self.check_register(other)?;
        Ok(symplectic_overlap(&self.x, &self.z, &other.x, &other.z).is_multiple_of(2))
    }

    pub fn adjoint(&self) -> PauliString {
        PauliString {
            phase: (4 - self.phase) % 4,
            ..self.clone()
        }
    }

    /// Hermitian iff the phase is real.
    pub fn is_hermitian(&self) -> bool {
        self.phase.is_multiple_of(2)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = ["+", "+i", "-", "-i"][self.phase as usize];
        write!(f, "{} {}", sign, render_of(&self.x, &self.z))
    }
}

fn symplectic_overlap(x1: &[u64], z1: &[u64], x2: &[u64], z2: &[u64]) -> u32 {
    popcount_and(x1, z2) + popcount_and(z1, x2)
}

pub(crate) fn i_pow(k: u8) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// A complex-weighted sum of Pauli strings over a fixed register.
///
/// String phases are folded into the coefficients; terms are kept in a
/// `BTreeMap` so iteration order (and therefore floating-point summation
/// order) is deterministic.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliSum {
    n_qubits: usize,
    terms: BTreeMap<PauliKey, Complex64>,
    tol: f64,
}

impl PauliSum {
    pub fn zero(n_qubits: usize) -> Self {
        PauliSum {
            n_qubits,
            terms: BTreeMap::new(),
            tol: DEFAULT_PRUNE_TOL,
        }
    }

    pub fn identity(n_qubits: usize) -> Self {
        Self::from_string(&PauliString::identity(n_qubits))
    }

    pub fn from_string(s: &PauliString) -> Self {
        Self::from_weighted(s, Complex64::new(1.0, 0.0))
    }

    pub fn from_weighted(s: &PauliString, coeff: Complex64) -> Self {
        let mut out = Self::zero(s.n_qubits);
        out.add_term(s.key(), coeff * s.phase_factor());
        out
    }

    /// Same sum with a different prune tolerance (applied immediately).
    pub fn with_tolerance(mut self, tol: f64) -> Result<Self, PauliError> {
        if tol < 0.0 || tol.is_nan() {
            return Err(PauliError::NegativeTolerance(tol));
        }
        self.tol = tol;
        self.terms.retain(|_, c| c.norm() > tol);
        Ok(self)
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PauliKey, &Complex64)> {
        self.terms.iter()
    }

    /// Terms as phase-free strings with their coefficients.
    pub fn strings(&self) -> impl Iterator<Item = (PauliString, Complex64)> + '_ {
        self.terms
            .iter()
            .map(|(k, c)| (PauliString::from_key(self.n_qubits, k), *c))
    }

    pub fn coefficient(&self, key: &PauliKey) -> Complex64 {
        self.terms.get(key).copied().unwrap_or_default()
    }

    /// Coefficient of a string, with the string's own phase divided out.
    pub fn coefficient_of(&self, s: &PauliString) -> Complex64 {
        self.coefficient(&s.key()) / s.phase_factor()
    }

    fn add_term(&mut self, key: PauliKey, coeff: Complex64) {
        let entry = self.terms.entry(key.clone()).or_default();
        *entry += coeff;
        if entry.norm() <= self.tol {
            self.terms.remove(&key);
        }
    }

    fn check_register(&self, other: &PauliSum) -> Result<(), PauliError> {
        if self.n_qubits != other.n_qubits {
            return Err(PauliError::RegisterMismatch {
                left: self.n_qubits,
                right: other.n_qubits,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &PauliSum) -> Result<PauliSum, PauliError> {
        let mut out = self.clone();
        out.add_assign(other)?;
        Ok(out)
    }

    pub fn add_assign(&mut self, other: &PauliSum) -> Result<(), PauliError> {
        self.check_register(other)?;
        for (k, c) in &other.terms {
            let e = self.terms.entry(k.clone()).or_default();
            *e += c;
        }
        self.prune_in_place();
        Ok(())
    }

    pub fn sub(&self, other: &PauliSum) -> Result<PauliSum, PauliError> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, factor: Complex64) -> PauliSum {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c *= factor;
        }
        out.prune_in_place();
        out
    }

    /// Distributes string multiplication over all term pairs.
    pub fn product(&self, other: &PauliSum) -> Result<PauliSum, PauliError> {
        self.check_register(other)?;
        let mut acc: BTreeMap<PauliKey, Complex64> = BTreeMap::new();
        for (ka, ca) in &self.terms {
            let sa = PauliString::from_key(self.n_qubits, ka);
            for (kb, cb) in &other.terms {
                let sb = PauliString::from_key(other.n_qubits, kb);
                let p = sa.multiply(&sb)?;
                *acc.entry(p.key()).or_default() += ca * cb * p.phase_factor();
            }
        }
        let mut out = PauliSum {
            n_qubits: self.n_qubits,
            terms: acc,
            tol: self.tol,
        };
        out.prune_in_place();
        Ok(out)
    }

    /// Right-multiplies by a single string.
    pub fn product_string(&self, s: &PauliString) -> Result<PauliSum, PauliError> {
        self.product(&PauliSum::from_string(s))
    }

    pub fn adjoint(&self) -> PauliSum {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.conj();
        }
        out
    }

    pub fn prune(&self, tol: f64) -> Result<PauliSum, PauliError> {
        if tol < 0.0 || tol.is_nan() {
            return Err(PauliError::NegativeTolerance(tol));
        }
        let mut out = self.clone();
        out.terms.retain(|_, c| c.norm() > tol);
        Ok(out)
    }

    fn prune_in_place(&mut self) {
        let tol = self.tol;
        self.terms.retain(|_, c| c.norm() > tol);
    }

    /// Largest letter count over all terms (0 for an empty sum).
    pub fn max_weight(&self) -> usize {
        self.terms.keys().map(PauliKey::weight).max().unwrap_or(0)
    }

    /// Hermitian iff every coefficient is real (all strings are Hermitian).
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.terms.values().all(|c| c.im.abs() <= tol)
    }

    /// True iff every term of `self` commutes with `s`.
    pub fn commutes_termwise(&self, s: &PauliString) -> Result<bool, PauliError> {
        if self.n_qubits != s.n_qubits {
            return Err(PauliError::RegisterMismatch {
                left: self.n_qubits,
                right: s.n_qubits,
            });
        }
        Ok(self
            .terms
            .keys()
            .all(|k| symplectic_overlap(&k.x, &k.z, &s.x, &s.z).is_multiple_of(2)))
    }

    /// `self·other − other·self`, pruned.
    pub fn commutator(&self, other: &PauliSum) -> Result<PauliSum, PauliError> {
        self.product(other)?.sub(&other.product(self)?)
    }

    /// Largest coefficient difference against `other`.
    pub fn max_abs_diff(&self, other: &PauliSum) -> Result<f64, PauliError> {
        self.check_register(other)?;
        let mut worst: f64 = 0.0;
        for (k, c) in &self.terms {
            worst = worst.max((c - other.coefficient(k)).norm());
        }
        for (k, c) in &other.terms {
            if !self.terms.contains_key(k) {
                worst = worst.max(c.norm());
            }
        }
        Ok(worst)
    }

    /// Terms sorted by their rendered letter pattern.
    pub fn sorted_terms(&self) -> Vec<(String, Complex64)> {
        let mut v: Vec<(String, Complex64)> = self.terms.iter().map(|(k, c)| (k.render(), *c)).collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v
    }
}

impl fmt::Display for PauliSum {
    /// `coeff * X0 Z3 Y5` lines joined by ` + `.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .sorted_terms()
            .into_iter()
            .map(|(p, c)| format!("({}{:+}i) * {}", c.re, c.im, p))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Parses the `X0 Z3 Y5` rendering (or `I`) back into a phase-free string.
pub fn parse_pattern(n_qubits: usize, text: &str) -> Result<PauliString, PauliError> {
    let text = text.trim();
    if text == "I" {
        return Ok(PauliString::identity(n_qubits));
    }
    let mut letters = Vec::new();
    for tok in text.split_whitespace() {
        let mut chars = tok.chars();
        let letter = match chars.next() {
            Some('X') => Letter::X,
            Some('Y') => Letter::Y,
            Some('Z') => Letter::Z,
            _ => return Err(PauliError::BadToken(tok.to_string())),
        };
        let q: usize = chars
            .as_str()
            .parse()
            .map_err(|_| PauliError::BadToken(tok.to_string()))?;
        letters.push((q, letter));
    }
    PauliString::from_letters(n_qubits, letters)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn x_times_z_is_minus_i_y() {
        let x = PauliString::single(1, 0, Letter::X).unwrap();
        let z = PauliString::single(1, 0, Letter::Z).unwrap();
        let p = x.multiply(&z).unwrap();
        assert_eq!(p.letter(0), Some(Letter::Y));
        assert_eq!(p.phase_power(), 3);
    }

    #[test]
    fn single_qubit_table() {
        use Letter::*;
        // (a, b, product letter, phase power)
        let table = [
            (X, Y, Some(Z), 1),
            (Y, X, Some(Z), 3),
            (Y, Z, Some(X), 1),
            (Z, Y, Some(X), 3),
            (Z, X, Some(Y), 1),
            (X, Z, Some(Y), 3),
            (X, X, None, 0),
            (Y, Y, None, 0),
            (Z, Z, None, 0),
        ];
        for (a, b, l, k) in table {
            let p = PauliString::single(1, 0, a)
                .unwrap()
                .multiply(&PauliString::single(1, 0, b).unwrap())
                .unwrap();
            assert_eq!(p.letter(0), l, "{a}{b}");
            assert_eq!(p.phase_power(), k, "{a}{b}");
        }
    }

    #[test]
    fn identity_is_neutral() {
        let s = PauliString::from_letters(5, [(0, Letter::X), (3, Letter::Y)])
            .unwrap()
            .with_phase(1);
        let id = PauliString::identity(5);
        assert_eq!(s.multiply(&id).unwrap(), s);
        assert_eq!(id.multiply(&s).unwrap(), s);
    }

    #[test]
    fn register_mismatch_is_an_error() {
        let a = PauliString::identity(2);
        let b = PauliString::identity(3);
        assert!(matches!(a.multiply(&b), Err(PauliError::RegisterMismatch { .. })));
        assert!(a.commutes(&b).is_err());
        assert!(PauliSum::zero(2).add(&PauliSum::zero(3)).is_err());
    }

    #[test]
    fn commutation_basics() {
        let x = PauliString::single(2, 0, Letter::X).unwrap();
        let z = PauliString::single(2, 0, Letter::Z).unwrap();
        let z1 = PauliString::single(2, 1, Letter::Z).unwrap();
        assert!(!x.commutes(&z).unwrap());
        assert!(x.commutes(&z1).unwrap());
    }

    #[test]
    fn adjoint_of_i_x() {
        let ix = PauliString::single(1, 0, Letter::X).unwrap().with_phase(1);
        let adj = ix.adjoint();
        assert_eq!(adj.phase_power(), 3);
        assert_eq!(adj.letter(0), Some(Letter::X));
    }

    #[test]
    fn lowering_times_raising_is_projector() {
        let x = PauliString::single(1, 0, Letter::X).unwrap();
        let y = PauliString::single(1, 0, Letter::Y).unwrap();
        let lower = PauliSum::from_weighted(&x, c(0.5, 0.0))
            .add(&PauliSum::from_weighted(&y, c(0.0, 0.5)))
            .unwrap();
        let raise = lower.adjoint();
        let prod = lower.product(&raise).unwrap();
        // A·A† = |0><0| = (1 + Z)/2
        let expected = PauliSum::from_weighted(&PauliString::identity(1), c(0.5, 0.0))
            .add(&PauliSum::from_weighted(&PauliString::single(1, 0, Letter::Z).unwrap(), c(0.5, 0.0)))
            .unwrap();
        assert!(prod.max_abs_diff(&expected).unwrap() < 1e-15);
    }

    #[test]
    fn prune_rejects_negative_tolerance() {
        assert!(matches!(
            PauliSum::zero(1).prune(-1.0),
            Err(PauliError::NegativeTolerance(_))
        ));
    }

    #[test]
    fn cancellation_removes_terms() {
        let x = PauliSum::from_string(&PauliString::single(2, 1, Letter::X).unwrap());
        let diff = x.sub(&x).unwrap();
        assert!(diff.is_empty());
    }

    #[test]
    fn render_and_parse_pattern() {
        let s = PauliString::from_letters(70, [(0, Letter::X), (3, Letter::Z), (65, Letter::Y)]).unwrap();
        assert_eq!(s.key().render(), "X0 Z3 Y65");
        assert_eq!(parse_pattern(70, "X0 Z3 Y65").unwrap(), s);
        assert_eq!(parse_pattern(4, "I").unwrap(), PauliString::identity(4));
        assert!(parse_pattern(4, "Q1").is_err());
    }

    #[test]
    fn weight_counts_letters() {
        let s = PauliString::from_letters(8, [(1, Letter::X), (2, Letter::Z), (3, Letter::Z), (4, Letter::Z), (5, Letter::X)])
            .unwrap();
        assert_eq!(s.weight(), 5);
    }
}
