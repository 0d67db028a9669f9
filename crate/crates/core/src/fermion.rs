//! Second-quantized source model and the brute-force Fock-space oracle.
//!
//! Basis index convention: the occupation bitstring `n_0 … n_{N-1}` is read
//! with mode 0 as the least significant bit. Basis states are
//! `(a_0†)^{n_0} (a_1†)^{n_1} … |vac⟩`, so an annihilator on mode `j` picks up
//! `(-1)^{n_0 + … + n_{j-1}}`.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

/// Largest mode count the dense oracle accepts by default.
pub const DEFAULT_ORACLE_LIMIT: usize = 12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FermionError {
    #[error("mode {mode} out of range for {n_modes} modes")]
    ModeOutOfRange { mode: usize, n_modes: usize },
    #[error("{n_modes} modes exceed the oracle limit of {limit}")]
    OracleLimit { n_modes: usize, limit: usize },
    #[error("target order is not a permutation of {len} factors")]
    BadPermutation { len: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LadderOperator {
    pub mode: usize,
    pub creation: bool,
}

impl LadderOperator {
    pub fn create(mode: usize) -> Self {
        LadderOperator { mode, creation: true }
    }

    pub fn annihilate(mode: usize) -> Self {
        LadderOperator { mode, creation: false }
    }

    pub fn adjoint(self) -> Self {
        LadderOperator {
            creation: !self.creation,
            ..self
        }
    }
}

impl fmt::Display for LadderOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.creation {
            write!(f, "{}^", self.mode)
        } else {
            write!(f, "{}", self.mode)
        }
    }
}

/// `coefficient × factors[0] · factors[1] · …` (rightmost acts first).
#[derive(Debug, Clone, PartialEq)]
pub struct LadderTerm {
    pub coefficient: Complex64,
    pub factors: Vec<LadderOperator>,
}

impl LadderTerm {
    pub fn new(coefficient: Complex64, factors: Vec<LadderOperator>) -> Self {
        LadderTerm { coefficient, factors }
    }

    pub fn real(coefficient: f64, factors: Vec<LadderOperator>) -> Self {
        Self::new(Complex64::new(coefficient, 0.0), factors)
    }

    /// `coeff · a_p† a_q`
    pub fn hop(coefficient: Complex64, p: usize, q: usize) -> Self {
        Self::new(coefficient, vec![LadderOperator::create(p), LadderOperator::annihilate(q)])
    }

    pub fn number(coefficient: Complex64, k: usize) -> Self {
        Self::hop(coefficient, k, k)
    }

    pub fn adjoint(&self) -> Self {
        LadderTerm {
            coefficient: self.coefficient.conj(),
            factors: self.factors.iter().rev().map(|op| op.adjoint()).collect(),
        }
    }

    pub fn is_parity_even(&self) -> bool {
        self.factors.len().is_multiple_of(2)
    }

    pub fn max_mode(&self) -> Option<usize> {
        self.factors.iter().map(|f| f.mode).max()
    }
}

impl fmt::Display for LadderTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}{:+}i)", self.coefficient.re, self.coefficient.im)?;
        for op in &self.factors {
            write!(f, " {op}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FermionHamiltonian {
    n_modes: usize,
    terms: Vec<LadderTerm>,
}

impl FermionHamiltonian {
    pub fn new(n_modes: usize) -> Self {
        FermionHamiltonian {
            n_modes,
            terms: Vec::new(),
        }
    }

    pub fn from_terms(n_modes: usize, terms: Vec<LadderTerm>) -> Result<Self, FermionError> {
        let mut h = Self::new(n_modes);
        for t in terms {
            h.push(t)?;
        }
        Ok(h)
    }

    pub fn push(&mut self, term: LadderTerm) -> Result<(), FermionError> {
        if let Some(op) = term.factors.iter().find(|op| op.mode >= self.n_modes) {
            return Err(FermionError::ModeOutOfRange {
                mode: op.mode,
                n_modes: self.n_modes,
            });
        }
        self.terms.push(term);
        Ok(())
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn terms(&self) -> &[LadderTerm] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Occupation bitstring, mode 0 in the least significant bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FockState {
    n_modes: usize,
    bits: u64,
}

impl FockState {
    pub fn new(n_modes: usize, bits: u64) -> Self {
        assert!(n_modes <= 64, "at most 64 modes");
        let mask = if n_modes == 64 { u64::MAX } else { (1u64 << n_modes) - 1 };
        FockState {
            n_modes,
            bits: bits & mask,
        }
    }

    pub fn vacuum(n_modes: usize) -> Self {
        Self::new(n_modes, 0)
    }

    pub fn from_occupations(occ: &[bool]) -> Self {
        let bits = occ
            .iter()
            .enumerate()
            .filter(|(_, &o)| o)
            .fold(0u64, |acc, (i, _)| acc | 1 << i);
        Self::new(occ.len(), bits)
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn index(&self) -> usize {
        self.bits as usize
    }

    pub fn occupied(&self, mode: usize) -> bool {
        self.bits >> mode & 1 == 1
    }

    pub fn occupied_modes(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n_modes).filter(|&m| self.occupied(m))
    }

    pub fn particle_count(&self) -> u32 {
        self.bits.count_ones()
    }

    /// Γ_j = number of occupied modes below `mode`.
    pub fn prefix_parity(&self, mode: usize) -> u32 {
        (self.bits & ((1u64 << mode) - 1)).count_ones()
    }
}

impl fmt::Display for FockState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|")?;
        for m in 0..self.n_modes {
            if m > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", self.occupied(m) as u8)?;
        }
        write!(f, "⟩")
    }
}

/// Applies one ladder operator. `None` when the result vanishes.
pub fn apply_ladder(op: LadderOperator, s: FockState) -> Result<Option<(i8, FockState)>, FermionError> {
    if op.mode >= s.n_modes {
        return Err(FermionError::ModeOutOfRange {
            mode: op.mode,
            n_modes: s.n_modes,
        });
    }
    if s.occupied(op.mode) == op.creation {
        return Ok(None);
    }
    let sign = if s.prefix_parity(op.mode).is_multiple_of(2) { 1 } else { -1 };
    Ok(Some((sign, FockState::new(s.n_modes, s.bits ^ (1 << op.mode)))))
}

/// Applies a full term right-to-left.
pub fn apply_term(t: &LadderTerm, s: FockState) -> Result<Option<(Complex64, FockState)>, FermionError> {
    let mut state = s;
    let mut coeff = t.coefficient;
    for op in t.factors.iter().rev() {
        match apply_ladder(*op, state)? {
            Some((sign, next)) => {
                coeff *= sign as f64;
                state = next;
            }
            None => return Ok(None),
        }
    }
    Ok(Some((coeff, state)))
}

/// Sparse matrix over the occupation basis, keyed by `(row, col)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockMatrix {
    n_modes: usize,
    entries: BTreeMap<(usize, usize), Complex64>,
}

impl FockMatrix {
    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn dim(&self) -> usize {
        1 << self.n_modes
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries.get(&(row, col)).copied().unwrap_or_default()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &Complex64)> {
        self.entries.iter()
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let d = self.dim();
        let mut m = DMatrix::zeros(d, d);
        for (&(r, c), v) in &self.entries {
            m[(r, c)] = *v;
        }
        m
    }
}

/// Builds `⟨m|H|n⟩` by chaining [`apply_ladder`] over every basis column.
pub fn build_fock_matrix(h: &FermionHamiltonian, limit: usize) -> Result<FockMatrix, FermionError> {
    if h.n_modes > limit {
        return Err(FermionError::OracleLimit {
            n_modes: h.n_modes,
            limit,
        });
    }
    let mut entries: BTreeMap<(usize, usize), Complex64> = BTreeMap::new();
    for col in 0..(1usize << h.n_modes) {
        let s = FockState::new(h.n_modes, col as u64);
        for t in &h.terms {
            if let Some((c, out)) = apply_term(t, s)? {
                *entries.entry((out.index(), col)).or_default() += c;
            }
        }
    }
    entries.retain(|_, v| v.norm() > 0.0);
    Ok(FockMatrix {
        n_modes: h.n_modes,
        entries,
    })
}

/// Reorders `t` so that factor `target[k]` of the input ends up at position
/// `k`. Each transposition of distinct operators flips the sign; passing
/// `a_j` over `a_j†` (or back) emits the contraction term as well.
pub fn normal_reorder(t: &LadderTerm, target: &[usize]) -> Result<Vec<LadderTerm>, FermionError> {
    let n = t.factors.len();
    let mut rank = vec![usize::MAX; n];
    if target.len() != n {
        return Err(FermionError::BadPermutation { len: n });
    }
    for (k, &i) in target.iter().enumerate() {
        if i >= n || rank[i] != usize::MAX {
            return Err(FermionError::BadPermutation { len: n });
        }
        rank[i] = k;
    }
    let ops: Vec<(LadderOperator, usize)> = t.factors.iter().copied().zip(rank).collect();
    let mut out = Vec::new();
    reorder_ranked(t.coefficient, ops, &mut out);
    Ok(out)
}

fn reorder_ranked(coeff: Complex64, mut ops: Vec<(LadderOperator, usize)>, out: &mut Vec<LadderTerm>) {
    let Some(i) = (0..ops.len().saturating_sub(1)).find(|&i| ops[i].1 > ops[i + 1].1) else {
        out.push(LadderTerm::new(coeff, ops.into_iter().map(|(op, _)| op).collect()));
        return;
    };
    let (a, b) = (ops[i].0, ops[i + 1].0);
    if a.mode == b.mode && a.creation != b.creation {
        // a b = δ - b a
        let mut contracted = ops.clone();
        contracted.drain(i..=i + 1);
        reorder_ranked(coeff, contracted, out);
    }
    ops.swap(i, i + 1);
    reorder_ranked(-coeff, ops, out);
}

fn canonical_rank(op: &LadderOperator) -> (bool, i64) {
    // creators ascending, then annihilators descending
    if op.creation {
        (false, op.mode as i64)
    } else {
        (true, -(op.mode as i64))
    }
}

/// Canonical normal order: creators (ascending mode) left of annihilators
/// (descending mode). Vanishing terms (repeated operators) are dropped and
/// identical factor sequences merged.
pub fn normal_order(t: &LadderTerm) -> Vec<LadderTerm> {
    let mut target: Vec<usize> = (0..t.factors.len()).collect();
    target.sort_by_key(|&i| canonical_rank(&t.factors[i]));
    // contraction terms keep their ranks, so every output is already canonical
    let reordered = normal_reorder(t, &target).expect("sorted indices form a permutation");
    merge_terms(reordered)
}

fn merge_terms<I: IntoIterator<Item = LadderTerm>>(terms: I) -> Vec<LadderTerm> {
    let mut acc: BTreeMap<Vec<LadderOperator>, Complex64> = BTreeMap::new();
    for t in terms {
        if t.factors.windows(2).any(|w| w[0] == w[1]) {
            continue;
        }
        *acc.entry(t.factors).or_default() += t.coefficient;
    }
    acc.into_iter()
        .filter(|(_, c)| c.norm() > 1e-14)
        .map(|(f, c)| LadderTerm::new(c, f))
        .collect()
}

fn same_canonical(a: &[LadderTerm], b: &[LadderTerm], tol: f64) -> bool {
    a.len() == b.len()
        && a
            .iter()
            .zip(b)
            .all(|(x, y)| x.factors == y.factors && (x.coefficient - y.coefficient).norm() <= tol)
}

/// Appends the adjoint of every term whose adjoint is not already present
/// (compared in canonical normal order). Self-adjoint terms are left alone.
pub fn hermitian_closure(h: &FermionHamiltonian) -> FermionHamiltonian {
    const TOL: f64 = 1e-12;
    let mut out = h.clone();
    let mut canon: Vec<Vec<LadderTerm>> = h.terms.iter().map(normal_order).collect();
    for t in &h.terms {
        let adj = t.adjoint();
        let adj_canon = normal_order(&adj);
        if canon.iter().any(|c| same_canonical(c, &adj_canon, TOL)) {
            continue;
        }
        canon.push(adj_canon);
        out.terms.push(adj);
    }
    out
}
