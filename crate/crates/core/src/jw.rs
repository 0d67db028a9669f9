//! Jordan-Wigner encoding over an explicit qubit placement.
//!
//! A [`Placement`] lists which fermionic mode sits on each qubit. The plain
//! encoding uses the linear order of the original modes; the auxiliary
//! encoding uses the enlarged register where each host mode is followed by
//! its auxiliary modes. `a_j` maps to Z on every qubit before `j` times the
//! lowering operator `(X + iY)/2` on `j`.

use std::collections::HashMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fermion::{FermionHamiltonian, LadderOperator, LadderTerm};
use crate::pauli::{Letter, PauliError, PauliString, PauliSum};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum JwError {
    #[error("mode {0} has no qubit in the placement")]
    UnknownMode(ModeId),
    #[error("duplicate mode {0} in placement")]
    DuplicateMode(ModeId),
    #[error(transparent)]
    Pauli(#[from] PauliError),
}

/// A fermionic mode on the (possibly enlarged) register.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ModeId {
    /// A mode of the source Hamiltonian.
    Original(usize),
    /// The `slot`-th auxiliary mode attached to `host`.
    Auxiliary { host: usize, slot: usize },
}

impl ModeId {
    pub fn host(self) -> usize {
        match self {
            ModeId::Original(m) => m,
            ModeId::Auxiliary { host, .. } => host,
        }
    }

    pub fn is_auxiliary(self) -> bool {
        matches!(self, ModeId::Auxiliary { .. })
    }
}

impl From<usize> for ModeId {
    fn from(m: usize) -> Self {
        ModeId::Original(m)
    }
}

impl fmt::Display for ModeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModeId::Original(m) => write!(f, "{m}"),
            ModeId::Auxiliary { host, slot: 0 } => write!(f, "{host}'"),
            ModeId::Auxiliary { host, slot } => write!(f, "{host}'{slot}"),
        }
    }
}

/// Ordered list of qubit slots: `slots[q]` is the mode on qubit `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Placement {
    slots: Vec<ModeId>,
    index: HashMap<ModeId, usize>,
}

impl Placement {
    pub fn new(slots: Vec<ModeId>) -> Result<Self, JwError> {
        let mut index = HashMap::with_capacity(slots.len());
        for (q, m) in slots.iter().enumerate() {
            if index.insert(*m, q).is_some() {
                return Err(JwError::DuplicateMode(*m));
            }
        }
        Ok(Placement { slots, index })
    }

    /// Original modes only, in the given order.
    pub fn from_order(order: &[usize]) -> Result<Self, JwError> {
        Self::new(order.iter().map(|&m| ModeId::Original(m)).collect())
    }

    pub fn natural(n_modes: usize) -> Self {
        Self::new((0..n_modes).map(ModeId::Original).collect()).expect("distinct modes")
    }

    pub fn n_qubits(&self) -> usize {
        self.slots.len()
    }

    pub fn slots(&self) -> &[ModeId] {
        &self.slots
    }

    pub fn qubit(&self, mode: ModeId) -> Result<usize, JwError> {
        self.index.get(&mode).copied().ok_or(JwError::UnknownMode(mode))
    }

    pub fn mode_at(&self, qubit: usize) -> Option<ModeId> {
        self.slots.get(qubit).copied()
    }

    pub fn contains(&self, mode: ModeId) -> bool {
        self.index.contains_key(&mode)
    }

    /// Qubits holding auxiliary modes, ascending.
    pub fn auxiliary_qubits(&self) -> Vec<usize> {
        (0..self.slots.len()).filter(|&q| self.slots[q].is_auxiliary()).collect()
    }
}

/// Z on every qubit before `mode`.
pub fn jw_chain(mode: ModeId, placement: &Placement) -> Result<PauliString, JwError> {
    let q = placement.qubit(mode)?;
    Ok(PauliString::z_chain(placement.n_qubits(), 0..q)?)
}

/// `a_j` (or `a_j†`) as `½ Z…Z X_j ± (i/2) Z…Z Y_j`.
pub fn jw_ladder(mode: impl Into<ModeId>, placement: &Placement, creation: bool) -> Result<PauliSum, JwError> {
    let mode = mode.into();
    let q = placement.qubit(mode)?;
    let n = placement.n_qubits();
    let chain = jw_chain(mode, placement)?;
    let x = chain.multiply(&PauliString::single(n, q, Letter::X)?)?;
    let y = chain.multiply(&PauliString::single(n, q, Letter::Y)?)?;
    let y_coeff = if creation { -0.5 } else { 0.5 };
    Ok(PauliSum::from_weighted(&x, Complex64::new(0.5, 0.0))
        .add(&PauliSum::from_weighted(&y, Complex64::new(0.0, y_coeff)))?)
}

pub fn jw_operator(op: LadderOperator, placement: &Placement) -> Result<PauliSum, JwError> {
    jw_ladder(op.mode, placement, op.creation)
}

/// Ordered product of the encoded factors, scaled by the coefficient.
pub fn jw_encode_term(t: &LadderTerm, placement: &Placement) -> Result<PauliSum, JwError> {
    let mut acc = PauliSum::identity(placement.n_qubits());
    for op in &t.factors {
        acc = acc.product(&jw_operator(*op, placement)?)?;
    }
    Ok(acc.scale(t.coefficient))
}

pub fn jw_encode_hamiltonian(h: &FermionHamiltonian, placement: &Placement) -> Result<PauliSum, JwError> {
    let mut acc = PauliSum::zero(placement.n_qubits());
    for t in h.terms() {
        acc.add_assign(&jw_encode_term(t, placement)?)?;
    }
    Ok(acc)
}
