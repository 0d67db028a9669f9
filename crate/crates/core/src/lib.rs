//! Compiles fermionic Hamiltonians into qubit operators, either by plain
//! Jordan-Wigner or by a local encoding that adds auxiliary fermionic modes
//! and stabilizers so that every encoded term acts on a bounded neighbourhood
//! of the chosen linear order.

pub mod auxenc;
pub mod fermion;
pub mod format;
pub mod jw;
pub mod lattice;
pub mod layout;
pub mod pairing;
pub mod pauli;
pub mod verify;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Pauli(#[from] pauli::PauliError),
    #[error(transparent)]
    Fermion(#[from] fermion::FermionError),
    #[error(transparent)]
    Jw(#[from] jw::JwError),
    #[error(transparent)]
    Pairing(#[from] pairing::PairingError),
    #[error(transparent)]
    Layout(#[from] layout::LayoutError),
    #[error(transparent)]
    Aux(#[from] auxenc::AuxError),
    #[error(transparent)]
    Verify(#[from] verify::VerifyError),
    #[error(transparent)]
    Format(#[from] format::FormatError),
    #[error(transparent)]
    Lattice(#[from] lattice::LatticeError),
}
