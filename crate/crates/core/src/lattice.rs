//! Model generators: the complete graph on four sites, open chains, and
//! spinless Hubbard-type hopping on open rectangular grids.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use thiserror::Error;

use crate::fermion::{FermionHamiltonian, LadderOperator, LadderTerm};
use crate::layout::LinearOrder;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LatticeError {
    #[error("lattice dimensions must be positive")]
    BadDims,
    #[error("unknown lattice `{0}` (expected k4, chain:N or hubbard:RxC)")]
    Unknown(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeKind {
    K4,
    Chain(usize),
    Hubbard { rows: usize, cols: usize },
}

impl LatticeKind {
    pub fn n_modes(self) -> usize {
        match self {
            LatticeKind::K4 => 4,
            LatticeKind::Chain(n) => n,
            LatticeKind::Hubbard { rows, cols } => rows * cols,
        }
    }

    /// Undirected edges, each once with the smaller mode first.
    pub fn edges(self) -> Vec<(usize, usize)> {
        match self {
            LatticeKind::K4 => vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
            LatticeKind::Chain(n) => (1..n).map(|i| (i - 1, i)).collect(),
            LatticeKind::Hubbard { rows, cols } => {
                let mut e = Vec::new();
                for r in 0..rows {
                    for c in 0..cols {
                        let m = r * cols + c;
                        if c + 1 < cols {
                            e.push((m, m + 1));
                        }
                        if r + 1 < rows {
                            e.push((m, m + cols));
                        }
                    }
                }
                e
            }
        }
    }

    /// Natural order for K4 and chains; row snake for grids.
    pub fn default_order(self) -> LinearOrder {
        match self {
            LatticeKind::Hubbard { rows, cols } => LinearOrder::snake(rows, cols),
            other => LinearOrder::natural(other.n_modes()),
        }
    }
}

impl FromStr for LatticeKind {
    type Err = LatticeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let unknown = || LatticeError::Unknown(s.to_string());
        let kind = match s.split_once(':') {
            None if s == "k4" => LatticeKind::K4,
            Some(("chain", n)) => LatticeKind::Chain(n.parse().map_err(|_| unknown())?),
            Some(("hubbard", dims)) => {
                let (r, c) = dims.split_once('x').ok_or_else(unknown)?;
                LatticeKind::Hubbard {
                    rows: r.parse().map_err(|_| unknown())?,
                    cols: c.parse().map_err(|_| unknown())?,
                }
            }
            _ => return Err(unknown()),
        };
        if kind.n_modes() == 0 {
            return Err(LatticeError::BadDims);
        }
        Ok(kind)
    }
}

impl fmt::Display for LatticeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeKind::K4 => write!(f, "k4"),
            LatticeKind::Chain(n) => write!(f, "chain:{n}"),
            LatticeKind::Hubbard { rows, cols } => write!(f, "hubbard:{rows}x{cols}"),
        }
    }
}

/// `−t Σ (a_i† a_j + a_j† a_i) + U Σ n_i n_i`, already Hermitian. The on-site
/// term is written as a four-operator product and omitted when `U = 0`.
pub fn generate_lattice(kind: LatticeKind, t: f64, u: f64) -> Result<FermionHamiltonian, LatticeError> {
    let n = kind.n_modes();
    if n == 0 {
        return Err(LatticeError::BadDims);
    }
    let mut terms = Vec::new();
    let hop = Complex64::new(-t, 0.0);
    for (i, j) in kind.edges() {
        terms.push(LadderTerm::hop(hop, i, j));
        terms.push(LadderTerm::hop(hop, j, i));
    }
    if u != 0.0 {
        for i in 0..n {
            terms.push(LadderTerm::real(
                u,
                vec![
                    LadderOperator::create(i),
                    LadderOperator::annihilate(i),
                    LadderOperator::create(i),
                    LadderOperator::annihilate(i),
                ],
            ));
        }
    }
    Ok(FermionHamiltonian::from_terms(n, terms).expect("generated modes are in range"))
}
