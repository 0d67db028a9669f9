//! JSON shapes written by the subcommands. Field order is fixed by the
//! struct definitions and every map is a `BTreeMap`, so output is stable.

use std::collections::BTreeMap;

use fermiloc::auxenc::{ClassStats, EncodedHamiltonian, TermClass};
use fermiloc::layout::{nonlocal_degree, Layout};
use fermiloc::pauli::PauliSum;
use fermiloc::verify::{CheckRecord, WeightRow};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub pauli: String,
    pub coeff: [f64; 2],
}

pub fn terms_of(p: &PauliSum) -> Vec<Term> {
    p.sorted_terms()
        .into_iter()
        .map(|(pauli, c)| Term {
            pauli,
            coeff: [c.re, c.im],
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilizerReport {
    pub edge: [usize; 2],
    pub anchor: [usize; 2],
    pub terms: Vec<Term>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EncodeReport {
    pub encoding: String,
    pub n_modes: usize,
    pub n_qubits: usize,
    /// Mode held by each qubit: `"3"` for a mode, `"3'"` / `"3'1"` for its
    /// auxiliary modes.
    pub mode_map: Vec<String>,
    pub stabilizers: Vec<StabilizerReport>,
    pub terms: Vec<Term>,
    pub stats: BTreeMap<TermClass, ClassStats>,
}

impl EncodeReport {
    pub fn new(encoding: &str, enc: &EncodedHamiltonian) -> Self {
        EncodeReport {
            encoding: encoding.to_string(),
            n_modes: enc.layout.n_modes(),
            n_qubits: enc.n_qubits(),
            mode_map: mode_map(&enc.layout),
            stabilizers: enc
                .stabilizers
                .iter()
                .map(|s| StabilizerReport {
                    edge: [s.edge.0, s.edge.1],
                    anchor: [s.anchor.0, s.anchor.1],
                    terms: terms_of(&s.operator),
                })
                .collect(),
            terms: terms_of(&enc.operator),
            stats: enc.stats(),
        }
    }
}

pub fn mode_map(layout: &Layout) -> Vec<String> {
    layout.register().slots().iter().map(|m| m.to_string()).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CouplingReport {
    pub edge: [usize; 2],
    pub anchor: [usize; 2],
    pub earlier: String,
    pub later: String,
    pub letters: [String; 2],
    pub theta: [f64; 2],
}

/// Per-mode values; also reshaped into `rows × cols` grids for lattices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayoutReport {
    pub n_modes: usize,
    pub n_qubits: usize,
    pub order: Vec<usize>,
    pub degree: Vec<usize>,
    pub backbone_degree: Vec<usize>,
    pub nonlocal_degree: Vec<usize>,
    pub n_aux: Vec<usize>,
    pub mode_map: Vec<String>,
    pub couplings: Vec<CouplingReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub grids: Option<Grids>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grids {
    pub degree: Vec<Vec<usize>>,
    pub backbone_degree: Vec<Vec<usize>>,
    pub nonlocal_degree: Vec<Vec<usize>>,
    pub n_aux: Vec<Vec<usize>>,
}

impl LayoutReport {
    pub fn new(layout: &Layout, grid: Option<(usize, usize)>) -> Self {
        // backbone edges absent from the interaction graph do not count
        let n = layout.n_modes();
        let mut backbone_degree = vec![0; n];
        for (a, b) in layout.order.backbone_edges() {
            if layout.graph.contains(a, b) {
                backbone_degree[a] += 1;
                backbone_degree[b] += 1;
            }
        }
        let degree = layout.graph.degrees();
        let nl = nonlocal_degree(&layout.graph, &layout.order);
        let n_aux = layout.placement.aux_counts().to_vec();
        let grids = grid.map(|(rows, cols)| {
            let g = |v: &[usize]| fermiloc::layout::as_grid(v, rows, cols);
            Grids {
                degree: g(&degree),
                backbone_degree: g(&backbone_degree),
                nonlocal_degree: g(&nl),
                n_aux: g(&n_aux),
            }
        });
        LayoutReport {
            n_modes: n,
            n_qubits: layout.n_qubits(),
            order: layout.order.modes().to_vec(),
            degree,
            backbone_degree,
            nonlocal_degree: nl,
            n_aux,
            mode_map: mode_map(layout),
            couplings: layout
                .assignment
                .couplings()
                .iter()
                .map(|c| CouplingReport {
                    edge: [c.logical.0, c.logical.1],
                    anchor: [c.anchor.0, c.anchor.1],
                    earlier: c.earlier.aux.to_string(),
                    later: c.later.aux.to_string(),
                    letters: [format!("{:?}", c.earlier.letter), format!("{:?}", c.later.letter)],
                    theta: [c.earlier.theta, c.later.theta],
                })
                .collect(),
            grids,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub passed: bool,
    pub checks: Vec<CheckRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsReport {
    pub n_modes: usize,
    pub jw: EncodingStats,
    pub aux: EncodingStats,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub scaling: Vec<WeightRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EncodingStats {
    pub n_qubits: usize,
    pub n_terms: usize,
    pub max_weight: usize,
    /// Histogram of per-term weights.
    pub histogram: BTreeMap<usize, usize>,
    pub classes: BTreeMap<TermClass, ClassStats>,
}

impl EncodingStats {
    pub fn new(enc: &EncodedHamiltonian) -> Self {
        let mut histogram = BTreeMap::new();
        for t in &enc.terms {
            *histogram.entry(t.weight).or_insert(0) += 1;
        }
        EncodingStats {
            n_qubits: enc.n_qubits(),
            n_terms: enc.operator.len(),
            max_weight: enc.operator.max_weight(),
            histogram,
            classes: enc.stats(),
        }
    }
}
