//! Stabilizer construction and compilation of fermionic terms into local
//! Pauli operators on the enlarged register.
//!
//! Each coupling `(p, q)` gets a stabilizer `M = i·b_{p'}·c_{q'}` built from
//! two Bogoliubov-rotated Majorana operators on auxiliary modes. `M` commutes
//! with every ladder image of the original modes and equals +1 on the code
//! space, so `a_p† a_q` may be replaced by `a_p† M a_q`, whose Z chain
//! cancels between `p'` and `q`.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fermion::{FermionHamiltonian, LadderOperator, LadderTerm};
use crate::jw::{jw_chain, jw_ladder, JwError, ModeId, Placement};
use crate::layout::{Coupling, Layout, LayoutError, LinearOrder};
use crate::pairing::{factorize, PairingError};
use crate::pauli::{Letter, PauliError, PauliString, PauliSum};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AuxError {
    #[error("mode {0} is not an auxiliary mode")]
    NotAuxiliary(ModeId),
    #[error("no coupling assigned for non-local pair ({0}, {1})")]
    MissingCoupling(usize, usize),
    #[error("stabilizer for ({0}, {1}) is not a Hermitian involution")]
    BadStabilizer(usize, usize),
    #[error("term `{0}` has an odd number of ladder operators")]
    OddTerm(String),
    #[error(transparent)]
    Jw(#[from] JwError),
    #[error(transparent)]
    Pauli(#[from] PauliError),
    #[error(transparent)]
    Pairing(#[from] PairingError),
    #[error(transparent)]
    Layout(#[from] LayoutError),
}

/// `cos θ` and `sin θ`, exact at multiples of π/2.
fn snapped_cos_sin(theta: f64) -> (f64, f64) {
    let k = theta / FRAC_PI_2;
    if (k - k.round()).abs() < 1e-12 {
        match (k.round() as i64).rem_euclid(4) {
            0 => (1.0, 0.0),
            1 => (0.0, 1.0),
            2 => (-1.0, 0.0),
            _ => (0.0, -1.0),
        }
    } else {
        (theta.cos(), theta.sin())
    }
}

/// `Z…Z ⊗ (cos θ X − sin θ Y)` on `aux`: the image of
/// `α⁻¹ a + α a†` with `α = e^{−iθ}`.
pub fn bogoliubov_operator(aux: ModeId, theta: f64, placement: &Placement) -> Result<PauliSum, AuxError> {
    if !aux.is_auxiliary() {
        return Err(AuxError::NotAuxiliary(aux));
    }
    let q = placement.qubit(aux)?;
    let n = placement.n_qubits();
    let chain = jw_chain(aux, placement)?;
    let (c, s) = snapped_cos_sin(theta);
    let x = chain.multiply(&PauliString::single(n, q, Letter::X)?)?;
    let y = chain.multiply(&PauliString::single(n, q, Letter::Y)?)?;
    Ok(PauliSum::from_weighted(&x, Complex64::new(c, 0.0)).add(&PauliSum::from_weighted(&y, Complex64::new(-s, 0.0)))?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Stabilizer {
    /// Interaction edge served, oriented along the backbone.
    pub edge: (usize, usize),
    pub anchor: (usize, usize),
    pub earlier_qubit: usize,
    pub later_qubit: usize,
    /// Gauge angles of the endpoint letters (`cos θ X − sin θ Y`).
    pub earlier_theta: f64,
    pub later_theta: f64,
    /// Single string in the unrotated X/Y frame. Frame rotations are
    /// Z-generated unitaries on auxiliary qubits, so commutation checks on
    /// this string carry over to [`Stabilizer::operator`].
    pub string: PauliString,
    /// The stabilizer in the configured gauge.
    pub operator: PauliSum,
}

fn stabilizer_product(
    earlier: (ModeId, f64),
    later: (ModeId, f64),
    placement: &Placement,
) -> Result<PauliSum, AuxError> {
    let b = bogoliubov_operator(earlier.0, earlier.1 + FRAC_PI_2, placement)?;
    let c = bogoliubov_operator(later.0, later.1, placement)?;
    Ok(b.product(&c)?.scale(Complex64::new(0.0, 1.0)))
}

fn base_angle(letter: Letter) -> f64 {
    if letter == Letter::Y {
        -FRAC_PI_2
    } else {
        0.0
    }
}

/// `i · b_{p'}(θ_B + π/2) · b_{q'}(θ_C)`, which is
/// `B_{p'} Z…Z C_{q'}` with a `+` sign.
pub fn build_stabilizer(coupling: &Coupling, placement: &Placement) -> Result<Stabilizer, AuxError> {
    let (p, q) = coupling.logical;
    let e = &coupling.earlier;
    let l = &coupling.later;
    let base = stabilizer_product(
        (e.aux, base_angle(e.letter)),
        (l.aux, base_angle(l.letter)),
        placement,
    )?;
    let operator = stabilizer_product((e.aux, e.theta), (l.aux, l.theta), placement)?;
    let n = placement.n_qubits();
    let one = PauliSum::identity(n);
    let involutory = operator.product(&operator)?.max_abs_diff(&one)? < 1e-12;
    if base.len() != 1 || !operator.is_hermitian(1e-12) || !involutory {
        return Err(AuxError::BadStabilizer(p, q));
    }
    let (string, coeff) = base.strings().next().expect("one term");
    if (coeff - Complex64::new(1.0, 0.0)).norm() > 1e-12 {
        return Err(AuxError::BadStabilizer(p, q));
    }
    Ok(Stabilizer {
        edge: coupling.logical,
        anchor: coupling.anchor,
        earlier_qubit: placement.qubit(e.aux)?,
        later_qubit: placement.qubit(l.aux)?,
        earlier_theta: e.theta,
        later_theta: l.theta,
        string,
        operator,
    })
}

pub fn build_stabilizers(layout: &Layout) -> Result<Vec<Stabilizer>, AuxError> {
    layout
        .assignment
        .couplings()
        .iter()
        .map(|c| build_stabilizer(c, layout.register()))
        .collect()
}

/// Coarse classification of source terms for weight statistics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TermClass {
    Constant,
    Number,
    LocalHop,
    NonlocalHop,
    TwoBody,
    HigherBody,
}

impl TermClass {
    pub fn of(t: &LadderTerm, order: &LinearOrder) -> TermClass {
        match t.factors.as_slice() {
            [] => TermClass::Constant,
            [a, b] if a.mode == b.mode => TermClass::Number,
            [a, b] if order.are_consecutive(a.mode, b.mode) => TermClass::LocalHop,
            [_, _] => TermClass::NonlocalHop,
            f if f.len() <= 4 => TermClass::TwoBody,
            _ => TermClass::HigherBody,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EncodedTerm {
    pub class: TermClass,
    pub modes: Vec<usize>,
    /// Largest letter count among the term's Pauli strings.
    pub weight: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ClassStats {
    pub count: usize,
    pub max_weight: usize,
    pub mean_weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EncodedHamiltonian {
    pub operator: PauliSum,
    pub stabilizers: Vec<Stabilizer>,
    pub layout: Layout,
    pub terms: Vec<EncodedTerm>,
}

impl EncodedHamiltonian {
    pub fn n_qubits(&self) -> usize {
        self.layout.n_qubits()
    }

    pub fn stats(&self) -> BTreeMap<TermClass, ClassStats> {
        let mut out: BTreeMap<TermClass, ClassStats> = BTreeMap::new();
        for t in &self.terms {
            let s = out.entry(t.class).or_default();
            s.count += 1;
            s.max_weight = s.max_weight.max(t.weight);
            s.mean_weight += t.weight as f64;
        }
        for s in out.values_mut() {
            s.mean_weight /= s.count as f64;
        }
        out
    }

    /// Largest weight over terms of the given class (0 if none).
    pub fn max_weight_of(&self, class: TermClass) -> usize {
        self.terms.iter().filter(|t| t.class == class).map(|t| t.weight).max().unwrap_or(0)
    }
}

/// Compiles terms against a fixed layout and its stabilizers.
#[derive(Debug, Clone)]
pub struct AuxEncoder {
    layout: Layout,
    stabilizers: Vec<Stabilizer>,
    by_edge: HashMap<(usize, usize), usize>,
}

impl AuxEncoder {
    pub fn new(layout: Layout) -> Result<Self, AuxError> {
        let stabilizers = build_stabilizers(&layout)?;
        let by_edge = stabilizers
            .iter()
            .enumerate()
            .map(|(i, s)| ((s.edge.0.min(s.edge.1), s.edge.0.max(s.edge.1)), i))
            .collect();
        Ok(AuxEncoder {
            layout,
            stabilizers,
            by_edge,
        })
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn stabilizers(&self) -> &[Stabilizer] {
        &self.stabilizers
    }

    pub fn stabilizer_for(&self, p: usize, q: usize) -> Option<&Stabilizer> {
        self.by_edge.get(&(p.min(q), p.max(q))).map(|&i| &self.stabilizers[i])
    }

    fn ladder(&self, op: LadderOperator) -> Result<PauliSum, AuxError> {
        Ok(jw_ladder(op.mode, self.layout.register(), op.creation)?)
    }

    /// Image of the product `a · b` of two ladder operators. Non-local pairs
    /// get the coupling's stabilizer inserted between them.
    pub fn encode_pair(&self, a: LadderOperator, b: LadderOperator) -> Result<PauliSum, AuxError> {
        let left = self.ladder(a)?;
        let right = self.ladder(b)?;
        if a.mode == b.mode || self.layout.order.are_consecutive(a.mode, b.mode) {
            return Ok(left.product(&right)?);
        }
        let s = self
            .stabilizer_for(a.mode, b.mode)
            .ok_or(AuxError::MissingCoupling(a.mode, b.mode))?;
        Ok(left.product(&s.operator)?.product(&right)?)
    }

    /// `coeff · a_p† a_q` (a single directed term; `p = q` gives a number
    /// operator).
    pub fn encode_hop(&self, p: usize, q: usize, coeff: Complex64) -> Result<PauliSum, AuxError> {
        Ok(self
            .encode_pair(LadderOperator::create(p), LadderOperator::annihilate(q))?
            .scale(coeff))
    }

    /// Regroups the term into adjacent pairs (fewest stabilizer insertions)
    /// and multiplies the pair images.
    pub fn encode_term(&self, t: &LadderTerm) -> Result<PauliSum, AuxError> {
        if !t.is_parity_even() {
            return Err(AuxError::OddTerm(t.to_string()));
        }
        let n = self.layout.n_qubits();
        let mut acc = PauliSum::zero(n);
        let has = |p: usize, q: usize| self.by_edge.contains_key(&(p.min(q), p.max(q)));
        for f in factorize(t, &self.layout.order, has)? {
            let mut prod = PauliSum::identity(n);
            for (a, b) in f.pairs {
                prod = prod.product(&self.encode_pair(a, b)?)?;
            }
            acc.add_assign(&prod.scale(f.coefficient))?;
        }
        Ok(acc)
    }

    pub fn encode_hamiltonian(&self, h: &FermionHamiltonian) -> Result<EncodedHamiltonian, AuxError> {
        let mut operator = PauliSum::zero(self.layout.n_qubits());
        let mut terms = Vec::with_capacity(h.terms().len());
        for t in h.terms() {
            let image = self.encode_term(t)?;
            terms.push(EncodedTerm {
                class: TermClass::of(t, &self.layout.order),
                modes: t.factors.iter().map(|f| f.mode).collect(),
                weight: image.max_weight(),
            });
            operator.add_assign(&image)?;
        }
        Ok(EncodedHamiltonian {
            operator,
            stabilizers: self.stabilizers.clone(),
            layout: self.layout.clone(),
            terms,
        })
    }
}

/// Builds the layout from `h` and encodes it with auxiliary modes.
pub fn encode_aux(
    h: &FermionHamiltonian,
    order: LinearOrder,
    config: &crate::layout::LayoutConfig,
) -> Result<EncodedHamiltonian, AuxError> {
    let layout = Layout::for_hamiltonian(h, order, config)?;
    AuxEncoder::new(layout)?.encode_hamiltonian(h)
}

/// Plain Jordan-Wigner along `order` (no auxiliary modes), in the same form.
pub fn encode_jw(h: &FermionHamiltonian, order: LinearOrder) -> Result<EncodedHamiltonian, AuxError> {
    let graph = crate::layout::build_graph(h, &order)?;
    let layout = Layout::plain(graph, order);
    let mut operator = PauliSum::zero(layout.n_qubits());
    let mut terms = Vec::with_capacity(h.terms().len());
    for t in h.terms() {
        let image = crate::jw::jw_encode_term(t, layout.register())?;
        terms.push(EncodedTerm {
            class: TermClass::of(t, &layout.order),
            modes: t.factors.iter().map(|f| f.mode).collect(),
            weight: image.max_weight(),
        });
        operator.add_assign(&image)?;
    }
    Ok(EncodedHamiltonian {
        operator,
        stabilizers: Vec::new(),
        layout,
        terms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layout::{InteractionGraph, LayoutConfig};
    use crate::pauli::parse_pattern;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn k4_encoder() -> AuxEncoder {
        let g = InteractionGraph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        AuxEncoder::new(Layout::build(g, LinearOrder::natural(4), &LayoutConfig::default()).unwrap()).unwrap()
    }

    #[test]
    fn bogoliubov_at_zero_and_minus_half_pi() {
        let p = Placement::new(vec![ModeId::Original(0), ModeId::Auxiliary { host: 0, slot: 0 }]).unwrap();
        let aux = ModeId::Auxiliary { host: 0, slot: 0 };
        let x = bogoliubov_operator(aux, 0.0, &p).unwrap();
        assert_eq!(x, PauliSum::from_string(&parse_pattern(2, "Z0 X1").unwrap()));
        let y = bogoliubov_operator(aux, -FRAC_PI_2, &p).unwrap();
        assert_eq!(y, PauliSum::from_string(&parse_pattern(2, "Z0 Y1").unwrap()));
    }

    #[test]
    fn bogoliubov_rejects_original_modes() {
        let p = Placement::natural(2);
        assert!(matches!(
            bogoliubov_operator(ModeId::Original(1), 0.0, &p),
            Err(AuxError::NotAuxiliary(_))
        ));
    }

    #[test]
    fn k4_stabilizer_patterns() {
        let enc = k4_encoder();
        let rendered: Vec<(String, u8)> = enc
            .stabilizers()
            .iter()
            .map(|s| (s.string.key().render(), s.string.phase_power()))
            .collect();
        assert_eq!(
            rendered,
            vec![
                ("X1 Z2 Z3 Z4 X5".to_string(), 0),
                ("Y1 Z2 Z3 Z4 Z5 Z6 Y7".to_string(), 0),
                ("X3 Z4 Z5 Z6 X7".to_string(), 0),
            ]
        );
    }

    #[test]
    fn local_hop_is_plain_jw() {
        let enc = k4_encoder();
        let h = enc.encode_hop(0, 1, c(1.0, 0.0)).unwrap();
        let expected = crate::jw::jw_encode_term(&LadderTerm::hop(c(1.0, 0.0), 0, 1), enc.layout().register()).unwrap();
        assert_eq!(h, expected);
        assert_eq!(h.max_weight(), 3);
    }

    #[test]
    fn nonlocal_hop_matches_table_row() {
        // a_0† M a_2 = A†_0 ⊗ (−iY)_{0'} ⊗ A_2 ⊗ X_{2'}
        let enc = k4_encoder();
        let got = enc.encode_hop(0, 2, c(1.0, 0.0)).unwrap();
        let n = 8;
        let a_dag = [("X0", c(0.5, 0.0)), ("Y0", c(0.0, -0.5))];
        let a = [("X4", c(0.5, 0.0)), ("Y4", c(0.0, 0.5))];
        let mut expected = PauliSum::zero(n);
        for (p1, c1) in a_dag {
            for (p2, c2) in a {
                let s = parse_pattern(n, &format!("{p1} Y1 {p2} X5")).unwrap();
                expected
                    .add_assign(&PauliSum::from_weighted(&s, c1 * c2 * c(0.0, -1.0)))
                    .unwrap();
            }
        }
        assert!(got.max_abs_diff(&expected).unwrap() < 1e-12);
        assert_eq!(got.max_weight(), 4);
    }

    #[test]
    fn odd_term_rejected() {
        let enc = k4_encoder();
        let t = LadderTerm::real(1.0, vec![LadderOperator::create(0)]);
        assert!(matches!(enc.encode_term(&t), Err(AuxError::OddTerm(_))));
    }

    #[test]
    fn missing_coupling_reported() {
        let g = InteractionGraph::from_edges(3, [(0, 1)]).unwrap();
        let enc = AuxEncoder::new(Layout::build(g, LinearOrder::natural(3), &LayoutConfig::default()).unwrap()).unwrap();
        assert_eq!(enc.encode_hop(0, 2, c(1.0, 0.0)), Err(AuxError::MissingCoupling(0, 2)));
    }

    #[test]
    fn number_product_is_product_of_projectors() {
        let enc = k4_encoder();
        let t = LadderTerm::real(
            1.0,
            vec![
                LadderOperator::create(0),
                LadderOperator::annihilate(0),
                LadderOperator::create(3),
                LadderOperator::annihilate(3),
            ],
        );
        let got = enc.encode_term(&t).unwrap();
        let n0 = enc.encode_hop(0, 0, c(1.0, 0.0)).unwrap();
        let n3 = enc.encode_hop(3, 3, c(1.0, 0.0)).unwrap();
        assert!(got.max_abs_diff(&n0.product(&n3).unwrap()).unwrap() < 1e-15);
    }

    #[test]
    fn chain_matches_plain_jw() {
        let h = FermionHamiltonian::from_terms(
            3,
            vec![
                LadderTerm::hop(c(-1.0, 0.0), 0, 1),
                LadderTerm::hop(c(-1.0, 0.0), 1, 0),
                LadderTerm::hop(c(-1.0, 0.0), 1, 2),
                LadderTerm::hop(c(-1.0, 0.0), 2, 1),
            ],
        )
        .unwrap();
        let aux = encode_aux(&h, LinearOrder::natural(3), &LayoutConfig::default()).unwrap();
        let jw = encode_jw(&h, LinearOrder::natural(3)).unwrap();
        assert_eq!(aux.operator, jw.operator);
        assert!(aux.stabilizers.is_empty());
    }

    #[test]
    fn gauged_stabilizer_is_rotated() {
        let g = InteractionGraph::from_edges(3, [(0, 2)]).unwrap();
        let cfg = LayoutConfig {
            gauge: Some(vec![std::f64::consts::FRAC_PI_4, 0.0]),
            ..LayoutConfig::default()
        };
        let enc = AuxEncoder::new(Layout::build(g, LinearOrder::natural(3), &cfg).unwrap()).unwrap();
        let s = &enc.stabilizers()[0];
        assert_eq!(s.operator.len(), 2);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let xs = parse_pattern(5, "X1 Z2 Z3 X4").unwrap();
        let ys = parse_pattern(5, "Y1 Z2 Z3 X4").unwrap();
        assert!((s.operator.coefficient_of(&xs) - c(r, 0.0)).norm() < 1e-12);
        assert!((s.operator.coefficient_of(&ys) - c(-r, 0.0)).norm() < 1e-12);
    }
}
