//! Interaction-graph analysis and auxiliary-mode layout.
//!
//! Given a linear order of the modes (the backbone), every interaction edge
//! between backbone neighbours is local. Each remaining edge needs a coupling
//! between one auxiliary mode of each endpoint. A mode with `D_nl` non-local
//! edges gets `ceil(D_nl / 2)` auxiliary modes, since one auxiliary mode can
//! serve at most two couplings.
//!
//! Letter rules on a shared auxiliary mode (base frame, letters X or Y):
//!
//! ```text
//! both couplings start there, or both end there  -> orthogonal letters
//! one ends there and the other starts there      -> the same letter
//! ```
//!
//! Any other overlap between two couplings anticommutes on an even number of
//! sites, so these rules make every pair of couplings commute.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fermion::FermionHamiltonian;
use crate::jw::{ModeId, Placement};
use crate::pairing::{factorize, PairingError};
use crate::pauli::Letter;

/// Default bound on re-anchoring steps in [`break_loops`].
pub const DEFAULT_MAX_REANCHOR: usize = 256;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LayoutError {
    #[error("order is not a permutation of {0} modes")]
    BadOrder(usize),
    #[error("invalid edge ({0}, {1})")]
    BadEdge(usize, usize),
    #[error("mode {mode} needs {needed} coupling endpoints but its {aux} auxiliary modes hold at most {}", 2 * aux)]
    Infeasible { mode: usize, needed: usize, aux: usize },
    #[error("loop breaking did not converge within {0} re-anchoring steps")]
    ReanchorLimit(usize),
    #[error("gauge lists {given} angles but the layout has {expected} auxiliary modes")]
    GaugeLength { given: usize, expected: usize },
    #[error(transparent)]
    Pairing(#[from] PairingError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InteractionGraph {
    n_modes: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl InteractionGraph {
    pub fn new(n_modes: usize) -> Self {
        InteractionGraph {
            n_modes,
            edges: BTreeSet::new(),
        }
    }

    pub fn from_edges<I: IntoIterator<Item = (usize, usize)>>(n_modes: usize, edges: I) -> Result<Self, LayoutError> {
        let mut g = Self::new(n_modes);
        for (a, b) in edges {
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, a: usize, b: usize) -> Result<(), LayoutError> {
        if a == b || a >= self.n_modes || b >= self.n_modes {
            return Err(LayoutError::BadEdge(a, b));
        }
        self.edges.insert((a.min(b), a.max(b)));
        Ok(())
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    /// Edges as `(min, max)` pairs, ascending.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n_modes];
        for &(a, b) in &self.edges {
            d[a] += 1;
            d[b] += 1;
        }
        d
    }
}

/// The backbone: a permutation of the modes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearOrder {
    order: Vec<usize>,
    position: Vec<usize>,
}

impl LinearOrder {
    pub fn new(order: Vec<usize>) -> Result<Self, LayoutError> {
        let n = order.len();
        let mut position = vec![usize::MAX; n];
        for (i, &m) in order.iter().enumerate() {
            if m >= n || position[m] != usize::MAX {
                return Err(LayoutError::BadOrder(n));
            }
            position[m] = i;
        }
        Ok(LinearOrder { order, position })
    }

    pub fn natural(n_modes: usize) -> Self {
        Self::new((0..n_modes).collect()).expect("identity permutation")
    }

    /// Boustrophedon order over a row-major `rows × cols` grid: even rows
    /// left to right, odd rows right to left.
    pub fn snake(rows: usize, cols: usize) -> Self {
        let order = (0..rows)
            .flat_map(|r| {
                (0..cols).map(move |c| if r % 2 == 0 { r * cols + c } else { r * cols + cols - 1 - c })
            })
            .collect();
        Self::new(order).expect("snake covers every cell once")
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn modes(&self) -> &[usize] {
        &self.order
    }

    pub fn position(&self, mode: usize) -> usize {
        self.position[mode]
    }

    pub fn are_consecutive(&self, a: usize, b: usize) -> bool {
        self.position[a].abs_diff(self.position[b]) == 1
    }

    pub fn successor(&self, mode: usize) -> Option<usize> {
        self.order.get(self.position[mode] + 1).copied()
    }

    /// Consecutive pairs of the backbone.
    pub fn backbone_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.order.windows(2).map(|w| (w[0], w[1]))
    }

    pub fn backbone_degrees(&self) -> Vec<usize> {
        let n = self.order.len();
        (0..n)
            .map(|m| {
                let p = self.position[m];
                usize::from(p > 0) + usize::from(p + 1 < n)
            })
            .collect()
    }

    /// `(a, b)` reoriented so that `a` comes first in the backbone.
    pub fn orient(&self, a: usize, b: usize) -> (usize, usize) {
        if self.position[a] <= self.position[b] {
            (a, b)
        } else {
            (b, a)
        }
    }
}

/// One edge per distinct mode pair that ends up adjacent after pairing.
pub fn build_graph(h: &FermionHamiltonian, order: &LinearOrder) -> Result<InteractionGraph, LayoutError> {
    let mut g = InteractionGraph::new(h.n_modes());
    for t in h.terms() {
        for f in factorize(t, order, |_, _| true)? {
            for (a, b) in f.pairs {
                if a.mode != b.mode {
                    g.add_edge(a.mode, b.mode)?;
                }
            }
        }
    }
    Ok(g)
}

/// Per-mode count of interaction edges that are not backbone edges.
pub fn nonlocal_degree(g: &InteractionGraph, order: &LinearOrder) -> Vec<usize> {
    let mut d = vec![0; g.n_modes()];
    for (a, b) in nonlocal_edges(g, order) {
        d[a] += 1;
        d[b] += 1;
    }
    d
}

/// Non-backbone edges oriented along the order, sorted by positions.
pub fn nonlocal_edges(g: &InteractionGraph, order: &LinearOrder) -> Vec<(usize, usize)> {
    let mut v: Vec<(usize, usize)> = g
        .edges()
        .filter(|&(a, b)| !order.are_consecutive(a, b))
        .map(|(a, b)| order.orient(a, b))
        .collect();
    v.sort_by_key(|&(a, b)| (order.position(a), order.position(b)));
    v
}

/// Auxiliary counts per mode plus the interleaved qubit order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuxPlacement {
    aux_counts: Vec<usize>,
    placement: Placement,
}

impl AuxPlacement {
    pub fn with_counts(order: &LinearOrder, aux_counts: Vec<usize>) -> Self {
        let mut slots = Vec::with_capacity(order.len() + aux_counts.iter().sum::<usize>());
        for &m in order.modes() {
            slots.push(ModeId::Original(m));
            slots.extend((0..aux_counts[m]).map(|slot| ModeId::Auxiliary { host: m, slot }));
        }
        let placement = Placement::new(slots).expect("distinct slots");
        AuxPlacement { aux_counts, placement }
    }

    pub fn aux_counts(&self) -> &[usize] {
        &self.aux_counts
    }

    pub fn total_aux(&self) -> usize {
        self.aux_counts.iter().sum()
    }

    pub fn placement(&self) -> &Placement {
        &self.placement
    }

    pub fn n_qubits(&self) -> usize {
        self.placement.n_qubits()
    }

    /// Auxiliary modes in qubit order.
    pub fn aux_modes(&self) -> Vec<ModeId> {
        self.placement
            .slots()
            .iter()
            .copied()
            .filter(|m| m.is_auxiliary())
            .collect()
    }
}

/// `ceil(D_nl / 2)` auxiliary modes per mode.
pub fn place_aux(g: &InteractionGraph, order: &LinearOrder) -> AuxPlacement {
    let counts = nonlocal_degree(g, order).into_iter().map(|d| d.div_ceil(2)).collect();
    AuxPlacement::with_counts(order, counts)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Earlier,
    Later,
}

/// One end of a coupling: the auxiliary mode, its base-frame letter, and the
/// gauge angle of the letter actually used (`cos θ X − sin θ Y`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Endpoint {
    pub aux: ModeId,
    pub letter: Letter,
    pub theta: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Coupling {
    /// The interaction edge served, oriented along the backbone.
    pub logical: (usize, usize),
    /// Modes whose auxiliaries carry the coupling. Equals `logical` unless
    /// loop breaking moved the earlier end.
    pub anchor: (usize, usize),
    pub earlier: Endpoint,
    pub later: Endpoint,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CouplingAssignment {
    couplings: Vec<Coupling>,
    frames: BTreeMap<ModeId, f64>,
}

impl CouplingAssignment {
    pub fn couplings(&self) -> &[Coupling] {
        &self.couplings
    }

    pub fn is_empty(&self) -> bool {
        self.couplings.is_empty()
    }

    pub fn len(&self) -> usize {
        self.couplings.len()
    }

    /// Coupling serving the unordered pair `{a, b}`.
    pub fn coupling_for(&self, a: usize, b: usize) -> Option<&Coupling> {
        let key = (a.min(b), a.max(b));
        self.couplings
            .iter()
            .find(|c| (c.logical.0.min(c.logical.1), c.logical.0.max(c.logical.1)) == key)
    }

    pub fn frame(&self, aux: ModeId) -> f64 {
        self.frames.get(&aux).copied().unwrap_or(0.0)
    }

    /// Rotates each auxiliary mode's letter frame by the given angle (one per
    /// auxiliary mode, in qubit order). X becomes `cos θ X − sin θ Y`.
    pub fn with_gauge(&self, placement: &AuxPlacement, thetas: &[f64]) -> Result<Self, LayoutError> {
        let aux = placement.aux_modes();
        if aux.len() != thetas.len() {
            return Err(LayoutError::GaugeLength {
                given: thetas.len(),
                expected: aux.len(),
            });
        }
        let frames: BTreeMap<ModeId, f64> = aux.into_iter().zip(thetas.iter().copied()).collect();
        let mut out = self.clone();
        for c in &mut out.couplings {
            for e in [&mut c.earlier, &mut c.later] {
                e.theta = frames[&e.aux] + base_angle(e.letter);
            }
        }
        out.frames = frames;
        Ok(out)
    }

    /// Number of coupling endpoints on each auxiliary mode.
    pub fn slot_usage(&self) -> BTreeMap<ModeId, usize> {
        let mut m = BTreeMap::new();
        for c in &self.couplings {
            *m.entry(c.earlier.aux).or_insert(0) += 1;
            *m.entry(c.later.aux).or_insert(0) += 1;
        }
        m
    }
}

fn base_angle(letter: Letter) -> f64 {
    match letter {
        Letter::Y => -FRAC_PI_2,
        _ => 0.0,
    }
}

fn orthogonal(letter: Letter) -> Letter {
    match letter {
        Letter::X => Letter::Y,
        _ => Letter::X,
    }
}

/// Greedy slot and letter assignment for the given non-local edges.
pub fn assign_couplings(
    placement: &AuxPlacement,
    order: &LinearOrder,
    edges: &[(usize, usize)],
) -> Result<CouplingAssignment, LayoutError> {
    let anchored: Vec<((usize, usize), (usize, usize))> = edges
        .iter()
        .map(|&(a, b)| {
            let e = order.orient(a, b);
            (e, e)
        })
        .collect();
    assign_anchored(placement, order, anchored)
}

fn assign_anchored(
    placement: &AuxPlacement,
    order: &LinearOrder,
    mut couplings: Vec<((usize, usize), (usize, usize))>,
) -> Result<CouplingAssignment, LayoutError> {
    let counts = placement.aux_counts();
    let mut needed = vec![0usize; counts.len()];
    for (_, (a, b)) in &couplings {
        needed[*a] += 1;
        needed[*b] += 1;
    }
    if let Some(m) = (0..counts.len()).find(|&m| needed[m] > 2 * counts[m]) {
        return Err(LayoutError::Infeasible {
            mode: m,
            needed: needed[m],
            aux: counts[m],
        });
    }

    couplings.sort_by_key(|&(logical, (a, b))| (order.position(a), order.position(b), logical));
    let mut uses: HashMap<ModeId, Vec<(Role, Letter)>> = HashMap::new();
    let mut out = Vec::with_capacity(couplings.len());
    for (logical, (a, b)) in couplings {
        let free_slot = |host: usize, uses: &HashMap<ModeId, Vec<(Role, Letter)>>| {
            (0..counts[host])
                .map(|slot| ModeId::Auxiliary { host, slot })
                .find(|m| uses.get(m).is_none_or(|u| u.len() < 2))
        };
        let pa = free_slot(a, &uses).expect("capacity checked above");
        let pb = free_slot(b, &uses).expect("capacity checked above");
        let required = |aux: ModeId, role: Role, uses: &HashMap<ModeId, Vec<(Role, Letter)>>| {
            uses.get(&aux).and_then(|u| u.first()).map(|&(r, l)| if r == role { orthogonal(l) } else { l })
        };
        let req_a = required(pa, Role::Earlier, &uses);
        let req_b = required(pb, Role::Later, &uses);
        let letter_a = req_a.or(req_b).unwrap_or(Letter::X);
        let letter_b = req_b.unwrap_or(letter_a);
        uses.entry(pa).or_default().push((Role::Earlier, letter_a));
        uses.entry(pb).or_default().push((Role::Later, letter_b));
        out.push(Coupling {
            logical,
            anchor: (a, b),
            earlier: Endpoint {
                aux: pa,
                letter: letter_a,
                theta: base_angle(letter_a),
            },
            later: Endpoint {
                aux: pb,
                letter: letter_b,
                theta: base_angle(letter_b),
            },
        });
    }
    Ok(CouplingAssignment {
        couplings: out,
        frames: BTreeMap::new(),
    })
}

/// Indices of the edges on one cycle of a multigraph, if any.
pub fn find_cycle(anchors: &[(usize, usize)], n_modes: usize) -> Option<Vec<usize>> {
    let mut parent: Vec<usize> = (0..n_modes).collect();
    fn root(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut adjacency: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n_modes];
    for (idx, &(a, b)) in anchors.iter().enumerate() {
        let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
        if ra == rb {
            // path a -> b through the forest built so far, then back via idx
            let mut prev: Vec<Option<(usize, usize)>> = vec![None; n_modes];
            let mut seen = vec![false; n_modes];
            let mut queue = VecDeque::from([a]);
            seen[a] = true;
            while let Some(v) = queue.pop_front() {
                if v == b {
                    break;
                }
                for &(w, e) in &adjacency[v] {
                    if !seen[w] {
                        seen[w] = true;
                        prev[w] = Some((v, e));
                        queue.push_back(w);
                    }
                }
            }
            let mut cycle = vec![idx];
            let mut v = b;
            while let Some((u, e)) = prev[v] {
                cycle.push(e);
                v = u;
            }
            return Some(cycle);
        }
        parent[ra] = rb;
        adjacency[a].push((b, idx));
        adjacency[b].push((a, idx));
    }
    None
}

/// Couplings as edges between the auxiliary modes they occupy. Each vertex
/// has degree at most two, so components are chains or closed loops.
pub fn aux_links(assignment: &CouplingAssignment) -> (Vec<ModeId>, Vec<(usize, usize)>) {
    let mut ids: BTreeMap<ModeId, usize> = BTreeMap::new();
    for c in &assignment.couplings {
        for aux in [c.earlier.aux, c.later.aux] {
            let next = ids.len();
            ids.entry(aux).or_insert(next);
        }
    }
    let edges = assignment
        .couplings
        .iter()
        .map(|c| (ids[&c.earlier.aux], ids[&c.later.aux]))
        .collect();
    let mut vertices = vec![ModeId::Original(0); ids.len()];
    for (m, i) in ids {
        vertices[i] = m;
    }
    (vertices, edges)
}

/// Closed loops of couplings linked through shared auxiliary modes.
pub fn coupling_loop(assignment: &CouplingAssignment) -> Option<Vec<usize>> {
    let (vertices, edges) = aux_links(assignment);
    find_cycle(&edges, vertices.len())
}

/// Opens every closed loop of couplings. The smallest coupling of a loop
/// whose earlier end can move moves it to the backbone successor, on a new
/// auxiliary mode there; a coupling between backbone neighbours instead gets
/// a new auxiliary mode on its own earlier host. A fresh, singly used
/// auxiliary mode is a free chain end, so each step removes one loop.
pub fn break_loops(
    assignment: &CouplingAssignment,
    order: &LinearOrder,
    placement: &AuxPlacement,
    max_steps: usize,
) -> Result<(AuxPlacement, CouplingAssignment), LayoutError> {
    let mut out = assignment.clone();
    let mut counts = placement.aux_counts().to_vec();
    let mut steps = 0;
    while let Some(cycle) = coupling_loop(&out) {
        if steps == max_steps {
            return Err(LayoutError::ReanchorLimit(max_steps));
        }
        steps += 1;
        let key = |i: &usize| {
            let (a, b) = out.couplings[*i].anchor;
            (order.position(a), order.position(b))
        };
        let movable = |i: &usize| {
            let (a, b) = out.couplings[*i].anchor;
            order.position(a) + 1 < order.position(b)
        };
        let victim = cycle
            .iter()
            .copied()
            .filter(movable)
            .min_by_key(key)
            .or_else(|| cycle.iter().copied().min_by_key(key))
            .expect("a loop has couplings");
        let c = &mut out.couplings[victim];
        let (a, b) = c.anchor;
        let host = if order.position(a) + 1 < order.position(b) {
            order.successor(a).expect("earlier end is not last")
        } else {
            a
        };
        let aux = ModeId::Auxiliary { host, slot: counts[host] };
        counts[host] += 1;
        c.anchor = (host, b);
        c.earlier = Endpoint {
            aux,
            letter: Letter::X,
            theta: base_angle(Letter::X),
        };
    }
    if steps == 0 {
        return Ok((placement.clone(), out));
    }
    out.couplings
        .sort_by_key(|c| (order.position(c.anchor.0), order.position(c.anchor.1), c.logical));
    Ok((AuxPlacement::with_counts(order, counts), out))
}

#[derive(Debug, Clone, PartialEq)]
pub struct LayoutConfig {
    /// Per-auxiliary frame angles, in qubit order. `None` keeps X/Y letters.
    pub gauge: Option<Vec<f64>>,
    pub max_reanchor: usize,
}

impl Default for LayoutConfig {
    fn default() -> Self {
        LayoutConfig {
            gauge: None,
            max_reanchor: DEFAULT_MAX_REANCHOR,
        }
    }
}

/// Everything the auxiliary encoder needs to know about the register.
#[derive(Debug, Clone, PartialEq)]
pub struct Layout {
    pub order: LinearOrder,
    pub graph: InteractionGraph,
    pub placement: AuxPlacement,
    pub assignment: CouplingAssignment,
}

impl Layout {
    pub fn build(graph: InteractionGraph, order: LinearOrder, config: &LayoutConfig) -> Result<Self, LayoutError> {
        if graph.n_modes() != order.len() {
            return Err(LayoutError::BadOrder(graph.n_modes()));
        }
        let placement = place_aux(&graph, &order);
        let edges = nonlocal_edges(&graph, &order);
        let assignment = assign_couplings(&placement, &order, &edges)?;
        let (placement, mut assignment) = break_loops(&assignment, &order, &placement, config.max_reanchor)?;
        if let Some(g) = &config.gauge {
            assignment = assignment.with_gauge(&placement, g)?;
        }
        Ok(Layout {
            order,
            graph,
            placement,
            assignment,
        })
    }

    pub fn for_hamiltonian(h: &FermionHamiltonian, order: LinearOrder, config: &LayoutConfig) -> Result<Self, LayoutError> {
        let graph = build_graph(h, &order)?;
        Self::build(graph, order, config)
    }

    /// No auxiliary modes: the plain Jordan-Wigner register.
    pub fn plain(graph: InteractionGraph, order: LinearOrder) -> Self {
        let placement = AuxPlacement::with_counts(&order, vec![0; order.len()]);
        Layout {
            order,
            graph,
            placement,
            assignment: CouplingAssignment::default(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.placement.n_qubits()
    }

    pub fn n_modes(&self) -> usize {
        self.order.len()
    }

    pub fn register(&self) -> &Placement {
        self.placement.placement()
    }
}

/// Reshapes per-mode values of a row-major `rows × cols` lattice.
pub fn as_grid<T: Copy>(values: &[T], rows: usize, cols: usize) -> Vec<Vec<T>> {
    (0..rows).map(|r| values[r * cols..(r + 1) * cols].to_vec()).collect()
}
