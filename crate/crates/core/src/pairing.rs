//! Splits ladder terms into adjacent operator pairs.
//!
//! Every parity-even term is rewritten, via sign-tracked reordering, as a sum
//! of products of adjacent pairs. The pairing is the cheapest perfect
//! matching of the term's operators: same-mode pairs cost nothing,
//! backbone-neighbour pairs are local, and non-local pairs need a coupling.
//! Terms are short, so all matchings are enumerated.

use num_complex::Complex64;
use thiserror::Error;

use crate::fermion::{normal_reorder, LadderOperator, LadderTerm};
use crate::layout::LinearOrder;

/// Longest term accepted (10395 matchings at 12 operators).
pub const MAX_TERM_LEN: usize = 12;

const MISSING_COUPLING_COST: u64 = 1_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PairingError {
    #[error("term has an odd number ({0}) of ladder operators")]
    OddParity(usize),
    #[error("term has {0} ladder operators; at most {max} supported", max = MAX_TERM_LEN)]
    TooLong(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairKind {
    SameMode,
    Local,
    NonLocal,
}

/// One product of adjacent pairs with its coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct Factorization {
    pub coefficient: Complex64,
    pub pairs: Vec<(LadderOperator, LadderOperator)>,
}

pub fn pair_kind(a: LadderOperator, b: LadderOperator, order: &LinearOrder) -> PairKind {
    if a.mode == b.mode {
        PairKind::SameMode
    } else if order.are_consecutive(a.mode, b.mode) {
        PairKind::Local
    } else {
        PairKind::NonLocal
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct Cost {
    total: u64,
    non_local: usize,
    distance: usize,
    inversions: usize,
}

/// Rewrites `t` as a sum of pair products. `has_coupling(p, q)` tells whether
/// a non-local pair can be made local; pairs without one are avoided when
/// some other matching exists.
pub fn factorize<F>(t: &LadderTerm, order: &LinearOrder, has_coupling: F) -> Result<Vec<Factorization>, PairingError>
where
    F: Fn(usize, usize) -> bool + Copy,
{
    let n = t.factors.len();
    if n % 2 == 1 {
        return Err(PairingError::OddParity(n));
    }
    if n > MAX_TERM_LEN {
        return Err(PairingError::TooLong(n));
    }
    if n == 0 {
        return Ok(vec![Factorization {
            coefficient: t.coefficient,
            pairs: Vec::new(),
        }]);
    }

    let matching = best_matching(&t.factors, order, has_coupling);
    let mut target = Vec::with_capacity(n);
    for (i, j) in &matching {
        target.push(*i);
        target.push(*j);
    }
    let reordered = normal_reorder(t, &target).expect("matching covers every factor once");
    let mut out = Vec::new();
    for r in reordered {
        if r.factors.len() == n {
            out.push(Factorization {
                coefficient: r.coefficient,
                pairs: r.factors.chunks(2).map(|c| (c[0], c[1])).collect(),
            });
        } else {
            out.extend(factorize(&r, order, has_coupling)?);
        }
    }
    Ok(out)
}

/// Pairs `(i, j)` with `i < j`, listed by ascending `i`.
fn best_matching<F>(ops: &[LadderOperator], order: &LinearOrder, has_coupling: F) -> Vec<(usize, usize)>
where
    F: Fn(usize, usize) -> bool,
{
    let mut best: Option<(Cost, Vec<(usize, usize)>)> = None;
    let mut used = vec![false; ops.len()];
    let mut current = Vec::with_capacity(ops.len() / 2);
    enumerate(ops, &mut used, &mut current, &mut |m| {
        let cost = matching_cost(ops, m, order, &has_coupling);
        if best.as_ref().is_none_or(|(c, _)| cost < *c) {
            best = Some((cost, m.to_vec()));
        }
    });
    best.map(|(_, m)| m).unwrap_or_default()
}

type Visitor<'a> = dyn FnMut(&[(usize, usize)]) + 'a;

fn enumerate(
    ops: &[LadderOperator],
    used: &mut [bool],
    current: &mut Vec<(usize, usize)>,
    visit: &mut Visitor,
) {
    let Some(i) = used.iter().position(|u| !u) else {
        visit(current);
        return;
    };
    used[i] = true;
    for j in i + 1..ops.len() {
        if used[j] {
            continue;
        }
        used[j] = true;
        current.push((i, j));
        enumerate(ops, used, current, visit);
        current.pop();
        used[j] = false;
    }
    used[i] = false;
}

fn matching_cost<F>(ops: &[LadderOperator], m: &[(usize, usize)], order: &LinearOrder, has_coupling: &F) -> Cost
where
    F: Fn(usize, usize) -> bool,
{
    let mut cost = Cost {
        total: 0,
        non_local: 0,
        distance: 0,
        inversions: 0,
    };
    for &(i, j) in m {
        let (a, b) = (ops[i], ops[j]);
        match pair_kind(a, b, order) {
            PairKind::SameMode => {}
            PairKind::Local => cost.total += 1,
            PairKind::NonLocal => {
                cost.non_local += 1;
                cost.total += if has_coupling(a.mode, b.mode) { 2 } else { MISSING_COUPLING_COST };
            }
        }
        cost.distance += order.position(a.mode).abs_diff(order.position(b.mode));
    }
    let target: Vec<usize> = m.iter().flat_map(|&(i, j)| [i, j]).collect();
    for x in 0..target.len() {
        for y in x + 1..target.len() {
            if target[x] > target[y] {
                cost.inversions += 1;
            }
        }
    }
    cost
}
