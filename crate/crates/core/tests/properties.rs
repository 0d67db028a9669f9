use fermiloc::auxenc::{encode_aux, encode_jw, AuxEncoder};
use fermiloc::fermion::{
    build_fock_matrix, hermitian_closure, normal_order, normal_reorder, FermionHamiltonian, LadderOperator,
    LadderTerm,
};
use fermiloc::layout::{coupling_loop, InteractionGraph, Layout, LayoutConfig, LinearOrder};
use fermiloc::pauli::{Letter, PauliString, PauliSum};
use fermiloc::verify::{algebra_check, equivalence_check, spectrum_distance, vacuum_state, stabilizer_deviation};
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Dense matrix by Kronecker products; qubit 0 is the least significant bit.
fn dense(s: &PauliString) -> DMatrix<Complex64> {
    let i2 = DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
    let mut m = DMatrix::from_element(1, 1, s.phase_factor());
    for q in 0..s.n_qubits() {
        let single = match s.letter(q) {
            None => i2.clone(),
            Some(Letter::X) => DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]),
            Some(Letter::Y) => DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]),
            Some(Letter::Z) => DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]),
        };
        m = single.kronecker(&m);
    }
    m
}

fn dense_sum(p: &PauliSum) -> DMatrix<Complex64> {
    let d = 1 << p.n_qubits();
    let mut m = DMatrix::zeros(d, d);
    for (s, coeff) in p.strings() {
        m += dense(&s) * coeff;
    }
    m
}

fn max_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    (a - b).iter().map(|x| x.norm()).fold(0.0, f64::max)
}

fn letter() -> impl Strategy<Value = Option<Letter>> {
    prop_oneof![Just(None), Just(Some(Letter::X)), Just(Some(Letter::Y)), Just(Some(Letter::Z))]
}

fn pauli(n: usize) -> impl Strategy<Value = PauliString> {
    (prop::collection::vec(letter(), n), 0u8..4).prop_map(move |(ls, ph)| {
        let letters = ls.into_iter().enumerate().filter_map(|(q, l)| l.map(|l| (q, l)));
        PauliString::from_letters(n, letters).unwrap().with_phase(ph)
    })
}

fn pauli_sum(n: usize) -> impl Strategy<Value = PauliSum> {
    prop::collection::vec((pauli(n), -2.0f64..2.0, -2.0f64..2.0), 1..5).prop_map(move |terms| {
        let mut s = PauliSum::zero(n);
        for (p, re, im) in terms {
            s.add_assign(&PauliSum::from_weighted(&p, c(re, im))).unwrap();
        }
        s
    })
}

fn ladder(n_modes: usize) -> impl Strategy<Value = LadderOperator> {
    (0..n_modes, any::<bool>()).prop_map(|(mode, creation)| LadderOperator { mode, creation })
}

fn term(n_modes: usize, len: usize) -> impl Strategy<Value = LadderTerm> {
    (prop::collection::vec(ladder(n_modes), len), -1.0f64..1.0, -1.0f64..1.0)
        .prop_map(|(f, re, im)| LadderTerm::new(c(re, im), f))
}

/// Random connected-ish graphs as edge subsets of the complete graph.
fn graph(max_modes: usize) -> impl Strategy<Value = InteractionGraph> {
    (3..=max_modes).prop_flat_map(|n| {
        let all: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        prop::sample::subsequence(all.clone(), 0..=all.len())
            .prop_map(move |edges| InteractionGraph::from_edges(n, edges).unwrap())
    })
}

fn hops_on(g: &InteractionGraph, coeffs: &[f64]) -> FermionHamiltonian {
    let mut terms = Vec::new();
    for (k, (a, b)) in g.edges().enumerate() {
        let t = coeffs[k % coeffs.len()];
        terms.push(LadderTerm::hop(c(t, 0.0), a, b));
        terms.push(LadderTerm::hop(c(t, 0.0), b, a));
    }
    for m in 0..g.n_modes() {
        terms.push(LadderTerm::number(c(coeffs[m % coeffs.len()] * 0.5, 0.0), m));
    }
    FermionHamiltonian::from_terms(g.n_modes(), terms).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn multiplication_is_associative(a in pauli(70), b in pauli(70), c2 in pauli(70)) {
        let left = a.multiply(&b).unwrap().multiply(&c2).unwrap();
        let right = a.multiply(&b.multiply(&c2).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn phases_stay_in_z4(a in pauli(9), b in pauli(9)) {
        prop_assert!(a.multiply(&b).unwrap().phase_power() < 4);
    }

    #[test]
    fn product_matches_dense(a in pauli(4), b in pauli(4)) {
        let p = a.multiply(&b).unwrap();
        prop_assert!(max_diff(&dense(&p), &(dense(&a) * dense(&b))) < 1e-12);
    }

    #[test]
    fn commutation_matches_dense(a in pauli(5), b in pauli(5)) {
        let (ma, mb) = (dense(&a), dense(&b));
        let dense_commutes = max_diff(&(&ma * &mb), &(&mb * &ma)) < 1e-12;
        prop_assert_eq!(a.commutes(&b).unwrap(), dense_commutes);
    }

    #[test]
    fn weight_is_subadditive(a in pauli(80), b in pauli(80)) {
        prop_assert!(a.multiply(&b).unwrap().weight() <= a.weight() + b.weight());
    }

    #[test]
    fn sum_times_adjoint_is_hermitian(s in pauli_sum(4)) {
        let p = s.product(&s.adjoint()).unwrap();
        prop_assert!(p.is_hermitian(1e-12));
        let m = dense_sum(&p);
        prop_assert!(max_diff(&m, &m.adjoint()) < 1e-12);
    }

    #[test]
    fn sum_product_matches_dense(a in pauli_sum(3), b in pauli_sum(3)) {
        let p = a.product(&b).unwrap();
        prop_assert!(max_diff(&dense_sum(&p), &(dense_sum(&a) * dense_sum(&b))) < 1e-10);
    }

    #[test]
    fn reorder_preserves_the_operator(t in term(4, 4), perm in Just((0..4usize).collect::<Vec<_>>()).prop_shuffle()) {
        let n = 4;
        let original = build_fock_matrix(&FermionHamiltonian::from_terms(n, vec![t.clone()]).unwrap(), 12).unwrap();
        let reordered = normal_reorder(&t, &perm).unwrap();
        let rebuilt = build_fock_matrix(&FermionHamiltonian::from_terms(n, reordered).unwrap(), 12).unwrap();
        prop_assert!(max_diff(&original.to_dense(), &rebuilt.to_dense()) < 1e-12);
    }

    #[test]
    fn normal_order_preserves_the_operator(t in term(4, 4)) {
        let n = 4;
        let original = build_fock_matrix(&FermionHamiltonian::from_terms(n, vec![t.clone()]).unwrap(), 12).unwrap();
        let canon = build_fock_matrix(&FermionHamiltonian::from_terms(n, normal_order(&t)).unwrap(), 12).unwrap();
        prop_assert!(max_diff(&original.to_dense(), &canon.to_dense()) < 1e-12);
    }

    #[test]
    fn closure_is_idempotent_and_hermitian(ts in prop::collection::vec(term(3, 2), 1..5)) {
        let h = FermionHamiltonian::from_terms(3, ts).unwrap();
        let once = hermitian_closure(&h);
        prop_assert_eq!(hermitian_closure(&once), once.clone());
        let m = build_fock_matrix(&once, 12).unwrap().to_dense();
        prop_assert!(max_diff(&m, &m.adjoint()) < 1e-12);
    }

    #[test]
    fn jw_matrix_equals_fock_matrix(ts in prop::collection::vec(term(3, 2), 1..5), t4 in term(3, 4)) {
        let mut terms = ts;
        terms.push(t4);
        let h = FermionHamiltonian::from_terms(3, terms).unwrap();
        let enc = encode_jw(&h, LinearOrder::natural(3)).unwrap();
        let fock = build_fock_matrix(&h, 12).unwrap().to_dense();
        prop_assert!(max_diff(&dense_sum(&enc.operator), &fock) < 1e-12);
    }

    #[test]
    fn jw_spectrum_equals_fock_spectrum(ts in prop::collection::vec(term(4, 2), 1..6)) {
        let h = hermitian_closure(&FermionHamiltonian::from_terms(4, ts).unwrap());
        let enc = encode_jw(&h, LinearOrder::new(vec![2, 0, 3, 1]).unwrap()).unwrap();
        let fock = build_fock_matrix(&h, 12).unwrap().to_dense();
        prop_assert!(spectrum_distance(dense_sum(&enc.operator), fock) < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_graph_layouts_are_consistent(g in graph(10)) {
        let layout = Layout::build(g.clone(), LinearOrder::natural(g.n_modes()), &LayoutConfig::default()).unwrap();
        prop_assert!(coupling_loop(&layout.assignment).is_none());
        for (aux, uses) in layout.assignment.slot_usage() {
            prop_assert!(uses <= 2, "{} used {} times", aux, uses);
        }
        let enc = AuxEncoder::new(layout).unwrap();
        prop_assert!(algebra_check(enc.stabilizers(), enc.layout()).unwrap().is_clean());
        for s in enc.stabilizers() {
            prop_assert!(s.string.is_hermitian());
            prop_assert_eq!(s.string.multiply(&s.string).unwrap(), PauliString::identity(s.string.n_qubits()));
        }
    }

    #[test]
    fn random_small_graphs_are_equivalent(g in graph(5), coeffs in prop::collection::vec(-1.0f64..1.0, 3)) {
        let h = hops_on(&g, &coeffs);
        let enc = encode_aux(&h, LinearOrder::natural(g.n_modes()), &LayoutConfig::default()).unwrap();
        prop_assume!(enc.n_qubits() <= 14);
        let r = equivalence_check(&h, &enc, 1e-10, 0).unwrap();
        prop_assert!(r.max_deviation < 1e-10, "{:?}", r);
        prop_assert!(r.stabilizer_deviation < 1e-12);
    }

    #[test]
    fn random_two_body_terms_are_equivalent(ts in prop::collection::vec(term(5, 4), 1..4), hs in prop::collection::vec(term(5, 2), 0..4)) {
        let mut terms = ts;
        terms.extend(hs);
        let h = hermitian_closure(&FermionHamiltonian::from_terms(5, terms).unwrap());
        let enc = encode_aux(&h, LinearOrder::natural(5), &LayoutConfig::default()).unwrap();
        prop_assume!(enc.n_qubits() <= 14);
        let r = equivalence_check(&h, &enc, 1e-10, 5).unwrap();
        prop_assert!(r.max_deviation < 1e-10, "{:?}", r);
        prop_assert!(r.spectrum_deviation.unwrap() < 1e-9, "{:?}", r);
    }

    #[test]
    fn gauged_encodings_stay_equivalent(thetas in prop::collection::vec(-3.2f64..3.2, 4), coeffs in prop::collection::vec(-1.0f64..1.0, 3)) {
        let g = InteractionGraph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let h = hops_on(&g, &coeffs);
        let cfg = LayoutConfig { gauge: Some(thetas), ..LayoutConfig::default() };
        let enc = encode_aux(&h, LinearOrder::natural(4), &cfg).unwrap();
        let vac = vacuum_state(&enc.stabilizers, enc.n_qubits()).unwrap();
        prop_assert!(stabilizer_deviation(&enc.stabilizers, &vac).unwrap() < 1e-12);
        let r = equivalence_check(&h, &enc, 1e-10, 0).unwrap();
        prop_assert!(r.max_deviation < 1e-10, "{:?}", r);
    }
}

/// `{a_i, a_j†} = δ_ij` and `{a_i, a_j} = 0` as exact Fock matrices.
#[test]
fn anticommutation_relations_hold() {
    for n in 1..=6usize {
        let single = |op: LadderOperator| {
            let mut m = DMatrix::<Complex64>::zeros(1 << n, 1 << n);
            let h = FermionHamiltonian::from_terms(n, vec![LadderTerm::real(1.0, vec![op])]).unwrap();
            for (&(r, col), v) in build_fock_matrix(&h, 12).unwrap().entries() {
                m[(r, col)] = *v;
            }
            m
        };
        let id = DMatrix::<Complex64>::identity(1 << n, 1 << n);
        let zero = DMatrix::<Complex64>::zeros(1 << n, 1 << n);
        for i in 0..n {
            for j in 0..n {
                let (ai, aj) = (single(LadderOperator::annihilate(i)), single(LadderOperator::annihilate(j)));
                let ajd = single(LadderOperator::create(j));
                let anti = &ai * &ajd + &ajd * &ai;
                assert_eq!(anti, if i == j { id.clone() } else { zero.clone() }, "n={n} i={i} j={j}");
                assert_eq!(&ai * &aj + &aj * &ai, zero, "n={n} i={i} j={j}");
                assert_eq!(ajd.adjoint(), aj);
            }
        }
    }
}
