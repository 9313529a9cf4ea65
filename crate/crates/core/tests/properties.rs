//! Property tests against the oracles in `common`.

mod common;

use common::*;
use freeaut::automorphism::{abelianize_word, gersten_generators};
use freeaut::birman::{kernel_generators, phi_hom_image, StabilizerContext};
use freeaut::bn::truncated_bn;
use freeaut::complex::SimplicialComplex;
use freeaut::lattice::{spans_direct_summand, unimodular_complete};
use freeaut::lift::matrix_to_automorphism;
use freeaut::snf::{smith_normal_form, SparseMatrix};
use freeaut::{FreeAutomorphism, Int, SmallMatrix, Word};
use proptest::prelude::*;

const N: usize = 3;

fn letter(n: usize) -> impl Strategy<Value = i32> {
    (1..=n as i32, any::<bool>()).prop_map(|(i, s)| if s { i } else { -i })
}

fn signed_word(n: usize, max: usize) -> impl Strategy<Value = Vec<i32>> {
    prop::collection::vec(letter(n), 0..max)
}

fn word(n: usize) -> impl Strategy<Value = Word> {
    signed_word(n, 16).prop_map(move |s| Word::from_signed(n, &s).unwrap())
}

fn signed(w: &Word) -> Vec<i32> {
    w.letters().iter().map(|l| l.signed()).collect()
}

/// Product of up to five presentation generators, each possibly inverted.
fn automorphism(n: usize) -> impl Strategy<Value = FreeAutomorphism> {
    let gens: Vec<FreeAutomorphism> = gersten_generators(n).into_iter().map(|x| x.1).collect();
    prop::collection::vec((0..gens.len(), any::<bool>()), 0..6).prop_map(move |picks| {
        picks
            .iter()
            .fold(FreeAutomorphism::identity(n), |acc, &(i, inv)| {
                let g = if inv {
                    gens[i].inverse()
                } else {
                    gens[i].clone()
                };
                acc.compose(&g).unwrap()
            })
    })
}

fn small_matrix(max_dim: usize, bound: i64) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(move |(r, c)| {
        prop::collection::vec(prop::collection::vec(-bound..=bound, c), r)
    })
}

fn unimodular(n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    any::<u64>().prop_map(move |seed| random_unimodular(&mut rng(seed), n, 0, 8))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn reduction_matches_naive_oracle(s in signed_word(4, 30)) {
        let w = Word::from_signed(4, &s).unwrap();
        prop_assert_eq!(signed(&w), naive_reduce(&s));
    }

    #[test]
    fn group_axioms(a in word(N), b in word(N), c in word(N)) {
        let ab_c = a.multiply(&b).unwrap().multiply(&c).unwrap();
        let a_bc = a.multiply(&b.multiply(&c).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);
        prop_assert!(a.multiply(&a.invert()).unwrap().is_identity());
        prop_assert_eq!(a.multiply(&Word::identity(N)).unwrap(), a.clone());
    }

    #[test]
    fn conjugates_share_a_class(a in word(N), u in word(N)) {
        let conj = u.multiply(&a).unwrap().multiply(&u.invert()).unwrap();
        prop_assert!(a.is_conjugate(&conj).unwrap());
        // rotating a cyclic word stays in the class
        let s = signed(&a);
        if !s.is_empty() {
            let rotated = [&s[1..], &s[..1]].concat();
            prop_assert!(a.is_conjugate(&Word::from_signed(N, &rotated).unwrap()).unwrap());
        }
    }

    #[test]
    fn conjugacy_detects_abelianization_change(a in word(N), i in 1..=N) {
        let b = a.multiply(&Word::generator(N, i)).unwrap();
        prop_assert!(!a.is_conjugate(&b).unwrap());
    }

    #[test]
    fn project_kill_is_a_homomorphism(a in word(N), b in word(N), k in 0..=N) {
        let ab = a.multiply(&b).unwrap().project_kill(k).unwrap();
        let split = a.project_kill(k).unwrap().multiply(&b.project_kill(k).unwrap()).unwrap();
        prop_assert_eq!(&ab, &split);
        prop_assert!(ab.letters().iter().all(|l| l.index() > k));
    }

    #[test]
    fn abelianization_counts_letters(s in signed_word(N, 30)) {
        let w = Word::from_signed(N, &s).unwrap();
        let expected: Vec<Int> = exponent_sums(&s, N).into_iter().map(Int::from).collect();
        prop_assert_eq!(abelianize_word(&w), expected);
    }

    #[test]
    fn automorphisms_act_as_homomorphisms(phi in automorphism(N), psi in automorphism(N), a in word(N), b in word(N)) {
        let ab = a.multiply(&b).unwrap();
        prop_assert_eq!(phi.apply(&ab).unwrap(), phi.apply(&a).unwrap().multiply(&phi.apply(&b).unwrap()).unwrap());
        prop_assert_eq!(phi.apply_inverse(&phi.apply(&a).unwrap()).unwrap(), a.clone());
        let comp = phi.compose(&psi).unwrap();
        prop_assert_eq!(comp.apply(&a).unwrap(), phi.apply(&psi.apply(&a).unwrap()).unwrap());
        prop_assert_eq!(comp.abelianize(), phi.abelianize().mul(&psi.abelianize()).unwrap());
        prop_assert!(comp.compose(&comp.inverse()).unwrap().is_identity());
    }

    #[test]
    fn smith_form_postconditions(m in small_matrix(5, 8)) {
        let a = to_int_matrix(&m);
        let snf = smith_normal_form(&a);
        prop_assert!(snf.verify(&a).is_ok());
        if m.len() == m[0].len() {
            let product = snf.diagonal().iter().fold(Int::from(1), |p, d| p * d);
            prop_assert_eq!(product, Int::from(det(&m).abs()));
        }
    }

    #[test]
    fn sparse_and_dense_agree(m in small_matrix(6, 3)) {
        let a = to_int_matrix(&m);
        let mut s = SparseMatrix::<Int>::new(m[0].len());
        for row in &m {
            s.push_line(row.iter().enumerate().filter(|(_, &x)| x != 0).map(|(j, &x)| (j, Int::from(x))));
        }
        prop_assert_eq!(s.invariant_factors(), smith_normal_form(&a).invariant_factors());
    }

    #[test]
    fn fixed_width_scalar_agrees(m in small_matrix(4, 5)) {
        let big = to_int_matrix(&m);
        let small = SmallMatrix::from_rows(m.clone()).unwrap();
        let d_small: Vec<Int> = smith_normal_form(&small).invariant_factors().into_iter().map(Int::from).collect();
        prop_assert_eq!(d_small, smith_normal_form(&big).invariant_factors());
    }

    #[test]
    fn summand_test_matches_minors(vs in prop::collection::vec(prop::collection::vec(-3i64..=3, 3), 1..=3)) {
        prop_assert_eq!(spans_direct_summand(&vs, 3).unwrap(), summand_by_minors(&vs));
    }

    #[test]
    fn summand_status_is_invariant_under_gl(vs in prop::collection::vec(prop::collection::vec(-3i64..=3, 3), 1..=3), u in unimodular(3)) {
        let moved: Vec<Vec<i64>> = vs
            .iter()
            .map(|v| (0..3).map(|j| (0..3).map(|i| v[i] * u[i][j]).sum()).collect())
            .collect();
        prop_assert_eq!(spans_direct_summand(&vs, 3).unwrap(), spans_direct_summand(&moved, 3).unwrap());
    }

    #[test]
    fn completion_extends_prefix(u in unimodular(4), k in 0..=4usize) {
        let vs: Vec<Vec<i64>> = (0..k).map(|j| (0..4).map(|i| u[i][j]).collect()).collect();
        let basis = unimodular_complete(&vs, 4).unwrap();
        prop_assert_eq!(&basis[..k], &vs[..]);
        prop_assert_eq!(det(&basis).abs(), 1);
    }

    #[test]
    fn lift_is_generic_over_the_scalar(u in unimodular(3)) {
        let lift = matrix_to_automorphism(&SmallMatrix::from_rows(u.clone()).unwrap(), 0).unwrap();
        prop_assert_eq!(from_int_matrix(&lift.automorphism.abelianize()), u);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn phi_is_additive(n in 2..=4usize, k_pick in 0..4usize, picks in prop::collection::vec((0..64usize, any::<bool>()), 1..6), split in 0..6usize) {
        let k = 1 + k_pick % n;
        let ctx = StabilizerContext::new(n, k).unwrap();
        let gens: Vec<FreeAutomorphism> = kernel_generators(&ctx).into_iter().map(|x| x.1).collect();
        let elems: Vec<FreeAutomorphism> = picks
            .iter()
            .map(|&(i, inv)| {
                let g = &gens[i % gens.len()];
                if inv { g.inverse() } else { g.clone() }
            })
            .collect();
        let split = split.min(elems.len());
        let prod = |xs: &[FreeAutomorphism]| xs.iter().fold(FreeAutomorphism::identity(n), |a, g| a.compose(g).unwrap());
        let (x, y) = (prod(&elems[..split]), prod(&elems[split..]));
        let xy = x.compose(&y).unwrap();
        let sum: Vec<Int> = phi_hom_image(&x, &ctx).unwrap().flatten()
            .into_iter()
            .zip(phi_hom_image(&y, &ctx).unwrap().flatten())
            .map(|(a, b)| a + b)
            .collect();
        prop_assert_eq!(phi_hom_image(&xy, &ctx).unwrap().flatten(), sum);
    }

    #[test]
    fn h0_matches_union_find(simplices in prop::collection::vec(prop::collection::btree_set(0u8..12, 1..4), 0..14)) {
        let c = SimplicialComplex::from_simplices(simplices.iter().map(|s| s.iter().copied().collect::<Vec<_>>())).unwrap();
        prop_assert!(c.is_downward_closed());
        let edges: Vec<(usize, usize)> = c.faces(1).iter().map(|e| (e[0], e[1])).collect();
        let h = c.homology(0, false);
        prop_assert_eq!(h[0].betti, components(c.count(0), &edges));
        let reduced = c.homology(0, true);
        prop_assert_eq!(reduced[0].betti, components(c.count(0), &edges).saturating_sub(1));
    }
}

#[test]
fn truncations_are_closed_and_monotone() {
    for (n, k) in [(2, 0), (2, 1), (3, 0), (3, 1), (3, 2)] {
        let mut prev: Option<SimplicialComplex<Vec<i64>>> = None;
        for bound in 1..=2 {
            let c = truncated_bn(n, bound, k).unwrap();
            assert!(c.is_downward_closed(), "n={n} k={k} bound={bound}");
            if let Some(p) = &prev {
                assert!(
                    p.is_subcomplex_of(&c),
                    "n={n} k={k}: bound {} not inside {bound}",
                    bound - 1
                );
            }
            prev = Some(c);
        }
    }
}

#[test]
fn links_sit_inside_the_full_complex_after_coning() {
    // joining e1 to every simplex of the link gives simplices of the full complex
    let full = truncated_bn(3, 1, 0).unwrap();
    let link = truncated_bn(3, 1, 1).unwrap();
    for d in 0..=link.dim().unwrap() {
        for s in link.faces(d) {
            let mut vs = link.simplex_vertices(s);
            vs.push(vec![1, 0, 0]);
            assert!(full.contains(&freeaut::complex::Simplex::new(vs).unwrap()));
        }
    }
}
