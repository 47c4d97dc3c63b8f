use num_rational::BigRational;
use proptest::prelude::*;
use qhyper_core::hyperalg::{
    cayley_classical, derived_relations_rea3, hyperdet_fixed, hyperdet_full_sum, hyperdet_normalized, minor_xi, relations,
    relations_axis, HyperAlgebra, SignConvention,
};
use qhyper_core::pfaffian::{hypf_relations, pf_full, pf_prime, pf_recursive, HypfConvention, PfShape};
use qhyper_core::qmatrix::{det_q_row, matq_relations, normal_form, QMatrixContext};
use qhyper_core::{qfact, NCPoly, RationalFn, Word};

fn all_quadratic<'a>(rels: impl Iterator<Item = &'a NCPoly>) -> bool {
    rels.into_iter().all(|r| r.homogeneous_degree() == Some(2))
}

#[test]
fn matq_relation_counts() {
    assert_eq!(matq_relations(&QMatrixContext::new(2, 0, 'a')).len(), 6);
    assert_eq!(matq_relations(&QMatrixContext::new(3, 0, 'a')).len(), 36);
}

#[test]
fn relations_are_quadratic() {
    for (n, m) in [(2u8, 2usize), (2, 3), (3, 2), (3, 3)] {
        let alg = HyperAlgebra::cube(n, m);
        assert!(all_quadratic(relations(&alg).iter()), "({n},{m})");
        assert!(all_quadratic(derived_relations_rea3(&alg).unwrap().iter()), "derived ({n},{m})");
    }
    for n in [2u8, 3] {
        assert!(all_quadratic(matq_relations(&QMatrixContext::new(n, 0, 'a')).iter()));
    }
    for (k, m, n) in [(1, 1, 2), (2, 1, 2), (1, 2, 2)] {
        let shape = PfShape::new(k, m, n).unwrap();
        for conv in [HypfConvention::Unsigned, HypfConvention::Displayed] {
            assert!(all_quadratic(hypf_relations(&shape, 0, 'b', conv).iter()));
        }
    }
}

#[test]
fn relations_are_the_union_over_axes() {
    let alg = HyperAlgebra::cube(2, 3);
    let mut union = relations_axis(&alg, 1).unwrap();
    for k in 2..=3 {
        union.extend(&relations_axis(&alg, k).unwrap());
    }
    assert!(union.same_members(&relations(&alg)));
    assert!(relations_axis(&alg, 4).is_err());
}

#[test]
fn full_sum_is_normalized_times_factorial() {
    for (n, m) in [(2u8, 2usize), (2, 3), (3, 2), (2, 4)] {
        let alg = HyperAlgebra::cube(n, m);
        let full = hyperdet_full_sum(&alg).unwrap();
        let norm = hyperdet_normalized(&alg).unwrap();
        assert_eq!(norm.scale(&RationalFn::from(qfact(n as u32, 2))), full, "({n},{m})");
    }
}

#[test]
fn term_counts() {
    // (n!)^(m-1) terms for the fixed-axis form.
    for (n, m, terms) in [(2u8, 3usize, 4usize), (3, 2, 6), (2, 4, 8), (3, 3, 36)] {
        let alg = HyperAlgebra::cube(n, m);
        for k in 1..=m {
            assert_eq!(hyperdet_fixed(&alg, k).unwrap().len(), terms, "({n},{m}) axis {k}");
        }
    }
}

#[test]
fn full_minor_is_the_first_axis_form() {
    for (n, m) in [(2u8, 2usize), (2, 3), (3, 2)] {
        let alg = HyperAlgebra::cube(n, m);
        let full: Vec<Vec<u8>> = (0..m).map(|_| (1..=n).collect()).collect();
        assert_eq!(minor_xi(&alg, &full).unwrap(), hyperdet_fixed(&alg, 1).unwrap());
    }
}

#[test]
fn cayley_of_a_matrix_is_its_determinant() {
    let a = [[3i64, -2], [5, 7]];
    let v = |i: &[u8]| BigRational::from_integer(a[i[0] as usize - 1][i[1] as usize - 1].into());
    for sign in [SignConvention::AllAxes, SignConvention::AsDisplayed] {
        let got = cayley_classical(2, 2, &v, sign).unwrap();
        let expected = if sign == SignConvention::AllAxes { 31 } else { 0 };
        assert_eq!(got, BigRational::from_integer(expected.into()), "{sign:?}");
    }
    assert!(cayley_classical(2, 3, &v, SignConvention::AllAxes).is_err());
}

#[test]
fn small_pfaffian() {
    let shape = PfShape::new(2, 1, 2).unwrap();
    let text = qhyper_core::ncalg::text::render_text(&pf_prime(&shape, 0, 'b'));
    assert_eq!(text, "b[1,2].b[3,4] - q*b[1,3].b[2,4] + q^2*b[1,4].b[2,3]");
    assert!(PfShape::new(0, 1, 2).is_err());
}

#[test]
fn full_pfaffian_has_more_terms() {
    for (k, m, n) in [(1, 1, 2), (1, 2, 2), (2, 1, 2)] {
        let shape = PfShape::new(k, m, n).unwrap();
        assert!(pf_full(&shape, 0, 'b').len() >= pf_prime(&shape, 0, 'b').len());
    }
}

fn word_strategy(n: u8) -> impl Strategy<Value = Vec<(u8, u8)>> {
    prop::collection::vec((1..=n, 1..=n), 0..5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normal_form_is_idempotent(ls in word_strategy(3)) {
        let ctx = QMatrixContext::new(3, 0, 'a');
        let w = NCPoly::word(Word::new(ls.iter().map(|&(i, j)| ctx.gen(i, j)).collect()));
        let nf = normal_form(&w, &[ctx]);
        prop_assert_eq!(normal_form(&nf, &[ctx]), nf);
    }

    #[test]
    fn quantum_determinant_is_central(i in 1u8..=3, j in 1u8..=3) {
        let ctx = QMatrixContext::new(3, 0, 'a');
        let d = det_q_row(3, 0, 'a');
        let a = ctx.entry(i, j);
        prop_assert!(normal_form(&(&(&d * &a) - &(&a * &d)), &[ctx]).is_zero());
    }

    #[test]
    fn recursive_form_matches(k in 1usize..=2, m in 1usize..=2, n in 1usize..=3) {
        prop_assume!(k * m * n <= 6);
        let shape = PfShape::new(k, m, n).unwrap();
        prop_assert_eq!(pf_prime(&shape, 0, 'b'), pf_recursive(&shape, 0, 'b'));
    }
}
