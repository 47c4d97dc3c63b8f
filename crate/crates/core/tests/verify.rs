use std::collections::BTreeSet;

use proptest::prelude::*;
use qhyper_core::qmatrix::{matq_relations, normal_form, QMatrixContext};
use qhyper_core::verify::{
    check_theorem, ideal_membership, lookup, membership_certificate, registry, CheckError, CheckOptions, CheckReport,
    Limits, MembershipOptions, Mode, Params, Verdict,
};
use qhyper_core::{GenId, NCPoly, RationalFn, Word};

fn with_mode(mode: Mode) -> CheckOptions {
    CheckOptions { membership: MembershipOptions { mode, ..MembershipOptions::default() } }
}

fn strip_time(mut r: CheckReport) -> CheckReport {
    r.millis = 0;
    r
}

#[test]
fn registry_is_well_formed() {
    let reg = registry();
    let ids: BTreeSet<_> = reg.iter().map(|t| t.id).collect();
    assert_eq!(ids.len(), reg.len());
    assert!(reg.iter().all(|t| !t.anchor.is_empty()));
    assert_eq!(lookup("pf-equivalence").unwrap().id, "pf-equivalence");
    assert_eq!(
        check_theorem("no-such-check", &Params::default(), &CheckOptions::default()).unwrap_err(),
        CheckError::UnknownId("no-such-check".into())
    );
}

#[test]
fn every_check_holds_at_defaults() {
    for t in registry() {
        let r = check_theorem(t.id, &Params::default(), &CheckOptions::default()).unwrap();
        assert!(r.verdict.holds(), "{}: {:?}", t.id, r.verdict);
        assert_eq!(r.exit_code(), 0);
    }
}

#[test]
fn exact_and_specialized_modes_agree() {
    for t in registry() {
        let exact = check_theorem(t.id, &Params::default(), &with_mode(Mode::Exact)).unwrap();
        let spec = check_theorem(t.id, &Params::default(), &with_mode(Mode::Specialize)).unwrap();
        assert_eq!(exact.verdict.holds(), spec.verdict.holds(), "{}", t.id);
        if exact.verdict == Verdict::ExactZero {
            assert_eq!(spec.verdict, Verdict::ExactZero, "{}", t.id);
        }
    }
}

#[test]
fn reports_are_deterministic() {
    for id in ["re-det", "pluecker-thp1a", "pf-laplace", "phi-image"] {
        let opts = with_mode(Mode::Specialize);
        let a = check_theorem(id, &Params::default(), &opts).unwrap();
        let b = check_theorem(id, &Params::default(), &opts).unwrap();
        assert_eq!(strip_time(a), strip_time(b), "{id}");
    }
}

#[test]
fn seed_is_recorded() {
    let mut opts = with_mode(Mode::Specialize);
    opts.membership.seed = 7;
    let r = check_theorem("re-det", &Params::default(), &opts).unwrap();
    assert_eq!(r.seed, 7);
    let json = serde_json::to_value(&r).unwrap();
    assert_eq!(json["verdict"]["kind"], "member_specialized");
    assert_eq!(json["params"]["n"], 2);
}

#[test]
fn invalid_parameters_are_rejected() {
    let p = Params { n: Some(0), ..Params::default() };
    assert!(matches!(check_theorem("re-det", &p, &CheckOptions::default()), Err(CheckError::Params(_))));
    let s = Params { cartan: Some("sideways".into()), ..Params::default() };
    assert!(check_theorem("uq-e-annihilates", &s, &CheckOptions::default()).is_err());
}

#[test]
fn symmetric_cartan_split_is_refuted() {
    let p = Params { cartan: Some("symmetric".into()), ..Params::default() };
    let r = check_theorem("uq-e-annihilates", &p, &with_mode(Mode::Exact)).unwrap();
    assert!(r.verdict.refuted(), "{:?}", r.verdict);
    assert_eq!(r.exit_code(), 1);
}

#[test]
fn tight_limits_are_inconclusive() {
    let mut opts = with_mode(Mode::Exact);
    opts.membership.limits = Limits { max_words: 4, max_rows: 4 };
    let r = check_theorem("re-det", &Params::default(), &opts).unwrap();
    assert!(matches!(r.verdict, Verdict::Inconclusive { .. }), "{:?}", r.verdict);
    assert_eq!(r.exit_code(), 2);
}

fn matq() -> (QMatrixContext, Vec<NCPoly>) {
    let ctx = QMatrixContext::new(2, 0, 'a');
    let rels = matq_relations(&ctx).as_slice().to_vec();
    (ctx, rels)
}

fn word(ctx: &QMatrixContext, ls: &[(u8, u8)]) -> Word {
    Word::new(ls.iter().map(|&(i, j)| ctx.gen(i, j)).collect())
}

fn letters() -> impl Strategy<Value = Vec<(u8, u8)>> {
    prop::collection::vec((1u8..=2, 1u8..=2), 0..2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn combinations_of_relations_are_members(
        picks in prop::collection::vec((0usize..6, letters(), letters(), -3i64..=3), 1..4)
    ) {
        let (ctx, rels) = matq();
        let mut element = NCPoly::zero();
        for (i, l, r, c) in &picks {
            let u = NCPoly::word(word(&ctx, l));
            let v = NCPoly::word(word(&ctx, r));
            element = &element + &(&(&u * &rels[*i]) * &v).scale(&RationalFn::integer(*c));
        }
        let exact = ideal_membership(&element, &rels, &MembershipOptions { mode: Mode::Exact, ..Default::default() });
        prop_assert!(exact.verdict.holds(), "{:?}", exact.verdict);
        let spec = ideal_membership(&element, &rels, &MembershipOptions { mode: Mode::Specialize, ..Default::default() });
        prop_assert!(spec.verdict.holds(), "{:?}", spec.verdict);
        prop_assert!(normal_form(&element, &[ctx]).is_zero());
    }

    #[test]
    fn certificates_reconstruct(
        picks in prop::collection::vec((0usize..6, letters(), letters(), 1i64..=3), 1..3)
    ) {
        let (ctx, rels) = matq();
        let mut element = NCPoly::zero();
        for (i, l, r, c) in &picks {
            let u = NCPoly::word(word(&ctx, l));
            let v = NCPoly::word(word(&ctx, r));
            element = &element + &(&(&u * &rels[*i]) * &v).scale(&RationalFn::integer(*c));
        }
        let cert = membership_certificate(&element, &rels, &Limits::default()).unwrap().expect("a member");
        let rebuilt: NCPoly = cert
            .iter()
            .map(|t| (&(&NCPoly::word(t.left.clone()) * &rels[t.relation]) * &NCPoly::word(t.right.clone())).scale(&t.coeff))
            .sum();
        prop_assert_eq!(rebuilt, element);
    }

    #[test]
    fn single_words_are_not_members(ls in prop::collection::vec((1u8..=2, 1u8..=2), 1..5)) {
        let (ctx, rels) = matq();
        let w = NCPoly::word(word(&ctx, &ls));
        let r = ideal_membership(&w, &rels, &MembershipOptions { mode: Mode::Exact, ..Default::default() });
        prop_assert!(r.verdict.refuted(), "{:?}", r.verdict);
    }
}

#[test]
fn foreign_letters_are_free() {
    let (ctx, rels) = matq();
    let b = NCPoly::gen(GenId::new(1, 'b', vec![1]));
    let commutator = &(&ctx.entry(1, 1) * &ctx.entry(1, 2)) - &(&ctx.entry(1, 2) * &ctx.entry(1, 1));
    let r = ideal_membership(&(&commutator * &b), &rels, &MembershipOptions::default());
    assert!(r.verdict.refuted(), "{:?}", r.verdict);
}

#[test]
fn fixed_axis_form_matches_the_normalized_sum() {
    use qhyper_core::hyperalg::{hyperdet_fixed, hyperdet_full_sum, hyperdet_normalized, relations, HyperAlgebra};
    let alg = HyperAlgebra::cube(2, 3);
    let rels = relations(&alg).as_slice().to_vec();
    let opts = MembershipOptions { mode: Mode::Exact, ..Default::default() };
    let fixed = hyperdet_fixed(&alg, 2).unwrap();
    let norm = hyperdet_normalized(&alg).unwrap();
    assert_eq!(ideal_membership(&(&norm - &fixed), &rels, &opts).verdict, Verdict::MemberExact);
    let full = hyperdet_full_sum(&alg).unwrap();
    assert!(ideal_membership(&(&full - &fixed), &rels, &opts).verdict.refuted());
}
