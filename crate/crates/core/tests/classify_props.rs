mod common;

use common::{coefficient, invertible_matrix, nonzero_coefficient};
use lpdo::classify::{classify, overideal_witness_check, CaseTag, Verdict};
use lpdo::io::parse_operator;
use lpdo::newton::second_step_report;
use lpdo::{DiffOp, RatFunc};
use num_traits::Zero;
use proptest::prelude::*;

/// Constant-coefficient principal parts whose symbols split over Q, or are separable.
const TOPS: [&str; 9] = [
    "Dy^2",
    "Dx^2",
    "(Dx + Dy)^2",
    "Dx*Dy",
    "Dy^3",
    "Dx*Dy^2",
    "(Dx - 2*Dy)^2*Dy",
    "Dx*Dy*(Dx + Dy)",
    "Dx^2 - 2*Dy^2",
];

fn lower_terms(order: u32) -> impl Strategy<Value = DiffOp> {
    let slots: Vec<(u32, u32)> = (0..order).flat_map(|n| (0..=n).map(move |i| (i, n - i))).collect();
    let n = slots.len();
    prop::collection::vec((0..n, coefficient()), 0..=3).prop_map(move |terms| {
        terms
            .into_iter()
            .fold(DiffOp::zero(), |acc, (k, c)| acc.add(&DiffOp::term(c, slots[k].0, slots[k].1)))
    })
}

/// Operators that normalize over Q, each hidden behind a random constant change.
fn normalizable() -> impl Strategy<Value = DiffOp> {
    (0..TOPS.len())
        .prop_flat_map(|k| {
            let top = parse_operator(TOPS[k]).unwrap();
            let n = top.order().unwrap();
            (Just(top), lower_terms(n), invertible_matrix())
        })
        .prop_map(|(top, low, m)| top.add(&low).change_derivations(&m).unwrap())
}

fn order2(p1: RatFunc, p2: RatFunc, p3: RatFunc) -> DiffOp {
    DiffOp::dy()
        .mul(&DiffOp::dy())
        .add(&DiffOp::term(p1, 1, 0))
        .add(&DiffOp::term(p2, 0, 1))
        .add(&DiffOp::term(p3, 0, 0))
}

fn order3(top: (u32, u32), p: [RatFunc; 6]) -> DiffOp {
    let places = [(2, 0), (0, 2), (1, 1), (0, 1), (1, 0), (0, 0)];
    places
        .iter()
        .zip(p)
        .fold(DiffOp::term(RatFunc::integer(1), top.0, top.1), |acc, (&(i, j), c)| {
            acc.add(&DiffOp::term(c, i, j))
        })
}

fn maybe_zero() -> impl Strategy<Value = RatFunc> {
    prop_oneof![Just(RatFunc::zero()), nonzero_coefficient()]
}

fn six() -> impl Strategy<Value = [RatFunc; 6]> {
    (maybe_zero(), coefficient(), maybe_zero(), coefficient(), maybe_zero(), coefficient())
        .prop_map(|(a, b, c, d, e, f)| [a, b, c, d, e, f])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn verdict_is_invariant_under_constant_changes(p in normalizable(), m in invertible_matrix()) {
        let before = classify(&p).unwrap();
        prop_assert!(before.case_tag != CaseTag::Unnormalizable);
        let after = classify(&p.change_derivations(&m).unwrap()).unwrap();
        prop_assert_eq!(before.verdict, after.verdict);
        prop_assert_eq!(before.case_tag, after.case_tag);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn second_order_table_is_total(p1 in maybe_zero(), p2 in coefficient(), p3 in coefficient()) {
        let r = classify(&order2(p1.clone(), p2, p3)).unwrap();
        let want = if p1.is_zero() { CaseTag::Order2EssentiallyOrdinary } else { CaseTag::Order2P1Nonzero };
        prop_assert_eq!(r.case_tag, want);
        prop_assert_eq!(r.verdict, want.verdict(2));
        prop_assert!(!r.evidence.is_empty());
        prop_assert!(!r.intersection_claim);
    }

    #[test]
    fn third_order_table_is_total(p in six(), mixed in any::<bool>()) {
        let top = if mixed { (1, 2) } else { (0, 3) };
        let r = classify(&order3(top, p.clone())).unwrap();
        let nonzero = |k: usize| !p[k].is_zero();
        let want = match (mixed, nonzero(0), nonzero(2) || nonzero(4)) {
            (true, true, _) => CaseTag::Order3Pattern21P0Nonzero,
            (true, false, _) => CaseTag::Order3Pattern21P0Zero,
            (false, true, _) | (false, false, true) => CaseTag::Order3Pattern3SomeNonzero,
            (false, false, false) => CaseTag::Order3Pattern3AllZero,
        };
        prop_assert_eq!(r.case_tag, want);
        prop_assert_eq!(r.verdict, want.verdict(3));
        prop_assert_eq!(r.intersection_claim, r.verdict == Verdict::AtMostTwo);
        prop_assert!(!r.evidence.is_empty());
        // the input is already normalized, so the reported coefficients are the given ones
        let names = ["p0", "p1", "p2", "p3", "p4", "p5"];
        for (name, c) in names.iter().zip(&p) {
            let got = r.coefficients.iter().find(|(n, _)| n == name).map(|(_, v)| v);
            prop_assert_eq!(got, Some(c));
        }
    }

    #[test]
    fn evidence_edges_match_the_second_step(p in normalizable()) {
        let r = classify(&p).unwrap();
        if let Some(n) = &r.normalized {
            let steps = second_step_report(&n.operator).unwrap();
            prop_assert_eq!(&r.edges, &steps.edges);
        }
    }

    #[test]
    fn witness_certificate_reproduces_the_operator(
        a in prop::collection::vec(coefficient(), 1..4),
        g in coefficient(),
        r in prop_oneof![Just(RatFunc::zero()), nonzero_coefficient()],
    ) {
        let quotient = a
            .iter()
            .enumerate()
            .fold(DiffOp::zero(), |acc, (k, c)| acc.add(&DiffOp::term(c.clone(), 0, k as u32)));
        let l = DiffOp::dy().sub(&DiffOp::scalar(g.clone()));
        let p = quotient.mul(&l).add(&DiffOp::scalar(r.clone()));
        prop_assume!(!p.is_zero());
        let w = overideal_witness_check(&p, &g).unwrap();
        prop_assert_eq!(w.holds, r.is_zero());
        prop_assert_eq!(&w.residual, &r);
        prop_assert_eq!(w.quotient.mul(&l).add(&DiffOp::scalar(w.residual.clone())), p.clone());
        if w.holds {
            prop_assert_eq!(w.quotient.mul(&l), p);
        }
    }
}

#[test]
fn every_case_tag_has_a_verdict() {
    for tag in CaseTag::ALL {
        let v = tag.verdict(3);
        assert_eq!(tag.asserts_intersection(), v == Verdict::AtMostTwo, "{tag}");
        assert!(!tag.name().is_empty());
    }
    assert_eq!(CaseTag::Separable.verdict(5), Verdict::AtMostN(5));
}
