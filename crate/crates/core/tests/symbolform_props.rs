mod common;

use common::nonzero_diffop;
use lpdo::arith::rational::rat;
use lpdo::symbolform::{
    form_gcd, is_separable, multiplicity_pattern, rational_linear_divisors,
    squarefree_decomposition, LinearDivisor,
};
use lpdo::{BinaryForm, RatFunc};
use proptest::prelude::*;

/// Linear forms `a v + b w` with small integer or `x`-dependent slopes.
fn linear_form() -> impl Strategy<Value = BinaryForm> {
    prop_oneof![
        Just(BinaryForm::w()),
        Just(BinaryForm::v()),
        (-3i64..=3).prop_map(|a| BinaryForm::linear(RatFunc::integer(1), RatFunc::integer(a))),
        (-2i64..=2).prop_map(|a| BinaryForm::linear(RatFunc::integer(1), &RatFunc::x() + &RatFunc::integer(a))),
    ]
}

fn product_form() -> impl Strategy<Value = BinaryForm> {
    prop::collection::vec(linear_form(), 1..5).prop_map(|fs| {
        fs.iter().fold(BinaryForm::one(), |acc, f| acc.mul(f))
    })
}

fn divides(d: &BinaryForm, f: &BinaryForm) -> bool {
    f.div_exact(d).is_some()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn gcd_divides_and_is_greatest(f in product_form(), g in product_form(), l in linear_form()) {
        let d = form_gcd(&f, &g).unwrap();
        prop_assert!(divides(&d, &f) && divides(&d, &g));
        let (fl, gl) = (f.mul(&l), g.mul(&l));
        let dl = form_gcd(&fl, &gl).unwrap();
        prop_assert!(divides(&l, &dl));
    }

    #[test]
    fn squarefree_decomposition_reproduces_the_form(f in product_form()) {
        let parts = squarefree_decomposition(&f).unwrap();
        let prod = parts.iter().fold(BinaryForm::one(), |acc, s| acc.mul(&s.form.pow(s.multiplicity)));
        prop_assert_eq!(prod.monic(), f.monic());
        for (i, a) in parts.iter().enumerate() {
            for b in &parts[i + 1..] {
                prop_assert_eq!(form_gcd(&a.form, &b.form).unwrap(), BinaryForm::one());
            }
        }
    }

    #[test]
    fn separable_iff_all_multiplicities_one(f in product_form()) {
        let p = multiplicity_pattern(&f).unwrap();
        prop_assert_eq!(is_separable(&f).unwrap(), p.entries.iter().all(|(m, _)| *m == 1));
        prop_assert_eq!(p.total_degree(), f.degree());
    }

    #[test]
    fn rational_divisors_recover_linear_factors(f in product_form()) {
        let found = rational_linear_divisors(&f).unwrap();
        prop_assert_eq!(found.residual.degree(), 0);
        let prod = found.divisors.iter().fold(BinaryForm::one(), |acc, (d, m)| acc.mul(&d.to_form().pow(*m)));
        prop_assert_eq!(prod.monic(), f.monic());
    }

    #[test]
    fn operator_patterns_multiply(a in nonzero_diffop(2), b in nonzero_diffop(2)) {
        let (sa, sb) = (a.symbol().unwrap(), b.symbol().unwrap());
        prop_assume!(sa.degree() > 0 && sb.degree() > 0);
        let prod = a.mul(&b).symbol().unwrap();
        prop_assert_eq!(&prod, &sa.mul(&sb));
        let da = rational_linear_divisors(&sa).unwrap();
        let db = rational_linear_divisors(&sb).unwrap();
        prop_assume!(da.residual.degree() == 0 && db.residual.degree() == 0);
        let mut want: Vec<(LinearDivisor, u32)> = Vec::new();
        for (d, m) in da.divisors.iter().chain(&db.divisors) {
            match want.iter_mut().find(|(e, _)| e == d) {
                Some(entry) => entry.1 += m,
                None => want.push((d.clone(), *m)),
            }
        }
        let mut got = rational_linear_divisors(&prod).unwrap().divisors;
        let key = |(d, m): &(LinearDivisor, u32)| (d.to_string(), *m);
        want.sort_by_key(key);
        got.sort_by_key(key);
        prop_assert_eq!(got, want);
    }
}

#[test]
fn irreducible_quadratic_stays_residual() {
    // v^2 - 2 w^2 has no rational root
    let f = BinaryForm::new(2, vec![RatFunc::constant(rat(-2)), RatFunc::integer(0), RatFunc::integer(1)]);
    let found = rational_linear_divisors(&f).unwrap();
    assert!(found.divisors.is_empty());
    assert_eq!(found.residual.degree(), 2);
    assert!(multiplicity_pattern(&f).unwrap().unsplit);
}
