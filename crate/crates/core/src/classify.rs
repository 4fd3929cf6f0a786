//! Verdicts on maximal non-holonomic overideals of a principal ideal `<P>`.
//!
//! The verdict is decided from the symbol pattern and, for non-separable
//! symbols of order 2 or 3, from which coefficients of the normalized
//! operator vanish. Each report carries the statement it relies on and the
//! Newton polygon data behind it.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::RatFunc;
use crate::error::{Error, Result};
use crate::io::{format_form, format_ratfunc, print_canonical};
use crate::newton::{second_step_report, Edge};
use crate::ore::{ConstantMatrix, DiffOp};
use crate::symbolform::{
    is_separable, multiplicity_pattern, rational_linear_divisors, BinaryForm, LinearDivisor,
    MultiplicityPattern,
};

/// The statements a verdict can rest on.
pub mod citation {
    pub const FINITENESS: &str = "finiteness theorem: if symb(P) is separable then <P> has at most \
        ord(P) maximal non-holonomic overideals, and at most one maximal non-holonomic overideal \
        for each attached polynomial g = GCD(symb(I))";
    pub const INTERSECTION: &str = "intersection corollary: if symb(P) is separable and maximal \
        non-holonomic overideals I_1..I_l exist with deg g_1 + ... + deg g_l >= ord(P), then \
        <P> = I_1 ∩ ... ∩ I_l";
    pub const SECOND_ORDER_P1: &str = "second-order classification, p1 != 0: for P = d_y^2 + p1 d_x \
        + p2 d_y + p3 the ideal <P> has no proper non-holonomic overideal, and P is irreducible";
    pub const SECOND_ORDER_ORDINARY: &str = "second-order classification, p1 = 0: P = d_y^2 + p2 d_y \
        + p3 is essentially ordinary; each solution u of P u = 0 gives the overideal \
        <d_y - u_y/u>, and there are infinitely many maximal ones";
    pub const THIRD_ORDER_21: &str = "third-order classification, symbol v w^2: for \
        P = d_y^2 d_x + p0 d_x^2 + p1 d_y^2 + p2 d_x d_y + p3 d_y + p4 d_x + p5 with p0 != 0, \
        <P> has at most two maximal non-holonomic overideals, and two distinct ones I_1, I_2 \
        satisfy <P> = I_1 ∩ I_2";
    pub const THIRD_ORDER_21_OPEN: &str = "third-order classification, symbol v w^2 with p0 = 0: \
        the bound of two can fail, e.g. for (d_x + b)(d_y^2 + b3 d_y + b4); no verdict";
    pub const THIRD_ORDER_3: &str = "third-order classification, symbol w^3: for \
        P = d_y^3 + p0 d_x^2 + p1 d_y^2 + p2 d_x d_y + p3 d_y + p4 d_x + p5 with one of p0, p2, p4 \
        nonzero, <P> has at most two maximal non-holonomic overideals, and two distinct ones \
        I_1, I_2 satisfy <P> = I_1 ∩ I_2";
    pub const THIRD_ORDER_3_ORDINARY: &str = "third-order classification, symbol w^3 with \
        p0 = p2 = p4 = 0: P = d_y^3 + p1 d_y^2 + p3 d_y + p5 has infinitely many maximal \
        non-holonomic overideals";
    pub const NORMALIZATION: &str = "normal form: a constant change d_x -> b1 d_x + b2 d_y, \
        d_y -> b3 d_x + b4 d_y moves the repeated symbol divisor to w";
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CaseTag {
    Separable,
    Order2P1Nonzero,
    Order2EssentiallyOrdinary,
    Order3Pattern21P0Nonzero,
    Order3Pattern21P0Zero,
    Order3Pattern3SomeNonzero,
    Order3Pattern3AllZero,
    Unnormalizable,
    OutOfScope,
}

impl CaseTag {
    pub const ALL: [CaseTag; 9] = [
        CaseTag::Separable,
        CaseTag::Order2P1Nonzero,
        CaseTag::Order2EssentiallyOrdinary,
        CaseTag::Order3Pattern21P0Nonzero,
        CaseTag::Order3Pattern21P0Zero,
        CaseTag::Order3Pattern3SomeNonzero,
        CaseTag::Order3Pattern3AllZero,
        CaseTag::Unnormalizable,
        CaseTag::OutOfScope,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CaseTag::Separable => "Separable",
            CaseTag::Order2P1Nonzero => "Order2-p1-nonzero",
            CaseTag::Order2EssentiallyOrdinary => "Order2-essentially-ordinary",
            CaseTag::Order3Pattern21P0Nonzero => "Order3-pattern21-p0-nonzero",
            CaseTag::Order3Pattern21P0Zero => "Order3-pattern21-p0-zero",
            CaseTag::Order3Pattern3SomeNonzero => "Order3-pattern3-some-nonzero",
            CaseTag::Order3Pattern3AllZero => "Order3-pattern3-all-zero",
            CaseTag::Unnormalizable => "Unnormalizable",
            CaseTag::OutOfScope => "OutOfScope",
        }
    }

    /// `order` only enters the separable bound.
    pub fn verdict(self, order: u32) -> Verdict {
        match self {
            CaseTag::Separable => Verdict::AtMostN(order),
            CaseTag::Order2P1Nonzero => Verdict::NoProperNonholonomic,
            CaseTag::Order2EssentiallyOrdinary | CaseTag::Order3Pattern3AllZero => Verdict::Infinite,
            CaseTag::Order3Pattern21P0Nonzero | CaseTag::Order3Pattern3SomeNonzero => Verdict::AtMostTwo,
            CaseTag::Order3Pattern21P0Zero | CaseTag::Unnormalizable | CaseTag::OutOfScope => {
                Verdict::Inconclusive
            }
        }
    }

    /// Cases where two distinct maximal overideals intersect to `<P>`.
    pub fn asserts_intersection(self) -> bool {
        matches!(self, CaseTag::Order3Pattern21P0Nonzero | CaseTag::Order3Pattern3SomeNonzero)
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    NoProperNonholonomic,
    AtMostN(u32),
    AtMostTwo,
    Infinite,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::NoProperNonholonomic => f.write_str("NoProperNonholonomic"),
            Verdict::AtMostN(n) => write!(f, "AtMostN({n})"),
            Verdict::AtMostTwo => f.write_str("AtMostTwo"),
            Verdict::Infinite => f.write_str("Infinite"),
            Verdict::Inconclusive => f.write_str("Inconclusive"),
        }
    }
}

/// A cited statement with the computed facts that trigger it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evidence {
    pub citation: String,
    pub facts: Vec<String>,
}

impl Evidence {
    fn new(citation: &str, facts: Vec<String>) -> Self {
        Evidence {
            citation: citation.to_string(),
            facts,
        }
    }
}

/// `operator = scale * change_derivations(P, transform)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Normalization {
    pub transform: ConstantMatrix,
    pub scale: RatFunc,
    pub operator: DiffOp,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationReport {
    pub order: u32,
    pub symbol: BinaryForm,
    /// Absent for order 0, where the symbol has no linear divisors.
    pub pattern: Option<MultiplicityPattern>,
    pub separable: bool,
    pub normalized: Option<Normalization>,
    pub case_tag: CaseTag,
    pub verdict: Verdict,
    pub intersection_claim: bool,
    /// The hypothesis `intersection_claim` is conditional on.
    pub hypothesis: Option<String>,
    /// Named coefficients of the normalized operator.
    pub coefficients: Vec<(String, RatFunc)>,
    pub edges: Vec<Edge>,
    pub evidence: Vec<Evidence>,
    pub diagnostics: Vec<String>,
}

fn rational_constant(f: &RatFunc) -> Option<BigRational> {
    f.as_constant()
}

/// Flips the sign so the first nonzero entry is positive.
fn positive_column(a: BigRational, b: BigRational) -> (BigRational, BigRational) {
    let neg = if a.is_zero() { b.is_negative() } else { a.is_negative() };
    if neg {
        (-a, -b)
    } else {
        (a, b)
    }
}

/// Matrix sending the direction `alpha2 v + beta2 w` to `w` and
/// `alpha1 v + beta1 w` to `v`, both up to scalars.
fn directions_matrix(
    (alpha2, beta2): (BigRational, BigRational),
    (alpha1, beta1): (BigRational, BigRational),
) -> ConstantMatrix {
    let (b1, b3) = positive_column(beta2, -alpha2);
    let (b2, b4) = positive_column(-beta1, alpha1);
    ConstantMatrix::new(b1, b2, b3, b4)
}

/// `(alpha, beta)` of a divisor whose direction is constant.
fn constant_direction(d: &LinearDivisor) -> Option<(BigRational, BigRational)> {
    match d {
        LinearDivisor::W => Some((BigRational::zero(), BigRational::one())),
        LinearDivisor::V(a) => Some((BigRational::one(), rational_constant(a)?)),
    }
}

/// Moves the repeated symbol divisor to `w` (and a simple one to `v`), then
/// scales the leading normalized monomial to 1.
pub fn normalize(p: &DiffOp) -> Result<Normalization> {
    let symbol = p.symbol()?;
    let n = symbol.degree();
    if !(2..=3).contains(&n) || is_separable(&symbol)? {
        return Err(Error::InvalidArgument(
            "normalization needs a non-separable symbol of order 2 or 3".into(),
        ));
    }
    let found = rational_linear_divisors(&symbol)?;
    if found.residual.degree() > 0 {
        return Err(Error::Unnormalizable(format!(
            "symbol {} does not split over Q(x,y)",
            format_form(&symbol)
        )));
    }
    let repeated = found
        .divisors
        .iter()
        .find(|(_, m)| *m >= 2)
        .map(|(d, _)| d.clone())
        .expect("non-separable symbol has a repeated rational divisor");
    let simple = found.divisors.iter().find(|(_, m)| *m == 1).map(|(d, _)| d.clone());
    let non_constant = |d: &LinearDivisor| {
        Error::Unnormalizable(format!("divisor {d} has no constant direction"))
    };
    let dir2 = constant_direction(&repeated).ok_or_else(|| non_constant(&repeated))?;
    let dir1 = match &simple {
        Some(d) => constant_direction(d).ok_or_else(|| non_constant(d))?,
        // any independent direction; v keeps the matrix triangular
        None if !dir2.0.is_zero() && !dir2.1.is_zero() => (BigRational::one(), BigRational::zero()),
        None if dir2.0.is_zero() => (BigRational::one(), BigRational::zero()),
        None => (BigRational::zero(), BigRational::one()),
    };
    let transform = directions_matrix(dir2, dir1);
    let moved = p.change_derivations(&transform)?;
    let target = match simple {
        Some(_) => (1, 2),
        None => (0, n),
    };
    let lead = moved.coeff(target.0, target.1);
    if lead.is_zero() {
        return Err(Error::VerificationFailed(format!(
            "normalized symbol {} lost its target monomial",
            format_form(&moved.symbol()?)
        )));
    }
    let scale = RatFunc::one().checked_div(&lead)?;
    let operator = moved.scale_left(&scale);
    Ok(Normalization {
        transform,
        scale,
        operator,
    })
}

fn coefficient_facts(coeffs: &[(String, RatFunc)]) -> Vec<String> {
    coeffs
        .iter()
        .map(|(name, c)| {
            if c.is_zero() {
                format!("{name} = 0")
            } else {
                format!("{name} = {} != 0", format_ratfunc(c))
            }
        })
        .collect()
}

fn edge_facts(edges: &[Edge]) -> Vec<String> {
    edges
        .iter()
        .map(|e| {
            let kind = if e.vertical { "vertical edge" } else { "edge" };
            format!(
                "{kind} ({},{})-({},{}) slope {}: {}",
                e.start.0,
                e.start.1,
                e.end.0,
                e.end.1,
                e.slope,
                e.equation_text()
            )
        })
        .collect()
}

pub fn classify(p: &DiffOp) -> Result<ClassificationReport> {
    classify_with_hints(p, None)
}

/// `attached_degrees`: degrees of attached polynomials of known maximal
/// non-holonomic overideals, used only for the intersection statement.
pub fn classify_with_hints(p: &DiffOp, attached_degrees: Option<&[u32]>) -> Result<ClassificationReport> {
    let symbol = p.symbol()?;
    let order = symbol.degree();
    let mut report = ClassificationReport {
        order,
        symbol: symbol.clone(),
        pattern: None,
        separable: false,
        normalized: None,
        case_tag: CaseTag::OutOfScope,
        verdict: Verdict::Inconclusive,
        intersection_claim: false,
        hypothesis: None,
        coefficients: Vec::new(),
        edges: Vec::new(),
        evidence: Vec::new(),
        diagnostics: Vec::new(),
    };
    if order == 0 {
        report
            .diagnostics
            .push("order 0: the ideal is the whole ring".into());
        return Ok(report);
    }
    let pattern = multiplicity_pattern(&symbol)?;
    report.separable = is_separable(&symbol)?;
    let profile = pattern.profile();
    report.pattern = Some(pattern);

    if report.separable {
        report.case_tag = CaseTag::Separable;
        report.verdict = CaseTag::Separable.verdict(order);
        report.evidence.push(Evidence::new(
            citation::FINITENESS,
            vec![format!("symb(P) = {} is separable, ord(P) = {order}", format_form(&symbol))],
        ));
        let hyp = format!("maximal non-holonomic overideals with attached degrees summing to >= {order}");
        if let Some(degs) = attached_degrees {
            let total: u32 = degs.iter().sum();
            report.intersection_claim = total >= order;
            report.evidence.push(Evidence::new(
                citation::INTERSECTION,
                vec![format!(
                    "attached degrees {:?} sum to {total}, {} {order}",
                    degs,
                    if total >= order { ">=" } else { "<" }
                )],
            ));
        }
        report.hypothesis = Some(hyp);
        return Ok(report);
    }

    let shape = match (order, profile.as_slice()) {
        (2, [2]) => Shape::Order2,
        (3, [2, 1]) => Shape::Pattern21,
        (3, [3]) => Shape::Pattern3,
        _ => {
            report.diagnostics.push(format!(
                "non-separable symbol of order {order} with pattern {}: no classification available",
                report.pattern.as_ref().expect("set above")
            ));
            return Ok(report);
        }
    };
    let norm = match normalize(p) {
        Ok(n) => n,
        Err(Error::Unnormalizable(why)) => {
            report.case_tag = CaseTag::Unnormalizable;
            report.diagnostics.push(format!("unnormalizable over Q: {why}"));
            return Ok(report);
        }
        Err(e) => return Err(e),
    };
    let q = &norm.operator;
    let named = |name: &str, i: u32, j: u32| (name.to_string(), q.coeff(i, j));
    report.coefficients = match shape {
        Shape::Order2 => vec![named("p1", 1, 0), named("p2", 0, 1), named("p3", 0, 0)],
        Shape::Pattern21 | Shape::Pattern3 => vec![
            named("p0", 2, 0),
            named("p1", 0, 2),
            named("p2", 1, 1),
            named("p3", 0, 1),
            named("p4", 1, 0),
            named("p5", 0, 0),
        ],
    };
    let coeff = |name: &str| {
        report
            .coefficients
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, c)| c.clone())
            .expect("named coefficient")
    };
    let zero = |name: &str| coeff(name).is_zero();
    let (tag, cite, relevant): (CaseTag, &str, &[&str]) = match shape {
        Shape::Order2 if !zero("p1") => (CaseTag::Order2P1Nonzero, citation::SECOND_ORDER_P1, &["p1"]),
        Shape::Order2 => (CaseTag::Order2EssentiallyOrdinary, citation::SECOND_ORDER_ORDINARY, &["p1"]),
        Shape::Pattern21 if !zero("p0") => (CaseTag::Order3Pattern21P0Nonzero, citation::THIRD_ORDER_21, &["p0"]),
        Shape::Pattern21 => (CaseTag::Order3Pattern21P0Zero, citation::THIRD_ORDER_21_OPEN, &["p0"]),
        Shape::Pattern3 if !(zero("p0") && zero("p2") && zero("p4")) => {
            (CaseTag::Order3Pattern3SomeNonzero, citation::THIRD_ORDER_3, &["p0", "p2", "p4"])
        }
        Shape::Pattern3 => (CaseTag::Order3Pattern3AllZero, citation::THIRD_ORDER_3_ORDINARY, &["p0", "p2", "p4"]),
    };
    report.case_tag = tag;
    report.verdict = tag.verdict(order);
    report.intersection_claim = tag.asserts_intersection();

    let m = &norm.transform.entries;
    report.evidence.push(Evidence::new(
        citation::NORMALIZATION,
        vec![
            format!(
                "d_x -> ({}) d_x + ({}) d_y, d_y -> ({}) d_x + ({}) d_y, then scaled by {}",
                m[0][0],
                m[0][1],
                m[1][0],
                m[1][1],
                format_ratfunc(&norm.scale)
            ),
            format!("normalized operator {}", print_canonical(q)),
        ],
    ));
    let facts: Vec<(String, RatFunc)> = report
        .coefficients
        .iter()
        .filter(|(n, _)| relevant.contains(&n.as_str()))
        .cloned()
        .collect();
    let mut facts = coefficient_facts(&facts);
    match second_step_report(q) {
        Ok(steps) => {
            facts.push(format!("first step: {} gives f_1 = {}", steps.first.constraint, format_ratfunc(&steps.first.f1)));
            facts.extend(edge_facts(&steps.edges));
            report.edges = steps.edges;
        }
        Err(e) => report.diagnostics.push(format!("no Newton data: {e}")),
    }
    report.evidence.push(Evidence::new(cite, facts));
    report.normalized = Some(norm);
    Ok(report)
}

#[derive(Clone, Copy)]
enum Shape {
    Order2,
    Pattern21,
    Pattern3,
}

/// Result of testing `d_y - g` as a right factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessCheck {
    pub holds: bool,
    pub residual: RatFunc,
    /// `P = quotient ∘ (d_y - g) + residual`.
    pub quotient: DiffOp,
}

/// `<d_y - g>` contains `<P>` exactly when the Riccati residual vanishes.
pub fn overideal_witness_check(p: &DiffOp, g: &RatFunc) -> Result<WitnessCheck> {
    let (quotient, residual) = p.riccati_division(g)?;
    Ok(WitnessCheck {
        holds: residual.is_zero(),
        residual,
        quotient,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::{parse_operator, parse_ratfunc};

    fn op(s: &str) -> DiffOp {
        parse_operator(s).unwrap()
    }

    fn tag(s: &str) -> CaseTag {
        classify(&op(s)).unwrap().case_tag
    }

    #[test]
    fn normalize_examples() {
        let n = normalize(&op("Dx^2 + Dy")).unwrap();
        assert_eq!(n.transform, ConstantMatrix::swap());
        assert_eq!(n.operator, op("Dy^2 + Dx"));

        let n = normalize(&op("Dy^2 + x*Dx + 1")).unwrap();
        assert!(n.transform.is_identity());

        let p = op("(Dx + Dy)^2 + Dx");
        let n = normalize(&p).unwrap();
        let moved = p.change_derivations(&n.transform).unwrap();
        assert_eq!(moved.symbol().unwrap(), BinaryForm::w().pow(2));
        assert_eq!(n.operator.symbol().unwrap(), BinaryForm::w().pow(2));
        assert_eq!(n.operator.coeff(0, 2), RatFunc::one());
    }

    #[test]
    fn normalize_pattern_21_sends_simple_divisor_to_v() {
        // symbol (v + w)^2 (v - w)
        let p = op("(Dx + Dy)^2*(Dx - Dy) + Dx");
        let n = normalize(&p).unwrap();
        assert_eq!(n.operator.symbol().unwrap(), BinaryForm::v().mul(&BinaryForm::w().pow(2)));
    }

    #[test]
    fn non_constant_direction_is_unnormalizable() {
        let p = op("(Dx + x*Dy)*(Dx + x*Dy)");
        assert!(matches!(normalize(&p), Err(Error::Unnormalizable(_))));
        let r = classify(&p).unwrap();
        assert_eq!(r.case_tag, CaseTag::Unnormalizable);
        assert_eq!(r.verdict, Verdict::Inconclusive);
        assert_eq!(r.pattern.unwrap().profile(), vec![2]);
    }

    #[test]
    fn verdict_examples() {
        let r = classify(&op("Dx*Dy + x*Dx + y*Dy + 1")).unwrap();
        assert_eq!((r.case_tag, r.verdict), (CaseTag::Separable, Verdict::AtMostN(2)));

        let r = classify(&op("Dy^2 + x*Dx")).unwrap();
        assert_eq!(r.verdict, Verdict::NoProperNonholonomic);
        assert!(!r.evidence.is_empty());

        let r = classify(&op("Dy^3 + y*Dx*Dy + Dy")).unwrap();
        assert_eq!(r.case_tag, CaseTag::Order3Pattern3SomeNonzero);
        assert_eq!(r.verdict, Verdict::AtMostTwo);
        assert!(r.intersection_claim);
        assert!(r.edges.iter().any(|e| e.vertical && e.start == (1, 1) && e.end == (1, 0)));
    }

    #[test]
    fn vanishing_table() {
        assert_eq!(tag("Dy^2 + y*Dy + 1"), CaseTag::Order2EssentiallyOrdinary);
        assert_eq!(tag("Dy^2*Dx + x*Dx^2 + Dy"), CaseTag::Order3Pattern21P0Nonzero);
        assert_eq!(tag("Dy^2*Dx + Dy^2 + Dx"), CaseTag::Order3Pattern21P0Zero);
        assert_eq!(tag("Dy^3 + Dx^2"), CaseTag::Order3Pattern3SomeNonzero);
        assert_eq!(tag("Dy^3 + x*Dx"), CaseTag::Order3Pattern3SomeNonzero);
        assert_eq!(tag("Dy^3 + x*Dy^2 + Dy + 1"), CaseTag::Order3Pattern3AllZero);
        assert_eq!(tag("Dy^4 + Dx"), CaseTag::OutOfScope);
    }

    #[test]
    fn intersection_needs_hints_when_separable() {
        let p = op("Dx*Dy + 1");
        assert!(!classify(&p).unwrap().intersection_claim);
        assert!(classify_with_hints(&p, Some(&[1, 1])).unwrap().intersection_claim);
        assert!(!classify_with_hints(&p, Some(&[1])).unwrap().intersection_claim);
    }

    #[test]
    fn witness_examples() {
        let w = overideal_witness_check(&op("Dy^2"), &parse_ratfunc("1/y").unwrap()).unwrap();
        assert!(w.holds);
        assert_eq!(w.quotient, op("Dy + 1/y"));
        assert_eq!(w.quotient.mul(&op("Dy - 1/y")), op("Dy^2"));

        let w = overideal_witness_check(&op("Dy^2 + 1"), &RatFunc::zero()).unwrap();
        assert!(!w.holds);
        assert_eq!(w.residual, RatFunc::one());

        // u = y^2 solves, so g = u_y/u = 2/y
        let p = op("Dy^2 - (2/y)*Dy + 2/y^2");
        let g = parse_ratfunc("2/y").unwrap();
        let w = overideal_witness_check(&p, &g).unwrap();
        let (_, r) = p.right_divide_linear(&DiffOp::dy().sub(&DiffOp::scalar(g))).unwrap();
        assert_eq!(w.residual, r);
        assert!(w.holds);
    }
}
