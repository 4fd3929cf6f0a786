//! Newton polygons of operators: support points `(i, j)` of `d_x^i d_y^j`,
//! leading edges of non-negative slope, and characteristic polynomials in
//! `z = d_y f_2`.
//!
//! Slopes are run over drop: an edge from `(i1, j1)` down to `(i2, j2)` has
//! slope `(i2 - i1) / (j1 - j2)`. A vertical edge has slope 0 and ends the
//! sweep.

use num_traits::{Signed, Zero};

use crate::arith::{BigRational, RatFunc, UniPoly};
use crate::error::{Error, Result};
use crate::io::{format_form, format_zpoly};
use crate::obstruction::Obstruction;
use crate::ore::DiffOp;
use crate::symbolform::{BinaryForm, LinearDivisor};

pub type Point = (u32, u32);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub start: Point,
    pub end: Point,
    pub slope: BigRational,
    pub vertical: bool,
    /// Support points on the closed segment, top to bottom.
    pub points: Vec<Point>,
    /// `Σ p_ij z^(j - j_end)` over the points on the edge.
    pub charpoly: UniPoly<RatFunc>,
    /// `Σ p_ij z^j`, the constraint on `z = d_y f_2` as written.
    pub equation: UniPoly<RatFunc>,
}

impl Edge {
    /// `(d_y f_2)^3 + (y)*(d_y f_2) = 0`.
    pub fn equation_text(&self) -> String {
        format!("{} = 0", format_zpoly(&self.equation).replace('z', "(d_y f_2)"))
    }

    /// Every support point lies on or to the left of the edge's line.
    pub fn supports(&self, p: Point) -> bool {
        let (i1, j1) = (self.start.0 as i64, self.start.1 as i64);
        let lhs = BigRational::from_integer((p.0 as i64 - i1).into());
        let rhs = &self.slope * BigRational::from_integer((j1 - p.1 as i64).into());
        lhs <= rhs
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    pub points: Vec<(Point, RatFunc)>,
    pub edges: Vec<Edge>,
}

fn ratio(from: Point, to: Point) -> BigRational {
    BigRational::new(
        (to.0 as i64 - from.0 as i64).into(),
        (from.1 as i64 - to.1 as i64).into(),
    )
}

fn make_edge(p: &DiffOp, start: Point, end: Point, slope: BigRational, vertical: bool, support: &[Point]) -> Edge {
    let mut points: Vec<Point> = support
        .iter()
        .copied()
        .filter(|&q| {
            q == start
                || (q.1 < start.1 && q.1 >= end.1 && {
                    if vertical {
                        q.0 == start.0
                    } else {
                        ratio(start, q) == slope
                    }
                })
        })
        .collect();
    points.sort_by(|a, b| b.1.cmp(&a.1));
    let top = start.1 as usize;
    let mut char_c = vec![RatFunc::zero(); top - end.1 as usize + 1];
    let mut eq_c = vec![RatFunc::zero(); top + 1];
    for &(i, j) in &points {
        let c = p.coeff(i, j);
        char_c[(j - end.1) as usize] = c.clone();
        eq_c[j as usize] = c;
    }
    Edge {
        start,
        end,
        slope,
        vertical,
        points,
        charpoly: UniPoly::new(char_c),
        equation: UniPoly::new(eq_c),
    }
}

/// Support points and leading edges.
///
/// The sweep starts at the highest row, at its rightmost point. From the
/// current vertex it moves to the point below maximizing run over drop,
/// taking the lowest such point on ties. Once no positive slope remains it
/// closes with a vertical edge down to row 0 and stops.
pub fn polygon(p: &DiffOp) -> Result<NewtonPolygon> {
    if p.is_zero() {
        return Err(Error::ZeroOperator);
    }
    let points: Vec<(Point, RatFunc)> = p
        .terms()
        .map(|(k, c)| ((k.dx, k.dy), c.clone()))
        .collect();
    let support: Vec<Point> = points.iter().map(|(q, _)| *q).collect();
    let top = support.iter().map(|q| q.1).max().unwrap();
    let start_i = support.iter().filter(|q| q.1 == top).map(|q| q.0).max().unwrap();
    let mut cur: Point = (start_i, top);
    let mut edges = Vec::new();
    while cur.1 > 0 {
        let best = support
            .iter()
            .filter(|q| q.1 < cur.1)
            .map(|&q| (ratio(cur, q), q))
            .max_by(|(ra, qa), (rb, qb)| ra.cmp(rb).then(qb.1.cmp(&qa.1)));
        match best {
            Some((r, q)) if r.is_positive() => {
                edges.push(make_edge(p, cur, q, r, false, &support));
                cur = q;
            }
            _ => {
                let end = (cur.0, 0);
                edges.push(make_edge(p, cur, end, BigRational::zero(), true, &support));
                break;
            }
        }
    }
    Ok(NewtonPolygon { points, edges })
}

pub fn leading_edges(p: &DiffOp) -> Result<Vec<Edge>> {
    Ok(polygon(p)?.edges)
}

pub fn characteristic_equation(edge: &Edge) -> (UniPoly<RatFunc>, String) {
    (edge.charpoly.clone(), edge.equation_text())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FirstStep {
    pub divisor: LinearDivisor,
    pub constraint: String,
    pub f1: RatFunc,
}

/// The first integral `f_1` attached to a linear divisor of the symbol.
pub fn first_step(p: &DiffOp, divisor: &LinearDivisor) -> Result<FirstStep> {
    let symbol = p.symbol()?;
    if symbol.div_exact(&divisor.to_form()).is_none() {
        return Err(Error::DivisorDoesNotDivide {
            divisor: format_form(&divisor.to_form()),
            symbol: format_form(&symbol),
        });
    }
    let (constraint, f1, check) = match divisor {
        LinearDivisor::W => ("d_y f_1 = 0".to_string(), RatFunc::x(), DiffOp::dy()),
        LinearDivisor::V(a) => {
            let Some(q) = a.as_constant() else {
                return Err(Obstruction::FirstIntegralUnavailable { slope: a.clone() }.into());
            };
            let op = DiffOp::dx().add(&DiffOp::dy().scale_left(a));
            let f1 = RatFunc::y() - RatFunc::x().scale(&q);
            let text = if q.is_zero() {
                "d_x f_1 = 0".to_string()
            } else {
                format!("(d_x + ({})*d_y) f_1 = 0", crate::io::format_rational(&q))
            };
            (text, f1, op)
        }
    };
    if !check.apply(&f1).is_zero() {
        return Err(Error::VerificationFailed("first integral".into()));
    }
    Ok(FirstStep {
        divisor: divisor.clone(),
        constraint,
        f1,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SecondStepReport {
    pub first: FirstStep,
    pub edges: Vec<Edge>,
    /// Some leading edge has positive slope.
    pub positive_slope: bool,
    /// The sweep may end on a vertical edge.
    pub terminal_vertical: bool,
}

/// Symbol is `c w^n` or `c v w^(n-1)`.
pub fn is_normalized_shape(symbol: &BinaryForm) -> bool {
    let n = symbol.degree();
    n >= 1 && symbol.w_valuation() >= (n - 1).max(1)
}

/// Edge data after fixing `f_1 = x` for the divisor `w`.
pub fn second_step_report(p: &DiffOp) -> Result<SecondStepReport> {
    let symbol = p.symbol()?;
    if !is_normalized_shape(&symbol) {
        return Err(Error::NotNormalized(format!(
            "symbol {} is not c*w^n or c*v*w^(n-1)",
            format_form(&symbol)
        )));
    }
    let first = first_step(p, &LinearDivisor::W)?;
    let edges = leading_edges(p)?;
    Ok(SecondStepReport {
        first,
        positive_slope: edges.iter().any(|e| e.slope.is_positive()),
        terminal_vertical: edges.last().is_some_and(|e| e.vertical),
        edges,
    })
}
