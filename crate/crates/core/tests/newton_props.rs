mod common;

use common::nonzero_diffop;
use lpdo::arith::UniPoly;
use lpdo::newton::{leading_edges, polygon, second_step_report};
use lpdo::{BigRational, DiffOp, RatFunc};
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn support(p: &DiffOp) -> Vec<(u32, u32)> {
    p.terms().map(|(k, _)| (k.dx, k.dy)).collect()
}

/// Twice the signed area of `(a, b, c)` in the `(i, j)` plane; positive when
/// `c` lies to the right of the downward edge `a -> b`.
fn cross(a: (u32, u32), b: (u32, u32), c: (u32, u32)) -> i64 {
    let (ai, aj) = (a.0 as i64, a.1 as i64);
    let (bi, bj) = (b.0 as i64, b.1 as i64);
    let (ci, cj) = (c.0 as i64, c.1 as i64);
    (bi - ai) * (cj - aj) - (bj - aj) * (ci - ai)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn points_are_the_support(p in nonzero_diffop(4)) {
        let poly = polygon(&p).unwrap();
        let got: Vec<_> = poly.points.iter().map(|(q, _)| *q).collect();
        prop_assert_eq!(got, support(&p));
        for ((i, j), c) in &poly.points {
            prop_assert_eq!(c, &p.coeff(*i, *j));
        }
    }

    #[test]
    fn edges_bound_the_support(p in nonzero_diffop(4)) {
        let sup = support(&p);
        let edges = leading_edges(&p).unwrap();
        prop_assert!(!edges.is_empty() || sup.iter().all(|q| q.1 == 0));
        for e in &edges {
            prop_assert!(sup.contains(&e.start));
            if !e.vertical {
                prop_assert!(sup.contains(&e.end));
            }
            for q in &sup {
                // no support point strictly to the right of the edge line
                prop_assert!(cross(e.start, e.end, *q) <= 0, "{:?} right of {:?}-{:?}", q, e.start, e.end);
                prop_assert!(e.supports(*q));
            }
        }
        for w in edges.windows(2) {
            prop_assert_eq!(w[0].end, w[1].start);
        }
    }

    #[test]
    fn slopes_strictly_decrease(p in nonzero_diffop(4)) {
        let edges = leading_edges(&p).unwrap();
        for (k, e) in edges.iter().enumerate() {
            prop_assert!(!e.slope.is_negative());
            if e.vertical {
                prop_assert!(e.slope.is_zero());
                prop_assert_eq!(k, edges.len() - 1);
                prop_assert_eq!(e.end.1, 0);
            } else {
                prop_assert!(e.slope.is_positive());
                let run = BigRational::from_integer((e.end.0 as i64 - e.start.0 as i64).into());
                let drop = BigRational::from_integer((e.start.1 as i64 - e.end.1 as i64).into());
                prop_assert_eq!(&e.slope, &(run / drop));
            }
        }
        for w in edges.windows(2) {
            if !w[1].vertical {
                prop_assert!(w[0].slope > w[1].slope);
            }
        }
    }

    #[test]
    fn charpoly_is_rebuilt_from_edge_points(p in nonzero_diffop(4)) {
        for e in leading_edges(&p).unwrap() {
            let low = e.end.1;
            let mut c = vec![RatFunc::zero(); (e.start.1 - low + 1) as usize];
            let mut eq = vec![RatFunc::zero(); e.start.1 as usize + 1];
            for (i, j) in support(&p) {
                let on_edge = j <= e.start.1 && j >= low && {
                    let di = i as i64 - e.start.0 as i64;
                    let dj = (e.start.1 - j) as i64;
                    if e.vertical { di == 0 } else { BigRational::from_integer(di.into()) == &e.slope * BigRational::from_integer(dj.into()) }
                };
                if on_edge {
                    c[(j - low) as usize] = p.coeff(i, j);
                    eq[j as usize] = p.coeff(i, j);
                }
            }
            prop_assert_eq!(&e.charpoly, &UniPoly::new(c));
            prop_assert_eq!(&e.equation, &UniPoly::new(eq));
            prop_assert_eq!(e.charpoly.degree(), Some((e.start.1 - low) as usize));
        }
    }

    #[test]
    fn second_step_agrees_with_leading_edges(p in nonzero_diffop(3)) {
        if let Ok(r) = second_step_report(&p) {
            prop_assert_eq!(&r.edges, &leading_edges(&p).unwrap());
            prop_assert_eq!(r.first.f1, RatFunc::x());
        }
    }
}
