//! Results that would need an element outside Q(x,y).

use std::fmt;

use crate::arith::RatFunc;
use crate::io::format_ratfunc;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Obstruction {
    /// `∫ f dy` is not a rational function.
    NonRationalAntiderivative { integrand: RatFunc },
    /// The first integral of `d_x + a d_y` for non-constant `a`.
    FirstIntegralUnavailable { slope: RatFunc },
}

impl fmt::Display for Obstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Obstruction::NonRationalAntiderivative { integrand } => write!(
                f,
                "antiderivative not rational: ∫ {} dy needs a logarithm",
                format_ratfunc(integrand)
            ),
            Obstruction::FirstIntegralUnavailable { slope } => write!(
                f,
                "first integral not available in Q(x,y) for non-constant a = {}",
                format_ratfunc(slope)
            ),
        }
    }
}
