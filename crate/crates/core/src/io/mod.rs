//! Text input and output.

mod parse;
mod print;
pub mod report;

pub use parse::{
    eval_operator, parse, parse_binary_form, parse_linear_form, parse_operator, parse_ratfunc,
    Atom, Expr, ParseError, Pos,
};
pub use print::{format_form, format_poly, format_rational, format_ratfunc, format_zpoly, print_canonical};
pub use report::Report;
