//! Exact arithmetic for linear partial differential operators in two
//! derivations over Q(x,y).

pub mod arith;
pub mod classify;
pub mod cli;
pub mod error;
pub mod io;
pub mod laplace;
pub mod newton;
pub mod obstruction;
pub mod ore;
pub mod symbolform;

pub use arith::{BigRational, Poly, RatFunc, Var};
pub use error::{Error, Result};
pub use obstruction::Obstruction;
pub use ore::{ConstantMatrix, DerivPower, DiffOp};
pub use symbolform::BinaryForm;
