//! Exact arithmetic kernel.

pub mod field;
pub mod matrix;
pub mod parse;
pub mod poly;
pub mod ratfunc;
pub mod series;
pub mod specialize;

pub use field::{Field, Fp, Sample};
pub use matrix::Matrix;
pub use poly::{LaurentPoly, Monomial, Var, MAX_U};
pub use ratfunc::RatFunc;
pub use series::{expand_series, Direction, SeriesExpansion};
pub use specialize::{specialize, Specialization};

pub use num_rational::BigRational;
