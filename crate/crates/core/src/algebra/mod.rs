//! Exact scalars, polynomials, matrices and truncated Laurent series.

pub mod field;
pub mod matrix;
pub mod poly;
pub mod series;
pub mod matseries;
