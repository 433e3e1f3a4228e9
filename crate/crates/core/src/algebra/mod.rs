//! Finite fields, polynomials, rational functions, 2×2 matrices and linear
//! algebra over `F_q`.

pub mod field;
pub mod linalg;
pub mod matrix;
pub mod poly;
pub mod ratfunc;

pub use field::{Fe, FiniteField};
pub use linalg::{solve_linear, AffineSolution};
pub use matrix::{eigen_class, EigenClass, Matrix2, Ring};
pub use poly::Poly;
pub use ratfunc::RatFunc;
