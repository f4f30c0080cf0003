//! Exact symbolic calculus for free-field vertex superalgebras (βγ, bc and
//! Heisenberg systems): circle products and OPEs, commutants of abelian
//! current actions, the W₃ algebra at c = −2, the Zhu map to the Weyl
//! algebra, and transvectant products.

pub mod algebra;
pub mod cli;
pub mod commutant;
pub mod error;
pub mod expr;
pub mod linalg;
pub mod ope;
pub mod poly;
pub mod scalar;
pub mod selftest;
pub mod state;
pub mod transvect;
pub mod w3;
pub mod weyl;
pub mod zhu;

pub use algebra::{Algebra, FreeAlgebraSpec, GenKind};
pub use error::{Error, Result};
pub use scalar::Scalar;
pub use state::{Grade, Grading, Monomial, State};
