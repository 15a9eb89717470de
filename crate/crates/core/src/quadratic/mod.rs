//! Integral quadratic forms over ℤ and ℤₚ: the reduced form attached to an
//! m-gonal form, Jordan splittings, isotropy and local representation.

mod diagonal;
mod eq2;
mod gram;
mod jordan;

pub use diagonal::{diagonal_depth, is_isotropic, is_isotropic_i64, represents_locally_diagonal};
pub use eq2::{
    eq2_required_precision, eq2_rhs, max_stratum, solvable_eq2_at, solve_eq2_stratum, Eq2Certificate,
    Eq2Equation, Eq2Status, Eq2Verdict, Eq2Witness, EQ2_NODE_BUDGET,
};
pub use gram::{determinant_closed_form, reduced_quadratic, GramMatrix, ReducedQuadratic};
pub use jordan::{jordan_decompose, JordanBlock, JordanDecomposition, UnimodularBlock};
