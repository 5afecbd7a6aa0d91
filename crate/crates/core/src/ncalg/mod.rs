//! Noncommutative *-polynomials, tensor polynomials, rewriting and
//! degree-bounded quotient reduction, all in exact arithmetic.

pub mod certificate;
pub mod echelon;
pub mod hom;
pub mod poly;
pub mod quotient;
pub mod rewrite;
pub mod word;

pub use certificate::{Certificate, CombinationTerm, LegReduction, Status, TraceStep, ZeroEvidence};
pub use echelon::Echelon;
pub use hom::{comultiplication, comultiply_generator, sphere_action, tuple_action, Side, TensorHom};
pub use poly::{Poly, TensorPoly};
pub use quotient::{ideal_membership_bounded, is_zero_tensor, QuotientBasis};
pub use rewrite::{build_rewrite_system, RewriteSystem, Rule};
pub use word::{Family, Generator, Letter, Roster, Word};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("roster mismatch: {0}")]
    RosterMismatch(String),
    #[error("dimension cap exceeded: {needed} monomials, cap {cap}")]
    DimensionCap { needed: usize, cap: usize },
    #[error("rewrite step limit {0} exceeded")]
    StepLimitExceeded(usize),
    #[error("polynomial degree {degree} exceeds bound {bound}")]
    DegreeAboveBound { degree: usize, bound: usize },
}
