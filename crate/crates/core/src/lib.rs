//! Exact construction of the basic classical Lie superalgebras A(m|n),
//! B(m|n), C(n) and D(m|n) as graded matrix algebras, together with the
//! machinery to verify generalized quantum statistics on them: ℤ-gradings
//! induced by toral elements, creation/annihilation operator sets, and their
//! quadratic and triple relations.

pub mod exactfield;
pub mod superlinalg;
pub mod algebras;
pub mod grading;
pub mod cases;
pub mod relations;
pub mod enumerate;
