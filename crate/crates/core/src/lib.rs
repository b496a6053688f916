//! Weight-graded Lie algebras attached to fundamental groups of punctured
//! curves: Hall bases, the outer-automorphism graded pieces, Chevalley-Eilenberg
//! and Harrison cohomology, and deformation machinery, all with exact
//! arithmetic over `Z/l^k`.

pub mod artin;
pub mod coeff;
pub mod cohom;
pub mod deform;
pub mod format;
pub mod free;
pub mod lie;
pub mod outgr;
pub mod verify;

pub use coeff::{CoeffRing, ModMatrix};
pub use lie::{GradedLieAlgebra, LieElement};
