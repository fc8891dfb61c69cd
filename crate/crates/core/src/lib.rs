//! Exact decision procedures for symplectic embeddings of open 4-dimensional
//! ellipsoids (and disjoint unions of balls and ellipsoids) into ellipsoids.
//!
//! Two independent routes are implemented:
//!
//! * the **capacity route** compares the sequences `N(a, b)` of all
//!   combinations `m·a + n·b` sorted with repetitions ([`capacities`]);
//! * the **cone route** reduces the ball-packing class `(μ; a_1, …, a_M)` on
//!   the blow-up of the projective plane by Cremona moves ([`cone`]).
//!
//! [`embed`] assembles them into embedding decisions, optimal squeezing
//! factors and points of the ellipsoid-into-ball capacity function. Everything
//! is exact rational arithmetic; no floating point is involved anywhere in a
//! decision.

pub mod capacities;
pub mod cli;
pub mod cone;
pub mod embed;
pub mod oracle;
pub mod rational;
pub mod weights;

mod error;

pub use capacities::{CapSequence, DominanceReport};
pub use cone::{ConeClass, ConeDecision, IndexTuple};

pub use embed::{Bracket, EmbedDecision, Ellipsoid};
pub use error::{Error, Result};
pub use rational::Rational;
pub use weights::WeightSequence;
