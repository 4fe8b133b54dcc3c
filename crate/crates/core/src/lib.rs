//! Finite commutative rings and their unit groups.
//!
//! * [`ring`]: arithmetic over an additive basis with structure constants, plus
//!   units, nilradical, locality, ideal powers, idempotents, products and quotients.
//! * [`builders`]: Galois rings and the ring families whose unit groups are known.
//! * [`groups`]: finite abelian group types and recovery of the type of a black-box group.
//! * [`units`]: unit-group computation and per-ring structure reports.
//! * [`realize`]: deciding which groups and cardinalities occur as unit groups.

pub mod arith;
pub mod builders;
pub mod groups;
pub mod realize;
pub mod ring;
pub mod units;

pub use ring::{direct_product, AdditiveSubgroup, FiniteRing, RingElement, RingError};
