//! Exact computational laboratory for sum-product phenomena in prime fields.
//!
//! The crate is organised bottom-up:
//!
//! * [`field`]: `F_p` arithmetic, primitive roots and discrete-log tables.
//! * [`sets`]: subsets of `F_p` and the structured families used in experiments.
//! * [`transform`]: exact convolution over `(F_p, +)` and `(F_p^*, *)`.
//! * [`energy`]: additive energies of a set and its dilates, and the
//!   quantities built from the full energy spectrum.
//! * [`sumprod`]: representation functions of `(A ± B)(C ± D)`, solution
//!   counts and the exact identities relating them to energies.
//! * [`lab`]: seeded experiment sweeps and CSV/JSONL output.

pub mod energy;
pub mod error;
pub mod exact;
pub mod field;
pub mod lab;
pub mod rng;
pub mod sets;
pub mod sumprod;
pub mod transform;

pub use error::{Error, Result};
pub use field::{FieldElement, PrimeField};
pub use sets::{FpSet, Sign};
pub use transform::{Domain, RepFn};
