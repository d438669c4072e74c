//! Exact `p`-adic verification kernels: arithmetic in a totally ramified
//! extension of `Q_p`, matrices over it, the symplectic group and its Siegel
//! upper half-space, rational-function models of the `SL(2)` discrete and
//! principal series, residue pairings and the duality operators between them.
#![no_std]

extern crate alloc;

pub mod duality;
pub mod error;
pub mod field;
pub mod linalg;
pub mod poly;
pub mod rational;
pub mod sample;
pub mod series;
pub mod siegel;
pub mod symplectic;

pub use error::{Error, Result};
pub use field::{AbsValue, FieldParams, PadicScalar};
pub use linalg::KMatrix;
pub use poly::Poly;
pub use rational::{Place, RationalFunction};
pub use siegel::{RepSet, SiegelPoint};
pub use symplectic::{PPair, SymplecticElement};
