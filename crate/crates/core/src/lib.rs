//! Abelian Reshetikhin–Turaev and toral Chern–Simons invariants of closed
//! 3-manifolds given by integer surgery, computed with exact phase sums.

pub mod error;
pub mod exactnum;
pub mod intlinalg;
pub mod quadmod;
pub mod sampling;
pub mod suite;
pub mod surgery;
pub mod tqft;

pub use error::{Error, Result};
