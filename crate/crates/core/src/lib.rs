//! Exact factorization theory for finite presentations of commutative monoids.
//!
//! The crate is layered: [`group`] and [`zerosum`] provide finite abelian
//! groups and zero-sum sequences, [`engine`] computes arithmetical invariants
//! of anything implementing [`engine::PresentedMonoid`], [`families`] holds
//! the concrete monoids, and [`harness`] runs the desk-scale theorem checks.

pub mod engine;
pub mod error;
pub mod families;
pub mod group;
pub mod harness;
pub mod rational;
pub mod zerosum;

pub use error::{Error, Result};
