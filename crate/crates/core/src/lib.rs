//! Superoscillatory band-limited fields and their interaction with a
//! two-level particle.
//!
//! Units: ħ = c = 1, and the band limit k₀ is the natural unit of
//! wavenumber. All knobs are dimensionless multiples.

pub mod corpus;
pub mod dynamics;
pub mod field;
pub mod harness;
pub mod ledger;
pub mod quadrature;
pub mod signal;
pub mod special;
