//! Minimum-area triangles in the unit square and on integer grids, with the
//! tools needed to study the average case of Heilbronn's problem:
//!
//! - [`geom`]: exact grid predicates and the minimum-area-triangle search;
//! - [`codecs`]: bit strings, self-delimiting codes, arrangement ranking;
//! - [`witnesses`]: encoders that compress arrangements with degenerate or
//!   small-area structure, and their decoders;
//! - [`experiments`]: seeded, parallel Monte Carlo estimates;
//! - [`constructions`]: the Erdős construction and a small-`n` optimizer.

pub mod codecs;
pub mod constructions;
pub mod error;
pub mod experiments;
pub mod geom;
pub mod witnesses;

pub use error::{Error, Result};
