//! Symbolic dynamics workbench.
//!
//! Shift spaces are described by forbidden-word lists ([`shift`]), labeled
//! graphs ([`graphs`]), loop graphs and generator sets ([`generators`]), or
//! the Dyck shift ([`dyck`]). On top of those sit exact block and
//! periodic-point counting, certified and estimated entropies
//! ([`spectra`]), and truncated zeta series ([`zeta`]).
//!
//! Counts are exact big integers; entropies are in nats.

pub mod dyck;
pub mod error;
pub mod generators;
pub mod graphs;
pub mod shift;
pub mod spectra;
pub mod zeta;

/// Library version, echoed in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub use error::{Error, Result};
pub use graphs::{DiGraph, Enclosure, LabeledGraph};
pub use shift::{Alphabet, Language, SftPresentation, Symbol, SyncVerdict, Word};
