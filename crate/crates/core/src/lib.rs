//! Physical card-based zero-knowledge proofs for connected spanning
//! subgraphs, and their applications to Hamiltonian cycles, maximum-leaf
//! spanning trees and the Bridges puzzle.
//!
//! Protocols are compiled to public card programs ([`engine::Program`]).
//! A program can be run once with seeded randomness, enumerated over all
//! shuffle outcomes to get an exact verdict distribution, or explored
//! event by event to compare transcript distributions exactly.

pub mod apps;
pub mod audit;
pub mod card;
pub mod engine;
pub mod error;
pub mod graph;
pub mod par;
pub mod random;
pub mod shuffle;
pub mod spanning;
pub mod subprotocols;
pub mod transcript;

pub use card::{decode, encode, reverse_tail, Card, CardMatrix, EnhancedMatrix, Facing, Sequence, Symbol};
pub use engine::{Program, ProverScript, RunOutcome, Usage, Verdict};
pub use error::{Error, Result};
pub use graph::{Coloring, Graph};
pub use random::{EnumeratedSource, RandomSource, SeededSource};
pub use transcript::{Event, Transcript};
