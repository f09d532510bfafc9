//! Deterministic two-agent rendezvous with advice on anonymous
//! port-labeled graphs.
//!
//! Two agents with distinct labels walk a graph in synchronous rounds,
//! perceiving only node degrees and port numbers. An all-knowing oracle
//! hands both agents the same binary advice string, and rendezvous in time
//! equal to the initial distance becomes possible with surprisingly little
//! of it. This crate provides the pieces needed to run and probe that
//! setting:
//!
//! - [`graph`]: anonymous port-labeled graphs and the construction toolkit
//!   (oriented rings, edge-colored clique chains, path attachments, joined
//!   double copies) plus shortest-path port extraction.
//! - [`advice`]: the self-delimiting bit-string codec and the oracle that
//!   turns full instance knowledge into rendezvous or treasure-hunt advice.
//! - [`sim`]: the synchronous round engine with wake-up delays, node-only
//!   meeting detection, and edge-crossing diagnostics.
//! - [`behavior`]: the advice-driven rendezvous walker, the port-replay
//!   treasure hunter, and a normal-walk clique-chain explorer.
//! - [`lab`]: experiment machinery for the adversarial constructions:
//!   family enumeration, traversal fingerprints, pigeonhole bucketing,
//!   counting bounds, and the oriented-ring meta-behaviour experiment.

#![forbid(unsafe_code)]

pub mod advice;
pub mod behavior;
pub mod graph;
pub mod lab;
pub mod sim;

#[cfg(test)]
pub(crate) mod testutil;

/// Agent label, drawn from the space `{1, ..., L}`. The sole
/// symmetry-breaking resource agents possess.
pub type Label = u64;

pub use advice::{AdviceString, BitString};
pub use graph::{NodeId, Port, PortGraph};
pub use sim::{Action, AgentConfig, Behavior, Observation, SimResult};
