//! Stabilized-feedback episodic memory (SF-EM).
//!
//! The crate is organised bottom-up:
//!
//! * [`art`] — fusion ART primitives (complement coding, choice, competition,
//!   template matching/learning) shared by every layer.
//! * [`codec`] — temporal sequence codes: the decay scheme and the buffered
//!   geometric scheme with its exact decoder.
//! * [`strength`] — memory-strength lifecycle: reinforcement, fixed and
//!   adaptive decay, terminal values and threshold pruning.
//! * [`feedback`] — user-feedback classification and the strength/vigilance
//!   modulation functions.
//! * [`recognize`] — episode recognition over a working buffer of timestamped
//!   events (pair merging with time-gap insertion).
//! * [`network`] — the full SF-EM network: four-channel event layer, ordinary
//!   and negative episode fields, learning, partial-cue retrieval and
//!   snapshotting.
//! * [`interpreter`] — raw observation records to network inputs (one-hot
//!   actions, fuzzified environment, device encodings).
//! * [`psm`] — service-plan execution against a simulated timeline.

pub mod art;
pub mod codec;
pub mod feedback;
pub mod interpreter;
pub mod network;
pub mod psm;
pub mod recognize;
pub mod strength;

pub use network::{NetworkInput, SfemConfig, SfemNetwork};
