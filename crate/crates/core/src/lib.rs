//! Physically rooted zero-knowledge binding between a physical entity and its
//! digital twin.
//!
//! The twin proves knowledge of its long-term key with a Schnorr
//! identification exchange. The entity reveals the hash of its unclonable
//! identity and an ephemeral Diffie-Hellman share. Both sides then derive a
//! session key bound to the authority-issued commitment `zeta`.
//!
//! The crate is `no_std` (with `alloc`). File formats, parallel execution and
//! the command line live in the companion `przk-bind-cli` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod adversary;
pub mod channel;
pub mod group;
pub mod hash;
pub mod identity;
pub mod protocol;
pub mod registration;
pub mod simulator;

pub use group::{GroupId, P256Group, PrimeGroup, ToyGroup};
pub use hash::Digest;
