//! The binding session: twin-side Schnorr prover, entity-side verifier,
//! physical-identity check, and mutual session-key derivation.
//!
//! Message order is fixed:
//!
//! ```text
//!   Twin (D)                                  Entity (P)
//!   Idle                                      Idle
//!     --------- Commit { alpha = g^r } --------->
//!   CommitmentSent                            Challenged
//!     <-------- Challenge { c } -----------------
//!   ResponseSent
//!     --------- Response { z = r + c*sk_d } ---->
//!                                             ResponseVerified   (g^z == alpha * pk_d^c)
//!     <-------- IdentityProof { h_sp, g^r_p } ---
//!   IdentityVerified (g^h_sp == pk_p)         IdentityProofSent
//!   KeyEstablished
//!     --------- Verdict { accept } ------------->
//!                                             IdentityVerified
//!                                             KeyEstablished
//! ```
//!
//! Any failed check moves the checking party to `Failed` and it sends a
//! rejecting `Verdict` to its peer. Terminal states ignore further input.

mod entity;
mod schnorr;
mod transcript;
mod twin;


use alloc::vec::Vec;
use core::fmt;

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::group::{GroupError, PrimeGroup};
use crate::hash::{h1_bytes, Digest};

pub use self::entity::{EntityPhase, EntitySession};
pub use self::schnorr::{
    challenge_scalar, extract_secret, fiat_shamir_challenge, fiat_shamir_prove,
    fiat_shamir_prove_with_nonce, fiat_shamir_verify, schnorr_response, schnorr_verify,
    ExtractionError,
};
pub use self::transcript::Transcript;
pub use self::twin::{TwinPhase, TwinSession};

pub const TAG_COMMIT: u8 = 0x01;
pub const TAG_CHALLENGE: u8 = 0x02;
pub const TAG_RESPONSE: u8 = 0x03;
pub const TAG_IDENTITY_PROOF: u8 = 0x04;
pub const TAG_VERDICT: u8 = 0x05;

/// Size of the header preceding every payload: tag byte plus big-endian u32 length.
pub const HEADER_LEN: usize = 5;

/// Why a session was aborted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AbortReason {
    BadProof,
    BadIdentity,
    DegenerateCommitment,
    OutOfOrder,
    Timeout,
    /// Bytes on the wire did not decode.
    Malformed,
}

impl AbortReason {
    pub const ALL: [AbortReason; 6] = [
        AbortReason::BadProof,
        AbortReason::BadIdentity,
        AbortReason::DegenerateCommitment,
        AbortReason::OutOfOrder,
        AbortReason::Timeout,
        AbortReason::Malformed,
    ];

    pub fn code(self) -> u8 {
        match self {
            AbortReason::BadProof => 1,
            AbortReason::BadIdentity => 2,
            AbortReason::DegenerateCommitment => 3,
            AbortReason::OutOfOrder => 4,
            AbortReason::Timeout => 5,
            AbortReason::Malformed => 6,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        Self::ALL.into_iter().find(|r| r.code() == code)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            AbortReason::BadProof => "bad_proof",
            AbortReason::BadIdentity => "bad_identity",
            AbortReason::DegenerateCommitment => "degenerate_commitment",
            AbortReason::OutOfOrder => "out_of_order",
            AbortReason::Timeout => "timeout",
            AbortReason::Malformed => "malformed",
        }
    }
}

impl fmt::Display for AbortReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Message<G: PrimeGroup> {
    Commit {
        alpha: G::Element,
    },
    Challenge {
        c: G::Scalar,
    },
    Response {
        z: G::Scalar,
    },
    IdentityProof {
        h_sp: G::Scalar,
        r_p_pub: G::Element,
    },
    /// `reason` is `None` exactly when `accept` is true.
    Verdict {
        accept: bool,
        reason: Option<AbortReason>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum WireError {
    #[error("message shorter than its header")]
    Truncated,
    #[error("unknown message tag {0:#04x}")]
    UnknownTag(u8),
    #[error("payload length {actual} does not match the expected {expected}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("bad field: {0}")]
    Field(#[from] GroupError),
    #[error("inconsistent verdict fields")]
    BadVerdict,
}

impl<G: PrimeGroup> Message<G> {
    pub fn reject(reason: AbortReason) -> Self {
        Message::Verdict {
            accept: false,
            reason: Some(reason),
        }
    }

    pub fn accept() -> Self {
        Message::Verdict {
            accept: true,
            reason: None,
        }
    }

    pub fn tag(&self) -> u8 {
        match self {
            Message::Commit { .. } => TAG_COMMIT,
            Message::Challenge { .. } => TAG_CHALLENGE,
            Message::Response { .. } => TAG_RESPONSE,
            Message::IdentityProof { .. } => TAG_IDENTITY_PROOF,
            Message::Verdict { .. } => TAG_VERDICT,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Message::Commit { .. } => "Commit",
            Message::Challenge { .. } => "Challenge",
            Message::Response { .. } => "Response",
            Message::IdentityProof { .. } => "IdentityProof",
            Message::Verdict { .. } => "Verdict",
        }
    }

    /// Part of the authentication exchange proper, as opposed to a verdict.
    pub fn is_authentication(&self) -> bool {
        !matches!(self, Message::Verdict { .. })
    }

    fn payload_len(tag: u8) -> Option<usize> {
        match tag {
            TAG_COMMIT => Some(G::ELEMENT_LEN),
            TAG_CHALLENGE | TAG_RESPONSE => Some(G::SCALAR_LEN),
            TAG_IDENTITY_PROOF => Some(G::SCALAR_LEN + G::ELEMENT_LEN),
            TAG_VERDICT => Some(2),
            _ => None,
        }
    }

    /// `tag || len_be32 || fields`.
    pub fn encode(&self) -> Vec<u8> {
        let mut payload = Vec::new();
        match self {
            Message::Commit { alpha } => payload.extend(G::encode_element(alpha)),
            Message::Challenge { c } => payload.extend(G::encode_scalar(c)),
            Message::Response { z } => payload.extend(G::encode_scalar(z)),
            Message::IdentityProof { h_sp, r_p_pub } => {
                payload.extend(G::encode_scalar(h_sp));
                payload.extend(G::encode_element(r_p_pub));
            }
            Message::Verdict { accept, reason } => {
                payload.push(u8::from(*accept));
                payload.push(reason.map_or(0, AbortReason::code));
            }
        }
        let mut out = Vec::with_capacity(HEADER_LEN + payload.len());
        out.push(self.tag());
        out.extend_from_slice(&(payload.len() as u32).to_be_bytes());
        out.extend(payload);
        out
    }

    pub fn decode(bytes: &[u8]) -> Result<Self, WireError> {
        if bytes.len() < HEADER_LEN {
            return Err(WireError::Truncated);
        }
        let tag = bytes[0];
        let declared = u32::from_be_bytes([bytes[1], bytes[2], bytes[3], bytes[4]]) as usize;
        let payload = &bytes[HEADER_LEN..];
        let expected = Self::payload_len(tag).ok_or(WireError::UnknownTag(tag))?;
        if declared != expected || payload.len() != expected {
            return Err(WireError::LengthMismatch {
                expected,
                actual: if declared != expected {
                    declared
                } else {
                    payload.len()
                },
            });
        }
        Ok(match tag {
            TAG_COMMIT => Message::Commit {
                alpha: G::decode_element(payload)?,
            },
            TAG_CHALLENGE => Message::Challenge {
                c: G::decode_scalar(payload)?,
            },
            TAG_RESPONSE => Message::Response {
                z: G::decode_scalar(payload)?,
            },
            TAG_IDENTITY_PROOF => {
                let (h, r) = payload.split_at(G::SCALAR_LEN);
                Message::IdentityProof {
                    h_sp: G::decode_scalar(h)?,
                    r_p_pub: G::decode_element(r)?,
                }
            }
            _ => {
                let accept = match payload[0] {
                    0 => false,
                    1 => true,
                    _ => return Err(WireError::BadVerdict),
                };
                let reason = match payload[1] {
                    0 => None,
                    code => Some(AbortReason::from_code(code).ok_or(WireError::BadVerdict)?),
                };
                if accept == reason.is_some() {
                    return Err(WireError::BadVerdict);
                }
                Message::Verdict { accept, reason }
            }
        })
    }
}

/// `K_pd`, 32 bytes.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SessionKey(pub Digest);

impl SessionKey {
    /// `H1_bytes(enc(shared) || zeta)`.
    pub fn derive<G: PrimeGroup>(shared: &G::Element, zeta: &Digest) -> Self {
        SessionKey(h1_bytes(&[&G::encode_element(shared), zeta.as_bytes()]))
    }

    pub fn as_bytes(&self) -> &[u8; 32] {
        self.0.as_bytes()
    }
}

/// Counts of expensive operations performed by one party.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpCounts {
    pub group_exp: u64,
    pub group_mul: u64,
    pub hash: u64,
}

impl core::ops::Add for OpCounts {
    type Output = OpCounts;
    fn add(self, rhs: OpCounts) -> OpCounts {
        OpCounts {
            group_exp: self.group_exp + rhs.group_exp,
            group_mul: self.group_mul + rhs.group_mul,
            hash: self.hash + rhs.hash,
        }
    }
}

impl core::ops::AddAssign for OpCounts {
    fn add_assign(&mut self, rhs: OpCounts) {
        *self = *self + rhs;
    }
}

/// Group operations routed through a counter.
pub(crate) struct Counted<'a>(pub &'a mut OpCounts);

impl Counted<'_> {
    pub fn exp<G: PrimeGroup>(&mut self, base: &G::Element, e: &G::Scalar) -> G::Element {
        self.0.group_exp += 1;
        G::exp(base, e)
    }

    pub fn mul<G: PrimeGroup>(&mut self, a: &G::Element, b: &G::Element) -> G::Element {
        self.0.group_mul += 1;
        G::mul(a, b)
    }

    pub fn hash(&mut self) {
        self.0.hash += 1;
    }
}

/// What a party has learned about the two verification gates.
///
/// The twin learns the outcome of the Schnorr check implicitly: the entity
/// only sends its identity proof after the proof verified. The entity learns
/// the outcome of the identity check from the twin's verdict.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Gates {
    pub schnorr: Option<bool>,
    pub identity: Option<bool>,
}

impl Gates {
    pub fn both_passed(&self) -> bool {
        self.schnorr == Some(true) && self.identity == Some(true)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum ProtocolError {
    #[error("`{operation}` is not allowed in phase {phase}")]
    OutOfPhase {
        operation: &'static str,
        phase: &'static str,
    },
    #[error("session already terminated")]
    Terminated,
    #[error("binding record does not verify")]
    BadBindingRecord,
    #[error("binding record is for a different key")]
    KeyMismatch,
    #[error("session aborted: {0}")]
    Aborted(AbortReason),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    /// The digital twin, D.
    Twin,
    /// The physical entity, P.
    Entity,
}

impl Role {
    pub fn peer(self) -> Role {
        match self {
            Role::Twin => Role::Entity,
            Role::Entity => Role::Twin,
        }
    }
}

/// A message-driven protocol participant.
///
/// Implemented by the honest sessions and by the attacker strategies in
/// [`crate::adversary`], so the channel in [`crate::channel`] can drive any
/// pairing.
pub trait Endpoint<G: PrimeGroup> {
    fn role(&self) -> Role;

    /// First message, if this endpoint opens the exchange.
    fn start(&mut self, rng: &mut dyn RngCore) -> Option<Message<G>>;

    fn receive(&mut self, msg: Message<G>, rng: &mut dyn RngCore) -> Option<Message<G>>;

    /// Bytes arrived that did not decode.
    fn receive_malformed(&mut self) -> Option<Message<G>>;

    /// The channel went quiet while this endpoint was waiting.
    fn timeout(&mut self);

    fn is_terminal(&self) -> bool;

    /// True once this endpoint holds a session key.
    fn key_established(&self) -> bool;

    fn session_key(&self) -> Option<SessionKey>;

    fn op_counts(&self) -> OpCounts;

    /// Short name of the current state, for traces.
    fn phase_name(&self) -> &'static str;
}
