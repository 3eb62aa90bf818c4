use alloc::vec::Vec;

use super::{AbortReason, Message};
use crate::group::PrimeGroup;

/// Public view of one session as seen on the wire.
///
/// Holds only values that were transmitted, so it can be handed to an
/// eavesdropping adversary as-is.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transcript<G: PrimeGroup> {
    pub alpha: Option<G::Element>,
    pub c: Option<G::Scalar>,
    pub z: Option<G::Scalar>,
    pub h_sp: Option<G::Scalar>,
    pub r_p_pub: Option<G::Element>,
    pub verdict: Option<(bool, Option<AbortReason>)>,
    /// `(message tag, virtual delivery time in microseconds)` in delivery order.
    pub timestamps_us: Vec<(u8, u64)>,
}

impl<G: PrimeGroup> Default for Transcript<G> {
    fn default() -> Self {
        Transcript {
            alpha: None,
            c: None,
            z: None,
            h_sp: None,
            r_p_pub: None,
            verdict: None,
            timestamps_us: Vec::new(),
        }
    }
}

impl<G: PrimeGroup> Transcript<G> {
    pub fn record(&mut self, msg: &Message<G>, at_us: u64) {
        match *msg {
            Message::Commit { alpha } => self.alpha = Some(alpha),
            Message::Challenge { c } => self.c = Some(c),
            Message::Response { z } => self.z = Some(z),
            Message::IdentityProof { h_sp, r_p_pub } => {
                self.h_sp = Some(h_sp);
                self.r_p_pub = Some(r_p_pub);
            }
            Message::Verdict { accept, reason } => self.verdict = Some((accept, reason)),
        }
        self.timestamps_us.push((msg.tag(), at_us));
    }

    pub fn schnorr_triple(&self) -> Option<(G::Element, G::Scalar, G::Scalar)> {
        Some((self.alpha?, self.c?, self.z?))
    }

    /// Canonical encodings of every recorded field, concatenated.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        if let Some(a) = &self.alpha {
            out.extend(G::encode_element(a));
        }
        for s in [&self.c, &self.z, &self.h_sp].into_iter().flatten() {
            out.extend(G::encode_scalar(s));
        }
        if let Some(r) = &self.r_p_pub {
            out.extend(G::encode_element(r));
        }
        if let Some((accept, reason)) = self.verdict {
            out.push(u8::from(accept));
            out.push(reason.map_or(0, AbortReason::code));
        }
        for (tag, t) in &self.timestamps_us {
            out.push(*tag);
            out.extend_from_slice(&t.to_be_bytes());
        }
        out
    }
}
