use rand::RngCore;

use super::schnorr::schnorr_response;
use super::{
    AbortReason, Counted, Endpoint, Gates, Message, OpCounts, ProtocolError, Role, SessionKey,
};
use crate::group::PrimeGroup;
use crate::hash::Digest;
use crate::identity::TwinKeyPair;
use crate::registration::BindingRecord;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwinPhase {
    Idle,
    CommitmentSent,
    ResponseSent,
    IdentityVerified,
    KeyEstablished,
    Failed(AbortReason),
}

impl TwinPhase {
    pub fn name(self) -> &'static str {
        match self {
            TwinPhase::Idle => "Idle",
            TwinPhase::CommitmentSent => "CommitmentSent",
            TwinPhase::ResponseSent => "ResponseSent",
            TwinPhase::IdentityVerified => "IdentityVerified",
            TwinPhase::KeyEstablished => "KeyEstablished",
            TwinPhase::Failed(_) => "Failed",
        }
    }

    pub fn is_terminal(self) -> bool {
        matches!(self, TwinPhase::KeyEstablished | TwinPhase::Failed(_))
    }
}

/// Digital-twin side of one session: Schnorr prover and identity verifier.
#[derive(Debug, Clone)]
pub struct TwinSession<G: PrimeGroup> {
    phase: TwinPhase,
    keys: TwinKeyPair<G>,
    pk_p: G::Element,
    zeta: Digest,
    nonce: Option<G::Scalar>,
    peer_share: Option<G::Element>,
    key: Option<SessionKey>,
    gates: Gates,
    ops: OpCounts,
}

impl<G: PrimeGroup> TwinSession<G> {
    /// Recomputes `zeta` from the record and checks it names our key.
    pub fn new(keys: TwinKeyPair<G>, record: &BindingRecord<G>) -> Result<Self, ProtocolError> {
        if !record.verify() {
            return Err(ProtocolError::BadBindingRecord);
        }
        if record.pk_d != keys.public_key() {
            return Err(ProtocolError::KeyMismatch);
        }
        Ok(TwinSession {
            phase: TwinPhase::Idle,
            keys,
            pk_p: record.pk_p,
            zeta: record.zeta,
            nonce: None,
            peer_share: None,
            key: None,
            gates: Gates::default(),
            ops: OpCounts::default(),
        })
    }

    pub fn phase(&self) -> TwinPhase {
        self.phase
    }

    pub fn gates(&self) -> Gates {
        self.gates
    }

    pub fn ops(&self) -> OpCounts {
        self.ops
    }

    pub fn key(&self) -> Option<SessionKey> {
        self.key
    }

    /// True once every per-session secret has been dropped.
    pub fn ephemerals_erased(&self) -> bool {
        self.nonce.is_none() && self.peer_share.is_none()
    }

    fn expect(&mut self, want: TwinPhase, operation: &'static str) -> Result<(), ProtocolError> {
        if self.phase.is_terminal() {
            return Err(ProtocolError::Terminated);
        }
        if self.phase != want {
            let phase = self.phase.name();
            self.fail(AbortReason::OutOfOrder);
            return Err(ProtocolError::OutOfPhase { operation, phase });
        }
        Ok(())
    }

    fn fail(&mut self, reason: AbortReason) {
        self.phase = TwinPhase::Failed(reason);
        self.erase();
    }

    fn erase(&mut self) {
        self.nonce = None;
        self.peer_share = None;
    }

    /// Draws a nonzero `r` and sends `alpha = g^r`.
    pub fn commit<R: RngCore + ?Sized>(
        &mut self,
        rng: &mut R,
    ) -> Result<Message<G>, ProtocolError> {
        let r = G::random_nonzero_scalar(rng);
        self.commit_with_nonce(r)
    }

    pub fn commit_with_nonce(&mut self, r: G::Scalar) -> Result<Message<G>, ProtocolError> {
        self.expect(TwinPhase::Idle, "commit")?;
        let alpha = Counted(&mut self.ops).exp::<G>(&G::generator(), &r);
        self.nonce = Some(r);
        self.phase = TwinPhase::CommitmentSent;
        Ok(Message::Commit { alpha })
    }

    /// `z = r + c * sk_d`; erases `r`.
    pub fn respond(&mut self, c: G::Scalar) -> Result<Message<G>, ProtocolError> {
        self.expect(TwinPhase::CommitmentSent, "respond")?;
        let r = self.nonce.take().ok_or(ProtocolError::Terminated)?;
        let z = schnorr_response::<G>(&r, &c, &self.keys.secret_key());
        self.phase = TwinPhase::ResponseSent;
        Ok(Message::Response { z })
    }

    /// Checks `g^h_sp == pk_p`. A failing check moves to `Failed`.
    pub fn verify_identity(
        &mut self,
        h_sp: G::Scalar,
        r_p_pub: G::Element,
    ) -> Result<bool, ProtocolError> {
        self.expect(TwinPhase::ResponseSent, "verify_identity")?;
        // the entity only reveals its identity after accepting our proof
        self.gates.schnorr = Some(true);
        if G::is_identity(&r_p_pub) {
            self.gates.identity = Some(false);
            self.fail(AbortReason::DegenerateCommitment);
            return Ok(false);
        }
        let ok = !G::scalar_is_zero(&h_sp)
            && Counted(&mut self.ops).exp::<G>(&G::generator(), &h_sp) == self.pk_p;
        self.gates.identity = Some(ok);
        if ok {
            self.peer_share = Some(r_p_pub);
            self.phase = TwinPhase::IdentityVerified;
        } else {
            self.fail(AbortReason::BadIdentity);
        }
        Ok(ok)
    }

    /// `K = H1_bytes((pk_p * R_p)^sk_d || zeta)`.
    pub fn derive_key(&mut self) -> Result<SessionKey, ProtocolError> {
        self.expect(TwinPhase::IdentityVerified, "derive_key")?;
        let r_p_pub = self.peer_share.take().ok_or(ProtocolError::Terminated)?;
        let mut ops = Counted(&mut self.ops);
        let base = ops.mul::<G>(&self.pk_p, &r_p_pub);
        let shared = ops.exp::<G>(&base, &self.keys.secret_key());
        ops.hash();
        let key = SessionKey::derive::<G>(&shared, &self.zeta);
        self.key = Some(key);
        self.phase = TwinPhase::KeyEstablished;
        self.erase();
        Ok(key)
    }

    /// Abort on behalf of the caller, e.g. when a timer fires.
    pub fn abort(&mut self, reason: AbortReason) {
        if !self.phase.is_terminal() {
            self.fail(reason);
        }
    }

    fn out_of_order(&mut self) -> Option<Message<G>> {
        self.fail(AbortReason::OutOfOrder);
        Some(Message::reject(AbortReason::OutOfOrder))
    }
}

impl<G: PrimeGroup> Endpoint<G> for TwinSession<G> {
    fn role(&self) -> Role {
        Role::Twin
    }

    fn start(&mut self, rng: &mut dyn RngCore) -> Option<Message<G>> {
        self.commit(rng).ok()
    }

    fn receive(&mut self, msg: Message<G>, _rng: &mut dyn RngCore) -> Option<Message<G>> {
        if self.phase.is_terminal() {
            return None;
        }
        match (self.phase, msg) {
            (
                _,
                Message::Verdict {
                    accept: false,
                    reason,
                },
            ) => {
                self.fail(reason.unwrap_or(AbortReason::OutOfOrder));
                None
            }
            (TwinPhase::CommitmentSent, Message::Challenge { c }) => self.respond(c).ok(),
            (TwinPhase::ResponseSent, Message::IdentityProof { h_sp, r_p_pub }) => {
                match self.verify_identity(h_sp, r_p_pub) {
                    Ok(true) => self.derive_key().ok().map(|_| Message::accept()),
                    _ => match self.phase {
                        TwinPhase::Failed(reason) => Some(Message::reject(reason)),
                        _ => None,
                    },
                }
            }
            _ => self.out_of_order(),
        }
    }

    fn receive_malformed(&mut self) -> Option<Message<G>> {
        if self.phase.is_terminal() {
            return None;
        }
        self.fail(AbortReason::Malformed);
        Some(Message::reject(AbortReason::Malformed))
    }

    fn timeout(&mut self) {
        self.abort(AbortReason::Timeout);
    }

    fn is_terminal(&self) -> bool {
        self.phase.is_terminal()
    }

    fn key_established(&self) -> bool {
        self.phase == TwinPhase::KeyEstablished
    }

    fn session_key(&self) -> Option<SessionKey> {
        self.key
    }

    fn op_counts(&self) -> OpCounts {
        self.ops
    }

    fn phase_name(&self) -> &'static str {
        self.phase.name()
    }
}
