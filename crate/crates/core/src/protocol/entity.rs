use rand::RngCore;

use super::schnorr::challenge_scalar;
use super::{
    AbortReason, Counted, Endpoint, Gates, Message, OpCounts, ProtocolError, Role, SessionKey,
};
use crate::group::PrimeGroup;
use crate::hash::Digest;
use crate::identity::EntityKeys;
use crate::registration::BindingRecord;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntityPhase {
    Idle,
    Challenged,
    ResponseVerified,
    IdentityProofSent,
    /// The twin reported that our identity proof verified.
    IdentityVerified,
    KeyEstablished,
    Failed(AbortReason),
}

impl EntityPhase {
    pub fn name(self) -> &'static str {
        match self {
            EntityPhase::Idle => "Idle",
            EntityPhase::Challenged => "Challenged",
            EntityPhase::ResponseVerified => "ResponseVerified",
            EntityPhase::IdentityProofSent => "IdentityProofSent",
            EntityPhase::IdentityVerified => "IdentityVerified",
            EntityPhase::KeyEstablished => "KeyEstablished",
            EntityPhase::Failed(_) => "Failed",
        }
    }

    pub fn is_terminal(self) -> bool {
        matches!(self, EntityPhase::KeyEstablished | EntityPhase::Failed(_))
    }
}

/// Physical-entity side of one session: Schnorr verifier and identity prover.
#[derive(Debug, Clone)]
pub struct EntitySession<G: PrimeGroup> {
    phase: EntityPhase,
    keys: EntityKeys<G>,
    pk_d: G::Element,
    zeta: Digest,
    alpha: Option<G::Element>,
    challenge: Option<G::Scalar>,
    ephemeral: Option<G::Scalar>,
    key: Option<SessionKey>,
    gates: Gates,
    ops: OpCounts,
}

impl<G: PrimeGroup> EntitySession<G> {
    pub fn new(keys: EntityKeys<G>, record: &BindingRecord<G>) -> Result<Self, ProtocolError> {
        if !record.verify() {
            return Err(ProtocolError::BadBindingRecord);
        }
        if record.pk_p != keys.public_key() {
            return Err(ProtocolError::KeyMismatch);
        }
        Ok(EntitySession {
            phase: EntityPhase::Idle,
            keys,
            pk_d: record.pk_d,
            zeta: record.zeta,
            alpha: None,
            challenge: None,
            ephemeral: None,
            key: None,
            gates: Gates::default(),
            ops: OpCounts::default(),
        })
    }

    pub fn phase(&self) -> EntityPhase {
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

    pub fn ephemerals_erased(&self) -> bool {
        self.ephemeral.is_none()
    }

    fn expect(&mut self, want: EntityPhase, operation: &'static str) -> Result<(), ProtocolError> {
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
        self.phase = EntityPhase::Failed(reason);
        self.ephemeral = None;
    }

    /// Answers a commitment with `c = H1(alpha || zeta || nonce)` for a fresh nonce.
    pub fn challenge<R: RngCore + ?Sized>(
        &mut self,
        alpha: G::Element,
        rng: &mut R,
    ) -> Result<Message<G>, ProtocolError> {
        let mut nonce = [0u8; 32];
        rng.fill_bytes(&mut nonce);
        self.challenge_with_nonce(alpha, &nonce)
    }

    pub fn challenge_with_nonce(
        &mut self,
        alpha: G::Element,
        nonce: &[u8; 32],
    ) -> Result<Message<G>, ProtocolError> {
        self.expect(EntityPhase::Idle, "challenge")?;
        if G::is_identity(&alpha) {
            self.fail(AbortReason::DegenerateCommitment);
            return Err(ProtocolError::Aborted(AbortReason::DegenerateCommitment));
        }
        Counted(&mut self.ops).hash();
        let c = challenge_scalar::<G>(&alpha, &self.zeta, nonce);
        self.alpha = Some(alpha);
        self.challenge = Some(c);
        self.phase = EntityPhase::Challenged;
        Ok(Message::Challenge { c })
    }

    /// Checks `g^z == alpha * pk_d^c` against the challenge we issued.
    pub fn verify_schnorr(&mut self, z: G::Scalar) -> Result<bool, ProtocolError> {
        self.expect(EntityPhase::Challenged, "verify_schnorr")?;
        let (alpha, c) = match (self.alpha, self.challenge) {
            (Some(a), Some(c)) => (a, c),
            _ => return Err(ProtocolError::Terminated),
        };
        let mut ops = Counted(&mut self.ops);
        let lhs = ops.exp::<G>(&G::generator(), &z);
        let pk_c = ops.exp::<G>(&self.pk_d, &c);
        let ok = lhs == ops.mul::<G>(&alpha, &pk_c);
        self.gates.schnorr = Some(ok);
        if ok {
            self.phase = EntityPhase::ResponseVerified;
        } else {
            self.fail(AbortReason::BadProof);
        }
        Ok(ok)
    }

    /// Sends `(h_sp, g^r_p)` for a fresh `r_p`.
    pub fn identity_proof<R: RngCore + ?Sized>(
        &mut self,
        rng: &mut R,
    ) -> Result<Message<G>, ProtocolError> {
        let r_p = G::random_nonzero_scalar(rng);
        self.identity_proof_with_nonce(r_p)
    }

    pub fn identity_proof_with_nonce(
        &mut self,
        r_p: G::Scalar,
    ) -> Result<Message<G>, ProtocolError> {
        self.expect(EntityPhase::ResponseVerified, "identity_proof")?;
        let r_p_pub = Counted(&mut self.ops).exp::<G>(&G::generator(), &r_p);
        self.ephemeral = Some(r_p);
        self.phase = EntityPhase::IdentityProofSent;
        Ok(Message::IdentityProof {
            h_sp: self.keys.hashed_identity(),
            r_p_pub,
        })
    }

    /// Applies the twin's verdict on our identity proof.
    pub fn on_verdict(
        &mut self,
        accept: bool,
        reason: Option<AbortReason>,
    ) -> Result<(), ProtocolError> {
        if !accept {
            if self.phase.is_terminal() {
                return Err(ProtocolError::Terminated);
            }
            self.fail(reason.unwrap_or(AbortReason::OutOfOrder));
            return Ok(());
        }
        self.expect(EntityPhase::IdentityProofSent, "on_verdict")?;
        self.gates.identity = Some(true);
        self.phase = EntityPhase::IdentityVerified;
        Ok(())
    }

    /// `K = H1_bytes(pk_d^(h_sp + r_p) || zeta)`, equal to the twin's
    /// `(pk_p * g^r_p)^sk_d` form.
    pub fn derive_key(&mut self) -> Result<SessionKey, ProtocolError> {
        self.expect(EntityPhase::IdentityVerified, "derive_key")?;
        let r_p = self.ephemeral.take().ok_or(ProtocolError::Terminated)?;
        let exponent = self.keys.hashed_identity() + r_p;
        let mut ops = Counted(&mut self.ops);
        let shared = ops.exp::<G>(&self.pk_d, &exponent);
        ops.hash();
        let key = SessionKey::derive::<G>(&shared, &self.zeta);
        self.key = Some(key);
        self.phase = EntityPhase::KeyEstablished;
        Ok(key)
    }

    pub fn abort(&mut self, reason: AbortReason) {
        if !self.phase.is_terminal() {
            self.fail(reason);
        }
    }

    fn out_of_order(&mut self) -> Option<Message<G>> {
        self.fail(AbortReason::OutOfOrder);
        Some(Message::reject(AbortReason::OutOfOrder))
    }

    fn failure_verdict(&self) -> Option<Message<G>> {
        match self.phase {
            EntityPhase::Failed(reason) => Some(Message::reject(reason)),
            _ => None,
        }
    }
}

impl<G: PrimeGroup> Endpoint<G> for EntitySession<G> {
    fn role(&self) -> Role {
        Role::Entity
    }

    fn start(&mut self, _rng: &mut dyn RngCore) -> Option<Message<G>> {
        None
    }

    fn receive(&mut self, msg: Message<G>, rng: &mut dyn RngCore) -> Option<Message<G>> {
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
                let _ = self.on_verdict(false, reason);
                None
            }
            (EntityPhase::Idle, Message::Commit { alpha }) => match self.challenge(alpha, rng) {
                Ok(m) => Some(m),
                Err(_) => self.failure_verdict(),
            },
            (EntityPhase::Challenged, Message::Response { z }) => match self.verify_schnorr(z) {
                Ok(true) => self.identity_proof(rng).ok(),
                _ => self.failure_verdict(),
            },
            (EntityPhase::IdentityProofSent, Message::Verdict { accept: true, .. }) => {
                if self.on_verdict(true, None).is_ok() {
                    let _ = self.derive_key();
                }
                None
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
        self.phase == EntityPhase::KeyEstablished
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
