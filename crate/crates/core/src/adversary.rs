//! Attacker strategies.
//!
//! Each strategy is an [`Endpoint`] that plays one side of the exchange
//! against an honest session over the [`channel`](crate::channel). The
//! knowledge an attacker starts with is fixed by its [`AttackContext`]:
//! public keys and `zeta` always, recorded transcripts for replay, and the
//! twin's secret key for key-compromise impersonation. No context carries
//! `S_p`, `h_sp` or any ephemeral of an honest party.
//!
//! | kind | plays | target | accepted when |
//! |------|-------|--------|---------------|
//! | `Replay` | twin | entity | entity reaches `KeyEstablished` |
//! | `ImpersonateTwin` | twin | entity | entity reaches `KeyEstablished` |
//! | `MitmTamper` | link | both | a party reaches `KeyEstablished` after a credential field was altered |
//! | `KciImpersonatePhysical` | entity | twin | twin reaches `KeyEstablished` |

use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use crate::channel::{run_exchange, ChannelError, Latency, Trace};
use crate::group::PrimeGroup;
use crate::protocol::{
    AbortReason, Endpoint, EntitySession, Message, OpCounts, Role, SessionKey, Transcript,
    TwinSession, HEADER_LEN, TAG_IDENTITY_PROOF,
};
use crate::registration::BindingRecord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AdversaryKind {
    Replay,
    ImpersonateTwin,
    MitmTamper,
    KciImpersonatePhysical,
}

impl AdversaryKind {
    pub const ALL: [AdversaryKind; 4] = [
        AdversaryKind::Replay,
        AdversaryKind::ImpersonateTwin,
        AdversaryKind::MitmTamper,
        AdversaryKind::KciImpersonatePhysical,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            AdversaryKind::Replay => "replay",
            AdversaryKind::ImpersonateTwin => "impersonate_twin",
            AdversaryKind::MitmTamper => "mitm_tamper",
            AdversaryKind::KciImpersonatePhysical => "kci_impersonate_physical",
        }
    }
}

impl fmt::Display for AdversaryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl core::str::FromStr for AdversaryKind {
    type Err = AttackError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or(AttackError::UnknownKind)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum AttackError {
    #[error("replay needs at least one recorded transcript with a commitment and response")]
    EmptyTranscriptStore,
    #[error("attack context was built for {actual}, not {expected}")]
    WrongContext {
        expected: AdversaryKind,
        actual: AdversaryKind,
    },
    #[error("unknown adversary kind")]
    UnknownKind,
    #[error(transparent)]
    Channel(#[from] ChannelError),
}

/// What an attacker knows before the session starts.
#[derive(Clone)]
pub struct AttackContext<G: PrimeGroup> {
    kind: AdversaryKind,
    record: BindingRecord<G>,
    recorded: Vec<Transcript<G>>,
    compromised_sk_d: Option<G::Scalar>,
}

impl<G: PrimeGroup> fmt::Debug for AttackContext<G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AttackContext")
            .field("kind", &self.kind)
            .field("recorded", &self.recorded.len())
            .field(
                "compromised_sk_d",
                &self.compromised_sk_d.map(|_| "<redacted>"),
            )
            .finish()
    }
}

impl<G: PrimeGroup> AttackContext<G> {
    pub fn replay(record: BindingRecord<G>, recorded: Vec<Transcript<G>>) -> Self {
        AttackContext {
            kind: AdversaryKind::Replay,
            record,
            recorded,
            compromised_sk_d: None,
        }
    }

    pub fn impersonate_twin(record: BindingRecord<G>) -> Self {
        AttackContext {
            kind: AdversaryKind::ImpersonateTwin,
            record,
            recorded: Vec::new(),
            compromised_sk_d: None,
        }
    }

    pub fn mitm(record: BindingRecord<G>) -> Self {
        AttackContext {
            kind: AdversaryKind::MitmTamper,
            record,
            recorded: Vec::new(),
            compromised_sk_d: None,
        }
    }

    /// The KCI attacker holds `sk_d` but has never seen an identity proof.
    pub fn kci(record: BindingRecord<G>, sk_d: G::Scalar) -> Self {
        AttackContext {
            kind: AdversaryKind::KciImpersonatePhysical,
            record,
            recorded: Vec::new(),
            compromised_sk_d: Some(sk_d),
        }
    }

    pub fn kind(&self) -> AdversaryKind {
        self.kind
    }

    pub fn record(&self) -> &BindingRecord<G> {
        &self.record
    }

    pub fn recorded_transcripts(&self) -> &[Transcript<G>] {
        &self.recorded
    }

    pub fn has_compromised_key(&self) -> bool {
        self.compromised_sk_d.is_some()
    }

    fn require(&self, expected: AdversaryKind) -> Result<(), AttackError> {
        if self.kind == expected {
            Ok(())
        } else {
            Err(AttackError::WrongContext {
                expected,
                actual: self.kind,
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Script {
    AwaitCommit,
    AwaitChallenge,
    AwaitResponse,
    AwaitIdentity,
    AwaitVerdict,
    Done { keyed: bool },
}

impl Script {
    fn name(self) -> &'static str {
        match self {
            Script::AwaitCommit => "AwaitCommit",
            Script::AwaitChallenge => "AwaitChallenge",
            Script::AwaitResponse => "AwaitResponse",
            Script::AwaitIdentity => "AwaitIdentity",
            Script::AwaitVerdict => "AwaitVerdict",
            Script::Done { .. } => "Done",
        }
    }
}

/// A twin impostor: sends a commitment it cannot open honestly.
///
/// In replay mode `alpha` and `z` come from a recorded session. In blind
/// mode `alpha = g^a` for a random `a` and `z` is drawn uniformly once the
/// challenge arrives.
#[derive(Debug, Clone)]
pub struct ForgingTwin<G: PrimeGroup> {
    alpha: G::Element,
    replayed_z: Option<G::Scalar>,
    script: Script,
    ops: OpCounts,
}

impl<G: PrimeGroup> ForgingTwin<G> {
    pub fn replay(alpha: G::Element, z: G::Scalar) -> Self {
        ForgingTwin {
            alpha,
            replayed_z: Some(z),
            script: Script::AwaitChallenge,
            ops: OpCounts::default(),
        }
    }

    pub fn blind<R: RngCore + ?Sized>(rng: &mut R) -> Self {
        let a = G::random_nonzero_scalar(rng);
        ForgingTwin {
            alpha: G::exp_generator(&a),
            replayed_z: None,
            script: Script::AwaitChallenge,
            ops: OpCounts {
                group_exp: 1,
                ..OpCounts::default()
            },
        }
    }

    pub fn commitment(&self) -> G::Element {
        self.alpha
    }
}

impl<G: PrimeGroup> Endpoint<G> for ForgingTwin<G> {
    fn role(&self) -> Role {
        Role::Twin
    }

    fn start(&mut self, _rng: &mut dyn RngCore) -> Option<Message<G>> {
        Some(Message::Commit { alpha: self.alpha })
    }

    fn receive(&mut self, msg: Message<G>, rng: &mut dyn RngCore) -> Option<Message<G>> {
        match (self.script, msg) {
            (Script::AwaitChallenge, Message::Challenge { .. }) => {
                let z = self.replayed_z.unwrap_or_else(|| G::random_scalar(rng));
                self.script = Script::AwaitIdentity;
                Some(Message::Response { z })
            }
            (Script::AwaitIdentity, Message::IdentityProof { .. }) => {
                // no sk_d, so no key; just tell the entity to proceed
                self.script = Script::Done { keyed: false };
                Some(Message::accept())
            }
            (Script::Done { .. }, _) => None,
            _ => {
                self.script = Script::Done { keyed: false };
                None
            }
        }
    }

    fn receive_malformed(&mut self) -> Option<Message<G>> {
        self.script = Script::Done { keyed: false };
        None
    }

    fn timeout(&mut self) {
        self.script = Script::Done { keyed: false };
    }

    fn is_terminal(&self) -> bool {
        matches!(self.script, Script::Done { .. })
    }

    fn key_established(&self) -> bool {
        false
    }

    fn session_key(&self) -> Option<SessionKey> {
        None
    }

    fn op_counts(&self) -> OpCounts {
        self.ops
    }

    fn phase_name(&self) -> &'static str {
        self.script.name()
    }
}

/// An entity impostor holding the twin's secret key.
///
/// It challenges at random, ignores the twin's proof, and submits a uniformly
/// guessed `h_sp` with `R_p = g^x`. If the twin accepts, the attacker can
/// compute the same session key `(pk_p * R_p)^sk_d`.
#[derive(Clone)]
pub struct KciEntity<G: PrimeGroup> {
    pk_p: G::Element,
    zeta: crate::hash::Digest,
    sk_d: G::Scalar,
    r_p_pub: Option<G::Element>,
    key: Option<SessionKey>,
    script: Script,
    ops: OpCounts,
}

impl<G: PrimeGroup> fmt::Debug for KciEntity<G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("KciEntity")
            .field("script", &self.script)
            .finish_non_exhaustive()
    }
}

impl<G: PrimeGroup> KciEntity<G> {
    pub fn new(ctx: &AttackContext<G>) -> Result<Self, AttackError> {
        ctx.require(AdversaryKind::KciImpersonatePhysical)?;
        let sk_d = ctx.compromised_sk_d.ok_or(AttackError::WrongContext {
            expected: AdversaryKind::KciImpersonatePhysical,
            actual: ctx.kind,
        })?;
        Ok(KciEntity {
            pk_p: ctx.record.pk_p,
            zeta: ctx.record.zeta,
            sk_d,
            r_p_pub: None,
            key: None,
            script: Script::AwaitCommit,
            ops: OpCounts::default(),
        })
    }
}

impl<G: PrimeGroup> Endpoint<G> for KciEntity<G> {
    fn role(&self) -> Role {
        Role::Entity
    }

    fn start(&mut self, _rng: &mut dyn RngCore) -> Option<Message<G>> {
        None
    }

    fn receive(&mut self, msg: Message<G>, rng: &mut dyn RngCore) -> Option<Message<G>> {
        match (self.script, msg) {
            (Script::AwaitCommit, Message::Commit { .. }) => {
                self.script = Script::AwaitResponse;
                Some(Message::Challenge {
                    c: G::random_scalar(rng),
                })
            }
            (Script::AwaitResponse, Message::Response { .. }) => {
                let h_sp = G::random_scalar(rng);
                let x = G::random_nonzero_scalar(rng);
                let r_p_pub = G::exp_generator(&x);
                self.ops.group_exp += 1;
                self.r_p_pub = Some(r_p_pub);
                self.script = Script::AwaitVerdict;
                Some(Message::IdentityProof { h_sp, r_p_pub })
            }
            (Script::AwaitVerdict, Message::Verdict { accept: true, .. }) => {
                let r_p_pub = self.r_p_pub.take()?;
                let shared = G::exp(&G::mul(&self.pk_p, &r_p_pub), &self.sk_d);
                self.ops.group_exp += 1;
                self.ops.group_mul += 1;
                self.ops.hash += 1;
                self.key = Some(SessionKey::derive::<G>(&shared, &self.zeta));
                self.script = Script::Done { keyed: true };
                None
            }
            (Script::Done { .. }, _) => None,
            _ => {
                self.script = Script::Done { keyed: false };
                None
            }
        }
    }

    fn receive_malformed(&mut self) -> Option<Message<G>> {
        self.script = Script::Done { keyed: false };
        None
    }

    fn timeout(&mut self) {
        self.script = Script::Done { keyed: false };
    }

    fn is_terminal(&self) -> bool {
        matches!(self.script, Script::Done { .. })
    }

    fn key_established(&self) -> bool {
        self.script == Script::Done { keyed: true }
    }

    fn session_key(&self) -> Option<SessionKey> {
        self.key
    }

    fn op_counts(&self) -> OpCounts {
        self.ops
    }

    fn phase_name(&self) -> &'static str {
        self.script.name()
    }
}

/// Where a man-in-the-middle flipped a bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BitFlip {
    /// Index of the message in send order.
    pub message: usize,
    /// Bit offset from the start of the encoded message, MSB first.
    pub bit: usize,
}

impl BitFlip {
    pub fn apply(&self, bytes: &mut [u8]) {
        bytes[self.bit / 8] ^= 0x80 >> (self.bit % 8);
    }

    /// Whether the flipped bit lies in the entity's ephemeral share `R_p`
    /// of an identity proof (the only unauthenticated field).
    fn hits_ephemeral_share<G: PrimeGroup>(&self, tag: u8) -> bool {
        tag == TAG_IDENTITY_PROOF && self.bit / 8 >= HEADER_LEN + G::SCALAR_LEN
    }
}

/// Result of one attacked session.
#[derive(Debug, Clone)]
pub struct AttackOutcome<G: PrimeGroup> {
    pub kind: AdversaryKind,
    /// The attack counts as a false acceptance.
    pub accepted: bool,
    /// Why the targeted honest party aborted, if it did.
    pub reason: Option<AbortReason>,
    /// Both honest parties derived keys and they differ.
    pub key_mismatch: bool,
    pub flip: Option<BitFlip>,
    pub trace: Trace<G>,
    pub ops_twin: OpCounts,
    pub ops_entity: OpCounts,
}

fn entity_reason<G: PrimeGroup>(e: &EntitySession<G>) -> Option<AbortReason> {
    match e.phase() {
        crate::protocol::EntityPhase::Failed(r) => Some(r),
        _ => None,
    }
}

fn twin_reason<G: PrimeGroup>(t: &TwinSession<G>) -> Option<AbortReason> {
    match t.phase() {
        crate::protocol::TwinPhase::Failed(r) => Some(r),
        _ => None,
    }
}

/// Replays a recorded `(alpha, z)` against a fresh entity session.
///
/// The transcript is picked uniformly from the context's store.
pub fn attack_replay<G: PrimeGroup>(
    ctx: &AttackContext<G>,
    target: &mut EntitySession<G>,
    latency: Latency,
    rng: &mut dyn RngCore,
) -> Result<AttackOutcome<G>, AttackError> {
    ctx.require(AdversaryKind::Replay)?;
    let usable: Vec<(G::Element, G::Scalar)> = ctx
        .recorded
        .iter()
        .filter_map(|t| Some((t.alpha?, t.z?)))
        .collect();
    if usable.is_empty() {
        return Err(AttackError::EmptyTranscriptStore);
    }
    let (alpha, z) = usable[rng.gen_range(0..usable.len())];
    let mut forger = ForgingTwin::replay(alpha, z);
    let trace = run_exchange(&mut forger, target, latency, None, rng)?;
    Ok(AttackOutcome {
        kind: AdversaryKind::Replay,
        accepted: target.key_established(),
        reason: entity_reason(target),
        key_mismatch: false,
        flip: None,
        trace,
        ops_twin: forger.op_counts(),
        ops_entity: target.ops(),
    })
}

/// Random commitment, random response.
pub fn attack_impersonate_twin<G: PrimeGroup>(
    ctx: &AttackContext<G>,
    target: &mut EntitySession<G>,
    latency: Latency,
    rng: &mut dyn RngCore,
) -> Result<AttackOutcome<G>, AttackError> {
    ctx.require(AdversaryKind::ImpersonateTwin)?;
    let mut forger = ForgingTwin::<G>::blind(rng);
    let trace = run_exchange(&mut forger, target, latency, None, rng)?;
    Ok(AttackOutcome {
        kind: AdversaryKind::ImpersonateTwin,
        accepted: target.key_established(),
        reason: entity_reason(target),
        key_mismatch: false,
        flip: None,
        trace,
        ops_twin: forger.op_counts(),
        ops_entity: target.ops(),
    })
}

/// Guesses the identity proof while holding `sk_d`.
pub fn attack_kci<G: PrimeGroup>(
    ctx: &AttackContext<G>,
    target: &mut TwinSession<G>,
    latency: Latency,
    rng: &mut dyn RngCore,
) -> Result<AttackOutcome<G>, AttackError> {
    let mut attacker = KciEntity::new(ctx)?;
    let trace = run_exchange(target, &mut attacker, latency, None, rng)?;
    Ok(AttackOutcome {
        kind: AdversaryKind::KciImpersonatePhysical,
        accepted: target.key_established(),
        reason: twin_reason(target),
        key_mismatch: false,
        flip: None,
        trace,
        ops_twin: target.ops(),
        ops_entity: attacker.op_counts(),
    })
}

/// Flips one uniformly chosen bit of one uniformly chosen message of an
/// honest exchange.
pub fn attack_mitm_tamper<G: PrimeGroup>(
    ctx: &AttackContext<G>,
    twin: &mut TwinSession<G>,
    entity: &mut EntitySession<G>,
    latency: Latency,
    rng: &mut dyn RngCore,
) -> Result<AttackOutcome<G>, AttackError> {
    ctx.require(AdversaryKind::MitmTamper)?;
    let message = rng.gen_range(0..5);
    let bit_draw = rng.next_u64();
    mitm_with(twin, entity, latency, rng, message, |len| {
        (bit_draw % (len as u64 * 8)) as usize
    })
}

/// MITM with a fixed flip, for exhaustive checks.
pub fn attack_mitm_flip<G: PrimeGroup>(
    ctx: &AttackContext<G>,
    twin: &mut TwinSession<G>,
    entity: &mut EntitySession<G>,
    latency: Latency,
    rng: &mut dyn RngCore,
    flip: BitFlip,
) -> Result<AttackOutcome<G>, AttackError> {
    ctx.require(AdversaryKind::MitmTamper)?;
    mitm_with(twin, entity, latency, rng, flip.message, |_| flip.bit)
}

fn mitm_with<G: PrimeGroup>(
    twin: &mut TwinSession<G>,
    entity: &mut EntitySession<G>,
    latency: Latency,
    rng: &mut dyn RngCore,
    message: usize,
    pick_bit: impl Fn(usize) -> usize,
) -> Result<AttackOutcome<G>, AttackError> {
    let mut applied: Option<(BitFlip, u8)> = None;
    let mut tamper = |index: usize, _from: Role, bytes: &mut Vec<u8>| {
        if index == message {
            let flip = BitFlip {
                message,
                bit: pick_bit(bytes.len()),
            };
            let tag = bytes[0];
            flip.apply(bytes);
            applied = Some((flip, tag));
        }
    };
    let trace = run_exchange(twin, entity, latency, Some(&mut tamper), rng)?;

    let (flip, original_tag) = match applied {
        Some(a) => (Some(a.0), Some(a.1)),
        None => (None, None),
    };
    let credential_hit = match (flip, original_tag) {
        (Some(f), Some(tag)) => {
            tag != crate::protocol::TAG_VERDICT && !f.hits_ephemeral_share::<G>(tag)
        }
        _ => false,
    };
    let anyone_keyed = twin.key_established() || entity.key_established();
    let key_mismatch = match (twin.key(), entity.key()) {
        (Some(a), Some(b)) => a != b,
        _ => false,
    };
    Ok(AttackOutcome {
        kind: AdversaryKind::MitmTamper,
        accepted: credential_hit && anyone_keyed,
        reason: twin_reason(twin).or_else(|| entity_reason(entity)),
        key_mismatch,
        flip,
        trace,
        ops_twin: twin.ops(),
        ops_entity: entity.ops(),
    })
}
