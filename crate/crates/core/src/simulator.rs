//! Campaign engine: many sessions over a virtual-time channel, a fixed share
//! of them adversarial, scored into per-session metrics and aggregates.
//!
//! Every session draws from its own ChaCha20 stream (`stream = index + 1`,
//! stream 0 is reserved for campaign setup), so a session's outcome depends
//! only on the seed and its index. Running sessions in any order, or in
//! parallel, gives the same report.

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::adversary::{
    attack_impersonate_twin, attack_kci, attack_mitm_tamper, attack_replay, AdversaryKind,
    AttackContext, AttackError, AttackOutcome,
};
use crate::channel::{ms_to_us, run_exchange, ChannelError, Latency, Trace};
use crate::group::{GroupId, P256Group, PrimeGroup, ToyGroup};
use crate::identity::{EntityKeys, IdentityError, PhysicalIdentity, TwinKeyPair};
use crate::protocol::{AbortReason, EntitySession, OpCounts, ProtocolError, TwinSession};
use crate::registration::{BindingRecord, RegistrationError};

pub const DEFAULT_REGISTRATION_TIME: u64 = 1_700_000_000;

/// Honest transcripts the replay attacker gets to observe during setup.
const OBSERVED_SESSIONS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdversaryMix {
    pub replay: f64,
    pub impersonate_twin: f64,
    pub mitm_tamper: f64,
    pub kci_impersonate_physical: f64,
}

impl Default for AdversaryMix {
    fn default() -> Self {
        AdversaryMix {
            replay: 1.0,
            impersonate_twin: 1.0,
            mitm_tamper: 1.0,
            kci_impersonate_physical: 1.0,
        }
    }
}

impl AdversaryMix {
    pub fn weight(&self, kind: AdversaryKind) -> f64 {
        match kind {
            AdversaryKind::Replay => self.replay,
            AdversaryKind::ImpersonateTwin => self.impersonate_twin,
            AdversaryKind::MitmTamper => self.mitm_tamper,
            AdversaryKind::KciImpersonatePhysical => self.kci_impersonate_physical,
        }
    }

    /// All weight on one kind.
    pub fn only(kind: AdversaryKind) -> Self {
        let mut mix = AdversaryMix {
            replay: 0.0,
            impersonate_twin: 0.0,
            mitm_tamper: 0.0,
            kci_impersonate_physical: 0.0,
        };
        match kind {
            AdversaryKind::Replay => mix.replay = 1.0,
            AdversaryKind::ImpersonateTwin => mix.impersonate_twin = 1.0,
            AdversaryKind::MitmTamper => mix.mitm_tamper = 1.0,
            AdversaryKind::KciImpersonatePhysical => mix.kci_impersonate_physical = 1.0,
        }
        mix
    }
}

/// Relative cost of each operation class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnergyWeights {
    pub group_exp: f64,
    pub group_mul: f64,
    pub hash: f64,
}

impl Default for EnergyWeights {
    fn default() -> Self {
        EnergyWeights {
            group_exp: 10.0,
            group_mul: 1.0,
            hash: 1.0,
        }
    }
}

/// Weighted operation count.
pub fn energy_proxy(ops: &OpCounts, weights: &EnergyWeights) -> f64 {
    ops.group_exp as f64 * weights.group_exp
        + ops.group_mul as f64 * weights.group_mul
        + ops.hash as f64 * weights.hash
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CampaignConfig {
    pub sessions: u64,
    pub adv_ratio: f64,
    #[serde(default)]
    pub adversary_mix: AdversaryMix,
    pub latency_range_ms: [f64; 2],
    pub group: GroupId,
    pub rng_seed: u64,
    #[serde(default)]
    pub energy_weights: EnergyWeights,
    /// Timestamp `T` written into the binding record.
    #[serde(default = "default_registration_time")]
    pub registration_time: u64,
}

fn default_registration_time() -> u64 {
    DEFAULT_REGISTRATION_TIME
}

impl Default for CampaignConfig {
    /// 5000 production-group sessions, 10% adversarial, 10 to 20 ms links.
    fn default() -> Self {
        CampaignConfig {
            sessions: 5000,
            adv_ratio: 0.1,
            adversary_mix: AdversaryMix::default(),
            latency_range_ms: [10.0, 20.0],
            group: GroupId::Production,
            rng_seed: 42,
            energy_weights: EnergyWeights::default(),
            registration_time: DEFAULT_REGISTRATION_TIME,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("sessions: must be at least 1")]
    Sessions,
    #[error("adv_ratio: must be a number in [0, 1]")]
    AdvRatio,
    #[error("adversary_mix: weights must be finite and nonnegative, and not all zero when adv_ratio > 0")]
    AdversaryMix,
    #[error("latency_range_ms: need finite 0 <= low <= high")]
    Latency,
    #[error("energy_weights: weights must be finite and nonnegative")]
    EnergyWeights,
}

impl ConfigError {
    /// Name of the offending config field.
    pub fn field(&self) -> &'static str {
        match self {
            ConfigError::Sessions => "sessions",
            ConfigError::AdvRatio => "adv_ratio",
            ConfigError::AdversaryMix => "adversary_mix",
            ConfigError::Latency => "latency_range_ms",
            ConfigError::EnergyWeights => "energy_weights",
        }
    }
}

fn nonneg(v: f64) -> bool {
    v.is_finite() && v >= 0.0
}

impl CampaignConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.sessions == 0 {
            return Err(ConfigError::Sessions);
        }
        if !(nonneg(self.adv_ratio) && self.adv_ratio <= 1.0) {
            return Err(ConfigError::AdvRatio);
        }
        let weights = AdversaryKind::ALL.map(|k| self.adversary_mix.weight(k));
        if !weights.iter().all(|w| nonneg(*w))
            || (self.adv_ratio > 0.0 && weights.iter().all(|w| *w == 0.0))
        {
            return Err(ConfigError::AdversaryMix);
        }
        let [low, high] = self.latency_range_ms;
        if !(nonneg(low) && nonneg(high) && low <= high) {
            return Err(ConfigError::Latency);
        }
        let e = self.energy_weights;
        if !(nonneg(e.group_exp) && nonneg(e.group_mul) && nonneg(e.hash)) {
            return Err(ConfigError::EnergyWeights);
        }
        Ok(())
    }

    pub fn latency(&self) -> Latency {
        Latency::uniform(
            ms_to_us(self.latency_range_ms[0]),
            ms_to_us(self.latency_range_ms[1]),
        )
    }

    /// `ceil(sessions * adv_ratio)`.
    pub fn adversarial_count(&self) -> u64 {
        let exact = self.sessions as f64 * self.adv_ratio;
        let whole = exact as u64;
        let count = if exact - whole as f64 > 1e-9 {
            whole + 1
        } else {
            whole
        };
        count.min(self.sessions)
    }

    /// Sessions per adversary kind, by largest remainder over the mix.
    pub fn kind_counts(&self) -> [(AdversaryKind, u64); 4] {
        let total = self.adversarial_count();
        let weights = AdversaryKind::ALL.map(|k| self.adversary_mix.weight(k));
        let sum: f64 = weights.iter().sum();
        let mut out = AdversaryKind::ALL.map(|k| (k, 0u64));
        if total == 0 || sum <= 0.0 {
            return out;
        }
        let mut remainders = [(0.0f64, 0usize); 4];
        let mut assigned = 0;
        for (i, w) in weights.iter().enumerate() {
            let quota = total as f64 * w / sum;
            let floor = (quota as u64).min(total - assigned);
            out[i].1 = floor;
            assigned += floor;
            remainders[i] = (quota - floor as f64, i);
        }
        // larger remainder first; ties go to the earlier kind
        remainders.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
        for &(_, i) in remainders.iter().cycle().take((total - assigned) as usize) {
            out[i].1 += 1;
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SessionKind {
    Honest,
    Replay,
    ImpersonateTwin,
    MitmTamper,
    KciImpersonatePhysical,
}

impl SessionKind {
    pub fn adversary(self) -> Option<AdversaryKind> {
        match self {
            SessionKind::Honest => None,
            SessionKind::Replay => Some(AdversaryKind::Replay),
            SessionKind::ImpersonateTwin => Some(AdversaryKind::ImpersonateTwin),
            SessionKind::MitmTamper => Some(AdversaryKind::MitmTamper),
            SessionKind::KciImpersonatePhysical => Some(AdversaryKind::KciImpersonatePhysical),
        }
    }

    pub fn as_str(self) -> &'static str {
        self.adversary().map_or("honest", AdversaryKind::as_str)
    }
}

impl From<AdversaryKind> for SessionKind {
    fn from(k: AdversaryKind) -> Self {
        match k {
            AdversaryKind::Replay => SessionKind::Replay,
            AdversaryKind::ImpersonateTwin => SessionKind::ImpersonateTwin,
            AdversaryKind::MitmTamper => SessionKind::MitmTamper,
            AdversaryKind::KciImpersonatePhysical => SessionKind::KciImpersonatePhysical,
        }
    }
}

impl fmt::Display for SessionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SessionMetrics {
    pub index: u64,
    pub kind: SessionKind,
    /// Honest: both parties hold a session key. Adversarial: the attack
    /// counts as a false acceptance.
    pub accepted: bool,
    /// Why the targeted party aborted.
    pub abort_reason: Option<AbortReason>,
    /// Virtual time until the last authentication message was delivered.
    pub auth_latency_us: u64,
    /// From authentication complete until the accepting verdict landed.
    pub key_establish_us: Option<u64>,
    /// Set when both honest parties derived a key.
    pub keys_agree: Option<bool>,
    /// Per-message link delays, in delivery order.
    pub message_delays_us: Vec<u64>,
    pub ops_entity: OpCounts,
    pub ops_twin: OpCounts,
}

impl SessionMetrics {
    pub fn auth_latency_ms(&self) -> f64 {
        self.auth_latency_us as f64 / 1000.0
    }

    pub fn key_establish_ms(&self) -> Option<f64> {
        self.key_establish_us.map(|us| us as f64 / 1000.0)
    }

    fn from_trace<G: PrimeGroup>(index: u64, kind: SessionKind, trace: &Trace<G>) -> Self {
        let auth = trace.auth_complete_us().unwrap_or(0);
        SessionMetrics {
            index,
            kind,
            accepted: false,
            abort_reason: None,
            auth_latency_us: auth,
            key_establish_us: trace.accept_verdict_us().map(|v| v.saturating_sub(auth)),
            keys_agree: None,
            message_delays_us: trace.deliveries.iter().map(|d| d.delay_us()).collect(),
            ops_entity: OpCounts::default(),
            ops_twin: OpCounts::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KindTally {
    pub kind: AdversaryKind,
    pub attempted: u64,
    pub accepted: u64,
    pub far: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Aggregates {
    pub sessions: u64,
    pub honest_sessions: u64,
    pub honest_accepted: u64,
    pub honest_acceptance: Option<f64>,
    pub key_agreements: u64,
    pub adversarial_sessions: u64,
    pub adversarial_accepted: u64,
    pub far: Option<f64>,
    pub per_kind: Vec<KindTally>,
    pub mitm_key_mismatches: u64,
    pub mean_auth_latency_ms: Option<f64>,
    pub p95_auth_latency_ms: Option<f64>,
    pub mean_key_establish_ms: Option<f64>,
    /// Summed over both parties of every honest session.
    pub total_ops: OpCounts,
    pub energy_proxy: f64,
    pub energy_per_honest_session: Option<f64>,
}

fn ratio(num: u64, den: u64) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

impl Aggregates {
    /// A pure fold over the per-session list, in index order.
    pub fn from_sessions(sessions: &[SessionMetrics], weights: &EnergyWeights) -> Self {
        let honest: Vec<&SessionMetrics> = sessions
            .iter()
            .filter(|s| s.kind == SessionKind::Honest)
            .collect();
        let honest_accepted = honest.iter().filter(|s| s.accepted).count() as u64;
        let key_agreements = honest.iter().filter(|s| s.keys_agree == Some(true)).count() as u64;

        let per_kind: Vec<KindTally> = AdversaryKind::ALL
            .iter()
            .map(|&k| {
                let of_kind = sessions.iter().filter(|s| s.kind.adversary() == Some(k));
                let (attempted, accepted) =
                    of_kind.fold((0u64, 0u64), |(n, a), s| (n + 1, a + u64::from(s.accepted)));
                KindTally {
                    kind: k,
                    attempted,
                    accepted,
                    far: ratio(accepted, attempted),
                }
            })
            .collect();
        let adversarial_sessions: u64 = per_kind.iter().map(|t| t.attempted).sum();
        let adversarial_accepted: u64 = per_kind.iter().map(|t| t.accepted).sum();
        let mitm_key_mismatches = sessions
            .iter()
            .filter(|s| s.kind == SessionKind::MitmTamper && s.keys_agree == Some(false))
            .count() as u64;

        let mut auth: Vec<u64> = honest.iter().map(|s| s.auth_latency_us).collect();
        let n = auth.len() as u64;
        let mean_auth_latency_ms = ratio(auth.iter().sum::<u64>(), n).map(|us| us / 1000.0);
        auth.sort_unstable();
        let p95_auth_latency_ms = (n > 0).then(|| {
            let rank = (95 * n).div_ceil(100).max(1);
            auth[(rank - 1) as usize] as f64 / 1000.0
        });
        let key_times: Vec<u64> = honest.iter().filter_map(|s| s.key_establish_us).collect();
        let mean_key_establish_ms =
            ratio(key_times.iter().sum::<u64>(), key_times.len() as u64).map(|us| us / 1000.0);

        let total_ops = honest.iter().fold(OpCounts::default(), |acc, s| {
            acc + s.ops_entity + s.ops_twin
        });
        let energy = energy_proxy(&total_ops, weights);

        Aggregates {
            sessions: sessions.len() as u64,
            honest_sessions: n,
            honest_accepted,
            honest_acceptance: ratio(honest_accepted, n),
            key_agreements,
            adversarial_sessions,
            adversarial_accepted,
            far: ratio(adversarial_accepted, adversarial_sessions),
            per_kind,
            mitm_key_mismatches,
            mean_auth_latency_ms,
            p95_auth_latency_ms,
            mean_key_establish_ms,
            total_ops,
            energy_proxy: energy,
            energy_per_honest_session: (n > 0).then(|| energy / n as f64),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CampaignReport {
    pub config: CampaignConfig,
    pub sessions: Vec<SessionMetrics>,
    pub aggregates: Aggregates,
}

impl CampaignReport {
    /// Builds a report from sessions given in index order.
    pub fn assemble(config: CampaignConfig, sessions: Vec<SessionMetrics>) -> Self {
        let aggregates = Aggregates::from_sessions(&sessions, &config.energy_weights);
        CampaignReport {
            config,
            sessions,
            aggregates,
        }
    }
}

/// False-acceptance rate of a report; `None` without adversarial sessions.
pub fn far(report: &CampaignReport) -> Option<f64> {
    report.aggregates.far
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum SessionError {
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    Attack(#[from] AttackError),
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum SimError {
    #[error("invalid config: {0}")]
    Config(#[from] ConfigError),
    #[error("campaign setup failed: {0}")]
    Identity(#[from] IdentityError),
    #[error("campaign setup failed: {0}")]
    Registration(#[from] RegistrationError),
    #[error("setup session failed: {0}")]
    Setup(SessionError),
    #[error("session {index}: {source}")]
    Session { index: u64, source: SessionError },
}

/// Fresh RNG for session `index`.
pub fn session_rng(seed: u64, index: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(index + 1);
    rng
}

/// Session kinds in index order: `ceil(N * ratio)` adversarial slots,
/// apportioned over the mix, then shuffled.
pub fn allocate_kinds(config: &CampaignConfig, rng: &mut ChaCha20Rng) -> Vec<SessionKind> {
    let mut kinds = Vec::with_capacity(config.sessions as usize);
    kinds.resize(
        (config.sessions - config.adversarial_count()) as usize,
        SessionKind::Honest,
    );
    for (k, count) in config.kind_counts() {
        kinds.extend(core::iter::repeat_n(SessionKind::from(k), count as usize));
    }
    kinds.shuffle(rng);
    kinds
}

/// Anything that can run the sessions of one prepared campaign.
pub trait SessionRunner: Send + Sync {
    fn config(&self) -> &CampaignConfig;

    fn kind_of(&self, index: u64) -> SessionKind;

    fn run_session(&self, index: u64) -> Result<SessionMetrics, SimError>;
}

/// Keys, binding and attacker knowledge shared by every session of a campaign.
pub struct Campaign<G: PrimeGroup> {
    config: CampaignConfig,
    latency: Latency,
    entity_keys: EntityKeys<G>,
    twin_keys: TwinKeyPair<G>,
    record: BindingRecord<G>,
    replay_ctx: AttackContext<G>,
    kinds: Vec<SessionKind>,
}

impl<G: PrimeGroup> Campaign<G> {
    pub fn setup(config: &CampaignConfig) -> Result<Self, SimError> {
        config.validate()?;
        let mut rng = ChaCha20Rng::seed_from_u64(config.rng_seed);
        let kinds = allocate_kinds(config, &mut rng);
        let identity = PhysicalIdentity::provision(&config.rng_seed.to_be_bytes())?;
        let entity_keys = EntityKeys::<G>::derive(&identity);
        let twin_keys = TwinKeyPair::<G>::generate(&mut rng);
        let record = BindingRecord::mint(
            entity_keys.public_key(),
            twin_keys.public_key(),
            config.registration_time,
        )?;

        let mut observed = Vec::with_capacity(OBSERVED_SESSIONS);
        for _ in 0..OBSERVED_SESSIONS {
            let mut twin = TwinSession::new(twin_keys, &record).map_err(setup_err)?;
            let mut entity = EntitySession::new(entity_keys, &record).map_err(setup_err)?;
            let trace = run_exchange(&mut twin, &mut entity, Latency::fixed(0), None, &mut rng)
                .map_err(|e| SimError::Setup(e.into()))?;
            observed.push(trace.transcript);
        }

        Ok(Campaign {
            config: config.clone(),
            latency: config.latency(),
            replay_ctx: AttackContext::replay(record, observed),
            entity_keys,
            twin_keys,
            record,
            kinds,
        })
    }

    pub fn record(&self) -> &BindingRecord<G> {
        &self.record
    }

    fn twin(&self) -> Result<TwinSession<G>, ProtocolError> {
        TwinSession::new(self.twin_keys, &self.record)
    }

    fn entity(&self) -> Result<EntitySession<G>, ProtocolError> {
        EntitySession::new(self.entity_keys, &self.record)
    }

    fn session(&self, index: u64) -> Result<SessionMetrics, SessionError> {
        let kind = self.kinds[index as usize];
        let mut rng = session_rng(self.config.rng_seed, index);
        let rng = &mut rng;
        let outcome: AttackOutcome<G> = match kind.adversary() {
            None => {
                let (mut twin, mut entity) = (self.twin()?, self.entity()?);
                let trace = run_exchange(&mut twin, &mut entity, self.latency, None, rng)?;
                let mut m = SessionMetrics::from_trace(index, kind, &trace);
                m.accepted = twin.key().is_some() && entity.key().is_some();
                m.keys_agree = m.accepted.then(|| twin.key() == entity.key());
                m.abort_reason = match (twin.phase(), entity.phase()) {
                    (crate::protocol::TwinPhase::Failed(r), _) => Some(r),
                    (_, crate::protocol::EntityPhase::Failed(r)) => Some(r),
                    _ => None,
                };
                m.ops_entity = entity.ops();
                m.ops_twin = twin.ops();
                return Ok(m);
            }
            Some(AdversaryKind::Replay) => {
                attack_replay(&self.replay_ctx, &mut self.entity()?, self.latency, rng)?
            }
            Some(AdversaryKind::ImpersonateTwin) => {
                let ctx = AttackContext::impersonate_twin(self.record);
                attack_impersonate_twin(&ctx, &mut self.entity()?, self.latency, rng)?
            }
            Some(AdversaryKind::MitmTamper) => {
                let ctx = AttackContext::mitm(self.record);
                let (mut twin, mut entity) = (self.twin()?, self.entity()?);
                let out = attack_mitm_tamper(&ctx, &mut twin, &mut entity, self.latency, rng)?;
                let mut m = metrics_from_outcome(index, kind, &out);
                m.keys_agree = match (twin.key(), entity.key()) {
                    (Some(a), Some(b)) => Some(a == b),
                    _ => None,
                };
                return Ok(m);
            }
            Some(AdversaryKind::KciImpersonatePhysical) => {
                let ctx = AttackContext::kci(self.record, self.twin_keys.secret_key());
                attack_kci(&ctx, &mut self.twin()?, self.latency, rng)?
            }
        };
        Ok(metrics_from_outcome(index, kind, &outcome))
    }
}

fn setup_err(e: ProtocolError) -> SimError {
    SimError::Setup(e.into())
}

fn metrics_from_outcome<G: PrimeGroup>(
    index: u64,
    kind: SessionKind,
    out: &AttackOutcome<G>,
) -> SessionMetrics {
    let mut m = SessionMetrics::from_trace(index, kind, &out.trace);
    m.accepted = out.accepted;
    m.abort_reason = out.reason;
    m.ops_entity = out.ops_entity;
    m.ops_twin = out.ops_twin;
    m
}

impl<G: PrimeGroup> SessionRunner for Campaign<G> {
    fn config(&self) -> &CampaignConfig {
        &self.config
    }

    fn kind_of(&self, index: u64) -> SessionKind {
        self.kinds[index as usize]
    }

    fn run_session(&self, index: u64) -> Result<SessionMetrics, SimError> {
        self.session(index)
            .map_err(|source| SimError::Session { index, source })
    }
}

/// Validates the config and prepares a campaign in the configured group.
pub fn prepare(config: &CampaignConfig) -> Result<Box<dyn SessionRunner>, SimError> {
    Ok(match config.group {
        GroupId::Toy => Box::new(Campaign::<ToyGroup>::setup(config)?),
        GroupId::Production => Box::new(Campaign::<P256Group>::setup(config)?),
    })
}

/// Runs one session of a campaign in isolation.
pub fn run_session(config: &CampaignConfig, index: u64) -> Result<SessionMetrics, SimError> {
    prepare(config)?.run_session(index)
}

/// Runs every session in index order.
pub fn run_campaign(config: &CampaignConfig) -> Result<CampaignReport, SimError> {
    let runner = prepare(config)?;
    let sessions = (0..config.sessions)
        .map(|i| runner.run_session(i))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CampaignReport::assemble(config.clone(), sessions))
}

#[cfg(test)]
mod tests;
