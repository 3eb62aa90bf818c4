//! Discrete-event link between two [`Endpoint`]s.
//!
//! Messages are encoded to bytes, optionally rewritten in flight, delayed by
//! a sampled latency on a virtual microsecond clock, and decoded by the
//! receiver. Nothing here sleeps; a session of any latency runs as fast as
//! the arithmetic allows.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Reverse;

use rand::{Rng, RngCore};

use crate::group::PrimeGroup;
use crate::protocol::{Endpoint, Message, Role, Transcript};

/// Upper bound on messages per exchange; a well-behaved pair uses five.
pub const MAX_MESSAGES: usize = 64;

/// Uniform one-way latency on the integer microsecond grid `[low_us, high_us]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Latency {
    pub low_us: u64,
    pub high_us: u64,
}

impl Latency {
    pub fn fixed(us: u64) -> Self {
        Latency {
            low_us: us,
            high_us: us,
        }
    }

    pub fn uniform(low_us: u64, high_us: u64) -> Self {
        Latency { low_us, high_us }
    }

    pub fn sample<R: RngCore + ?Sized>(&self, rng: &mut R) -> u64 {
        if self.low_us >= self.high_us {
            self.low_us
        } else {
            rng.gen_range(self.low_us..=self.high_us)
        }
    }
}

/// Milliseconds to whole microseconds, rounding half up.
pub fn ms_to_us(ms: f64) -> u64 {
    if ms <= 0.0 {
        0
    } else {
        (ms * 1000.0 + 0.5) as u64
    }
}

/// One message as it arrived.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Delivery<G: PrimeGroup> {
    /// Position in send order, starting at 0.
    pub index: usize,
    pub to: Role,
    pub sent_us: u64,
    pub delivered_us: u64,
    pub bytes: Vec<u8>,
    /// `None` when the bytes did not decode.
    pub message: Option<Message<G>>,
    /// True if the bytes differ from what the sender produced.
    pub tampered: bool,
}

impl<G: PrimeGroup> Delivery<G> {
    pub fn delay_us(&self) -> u64 {
        self.delivered_us - self.sent_us
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace<G: PrimeGroup> {
    pub deliveries: Vec<Delivery<G>>,
    /// Decoded traffic, as an eavesdropper would see it.
    pub transcript: Transcript<G>,
    /// Virtual time at which the exchange went quiet.
    pub end_us: u64,
    /// Parties that were still waiting when the link went quiet.
    pub timed_out: Vec<Role>,
}

impl<G: PrimeGroup> Trace<G> {
    /// Delivery time of the last authentication message (not a verdict).
    pub fn auth_complete_us(&self) -> Option<u64> {
        self.deliveries
            .iter()
            .filter(|d| d.message.as_ref().is_some_and(Message::is_authentication))
            .map(|d| d.delivered_us)
            .max()
    }

    /// Delivery time of the first accepting verdict.
    pub fn accept_verdict_us(&self) -> Option<u64> {
        self.deliveries
            .iter()
            .find(|d| matches!(d.message, Some(Message::Verdict { accept: true, .. })))
            .map(|d| d.delivered_us)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum ChannelError {
    #[error("exchange exceeded {MAX_MESSAGES} messages")]
    TooManyMessages,
    #[error("{0:?} endpoint stayed live after its timeout fired")]
    Stuck(Role),
}

/// Rewrites bytes in flight: `(send index, sender, bytes)`.
pub type Tamper<'a> = &'a mut dyn FnMut(usize, Role, &mut Vec<u8>);

struct InFlight {
    index: usize,
    to: Role,
    sent_us: u64,
    bytes: Vec<u8>,
    tampered: bool,
}

/// Runs one exchange to completion.
///
/// Both endpoints get `start`; the twin's opening message is queued first.
/// Ties in delivery time are broken by send order.
pub fn run_exchange<G: PrimeGroup>(
    twin: &mut dyn Endpoint<G>,
    entity: &mut dyn Endpoint<G>,
    latency: Latency,
    mut tamper: Option<Tamper<'_>>,
    rng: &mut dyn RngCore,
) -> Result<Trace<G>, ChannelError> {
    let mut queue: BinaryHeap<Reverse<(u64, usize)>> = BinaryHeap::new();
    let mut flights: Vec<InFlight> = Vec::new();
    let mut now = 0u64;

    let mut send = |from: Role,
                    msg: Message<G>,
                    now: u64,
                    rng: &mut dyn RngCore,
                    queue: &mut BinaryHeap<Reverse<(u64, usize)>>,
                    flights: &mut Vec<InFlight>|
     -> Result<(), ChannelError> {
        let index = flights.len();
        if index >= MAX_MESSAGES {
            return Err(ChannelError::TooManyMessages);
        }
        let original = msg.encode();
        let mut bytes = original.clone();
        if let Some(t) = tamper.as_mut() {
            t(index, from, &mut bytes);
        }
        let tampered = bytes != original;
        let at = now + latency.sample(rng);
        flights.push(InFlight {
            index,
            to: from.peer(),
            sent_us: now,
            bytes,
            tampered,
        });
        queue.push(Reverse((at, index)));
        Ok(())
    };

    if let Some(m) = twin.start(rng) {
        send(Role::Twin, m, now, rng, &mut queue, &mut flights)?;
    }
    if let Some(m) = entity.start(rng) {
        send(Role::Entity, m, now, rng, &mut queue, &mut flights)?;
    }

    let mut deliveries = Vec::new();
    let mut transcript = Transcript::default();
    while let Some(Reverse((at, index))) = queue.pop() {
        now = at;
        let flight = &flights[index];
        let to = flight.to;
        let decoded = Message::<G>::decode(&flight.bytes).ok();
        if let Some(m) = &decoded {
            transcript.record(m, now);
        }
        deliveries.push(Delivery {
            index: flight.index,
            to,
            sent_us: flight.sent_us,
            delivered_us: now,
            bytes: flight.bytes.clone(),
            message: decoded,
            tampered: flight.tampered,
        });
        let receiver: &mut dyn Endpoint<G> = match to {
            Role::Twin => &mut *twin,
            Role::Entity => &mut *entity,
        };
        let reply = match decoded {
            Some(m) => receiver.receive(m, rng),
            None => receiver.receive_malformed(),
        };
        if let Some(m) = reply {
            send(to, m, now, rng, &mut queue, &mut flights)?;
        }
    }

    let mut timed_out = Vec::new();
    for role in [Role::Twin, Role::Entity] {
        let party: &mut dyn Endpoint<G> = match role {
            Role::Twin => &mut *twin,
            Role::Entity => &mut *entity,
        };
        if !party.is_terminal() {
            party.timeout();
            timed_out.push(role);
            if !party.is_terminal() {
                return Err(ChannelError::Stuck(role));
            }
        }
    }

    Ok(Trace {
        deliveries,
        transcript,
        end_us: now,
        timed_out,
    })
}
