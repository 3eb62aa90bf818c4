//! Physical identity provisioning and key derivation for both parties.

use core::fmt;

use rand::RngCore;

use crate::group::PrimeGroup;
use crate::hash::{hash_h2, hash_to_scalar};

const PROVISION_LABEL: &[u8] = b"przk-bind/puf-provision";

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum IdentityError {
    #[error("provisioning seed must not be empty")]
    EmptySeed,
    #[error("hashed identity must be nonzero")]
    ZeroIdentity,
    #[error("twin secret key must be nonzero")]
    ZeroSecretKey,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdentitySource {
    /// Noise-free stand-in for a PUF, derived from a seed.
    SimulatedPuf,
    /// Raw secret loaded from storage.
    Fixed,
}

/// The physical entity's unclonable secret `S_p`.
///
/// Never serialized by this crate. `Debug` is redacted.
#[derive(Clone, PartialEq, Eq)]
pub struct PhysicalIdentity {
    secret: [u8; 32],
    source: IdentitySource,
}

impl fmt::Debug for PhysicalIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PhysicalIdentity")
            .field("secret", &"<redacted>")
            .field("source", &self.source)
            .finish()
    }
}

impl PhysicalIdentity {
    /// Deterministic simulated PUF read-out: `S_p = H2(label, seed)`.
    pub fn provision(seed: &[u8]) -> Result<Self, IdentityError> {
        if seed.is_empty() {
            return Err(IdentityError::EmptySeed);
        }
        Ok(PhysicalIdentity {
            secret: hash_h2(&[PROVISION_LABEL, seed]).0,
            source: IdentitySource::SimulatedPuf,
        })
    }

    pub fn from_secret(secret: [u8; 32]) -> Self {
        PhysicalIdentity {
            secret,
            source: IdentitySource::Fixed,
        }
    }

    pub fn source(&self) -> IdentitySource {
        self.source
    }

    /// Raw secret bytes, for writing the entity's own secret file.
    pub fn expose_secret(&self) -> &[u8; 32] {
        &self.secret
    }

    /// `H1(S_p)`, re-derived with an appended counter while the result is zero.
    pub fn hashed<G: PrimeGroup>(&self) -> G::Scalar {
        let first = hash_to_scalar::<G>(&[&self.secret]);
        if !G::scalar_is_zero(&first) {
            return first;
        }
        let mut counter = 1u32;
        loop {
            let h = hash_to_scalar::<G>(&[&self.secret, &counter.to_be_bytes()]);
            if !G::scalar_is_zero(&h) {
                return h;
            }
            counter += 1;
        }
    }
}

/// `h_sp = H1(S_p)` and `pk_p = g^h_sp`.
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct EntityKeys<G: PrimeGroup> {
    h_sp: G::Scalar,
    pk_p: G::Element,
}

impl<G: PrimeGroup> fmt::Debug for EntityKeys<G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EntityKeys")
            .field("pk_p", &self.pk_p)
            .finish_non_exhaustive()
    }
}

impl<G: PrimeGroup> EntityKeys<G> {
    pub fn derive(id: &PhysicalIdentity) -> Self {
        let h_sp = id.hashed::<G>();
        EntityKeys {
            h_sp,
            pk_p: G::exp_generator(&h_sp),
        }
    }

    /// Builds keys from an already hashed identity.
    pub fn from_hashed_identity(h_sp: G::Scalar) -> Result<Self, IdentityError> {
        if G::scalar_is_zero(&h_sp) {
            return Err(IdentityError::ZeroIdentity);
        }
        Ok(EntityKeys {
            h_sp,
            pk_p: G::exp_generator(&h_sp),
        })
    }

    pub fn hashed_identity(&self) -> G::Scalar {
        self.h_sp
    }

    pub fn public_key(&self) -> G::Element {
        self.pk_p
    }

    pub fn is_consistent(&self) -> bool {
        G::exp_generator(&self.h_sp) == self.pk_p
    }
}

pub fn derive_entity_keys<G: PrimeGroup>(id: &PhysicalIdentity) -> EntityKeys<G> {
    EntityKeys::derive(id)
}

/// The digital twin's long-term pair, `pk_d = g^sk_d` with `sk_d != 0`.
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct TwinKeyPair<G: PrimeGroup> {
    sk_d: G::Scalar,
    pk_d: G::Element,
}

impl<G: PrimeGroup> fmt::Debug for TwinKeyPair<G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TwinKeyPair")
            .field("pk_d", &self.pk_d)
            .finish_non_exhaustive()
    }
}

impl<G: PrimeGroup> TwinKeyPair<G> {
    pub fn generate<R: RngCore + ?Sized>(rng: &mut R) -> Self {
        let sk_d = G::random_nonzero_scalar(rng);
        TwinKeyPair {
            sk_d,
            pk_d: G::exp_generator(&sk_d),
        }
    }

    pub fn from_secret(sk_d: G::Scalar) -> Result<Self, IdentityError> {
        if G::scalar_is_zero(&sk_d) {
            return Err(IdentityError::ZeroSecretKey);
        }
        Ok(TwinKeyPair {
            sk_d,
            pk_d: G::exp_generator(&sk_d),
        })
    }

    pub fn secret_key(&self) -> G::Scalar {
        self.sk_d
    }

    pub fn public_key(&self) -> G::Element {
        self.pk_d
    }
}

pub fn twin_keygen<G: PrimeGroup, R: RngCore + ?Sized>(rng: &mut R) -> TwinKeyPair<G> {
    TwinKeyPair::generate(rng)
}
