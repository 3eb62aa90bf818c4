//! Credential-authority registration: minting and checking binding records.
//!
//! The authority is only used at initialization. Nothing in `protocol` or the
//! session loop of `simulator` depends on this module's [`Registry`].

use alloc::vec::Vec;

use crate::group::PrimeGroup;
use crate::hash::{hash_h2, Digest};

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum RegistrationError {
    #[error("public key is the identity element")]
    DegenerateKey,
    #[error("(pk_p, pk_d) pair already bound")]
    AlreadyBound,
    #[error("binding record does not match its commitment")]
    Tampered,
}

/// `zeta = H2(enc(pk_p) || enc(pk_d) || t_be64)`.
pub fn binding_commitment<G: PrimeGroup>(pk_p: &G::Element, pk_d: &G::Element, t: u64) -> Digest {
    hash_h2(&[
        &G::encode_element(pk_p),
        &G::encode_element(pk_d),
        &t.to_be_bytes(),
    ])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BindingRecord<G: PrimeGroup> {
    pub pk_p: G::Element,
    pub pk_d: G::Element,
    /// Unix seconds.
    pub t: u64,
    pub zeta: Digest,
}

impl<G: PrimeGroup> BindingRecord<G> {
    pub fn mint(pk_p: G::Element, pk_d: G::Element, t: u64) -> Result<Self, RegistrationError> {
        if G::is_identity(&pk_p) || G::is_identity(&pk_d) {
            return Err(RegistrationError::DegenerateKey);
        }
        Ok(BindingRecord {
            pk_p,
            pk_d,
            t,
            zeta: binding_commitment::<G>(&pk_p, &pk_d, t),
        })
    }

    /// True iff the stored `zeta` matches the one recomputed from the other fields.
    pub fn verify(&self) -> bool {
        binding_commitment::<G>(&self.pk_p, &self.pk_d, self.t) == self.zeta
    }
}

pub fn verify_record<G: PrimeGroup>(rec: &BindingRecord<G>) -> bool {
    rec.verify()
}

/// In-memory registry kept in insertion order, at most one record per key pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Registry<G: PrimeGroup> {
    records: Vec<BindingRecord<G>>,
}

impl<G: PrimeGroup> Default for Registry<G> {
    fn default() -> Self {
        Registry {
            records: Vec::new(),
        }
    }
}

impl<G: PrimeGroup> Registry<G> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register(
        &mut self,
        pk_p: G::Element,
        pk_d: G::Element,
        t: u64,
    ) -> Result<BindingRecord<G>, RegistrationError> {
        let rec = BindingRecord::mint(pk_p, pk_d, t)?;
        self.insert(rec)?;
        Ok(rec)
    }

    /// Adds an existing record after checking it.
    pub fn insert(&mut self, rec: BindingRecord<G>) -> Result<(), RegistrationError> {
        if !rec.verify() {
            return Err(RegistrationError::Tampered);
        }
        if G::is_identity(&rec.pk_p) || G::is_identity(&rec.pk_d) {
            return Err(RegistrationError::DegenerateKey);
        }
        if self.lookup(&rec.pk_p, &rec.pk_d).is_some() {
            return Err(RegistrationError::AlreadyBound);
        }
        self.records.push(rec);
        Ok(())
    }

    pub fn lookup(&self, pk_p: &G::Element, pk_d: &G::Element) -> Option<&BindingRecord<G>> {
        self.records
            .iter()
            .find(|r| r.pk_p == *pk_p && r.pk_d == *pk_d)
    }

    pub fn records(&self) -> &[BindingRecord<G>] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}
