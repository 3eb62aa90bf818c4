//! Prime-order group abstraction.
//!
//! Two backends implement [`PrimeGroup`]:
//!
//! - [`ToyGroup`]: the order-11 subgroup of `(Z/23Z)^*` generated by 2. Every
//!   discrete log is enumerable, which makes exhaustive oracle tests possible.
//! - [`P256Group`]: the NIST P-256 curve group (secp256r1) at the 128-bit
//!   security level.
//!
//! The group operation is written multiplicatively (`mul`, `exp`) for both
//! backends, even though the curve group is additive underneath.

mod p256;
mod toy;

use alloc::vec::Vec;
use core::fmt::Debug;
use core::ops::{Add, Mul, Neg, Sub};

use rand::RngCore;
use serde::{Deserialize, Serialize};

pub use self::p256::P256Group;
pub use self::toy::{ToyElement, ToyGroup, ToyScalar};

/// Which backend a value, config or file belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupId {
    Toy,
    Production,
}

impl GroupId {
    pub fn as_str(self) -> &'static str {
        match self {
            GroupId::Toy => "toy",
            GroupId::Production => "production",
        }
    }
}

impl core::str::FromStr for GroupId {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "toy" => Ok(GroupId::Toy),
            "production" | "p256" | "secp256r1" => Ok(GroupId::Production),
            _ => Err(GroupError::UnknownGroup),
        }
    }
}

impl core::fmt::Display for GroupId {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("encoding has length {actual}, expected {expected}")]
    BadLength { expected: usize, actual: usize },
    #[error("bytes do not encode a member of the group")]
    NotAMember,
    #[error("scalar encoding is not reduced modulo the group order")]
    ScalarOutOfRange,
    #[error("unknown group id (expected `toy` or `production`)")]
    UnknownGroup,
}

/// Public description of a group instantiation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupParams {
    pub group_id: GroupId,
    /// Big-endian group order.
    pub order: Vec<u8>,
    /// Canonical encoding of the generator.
    pub generator: Vec<u8>,
}

/// A cyclic group of prime order `q` together with its scalar field `Z_q`.
///
/// Backends are zero-sized markers; all operations are associated functions
/// and are pure.
pub trait PrimeGroup: Copy + Eq + Debug + Default + Send + Sync + 'static {
    type Scalar: Copy
        + Eq
        + Debug
        + Send
        + Sync
        + Add<Output = Self::Scalar>
        + Sub<Output = Self::Scalar>
        + Mul<Output = Self::Scalar>
        + Neg<Output = Self::Scalar>;
    type Element: Copy + Eq + Debug + Send + Sync;

    const ID: GroupId;
    /// Byte length of a canonical element encoding.
    const ELEMENT_LEN: usize;
    /// Byte length of a canonical scalar encoding.
    const SCALAR_LEN: usize;

    fn params() -> GroupParams;

    fn generator() -> Self::Element;
    fn identity() -> Self::Element;
    fn exp(base: &Self::Element, e: &Self::Scalar) -> Self::Element;
    fn mul(a: &Self::Element, b: &Self::Element) -> Self::Element;

    fn encode_element(e: &Self::Element) -> Vec<u8>;
    fn decode_element(bytes: &[u8]) -> Result<Self::Element, GroupError>;

    fn scalar_from_u64(v: u64) -> Self::Scalar;
    /// Multiplicative inverse; `None` for zero.
    fn scalar_invert(s: &Self::Scalar) -> Option<Self::Scalar>;
    /// Interprets `digest` as a big-endian integer and reduces it mod `q`.
    fn scalar_from_digest(digest: &[u8; 32]) -> Self::Scalar;
    fn encode_scalar(s: &Self::Scalar) -> Vec<u8>;
    /// Strict decoding: rejects encodings of integers `>= q`.
    fn decode_scalar(bytes: &[u8]) -> Result<Self::Scalar, GroupError>;

    /// Uniform over `[0, q)`.
    fn random_scalar<R: RngCore + ?Sized>(rng: &mut R) -> Self::Scalar;

    fn scalar_zero() -> Self::Scalar {
        Self::scalar_from_u64(0)
    }

    fn scalar_is_zero(s: &Self::Scalar) -> bool {
        *s == Self::scalar_zero()
    }

    /// Uniform over `[1, q)`.
    fn random_nonzero_scalar<R: RngCore + ?Sized>(rng: &mut R) -> Self::Scalar {
        loop {
            let s = Self::random_scalar(rng);
            if !Self::scalar_is_zero(&s) {
                return s;
            }
        }
    }

    fn exp_generator(e: &Self::Scalar) -> Self::Element {
        Self::exp(&Self::generator(), e)
    }

    fn is_identity(e: &Self::Element) -> bool {
        *e == Self::identity()
    }
}

pub fn scalar_random<G: PrimeGroup, R: RngCore + ?Sized>(rng: &mut R) -> G::Scalar {
    G::random_scalar(rng)
}

pub fn scalar_random_nonzero<G: PrimeGroup, R: RngCore + ?Sized>(rng: &mut R) -> G::Scalar {
    G::random_nonzero_scalar(rng)
}

pub(crate) fn check_len(bytes: &[u8], expected: usize) -> Result<(), GroupError> {
    if bytes.len() != expected {
        return Err(GroupError::BadLength {
            expected,
            actual: bytes.len(),
        });
    }
    Ok(())
}
