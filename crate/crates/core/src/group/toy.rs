//! The order-11 subgroup of `(Z/23Z)^*`, generated by 2.
//!
//! Small enough to enumerate every discrete log. Not secure.

use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use rand::RngCore;

use super::{check_len, GroupError, GroupId, GroupParams, PrimeGroup};

/// Modulus of the ambient multiplicative group.
pub const TOY_MODULUS: u32 = 23;
/// Order of the subgroup.
pub const TOY_ORDER: u32 = 11;
/// Generator of the subgroup.
pub const TOY_GENERATOR: u32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ToyGroup;

/// Residue in `[0, 11)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ToyScalar(u32);

impl ToyScalar {
    pub fn new(v: u32) -> Self {
        ToyScalar(v % TOY_ORDER)
    }

    pub fn value(self) -> u32 {
        self.0
    }
}

impl Add for ToyScalar {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        ToyScalar((self.0 + rhs.0) % TOY_ORDER)
    }
}

impl Sub for ToyScalar {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        ToyScalar((self.0 + TOY_ORDER - rhs.0) % TOY_ORDER)
    }
}

impl Mul for ToyScalar {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        ToyScalar((self.0 * rhs.0) % TOY_ORDER)
    }
}

impl Neg for ToyScalar {
    type Output = Self;
    fn neg(self) -> Self {
        ToyScalar((TOY_ORDER - self.0) % TOY_ORDER)
    }
}

/// Residue mod 23 lying in the order-11 subgroup.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ToyElement(u32);

impl ToyElement {
    /// Checked constructor; `None` for residues outside the subgroup.
    pub fn new(v: u32) -> Option<Self> {
        if is_subgroup_member(v) {
            Some(ToyElement(v))
        } else {
            None
        }
    }

    pub fn value(self) -> u32 {
        self.0
    }
}

fn pow_mod(base: u32, mut e: u32, m: u32) -> u32 {
    let mut acc = 1u32;
    let mut b = base % m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

fn is_subgroup_member(v: u32) -> bool {
    (1..TOY_MODULUS).contains(&v) && pow_mod(v, TOY_ORDER, TOY_MODULUS) == 1
}

impl PrimeGroup for ToyGroup {
    type Scalar = ToyScalar;
    type Element = ToyElement;

    const ID: GroupId = GroupId::Toy;
    const ELEMENT_LEN: usize = 4;
    const SCALAR_LEN: usize = 4;

    fn params() -> GroupParams {
        GroupParams {
            group_id: GroupId::Toy,
            order: TOY_ORDER.to_be_bytes().to_vec(),
            generator: TOY_GENERATOR.to_be_bytes().to_vec(),
        }
    }

    fn generator() -> ToyElement {
        ToyElement(TOY_GENERATOR)
    }

    fn identity() -> ToyElement {
        ToyElement(1)
    }

    fn exp(base: &ToyElement, e: &ToyScalar) -> ToyElement {
        ToyElement(pow_mod(base.0, e.0, TOY_MODULUS))
    }

    fn mul(a: &ToyElement, b: &ToyElement) -> ToyElement {
        ToyElement(a.0 * b.0 % TOY_MODULUS)
    }

    fn encode_element(e: &ToyElement) -> Vec<u8> {
        e.0.to_be_bytes().to_vec()
    }

    fn decode_element(bytes: &[u8]) -> Result<ToyElement, GroupError> {
        check_len(bytes, 4)?;
        let v = u32::from_be_bytes([bytes[0], bytes[1], bytes[2], bytes[3]]);
        ToyElement::new(v).ok_or(GroupError::NotAMember)
    }

    fn scalar_from_u64(v: u64) -> ToyScalar {
        ToyScalar((v % TOY_ORDER as u64) as u32)
    }

    fn scalar_invert(s: &ToyScalar) -> Option<ToyScalar> {
        if s.0 == 0 {
            return None;
        }
        // Fermat: s^(q-2) mod q
        Some(ToyScalar(pow_mod(s.0, TOY_ORDER - 2, TOY_ORDER)))
    }

    fn scalar_from_digest(digest: &[u8; 32]) -> ToyScalar {
        let r = digest
            .iter()
            .fold(0u32, |acc, &b| (acc * 256 + b as u32) % TOY_ORDER);
        ToyScalar(r)
    }

    fn encode_scalar(s: &ToyScalar) -> Vec<u8> {
        s.0.to_be_bytes().to_vec()
    }

    fn decode_scalar(bytes: &[u8]) -> Result<ToyScalar, GroupError> {
        check_len(bytes, 4)?;
        let v = u32::from_be_bytes([bytes[0], bytes[1], bytes[2], bytes[3]]);
        if v >= TOY_ORDER {
            return Err(GroupError::ScalarOutOfRange);
        }
        Ok(ToyScalar(v))
    }

    fn random_scalar<R: RngCore + ?Sized>(rng: &mut R) -> ToyScalar {
        // rejection sampling keeps the draw exactly uniform
        let zone = u32::MAX - (u32::MAX % TOY_ORDER);
        loop {
            let v = rng.next_u32();
            if v < zone {
                return ToyScalar(v % TOY_ORDER);
            }
        }
    }
}
