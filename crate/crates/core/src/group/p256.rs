//! NIST P-256 backend.

use alloc::vec::Vec;

use p256::elliptic_curve::bigint::{ArrayEncoding, U256};
use p256::elliptic_curve::ff::PrimeField;
use p256::elliptic_curve::group::{Group, GroupEncoding};
use p256::elliptic_curve::ops::Reduce;
use p256::elliptic_curve::Curve;
use p256::{CompressedPoint, FieldBytes, NistP256, ProjectivePoint, Scalar};
use rand::RngCore;

use super::{check_len, GroupError, GroupId, GroupParams, PrimeGroup};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct P256Group;

impl PrimeGroup for P256Group {
    type Scalar = Scalar;
    type Element = ProjectivePoint;

    const ID: GroupId = GroupId::Production;
    /// SEC1 compressed point. The identity is encoded as 33 zero bytes.
    const ELEMENT_LEN: usize = 33;
    const SCALAR_LEN: usize = 32;

    fn params() -> GroupParams {
        GroupParams {
            group_id: GroupId::Production,
            order: NistP256::ORDER.to_be_byte_array().to_vec(),
            generator: Self::encode_element(&ProjectivePoint::GENERATOR),
        }
    }

    fn generator() -> ProjectivePoint {
        ProjectivePoint::GENERATOR
    }

    fn identity() -> ProjectivePoint {
        ProjectivePoint::IDENTITY
    }

    fn exp(base: &ProjectivePoint, e: &Scalar) -> ProjectivePoint {
        *base * e
    }

    fn mul(a: &ProjectivePoint, b: &ProjectivePoint) -> ProjectivePoint {
        *a + b
    }

    fn encode_element(e: &ProjectivePoint) -> Vec<u8> {
        e.to_bytes().to_vec()
    }

    fn decode_element(bytes: &[u8]) -> Result<ProjectivePoint, GroupError> {
        check_len(bytes, Self::ELEMENT_LEN)?;
        let mut repr = CompressedPoint::default();
        repr.copy_from_slice(bytes);
        let point: ProjectivePoint =
            Option::from(ProjectivePoint::from_bytes(&repr)).ok_or(GroupError::NotAMember)?;
        // sec1 also accepts non-canonical tags (e.g. 0x05 compact); only the
        // compressed form is allowed here
        if point.to_bytes() != repr {
            return Err(GroupError::NotAMember);
        }
        Ok(point)
    }

    fn scalar_from_u64(v: u64) -> Scalar {
        Scalar::from(v)
    }

    fn scalar_invert(s: &Scalar) -> Option<Scalar> {
        Option::from(s.invert())
    }

    fn scalar_from_digest(digest: &[u8; 32]) -> Scalar {
        <Scalar as Reduce<U256>>::reduce_bytes(&FieldBytes::from(*digest))
    }

    fn encode_scalar(s: &Scalar) -> Vec<u8> {
        s.to_repr().to_vec()
    }

    fn decode_scalar(bytes: &[u8]) -> Result<Scalar, GroupError> {
        check_len(bytes, Self::SCALAR_LEN)?;
        let mut repr = FieldBytes::default();
        repr.copy_from_slice(bytes);
        Option::from(Scalar::from_repr(repr)).ok_or(GroupError::ScalarOutOfRange)
    }

    fn random_scalar<R: RngCore + ?Sized>(rng: &mut R) -> Scalar {
        let mut wide = [0u8; 32];
        // rejection sampling against q; p256's own Field::random wants a sized rng
        loop {
            rng.fill_bytes(&mut wide);
            if let Some(s) = Option::from(Scalar::from_repr(FieldBytes::from(wide))) {
                return s;
            }
        }
    }

    fn is_identity(e: &ProjectivePoint) -> bool {
        bool::from(e.is_identity())
    }
}
