use rand::RngCore;

use super::Transcript;
use crate::group::PrimeGroup;
use crate::hash::{hash_to_scalar, Digest};
use crate::identity::TwinKeyPair;

/// Interactive challenge `c = H1(enc(alpha) || zeta || nonce)`.
///
/// `nonce` is drawn fresh by the entity for every session, so a replayed
/// commitment meets a new challenge.
pub fn challenge_scalar<G: PrimeGroup>(
    alpha: &G::Element,
    zeta: &Digest,
    nonce: &[u8; 32],
) -> G::Scalar {
    hash_to_scalar::<G>(&[&G::encode_element(alpha), zeta.as_bytes(), nonce])
}

/// `z = r + c * sk mod q`.
pub fn schnorr_response<G: PrimeGroup>(r: &G::Scalar, c: &G::Scalar, sk: &G::Scalar) -> G::Scalar {
    *r + *c * *sk
}

/// `g^z == alpha * pk^c`.
pub fn schnorr_verify<G: PrimeGroup>(
    pk: &G::Element,
    alpha: &G::Element,
    c: &G::Scalar,
    z: &G::Scalar,
) -> bool {
    G::exp_generator(z) == G::mul(alpha, &G::exp(pk, c))
}

/// Non-interactive challenge; also binds `pk_d` so a proof cannot be moved
/// to another key.
pub fn fiat_shamir_challenge<G: PrimeGroup>(
    alpha: &G::Element,
    zeta: &Digest,
    pk_d: &G::Element,
) -> G::Scalar {
    hash_to_scalar::<G>(&[
        &G::encode_element(alpha),
        zeta.as_bytes(),
        &G::encode_element(pk_d),
    ])
}

pub fn fiat_shamir_prove<G: PrimeGroup, R: RngCore + ?Sized>(
    keys: &TwinKeyPair<G>,
    zeta: &Digest,
    rng: &mut R,
) -> (G::Element, G::Scalar) {
    let r = G::random_nonzero_scalar(rng);
    fiat_shamir_prove_with_nonce(keys, zeta, &r)
}

pub fn fiat_shamir_prove_with_nonce<G: PrimeGroup>(
    keys: &TwinKeyPair<G>,
    zeta: &Digest,
    r: &G::Scalar,
) -> (G::Element, G::Scalar) {
    let alpha = G::exp_generator(r);
    let pk_d = keys.public_key();
    let c = fiat_shamir_challenge::<G>(&alpha, zeta, &pk_d);
    (alpha, schnorr_response::<G>(r, &c, &keys.secret_key()))
}

pub fn fiat_shamir_verify<G: PrimeGroup>(
    pk_d: &G::Element,
    zeta: &Digest,
    alpha: &G::Element,
    z: &G::Scalar,
) -> bool {
    if G::is_identity(pk_d) || G::is_identity(alpha) {
        return false;
    }
    let c = fiat_shamir_challenge::<G>(alpha, zeta, pk_d);
    schnorr_verify::<G>(pk_d, alpha, &c, z)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum ExtractionError {
    #[error("transcript lacks a commitment, challenge or response")]
    Incomplete,
    #[error("transcripts use different commitments")]
    DifferentCommitments,
    #[error("transcripts share the same challenge")]
    SameChallenge,
}

/// Special-soundness extractor: two accepting transcripts with a common
/// commitment and distinct challenges give `sk = (z1 - z2) / (c1 - c2)`.
pub fn extract_secret<G: PrimeGroup>(
    t1: &Transcript<G>,
    t2: &Transcript<G>,
) -> Result<G::Scalar, ExtractionError> {
    let (a1, c1, z1) = t1.schnorr_triple().ok_or(ExtractionError::Incomplete)?;
    let (a2, c2, z2) = t2.schnorr_triple().ok_or(ExtractionError::Incomplete)?;
    if a1 != a2 {
        return Err(ExtractionError::DifferentCommitments);
    }
    let inv = G::scalar_invert(&(c1 - c2)).ok_or(ExtractionError::SameChallenge)?;
    Ok((z1 - z2) * inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{P256Group, ToyElement, ToyGroup, ToyScalar};
    use crate::hash::hash_h2;
    use alloc::vec::Vec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn s(v: u32) -> ToyScalar {
        ToyScalar::new(v)
    }

    fn el(v: u32) -> ToyElement {
        ToyElement::new(v).unwrap()
    }

    #[test]
    fn response_vector() {
        // 5 + 4*3 = 17 = 6 mod 11
        assert_eq!(schnorr_response::<ToyGroup>(&s(5), &s(4), &s(3)), s(6));
        assert_eq!(schnorr_response::<ToyGroup>(&s(5), &s(0), &s(3)), s(5));
    }

    #[test]
    fn verify_vector() {
        // g^6 = 64 mod 23 = 18; 8^4 = 4096 mod 23 = 2; 9 * 2 = 18
        assert!(schnorr_verify::<ToyGroup>(&el(8), &el(9), &s(4), &s(6)));
        assert!(!schnorr_verify::<ToyGroup>(&el(8), &el(9), &s(4), &s(7)));
        // c = 0 only checks alpha = g^z
        for pk in [2, 4, 8, 16, 9] {
            assert!(schnorr_verify::<ToyGroup>(&el(pk), &el(9), &s(0), &s(5)));
        }
    }

    #[test]
    fn challenge_depends_on_every_input() {
        let z1 = hash_h2(&[b"one"]);
        let z2 = hash_h2(&[b"two"]);
        let a = P256Group::exp_generator(&P256Group::scalar_from_u64(5));
        let n = [7u8; 32];
        let c = challenge_scalar::<P256Group>(&a, &z1, &n);
        assert_eq!(c, challenge_scalar::<P256Group>(&a, &z1, &n));
        assert_ne!(c, challenge_scalar::<P256Group>(&a, &z2, &n));
        assert_ne!(c, challenge_scalar::<P256Group>(&a, &z1, &[8u8; 32]));
    }

    #[test]
    fn fiat_shamir_is_exhaustively_complete_in_toy_group() {
        let keys = TwinKeyPair::<ToyGroup>::from_secret(s(3)).unwrap();
        let zeta = hash_h2(&[b"binding"]);
        for r in 0..11 {
            let (alpha, z) = fiat_shamir_prove_with_nonce(&keys, &zeta, &s(r));
            if r == 0 {
                // alpha = identity is refused as a commitment
                assert!(!fiat_shamir_verify::<ToyGroup>(
                    &keys.public_key(),
                    &zeta,
                    &alpha,
                    &z
                ));
                let c = fiat_shamir_challenge::<ToyGroup>(&alpha, &zeta, &keys.public_key());
                assert!(schnorr_verify::<ToyGroup>(
                    &keys.public_key(),
                    &alpha,
                    &c,
                    &z
                ));
            } else {
                assert!(fiat_shamir_verify::<ToyGroup>(
                    &keys.public_key(),
                    &zeta,
                    &alpha,
                    &z
                ));
            }
        }
    }

    #[test]
    fn fiat_shamir_rejects_other_keys() {
        let zeta = hash_h2(&[b"binding"]);
        let keys = TwinKeyPair::<ToyGroup>::from_secret(s(3)).unwrap();
        let (alpha, z) = fiat_shamir_prove_with_nonce(&keys, &zeta, &s(5));
        assert!(fiat_shamir_verify::<ToyGroup>(&el(8), &zeta, &alpha, &z));
        // c = 4 for pk 8. In a group of order 11 one other key collides:
        // pk 12 hashes to c = 10 and 12^10 = 8^4, so the same proof passes.
        assert_eq!(
            fiat_shamir_challenge::<ToyGroup>(&alpha, &zeta, &el(8)),
            s(4)
        );
        let accepted: Vec<u32> = [2u32, 4, 16, 9, 18, 13, 3, 6, 12]
            .into_iter()
            .filter(|&pk| fiat_shamir_verify::<ToyGroup>(&el(pk), &zeta, &alpha, &z))
            .collect();
        assert_eq!(accepted, [12]);

        let mut rng = ChaCha20Rng::seed_from_u64(4);
        let k1 = TwinKeyPair::<P256Group>::generate(&mut rng);
        let k2 = TwinKeyPair::<P256Group>::generate(&mut rng);
        let (alpha, z) = fiat_shamir_prove(&k1, &zeta, &mut rng);
        assert!(fiat_shamir_verify::<P256Group>(
            &k1.public_key(),
            &zeta,
            &alpha,
            &z
        ));
        assert!(!fiat_shamir_verify::<P256Group>(
            &k2.public_key(),
            &zeta,
            &alpha,
            &z
        ));
        assert!(!fiat_shamir_verify::<P256Group>(
            &k1.public_key(),
            &hash_h2(&[b"other"]),
            &alpha,
            &z
        ));
    }

    #[test]
    fn extraction_from_forked_transcripts() {
        let sk = s(3);
        let r = s(5);
        let alpha = ToyGroup::exp_generator(&r);
        let mk = |c: u32| Transcript::<ToyGroup> {
            alpha: Some(alpha),
            c: Some(s(c)),
            z: Some(schnorr_response::<ToyGroup>(&r, &s(c), &sk)),
            ..Default::default()
        };
        let got = extract_secret(&mk(4), &mk(9)).unwrap();
        assert_eq!(got, sk);
        assert_eq!(ToyGroup::exp_generator(&got), el(8));
        assert_eq!(
            extract_secret(&mk(4), &mk(4)),
            Err(ExtractionError::SameChallenge)
        );
        let mut other = mk(9);
        other.alpha = Some(el(2));
        assert_eq!(
            extract_secret(&mk(4), &other),
            Err(ExtractionError::DifferentCommitments)
        );
        assert_eq!(
            extract_secret(&mk(4), &Transcript::default()),
            Err(ExtractionError::Incomplete)
        );
    }
}
