//! Base signature backends.
//!
//! The scheme signs a single digest with an ordinary signature algorithm.
//! Two backends exist: Ed25519, and a keyed-hash stub whose keys and
//! signatures are reproducible from a seed. The stub uses the same key for
//! signing and verifying and offers no security; it exists for fixtures.
//!
//! Serialized keys are the algorithm id byte followed by the raw key.

use std::fmt;

use ed25519_dalek::{Signer, Verifier};
use rand_core::CryptoRngCore;
use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

const STUB_TAG: &[u8] = b"mlss-test-stub-v1";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KeyError {
    #[error("empty key data")]
    Empty,
    #[error("unknown signature algorithm id {0:#04x}")]
    UnknownAlgorithm(u8),
    #[error("{algorithm} key must be {expected} bytes, got {got}")]
    BadLength {
        algorithm: SignatureAlgorithm,
        expected: usize,
        got: usize,
    },
    #[error("{algorithm} provides at most {max} bits of security, {requested} requested")]
    UnsupportedSecurityLevel {
        algorithm: SignatureAlgorithm,
        max: u32,
        requested: u32,
    },
    #[error("invalid key material: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SignatureAlgorithm {
    Ed25519,
    TestStub,
}

impl SignatureAlgorithm {
    pub fn id(self) -> u8 {
        match self {
            SignatureAlgorithm::Ed25519 => 0x01,
            SignatureAlgorithm::TestStub => 0xF0,
        }
    }

    pub fn from_id(id: u8) -> Option<Self> {
        match id {
            0x01 => Some(SignatureAlgorithm::Ed25519),
            0xF0 => Some(SignatureAlgorithm::TestStub),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SignatureAlgorithm::Ed25519 => "ed25519",
            SignatureAlgorithm::TestStub => "test-stub",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "ed25519" => Some(SignatureAlgorithm::Ed25519),
            "test-stub" | "stub" => Some(SignatureAlgorithm::TestStub),
            _ => None,
        }
    }

    /// Strongest security parameter (in bits) the algorithm can meet.
    pub fn max_security_bits(self) -> u32 {
        match self {
            SignatureAlgorithm::Ed25519 => 128,
            SignatureAlgorithm::TestStub => 256,
        }
    }

    fn key_len(self) -> usize {
        32
    }
}

impl fmt::Display for SignatureAlgorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Symmetric key of the test stub.
#[derive(Clone, PartialEq, Eq)]
pub struct StubKey([u8; 32]);

impl StubKey {
    fn tag(&self, message: &[u8]) -> Vec<u8> {
        let mut h = Sha256::new();
        h.update(STUB_TAG);
        h.update(self.0);
        h.update(message);
        h.finalize().to_vec()
    }
}

impl fmt::Debug for StubKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("StubKey(..)")
    }
}

#[derive(Debug, Clone)]
pub enum SigningKey {
    Ed25519(ed25519_dalek::SigningKey),
    TestStub(StubKey),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VerifyingKey {
    Ed25519(ed25519_dalek::VerifyingKey),
    TestStub(StubKey),
}

/// Generates a key pair for `algorithm` at security parameter
/// `security_bits`.
pub fn generate<R: CryptoRngCore + ?Sized>(
    algorithm: SignatureAlgorithm,
    security_bits: u32,
    rng: &mut R,
) -> Result<(SigningKey, VerifyingKey), KeyError> {
    let max = algorithm.max_security_bits();
    if security_bits > max {
        return Err(KeyError::UnsupportedSecurityLevel {
            algorithm,
            max,
            requested: security_bits,
        });
    }
    let sk = match algorithm {
        SignatureAlgorithm::Ed25519 => SigningKey::Ed25519(ed25519_dalek::SigningKey::generate(rng)),
        SignatureAlgorithm::TestStub => {
            let mut key = [0u8; 32];
            rng.fill_bytes(&mut key);
            SigningKey::TestStub(StubKey(key))
        }
    };
    let pk = sk.verifying_key();
    Ok((sk, pk))
}

impl SigningKey {
    pub fn algorithm(&self) -> SignatureAlgorithm {
        match self {
            SigningKey::Ed25519(_) => SignatureAlgorithm::Ed25519,
            SigningKey::TestStub(_) => SignatureAlgorithm::TestStub,
        }
    }

    pub fn verifying_key(&self) -> VerifyingKey {
        match self {
            SigningKey::Ed25519(k) => VerifyingKey::Ed25519(k.verifying_key()),
            SigningKey::TestStub(k) => VerifyingKey::TestStub(k.clone()),
        }
    }

    pub fn sign(&self, message: &[u8]) -> Vec<u8> {
        match self {
            SigningKey::Ed25519(k) => k.sign(message).to_bytes().to_vec(),
            SigningKey::TestStub(k) => k.tag(message),
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let raw: [u8; 32] = match self {
            SigningKey::Ed25519(k) => k.to_bytes(),
            SigningKey::TestStub(k) => k.0,
        };
        [&[self.algorithm().id()][..], &raw].concat()
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, KeyError> {
        let (algorithm, raw) = split_key(bytes)?;
        Ok(match algorithm {
            SignatureAlgorithm::Ed25519 => SigningKey::Ed25519(ed25519_dalek::SigningKey::from_bytes(&raw)),
            SignatureAlgorithm::TestStub => SigningKey::TestStub(StubKey(raw)),
        })
    }
}

impl VerifyingKey {
    pub fn algorithm(&self) -> SignatureAlgorithm {
        match self {
            VerifyingKey::Ed25519(_) => SignatureAlgorithm::Ed25519,
            VerifyingKey::TestStub(_) => SignatureAlgorithm::TestStub,
        }
    }

    pub fn verify(&self, message: &[u8], signature: &[u8]) -> bool {
        match self {
            VerifyingKey::Ed25519(k) => ed25519_dalek::Signature::from_slice(signature)
                .map(|sig| k.verify(message, &sig).is_ok())
                .unwrap_or(false),
            VerifyingKey::TestStub(k) => k.tag(message) == signature,
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let raw: [u8; 32] = match self {
            VerifyingKey::Ed25519(k) => k.to_bytes(),
            VerifyingKey::TestStub(k) => k.0,
        };
        [&[self.algorithm().id()][..], &raw].concat()
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, KeyError> {
        let (algorithm, raw) = split_key(bytes)?;
        Ok(match algorithm {
            SignatureAlgorithm::Ed25519 => VerifyingKey::Ed25519(
                ed25519_dalek::VerifyingKey::from_bytes(&raw).map_err(|e| KeyError::Invalid(e.to_string()))?,
            ),
            SignatureAlgorithm::TestStub => VerifyingKey::TestStub(StubKey(raw)),
        })
    }
}

fn split_key(bytes: &[u8]) -> Result<(SignatureAlgorithm, [u8; 32]), KeyError> {
    let (&id, raw) = bytes.split_first().ok_or(KeyError::Empty)?;
    let algorithm = SignatureAlgorithm::from_id(id).ok_or(KeyError::UnknownAlgorithm(id))?;
    let raw: [u8; 32] = raw.try_into().map_err(|_| KeyError::BadLength {
        algorithm,
        expected: algorithm.key_len(),
        got: raw.len(),
    })?;
    Ok((algorithm, raw))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn stub_keys_reproducible_from_seed() {
        let mut a = ChaCha20Rng::seed_from_u64(7);
        let mut b = ChaCha20Rng::seed_from_u64(7);
        let (ka, _) = generate(SignatureAlgorithm::TestStub, 128, &mut a).unwrap();
        let (kb, _) = generate(SignatureAlgorithm::TestStub, 128, &mut b).unwrap();
        assert_eq!(ka.to_bytes(), kb.to_bytes());
        assert_eq!(ka.sign(b"m"), kb.sign(b"m"));
    }

    #[test]
    fn ed25519_round_trip() {
        let mut rng = rand_core::OsRng;
        let (sk, pk) = generate(SignatureAlgorithm::Ed25519, 128, &mut rng).unwrap();
        let sig = sk.sign(b"message");
        assert!(pk.verify(b"message", &sig));
        assert!(!pk.verify(b"messagf", &sig));
        let mut bad = sig.clone();
        bad[0] ^= 1;
        assert!(!pk.verify(b"message", &bad));
        assert!(!pk.verify(b"message", &sig[..10]));
    }

    #[test]
    fn ed25519_generation_is_randomized() {
        let mut rng = rand_core::OsRng;
        let (a, _) = generate(SignatureAlgorithm::Ed25519, 128, &mut rng).unwrap();
        let (b, _) = generate(SignatureAlgorithm::Ed25519, 128, &mut rng).unwrap();
        assert_ne!(a.to_bytes(), b.to_bytes());
    }

    #[test]
    fn security_level_checked() {
        let mut rng = rand_core::OsRng;
        assert!(matches!(
            generate(SignatureAlgorithm::Ed25519, 192, &mut rng),
            Err(KeyError::UnsupportedSecurityLevel { max: 128, .. })
        ));
    }

    #[test]
    fn serialization() {
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        for alg in [SignatureAlgorithm::Ed25519, SignatureAlgorithm::TestStub] {
            let (sk, pk) = generate(alg, 128, &mut rng).unwrap();
            let bytes = sk.to_bytes();
            assert_eq!(bytes[0], alg.id());
            assert_eq!(bytes.len(), 33);
            let sk2 = SigningKey::from_bytes(&bytes).unwrap();
            assert_eq!(sk2.verifying_key(), pk);
            assert_eq!(VerifyingKey::from_bytes(&pk.to_bytes()).unwrap(), pk);
        }
        assert_eq!(SigningKey::from_bytes(&[]).unwrap_err(), KeyError::Empty);
        assert_eq!(
            SigningKey::from_bytes(&[0x55; 33]).unwrap_err(),
            KeyError::UnknownAlgorithm(0x55)
        );
        assert!(matches!(
            VerifyingKey::from_bytes(&[0x01, 1, 2]),
            Err(KeyError::BadLength { got: 2, .. })
        ));
    }
}
