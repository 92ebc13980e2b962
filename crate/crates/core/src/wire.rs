//! Binary container for signatures (`.mlss` files).
//!
//! ```text
//! offset size
//!      0    4  magic "MLSS"
//!      4    1  version (1)
//!      5    1  hash algorithm id
//!      6    1  signature algorithm id
//!      7    1  reserved, 0
//!      8    4  d        (u32 big-endian)
//!     12    4  n
//!     16    4  t
//!     20    2  h_out in bytes (u16 big-endian)
//!     22       t + 1 digests of h_out bytes: T_1 .. T_t, h*
//!              |sigma'| (u32 big-endian), then sigma'
//! ```

use thiserror::Error;

use crate::gt::TestVector;
use crate::hash::HashAlgorithm;
use crate::keys::SignatureAlgorithm;
use crate::scheme::MlssSignature;

pub const MAGIC: &[u8; 4] = b"MLSS";
pub const VERSION: u8 = 1;
pub const HEADER_LEN: usize = 22;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WireError {
    #[error("bad magic, not an MLSS signature")]
    BadMagic,
    #[error("unsupported container version {0}")]
    UnsupportedVersion(u8),
    #[error("unknown hash algorithm id {0:#04x}")]
    UnknownHashAlgorithm(u8),
    #[error("unknown signature algorithm id {0:#04x}")]
    UnknownSignatureAlgorithm(u8),
    #[error("reserved byte is {0:#04x}, expected 0")]
    Reserved(u8),
    #[error("truncated {section}: need {needed} bytes, {available} available")]
    Truncated {
        section: &'static str,
        needed: usize,
        available: usize,
    },
    #[error("declared digest length {declared} does not match {algorithm} ({expected} bytes)")]
    DigestLength {
        algorithm: HashAlgorithm,
        declared: usize,
        expected: usize,
    },
    #[error("signature has no test digests")]
    NoTests,
    #[error("{0} trailing bytes after signature")]
    TrailingBytes(usize),
    #[error("{0} does not fit its field")]
    FieldOverflow(&'static str),
    #[error("inconsistent signature: {0}")]
    Inconsistent(&'static str),
}

/// Size of the encoded container.
pub fn encoded_len(t: usize, h_out: usize, sigma_len: usize) -> usize {
    HEADER_LEN + (t + 1) * h_out + 4 + sigma_len
}

pub fn encode_signature(sig: &MlssSignature) -> Result<Vec<u8>, WireError> {
    let h_out = sig.hash.output_len();
    if sig.h_star.len() != h_out || sig.tests.digest_len() != h_out {
        return Err(WireError::Inconsistent("digest length differs from hash algorithm"));
    }
    let t = u32::try_from(sig.t()).map_err(|_| WireError::FieldOverflow("t"))?;
    let h_out16 = u16::try_from(h_out).map_err(|_| WireError::FieldOverflow("h_out"))?;
    let sigma_len =
        u32::try_from(sig.sigma_prime.len()).map_err(|_| WireError::FieldOverflow("signature length"))?;

    let mut out = Vec::with_capacity(encoded_len(sig.t(), h_out, sig.sigma_prime.len()));
    out.extend_from_slice(MAGIC);
    out.push(VERSION);
    out.push(sig.hash.id());
    out.push(sig.signature_algorithm.id());
    out.push(0);
    out.extend_from_slice(&sig.d.to_be_bytes());
    out.extend_from_slice(&sig.n.to_be_bytes());
    out.extend_from_slice(&t.to_be_bytes());
    out.extend_from_slice(&h_out16.to_be_bytes());
    for digest in sig.tests.digests() {
        out.extend_from_slice(digest);
    }
    out.extend_from_slice(&sig.h_star);
    out.extend_from_slice(&sigma_len.to_be_bytes());
    out.extend_from_slice(&sig.sigma_prime);
    Ok(out)
}

struct Reader<'a> {
    buf: &'a [u8],
}

impl<'a> Reader<'a> {
    fn take(&mut self, len: usize, section: &'static str) -> Result<&'a [u8], WireError> {
        if self.buf.len() < len {
            return Err(WireError::Truncated {
                section,
                needed: len,
                available: self.buf.len(),
            });
        }
        let (head, rest) = self.buf.split_at(len);
        self.buf = rest;
        Ok(head)
    }

    fn u8(&mut self, section: &'static str) -> Result<u8, WireError> {
        Ok(self.take(1, section)?[0])
    }

    fn u16(&mut self, section: &'static str) -> Result<u16, WireError> {
        Ok(u16::from_be_bytes(self.take(2, section)?.try_into().expect("2 bytes")))
    }

    fn u32(&mut self, section: &'static str) -> Result<u32, WireError> {
        Ok(u32::from_be_bytes(self.take(4, section)?.try_into().expect("4 bytes")))
    }
}

/// Strict parse of a container. Trailing bytes are rejected.
pub fn decode_signature(bytes: &[u8]) -> Result<MlssSignature, WireError> {
    let mut r = Reader { buf: bytes };
    if r.take(4, "magic")? != MAGIC {
        return Err(WireError::BadMagic);
    }
    let version = r.u8("header")?;
    if version != VERSION {
        return Err(WireError::UnsupportedVersion(version));
    }
    let hash_id = r.u8("header")?;
    let hash = HashAlgorithm::from_id(hash_id).ok_or(WireError::UnknownHashAlgorithm(hash_id))?;
    let sig_id = r.u8("header")?;
    let signature_algorithm =
        SignatureAlgorithm::from_id(sig_id).ok_or(WireError::UnknownSignatureAlgorithm(sig_id))?;
    let reserved = r.u8("header")?;
    if reserved != 0 {
        return Err(WireError::Reserved(reserved));
    }
    let d = r.u32("header")?;
    let n = r.u32("header")?;
    let t = r.u32("header")? as usize;
    let h_out = r.u16("header")? as usize;
    if h_out != hash.output_len() {
        return Err(WireError::DigestLength {
            algorithm: hash,
            declared: h_out,
            expected: hash.output_len(),
        });
    }
    if t == 0 {
        return Err(WireError::NoTests);
    }
    let area = t
        .checked_add(1)
        .and_then(|k| k.checked_mul(h_out))
        .ok_or(WireError::FieldOverflow("digest area"))?;
    let digests = r.take(area, "digests")?;
    let mut chunks: Vec<Vec<u8>> = digests.chunks_exact(h_out).map(<[u8]>::to_vec).collect();
    let h_star = chunks.pop().expect("t + 1 >= 2 chunks");
    let tests = TestVector::new(chunks).expect("equal-size chunks");

    let sigma_len = r.u32("signature length")? as usize;
    let sigma_prime = r.take(sigma_len, "signature")?.to_vec();
    if !r.buf.is_empty() {
        return Err(WireError::TrailingBytes(r.buf.len()));
    }
    Ok(MlssSignature {
        d,
        n,
        hash,
        signature_algorithm,
        tests,
        h_star,
        sigma_prime,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample(t: usize, h_out: usize, sigma: usize) -> MlssSignature {
        let hash = if h_out == 64 {
            HashAlgorithm::Sha512
        } else {
            HashAlgorithm::Sha256
        };
        MlssSignature {
            d: 3,
            n: 100,
            hash,
            signature_algorithm: SignatureAlgorithm::Ed25519,
            tests: TestVector::new((0..t).map(|i| vec![i as u8; h_out]).collect()).unwrap(),
            h_star: vec![0xEE; h_out],
            sigma_prime: vec![0x5A; sigma],
        }
    }

    #[test]
    fn layout_size() {
        let bytes = encode_signature(&sample(10, 32, 256)).unwrap();
        assert_eq!(bytes.len(), 634);
        assert_eq!(&bytes[..8], b"MLSS\x01\x01\x01\x00");
        assert_eq!(&bytes[8..22], &[0, 0, 0, 3, 0, 0, 0, 100, 0, 0, 0, 10, 0, 32]);
    }

    #[test]
    fn grows_by_h_out_per_row() {
        let a = encode_signature(&sample(10, 32, 64)).unwrap().len();
        let b = encode_signature(&sample(11, 32, 64)).unwrap().len();
        assert_eq!(b - a, 32);
    }

    #[test]
    fn rejects_malformed() {
        let good = encode_signature(&sample(4, 32, 64)).unwrap();
        let mut bad = good.clone();
        bad[0] = b'X';
        assert_eq!(decode_signature(&bad), Err(WireError::BadMagic));

        let mut bad = good.clone();
        bad[4] = 2;
        assert_eq!(decode_signature(&bad), Err(WireError::UnsupportedVersion(2)));

        let mut bad = good.clone();
        bad[5] = 9;
        assert_eq!(decode_signature(&bad), Err(WireError::UnknownHashAlgorithm(9)));

        let mut bad = good.clone();
        bad[6] = 9;
        assert_eq!(decode_signature(&bad), Err(WireError::UnknownSignatureAlgorithm(9)));

        let mut bad = good.clone();
        bad[7] = 1;
        assert_eq!(decode_signature(&bad), Err(WireError::Reserved(1)));

        let mut bad = good.clone();
        bad[21] = 64;
        assert!(matches!(decode_signature(&bad), Err(WireError::DigestLength { declared: 64, .. })));

        assert!(matches!(
            decode_signature(&good[..22 + 40]),
            Err(WireError::Truncated { section: "digests", .. })
        ));
        assert!(matches!(
            decode_signature(&good[..good.len() - 1]),
            Err(WireError::Truncated { section: "signature", .. })
        ));
        assert!(matches!(decode_signature(&good[..3]), Err(WireError::Truncated { section: "magic", .. })));

        let mut bad = good.clone();
        bad.push(0);
        assert_eq!(decode_signature(&bad), Err(WireError::TrailingBytes(1)));

        let mut bad = good.clone();
        bad[16..20].copy_from_slice(&0u32.to_be_bytes());
        assert_eq!(decode_signature(&bad), Err(WireError::NoTests));
    }

    proptest! {
        #[test]
        fn round_trip(t in 1usize..40, wide in any::<bool>(), sigma in 0usize..300, d in any::<u32>(), n in any::<u32>()) {
            let h_out = if wide { 64 } else { 32 };
            let mut sig = sample(t, h_out, sigma);
            sig.d = d;
            sig.n = n;
            let bytes = encode_signature(&sig).unwrap();
            prop_assert_eq!(bytes.len(), encoded_len(t, h_out, sigma));
            prop_assert_eq!(decode_signature(&bytes).unwrap(), sig);
        }
    }
}
