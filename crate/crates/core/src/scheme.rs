//! Signing and verification with modification location.
//!
//! Signing hashes every block, forms one test digest per matrix row, hashes
//! the whole document into `h*`, and signs `h(T_1 || ... || T_t || h*)` with
//! the base scheme. Verification checks the base signature, then compares
//! `h*` against the received document, and only if they differ (and location
//! was requested) rebuilds the matrix and decodes the failing tests.
//!
//! With `b` the document length, `w` the matrix weight and `h_out` the digest
//! length, a [`HashBackend`] passed through these functions consumes exactly
//!
//! * sign: `2b + (w + t + 1) h_out` bytes,
//! * verify without location, or of an unmodified document: `b + (t + 1) h_out`,
//! * verify with location of a modified document: `2b + (w + t + 1) h_out`.

use std::iter;

use rand_core::CryptoRngCore;
use thiserror::Error;

use crate::blockio::BlockView;
use crate::cff::{self, CffError, CffMatrix};
use crate::gt::{self, GtError, OutcomeSet, TestVector};
use crate::hash::{HashAlgorithm, HashBackend};
use crate::keys::{self, KeyError, SignatureAlgorithm, SigningKey, VerifyingKey};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SchemeError {
    #[error("a document needs at least 2 blocks, got {0}")]
    TooFewBlocks(usize),
    #[error("block view covers {view} bytes but the document has {document}")]
    DocumentLength { view: u64, document: u64 },
    #[error("signature covers {signed} blocks but the received document has {received}")]
    BlockCount { signed: u64, received: u64 },
    #[error("matrix for (d, n) has t = {rebuilt} but the signature carries {signed} tests")]
    MatrixMismatch { signed: usize, rebuilt: usize },
    #[error("signature uses {signature} but the hash backend is {backend}")]
    HashAlgorithm {
        signature: HashAlgorithm,
        backend: HashAlgorithm,
    },
    #[error("parameter out of range: {0}")]
    Overflow(&'static str),
    #[error(transparent)]
    Cff(#[from] CffError),
    #[error(transparent)]
    Gt(#[from] GtError),
    #[error(transparent)]
    Key(#[from] KeyError),
}

impl SchemeError {
    /// Block structure of the received document does not match the
    /// signature. This is distinct from the document being modified.
    pub fn is_structural(&self) -> bool {
        matches!(
            self,
            SchemeError::BlockCount { .. }
                | SchemeError::DocumentLength { .. }
                | SchemeError::MatrixMismatch { .. }
                | SchemeError::TooFewBlocks(_)
        )
    }
}

/// `sigma = (T_1 .. T_t, h*, sigma')` with the parameters needed to rebuild
/// the matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MlssSignature {
    pub d: u32,
    pub n: u32,
    pub hash: HashAlgorithm,
    pub signature_algorithm: SignatureAlgorithm,
    pub tests: TestVector,
    pub h_star: Vec<u8>,
    pub sigma_prime: Vec<u8>,
}

impl MlssSignature {
    pub fn t(&self) -> usize {
        self.tests.t()
    }

    pub fn h_out(&self) -> usize {
        self.h_star.len()
    }

    /// `T_1 || ... || T_t || h*`, the message the base signature covers
    /// (after hashing).
    pub fn signed_message(&self) -> Vec<u8> {
        signed_parts(&self.tests, &self.h_star).concat()
    }
}

fn signed_parts<'a>(tests: &'a TestVector, h_star: &'a [u8]) -> Vec<&'a [u8]> {
    tests
        .digests()
        .iter()
        .map(Vec::as_slice)
        .chain(iter::once(h_star))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VerifyOutcome {
    /// The base signature does not verify.
    InvalidSignature,
    /// Signature and document are intact.
    Valid,
    /// The document changed; location was not requested.
    ModifiedUnlocated,
    /// The document changed. `blocks` holds every modified block; when at
    /// most `d` blocks changed it holds exactly those. `over_threshold` is
    /// set when more than `d` candidates remain.
    ModifiedLocated {
        blocks: Vec<usize>,
        over_threshold: bool,
    },
}

impl VerifyOutcome {
    pub fn is_valid(&self) -> bool {
        matches!(self, VerifyOutcome::Valid)
    }
}

/// Key generation is the base scheme's.
pub fn generate_keys<R: CryptoRngCore + ?Sized>(
    algorithm: SignatureAlgorithm,
    security_bits: u32,
    rng: &mut R,
) -> Result<(SigningKey, VerifyingKey), SchemeError> {
    Ok(keys::generate(algorithm, security_bits, rng)?)
}

/// Signs `document`, divided by `view`, with modification threshold `d`.
pub fn sign(
    key: &SigningKey,
    document: &[u8],
    view: &BlockView,
    d: u32,
    hasher: &mut HashBackend,
) -> Result<MlssSignature, SchemeError> {
    if view.len() < 2 {
        return Err(SchemeError::TooFewBlocks(view.len()));
    }
    let m = cff::build(d, view.len())?;
    sign_with_matrix(key, document, view, &m, hasher)
}

/// Signs with a prebuilt matrix. The matrix must be `cff::build(d, n)` for
/// the signature to be verifiable.
pub fn sign_with_matrix(
    key: &SigningKey,
    document: &[u8],
    view: &BlockView,
    m: &CffMatrix,
    hasher: &mut HashBackend,
) -> Result<MlssSignature, SchemeError> {
    check_view(document, view)?;
    if view.len() < 2 {
        return Err(SchemeError::TooFewBlocks(view.len()));
    }
    let n = u32::try_from(view.len()).map_err(|_| SchemeError::Overflow("n exceeds u32"))?;

    let block_hashes: Vec<Vec<u8>> = view.slices(document).map(|b| hasher.digest(b)).collect();
    let tests = gt::form_tests(m, &block_hashes, hasher)?;
    let h_star = hasher.digest(document);
    let digest = hasher.digest_parts(signed_parts(&tests, &h_star));
    let sigma_prime = key.sign(&digest);

    Ok(MlssSignature {
        d: m.d(),
        n,
        hash: hasher.algorithm(),
        signature_algorithm: key.algorithm(),
        tests,
        h_star,
        sigma_prime,
    })
}

/// Verifies `sig` against the received document. With `locate` the
/// modified blocks are identified.
pub fn verify(
    key: &VerifyingKey,
    sig: &MlssSignature,
    document: &[u8],
    view: &BlockView,
    locate: bool,
    hasher: &mut HashBackend,
) -> Result<VerifyOutcome, SchemeError> {
    verify_with(key, sig, document, view, locate, hasher, cff::build)
}

/// As [`verify`], with the matrix obtained from `matrix_for(d, n)`. The
/// closure is only called when a modified document must be located.
pub fn verify_with<F>(
    key: &VerifyingKey,
    sig: &MlssSignature,
    document: &[u8],
    view: &BlockView,
    locate: bool,
    hasher: &mut HashBackend,
    matrix_for: F,
) -> Result<VerifyOutcome, SchemeError>
where
    F: FnOnce(u32, usize) -> Result<CffMatrix, CffError>,
{
    check_view(document, view)?;
    if hasher.algorithm() != sig.hash {
        return Err(SchemeError::HashAlgorithm {
            signature: sig.hash,
            backend: hasher.algorithm(),
        });
    }

    if key.algorithm() != sig.signature_algorithm {
        return Ok(VerifyOutcome::InvalidSignature);
    }
    let digest = hasher.digest_parts(signed_parts(&sig.tests, &sig.h_star));
    if !key.verify(&digest, &sig.sigma_prime) {
        return Ok(VerifyOutcome::InvalidSignature);
    }

    if view.len() as u64 != sig.n as u64 {
        return Err(SchemeError::BlockCount {
            signed: sig.n as u64,
            received: view.len() as u64,
        });
    }

    if hasher.digest(document) == sig.h_star {
        return Ok(VerifyOutcome::Valid);
    }
    if !locate {
        return Ok(VerifyOutcome::ModifiedUnlocated);
    }

    let m = matrix_for(sig.d, view.len())?;
    if m.t() != sig.t() || m.n() != view.len() {
        return Err(SchemeError::MatrixMismatch {
            signed: sig.t(),
            rebuilt: m.t(),
        });
    }
    let block_hashes: Vec<Vec<u8>> = view.slices(document).map(|b| hasher.digest(b)).collect();
    let recomputed = gt::form_tests(&m, &block_hashes, hasher)?;
    let outcomes = OutcomeSet::compare(&sig.tests, &recomputed)?;
    let blocks = gt::decode(&m, &outcomes);
    let over_threshold = blocks.len() > sig.d as usize;
    Ok(VerifyOutcome::ModifiedLocated {
        blocks,
        over_threshold,
    })
}

fn check_view(document: &[u8], view: &BlockView) -> Result<(), SchemeError> {
    if view.total_len() != document.len() as u64 {
        return Err(SchemeError::DocumentLength {
            view: view.total_len(),
            document: document.len() as u64,
        });
    }
    Ok(())
}
