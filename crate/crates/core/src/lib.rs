//! Modification-locating signatures.
//!
//! A document is split into `n` blocks and signed so that a verifier can
//! tell not only that it changed but which blocks changed, for up to `d`
//! modified blocks. Block hashes are pooled into group tests according to a
//! d-cover-free family; the signed test digests let the verifier decode the
//! set of modified blocks from the tests that no longer match.
//!
//! * [`cff`] builds and checks the cover-free matrices.
//! * [`gt`] forms test digests and decodes failing tests.
//! * [`scheme`] signs and verifies.
//! * [`blockio`] splits documents into blocks.
//! * [`wire`] is the binary signature container.

pub mod blockio;
pub mod cff;
pub mod cost;
pub mod gt;
pub mod hash;
pub mod keys;
pub mod scheme;
pub mod wire;

pub use blockio::{BlockView, BlockError};
pub use cff::{build, plan, CffMatrix, CffPlan, ConstructionId};
pub use hash::{HashAlgorithm, HashBackend};
pub use keys::{SignatureAlgorithm, SigningKey, VerifyingKey};
pub use scheme::{sign, verify, MlssSignature, SchemeError, VerifyOutcome};
pub use wire::{decode_signature, encode_signature, WireError};
