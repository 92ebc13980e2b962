//! Hash backends with input-byte accounting.

use std::fmt;

use serde::Serialize;
use sha2::{Digest, Sha256, Sha512};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum HashAlgorithm {
    Sha256,
    Sha512,
}

impl HashAlgorithm {
    /// Identifier used on the wire.
    pub fn id(self) -> u8 {
        match self {
            HashAlgorithm::Sha256 => 0x01,
            HashAlgorithm::Sha512 => 0x02,
        }
    }

    pub fn from_id(id: u8) -> Option<Self> {
        match id {
            0x01 => Some(HashAlgorithm::Sha256),
            0x02 => Some(HashAlgorithm::Sha512),
            _ => None,
        }
    }

    /// Output length in bytes.
    pub fn output_len(self) -> usize {
        match self {
            HashAlgorithm::Sha256 => 32,
            HashAlgorithm::Sha512 => 64,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            HashAlgorithm::Sha256 => "sha256",
            HashAlgorithm::Sha512 => "sha512",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "sha256" | "sha-256" => Some(HashAlgorithm::Sha256),
            "sha512" | "sha-512" => Some(HashAlgorithm::Sha512),
            _ => None,
        }
    }
}

impl fmt::Display for HashAlgorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A hash function that records how many bytes it has consumed.
///
/// Every invocation adds exactly the length of its input to
/// [`bytes_hashed`](Self::bytes_hashed). An instance is meant to be driven
/// by one operation at a time; use separate instances across threads.
#[derive(Debug, Clone)]
pub struct HashBackend {
    algorithm: HashAlgorithm,
    bytes: u64,
    calls: u64,
}

impl HashBackend {
    pub fn new(algorithm: HashAlgorithm) -> Self {
        HashBackend {
            algorithm,
            bytes: 0,
            calls: 0,
        }
    }

    pub fn algorithm(&self) -> HashAlgorithm {
        self.algorithm
    }

    pub fn output_len(&self) -> usize {
        self.algorithm.output_len()
    }

    pub fn digest(&mut self, data: &[u8]) -> Vec<u8> {
        self.digest_parts([data])
    }

    /// Hashes the concatenation of `parts` without materializing it.
    pub fn digest_parts<'a, I>(&mut self, parts: I) -> Vec<u8>
    where
        I: IntoIterator<Item = &'a [u8]>,
    {
        self.calls += 1;
        match self.algorithm {
            HashAlgorithm::Sha256 => self.run(Sha256::new(), parts),
            HashAlgorithm::Sha512 => self.run(Sha512::new(), parts),
        }
    }

    fn run<'a, D: Digest, I: IntoIterator<Item = &'a [u8]>>(
        &mut self,
        mut hasher: D,
        parts: I,
    ) -> Vec<u8> {
        for part in parts {
            self.bytes += part.len() as u64;
            hasher.update(part);
        }
        hasher.finalize().to_vec()
    }

    /// Total input bytes since construction or the last reset.
    pub fn bytes_hashed(&self) -> u64 {
        self.bytes
    }

    /// Number of digest invocations since construction or the last reset.
    pub fn invocations(&self) -> u64 {
        self.calls
    }

    pub fn reset_counter(&mut self) {
        self.bytes = 0;
        self.calls = 0;
    }
}
