//! Nonadaptive group testing over block hashes.
//!
//! Row `i` of the matrix is a test: its digest is the hash of the
//! concatenated block hashes of the row's columns, in ascending column
//! order. At verification a test fails when the recomputed digest differs.
//! Every block that takes part in a passing test is unmodified; with a
//! d-CFF and at most `d` modified blocks, the remaining blocks are exactly
//! the modified ones.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::cff::CffMatrix;
use crate::hash::HashBackend;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GtError {
    #[error("matrix has {expected} columns but {got} block hashes were given")]
    HashCount { expected: usize, got: usize },
    #[error("block hash {index} is {got} bytes, expected {expected}")]
    HashLength { index: usize, expected: usize, got: usize },
    #[error("test index {index} out of range for t = {t}")]
    TestIndex { index: usize, t: usize },
    #[error("test vectors have different lengths ({0} vs {1})")]
    VectorLength(usize, usize),
}

/// Test digests `T_1 .. T_t`, each `h_out` bytes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestVector {
    digests: Vec<Vec<u8>>,
}

impl TestVector {
    /// Wraps digests, checking that they share one length.
    pub fn new(digests: Vec<Vec<u8>>) -> Option<Self> {
        let len = digests.first().map(Vec::len)?;
        digests
            .iter()
            .all(|d| d.len() == len)
            .then_some(TestVector { digests })
    }

    pub fn t(&self) -> usize {
        self.digests.len()
    }

    pub fn digest_len(&self) -> usize {
        self.digests[0].len()
    }

    pub fn digests(&self) -> &[Vec<u8>] {
        &self.digests
    }

    pub fn digest(&self, i: usize) -> &[u8] {
        &self.digests[i]
    }
}

/// Indices of failing tests.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OutcomeSet {
    failing: BTreeSet<usize>,
    t: usize,
}

impl OutcomeSet {
    pub fn new<I: IntoIterator<Item = usize>>(t: usize, failing: I) -> Result<Self, GtError> {
        let failing: BTreeSet<usize> = failing.into_iter().collect();
        if let Some(&index) = failing.iter().find(|&&i| i >= t) {
            return Err(GtError::TestIndex { index, t });
        }
        Ok(OutcomeSet { failing, t })
    }

    /// Tests whose digests differ between the signed and recomputed vectors.
    pub fn compare(signed: &TestVector, recomputed: &TestVector) -> Result<Self, GtError> {
        if signed.t() != recomputed.t() {
            return Err(GtError::VectorLength(signed.t(), recomputed.t()));
        }
        let failing = signed
            .digests
            .iter()
            .zip(&recomputed.digests)
            .enumerate()
            .filter(|(_, (a, b))| a != b)
            .map(|(i, _)| i)
            .collect();
        Ok(OutcomeSet {
            failing,
            t: signed.t(),
        })
    }

    /// Outcomes produced by a set of defective columns: every row touching
    /// a defective fails.
    pub fn from_defectives(m: &CffMatrix, defective: &BTreeSet<usize>) -> Self {
        let failing = m
            .rows()
            .iter()
            .enumerate()
            .filter(|(_, row)| row.iter().any(|&c| defective.contains(&(c as usize))))
            .map(|(i, _)| i)
            .collect();
        OutcomeSet { failing, t: m.t() }
    }

    pub fn failing(&self) -> &BTreeSet<usize> {
        &self.failing
    }

    pub fn is_failing(&self, test: usize) -> bool {
        self.failing.contains(&test)
    }
}

/// Computes `T_i = h(h_j1 || h_j2 || ...)` for every row of `m`.
pub fn form_tests(
    m: &CffMatrix,
    block_hashes: &[Vec<u8>],
    hasher: &mut HashBackend,
) -> Result<TestVector, GtError> {
    if block_hashes.len() != m.n() {
        return Err(GtError::HashCount {
            expected: m.n(),
            got: block_hashes.len(),
        });
    }
    let expected = hasher.output_len();
    if let Some((index, h)) = block_hashes.iter().enumerate().find(|(_, h)| h.len() != expected) {
        return Err(GtError::HashLength {
            index,
            expected,
            got: h.len(),
        });
    }
    let digests = m
        .rows()
        .iter()
        .map(|row| hasher.digest_parts(row.iter().map(|&j| block_hashes[j as usize].as_slice())))
        .collect();
    Ok(TestVector { digests })
}

/// Candidate modified blocks: all columns except those in a passing test.
/// Sorted ascending. Runs in time linear in the matrix weight.
pub fn decode(m: &CffMatrix, outcomes: &OutcomeSet) -> Vec<usize> {
    let mut candidate = vec![true; m.n()];
    for (i, row) in m.rows().iter().enumerate() {
        if !outcomes.is_failing(i) {
            for &j in row {
                candidate[j as usize] = false;
            }
        }
    }
    candidate
        .iter()
        .enumerate()
        .filter_map(|(j, &c)| c.then_some(j))
        .collect()
}
