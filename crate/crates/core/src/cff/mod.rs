//! Cover-free families.
//!
//! A d-cover-free family is a `t x n` binary matrix in which no column is
//! covered by the union of any `d` other columns. Rows are group tests and
//! columns are document blocks. Signer and verifier must derive the same
//! matrix from `(d, n)` alone, so every construction here is deterministic.

mod ks_rs;
mod plan;
mod pr_greedy;
mod sperner;
mod verify;

pub use ks_rs::{build_ks_rs, ks_rs_field_size};
pub use plan::{plan, CffPlan};
pub use pr_greedy::{build_pr_greedy, pr_code_parameters, PrCodeParameters};
pub use sperner::{build_sperner, sperner_rows};
pub use verify::verify_cff;

use std::fmt;

use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

/// Magic prefix of the canonical matrix encoding.
pub const CANONICAL_MAGIC: &[u8; 4] = b"CFF1";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CffError {
    #[error("block count must be at least 2, got {0}")]
    TooFewColumns(usize),
    #[error("defect threshold must be at least 1")]
    ZeroThreshold,
    #[error("construction requires d >= {required}, got {got}")]
    ThresholdTooSmall { required: u32, got: u32 },
    #[error("parameters out of range: {0}")]
    Overflow(&'static str),
    #[error("row {row} references column {column} but n = {n}")]
    ColumnOutOfRange { row: usize, column: u32, n: usize },
    #[error("row {row} is not strictly ascending")]
    UnsortedRow { row: usize },
    #[error("column {0} is not covered by any row")]
    UncoveredColumn(usize),
}

/// Which construction produced a matrix. The discriminant is the value used
/// in the canonical encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ConstructionId {
    Sperner = 0,
    KsRs = 1,
    PrGreedy = 2,
    Identity = 3,
}

impl ConstructionId {
    pub fn code(self) -> u32 {
        self as u32
    }

    pub fn name(self) -> &'static str {
        match self {
            ConstructionId::Sperner => "SPERNER",
            ConstructionId::KsRs => "KS_RS",
            ConstructionId::PrGreedy => "PR_GREEDY",
            ConstructionId::Identity => "IDENTITY",
        }
    }
}

impl fmt::Display for ConstructionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Construction-specific integers. Only the fields relevant to the
/// construction are set.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ConstructionParams {
    /// Alphabet / field size `q` for the Kautz-Singleton style constructions.
    pub field_size: Option<u32>,
    /// Length `L` of the q-ary outer code.
    pub code_length: Option<u32>,
    /// Maximum pairwise agreement of the outer code.
    pub max_agreement: Option<u32>,
    /// Column weight for constant-weight constructions.
    pub column_weight: Option<u32>,
}

/// A `t x n` binary matrix stored row-wise as sorted column index lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CffMatrix {
    d: u32,
    n: usize,
    rows: Vec<Vec<u32>>,
    construction: ConstructionId,
    params: ConstructionParams,
}

impl CffMatrix {
    /// Assembles a matrix from rows, checking the structural invariants:
    /// indices in range, rows strictly ascending and every column tested.
    /// Whether the rows actually form a d-CFF is not checked here; see
    /// [`verify_cff`].
    pub fn from_rows(
        d: u32,
        n: usize,
        rows: Vec<Vec<u32>>,
        construction: ConstructionId,
        params: ConstructionParams,
    ) -> Result<Self, CffError> {
        let mut covered = vec![false; n];
        for (i, row) in rows.iter().enumerate() {
            for pair in row.windows(2) {
                if pair[0] >= pair[1] {
                    return Err(CffError::UnsortedRow { row: i });
                }
            }
            for &c in row {
                let slot = covered.get_mut(c as usize).ok_or(CffError::ColumnOutOfRange {
                    row: i,
                    column: c,
                    n,
                })?;
                *slot = true;
            }
        }
        if let Some(j) = covered.iter().position(|&c| !c) {
            return Err(CffError::UncoveredColumn(j));
        }
        Ok(CffMatrix {
            d,
            n,
            rows,
            construction,
            params,
        })
    }

    /// The `n x n` identity matrix. It is a d-CFF for every `d < n` and
    /// localizes any number of modified blocks.
    pub fn identity(d: u32, n: usize) -> Self {
        let rows = (0..n as u32).map(|i| vec![i]).collect();
        CffMatrix {
            d,
            n,
            rows,
            construction: ConstructionId::Identity,
            params: ConstructionParams {
                column_weight: Some(1),
                ..Default::default()
            },
        }
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    /// Number of rows (tests).
    pub fn t(&self) -> usize {
        self.rows.len()
    }

    /// Number of columns (blocks).
    pub fn n(&self) -> usize {
        self.n
    }

    /// Total number of ones.
    pub fn weight(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn construction(&self) -> ConstructionId {
        self.construction
    }

    pub fn params(&self) -> ConstructionParams {
        self.params
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.rows[i]
    }

    pub fn get(&self, row: usize, column: usize) -> bool {
        self.rows[row].binary_search(&(column as u32)).is_ok()
    }

    /// Column-wise view: for every column, the ascending rows holding a one.
    pub fn columns(&self) -> Vec<Vec<u32>> {
        let mut cols = vec![Vec::new(); self.n];
        for (i, row) in self.rows.iter().enumerate() {
            for &c in row {
                cols[c as usize].push(i as u32);
            }
        }
        cols
    }

    /// Canonical big-endian encoding: `"CFF1"`, then d, n, t and the
    /// construction id as u32, then each row as its length followed by its
    /// column indices.
    pub fn canonical_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(20 + 4 * (self.t() + self.weight()));
        out.extend_from_slice(CANONICAL_MAGIC);
        out.extend_from_slice(&self.d.to_be_bytes());
        out.extend_from_slice(&(self.n as u32).to_be_bytes());
        out.extend_from_slice(&(self.t() as u32).to_be_bytes());
        out.extend_from_slice(&self.construction.code().to_be_bytes());
        for row in &self.rows {
            out.extend_from_slice(&(row.len() as u32).to_be_bytes());
            for &c in row {
                out.extend_from_slice(&c.to_be_bytes());
            }
        }
        out
    }

    /// SHA-256 of [`canonical_bytes`](Self::canonical_bytes).
    pub fn canonical_digest(&self) -> MatrixDigest {
        MatrixDigest(Sha256::digest(self.canonical_bytes()).into())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MatrixDigest(pub [u8; 32]);

impl MatrixDigest {
    pub fn to_hex(&self) -> String {
        hex::encode(self.0)
    }
}

impl fmt::Display for MatrixDigest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

fn check_dims(d: u32, n: usize) -> Result<(), CffError> {
    if d == 0 {
        return Err(CffError::ZeroThreshold);
    }
    if n < 2 {
        return Err(CffError::TooFewColumns(n));
    }
    if n > u32::MAX as usize {
        return Err(CffError::Overflow("n exceeds u32"));
    }
    Ok(())
}

/// Deterministically builds the matrix both ends of the scheme use for
/// `(d, n)`.
///
/// The construction follows [`plan`]. When integer constraints make the
/// realized matrix taller than an alternative, the smaller one is used:
/// a greedy-code matrix falls back to the Reed-Solomon one or the identity,
/// and a Reed-Solomon matrix with `t >= n` falls back to the identity.
pub fn build(d: u32, n: usize) -> Result<CffMatrix, CffError> {
    let chosen = plan(d, n)?;
    match chosen.construction {
        ConstructionId::Sperner => build_sperner(n),
        ConstructionId::Identity => Ok(CffMatrix::identity(d, n)),
        ConstructionId::KsRs => {
            if ks_rs_rows(d, n)? >= n {
                Ok(CffMatrix::identity(d, n))
            } else {
                build_ks_rs(d, n)
            }
        }
        ConstructionId::PrGreedy => {
            let pr_t = pr_code_parameters(d, n)?.rows();
            let ks_t = ks_rs_rows(d, n)?;
            if pr_t < ks_t.min(n) {
                build_pr_greedy(d, n)
            } else if ks_t < n {
                build_ks_rs(d, n)
            } else {
                Ok(CffMatrix::identity(d, n))
            }
        }
    }
}

fn ks_rs_rows(d: u32, n: usize) -> Result<usize, CffError> {
    let q = ks_rs_field_size(d, n)? as usize;
    Ok(q * (d as usize + 1))
}

/// Smallest prime `>= x`.
pub(crate) fn next_prime(x: u64) -> u64 {
    let mut p = x.max(2);
    while !is_prime(p) {
        p += 1;
    }
    p
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= p {
        if p.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

/// `floor(sqrt(x))` in exact integer arithmetic.
pub(crate) fn isqrt(x: u128) -> u128 {
    if x < 2 {
        return x;
    }
    let mut r = (x as f64).sqrt() as u128;
    while r * r > x {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= x {
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        assert_eq!(next_prime(0), 2);
        assert_eq!(next_prime(4), 5);
        assert_eq!(next_prime(11), 11);
        assert_eq!(next_prime(14), 17);
        assert_eq!(next_prime(32), 37);
    }

    #[test]
    fn integer_sqrt() {
        for x in 0u128..2000 {
            let r = isqrt(x);
            assert!(r * r <= x && (r + 1) * (r + 1) > x, "{x}");
        }
        assert_eq!(isqrt(9 * 128), 33);
    }

    #[test]
    fn from_rows_rejects_bad_input() {
        let p = ConstructionParams::default();
        let id = ConstructionId::Identity;
        assert_eq!(
            CffMatrix::from_rows(1, 2, vec![vec![0, 2]], id, p),
            Err(CffError::ColumnOutOfRange { row: 0, column: 2, n: 2 })
        );
        assert_eq!(
            CffMatrix::from_rows(1, 2, vec![vec![1, 0]], id, p),
            Err(CffError::UnsortedRow { row: 0 })
        );
        assert_eq!(
            CffMatrix::from_rows(1, 3, vec![vec![0, 2]], id, p),
            Err(CffError::UncoveredColumn(1))
        );
    }

    #[test]
    fn build_examples() {
        let m = build(1, 6).unwrap();
        assert_eq!(m.construction(), ConstructionId::Sperner);
        assert_eq!(m.t(), 4);

        let m = build(5, 4).unwrap();
        assert_eq!(m, CffMatrix::identity(5, 4));

        // t ties between Reed-Solomon (w = 27) and identity (w = 9)
        let m = build(2, 9).unwrap();
        assert_eq!(m.construction(), ConstructionId::Identity);
        assert_eq!(m.t(), 9);

        let m = build(2, 10).unwrap();
        assert_eq!(m.construction(), ConstructionId::Identity);

        let m = build(2, 32).unwrap();
        assert_eq!(m.construction(), ConstructionId::KsRs);
        assert_eq!(m.params().field_size, Some(7));
        assert_eq!(m.t(), 21);
        assert!(verify_cff(&m, 2));
    }

    #[test]
    fn build_rejects_bad_dims() {
        assert_eq!(build(0, 4), Err(CffError::ZeroThreshold));
        assert_eq!(build(1, 1), Err(CffError::TooFewColumns(1)));
    }

    #[test]
    fn ks_rs_taller_than_identity_falls_back() {
        // q = 13, t = 143 > 128
        let m = build(10, 128).unwrap();
        assert_eq!(m.construction(), ConstructionId::Identity);
        assert_eq!(m.t(), 128);
        let m = build(10, 256).unwrap();
        assert_eq!(m.construction(), ConstructionId::KsRs);
        assert_eq!(m.t(), 187);
    }

    #[test]
    fn pr_plan_falls_back_when_realized_code_is_taller() {
        let m = build(2, 1024).unwrap();
        assert_eq!(m.construction(), ConstructionId::KsRs);
        assert_eq!(m.t(), 3 * 37);
    }

    #[test]
    fn digest_distinguishes_matrices() {
        assert_eq!(build(2, 9).unwrap().canonical_digest(), build(2, 9).unwrap().canonical_digest());
        assert_ne!(build(2, 9).unwrap().canonical_digest(), build(2, 10).unwrap().canonical_digest());
    }

    #[test]
    fn canonical_layout() {
        let m = CffMatrix::identity(1, 2);
        let bytes = m.canonical_bytes();
        let expected: Vec<u8> = [
            &b"CFF1"[..],
            &[0, 0, 0, 1],
            &[0, 0, 0, 2],
            &[0, 0, 0, 2],
            &[0, 0, 0, 3],
            &[0, 0, 0, 1, 0, 0, 0, 0],
            &[0, 0, 0, 1, 0, 0, 0, 1],
        ]
        .concat();
        assert_eq!(bytes, expected);
    }
}
