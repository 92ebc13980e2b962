//! Greedy q-ary code with bounded pairwise agreement, lifted to a binary
//! matrix by Kautz-Singleton concatenation.
//!
//! A code of length `L` over an alphabet of size `q` in which any two
//! codewords agree in at most `a` positions yields a d-CFF whenever
//! `d * a < L`: each column has `L` ones and `d` other columns can cover at
//! most `d * a` of them. We fix `a = floor((L - 1) / d)`.
//!
//! For uniformly random codewords the expected number of pairs agreeing in
//! more than `a` positions is `C(n, 2) * P[Bin(L, 1/q) > a]`. `L` is the
//! smallest length making this expectation less than one, and the code is
//! then derandomized with the method of conditional expectations: symbols are
//! fixed one at a time, each time minimizing the expected number of bad pairs
//! conditioned on the choices so far. That expectation starts below one and
//! never increases, and once all symbols are fixed it is an integer, so the
//! final code has no bad pair.
//!
//! All probabilities are kept as exact integer counts scaled by `q^r`, so the
//! symbol choices are reproducible on every platform.

use num_bigint::BigUint;
use serde::Serialize;

use super::{check_dims, next_prime, CffError, CffMatrix, ConstructionId, ConstructionParams};

const MAX_CODE_LENGTH: u32 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PrCodeParameters {
    /// Alphabet size, the smallest prime `>= 2(d+1)`.
    pub q: u32,
    /// Code length `L`.
    pub length: u32,
    /// Allowed pairwise agreement `floor((L-1)/d)`.
    pub max_agreement: u32,
}

impl PrCodeParameters {
    /// Rows of the lifted binary matrix, `q * L`.
    pub fn rows(&self) -> usize {
        self.q as usize * self.length as usize
    }
}

/// Alphabet size and code length for `(d, n)` without building the code.
pub fn pr_code_parameters(d: u32, n: usize) -> Result<PrCodeParameters, CffError> {
    check_dims(d, n)?;
    if d < 2 {
        return Err(CffError::ThresholdTooSmall { required: 2, got: d });
    }
    let q = next_prime(2 * (d as u64 + 1));
    let q = u32::try_from(q).map_err(|_| CffError::Overflow("alphabet size exceeds u32"))?;
    let nn = n as u64;
    let pairs = BigUint::from(nn) * BigUint::from(nn - 1) / 2u32;

    for length in 1..=MAX_CODE_LENGTH {
        let a = (length - 1) / d;
        // pairs * #{agreement patterns with > a matches} < q^L
        if &pairs * upper_tail_count(length, a, q) < BigUint::from(q).pow(length) {
            return Ok(PrCodeParameters {
                q,
                length,
                max_agreement: a,
            });
        }
    }
    Err(CffError::Overflow("no code length found"))
}

// sum_{j > a} C(len, j) (q-1)^(len-j)
fn upper_tail_count(len: u32, a: u32, q: u32) -> BigUint {
    let mut total = BigUint::from(0u32);
    let mut binom = BigUint::from(1u32);
    let qm1 = BigUint::from(q - 1);
    for j in 0..=len {
        if j > a {
            total += &binom * qm1.pow(len - j);
        }
        binom = binom * (len - j) / (j + 1);
    }
    total
}

/// Builds the greedy code for `(d, n)` and lifts it to a `qL x n` matrix.
/// Row `p*q + s` holds the codewords whose symbol at position `p` is `s`.
pub fn build_pr_greedy(d: u32, n: usize) -> Result<CffMatrix, CffError> {
    let params = pr_code_parameters(d, n)?;
    let code = greedy_code(n, params);
    let q = params.q as usize;
    let mut rows: Vec<Vec<u32>> = vec![Vec::new(); params.rows()];
    for (j, word) in code.iter().enumerate() {
        for (p, &s) in word.iter().enumerate() {
            rows[p * q + s as usize].push(j as u32);
        }
    }
    CffMatrix::from_rows(
        d,
        n,
        rows,
        ConstructionId::PrGreedy,
        ConstructionParams {
            field_size: Some(params.q),
            code_length: Some(params.length),
            max_agreement: Some(params.max_agreement),
            column_weight: Some(params.length),
        },
    )
}

/// Derandomized construction of `n` codewords. Symbols are chosen in order,
/// codeword by codeword, and ties go to the smallest symbol.
pub(crate) fn greedy_code(n: usize, params: PrCodeParameters) -> Vec<Vec<u32>> {
    let q = params.q as usize;
    let len = params.length as usize;
    let cap = params.max_agreement as usize + 1;
    let delta = agreement_deltas(len, cap, params.q);

    let mut code: Vec<Vec<u32>> = Vec::with_capacity(n);
    let mut counts = vec![0u64; q * cap];
    for v in 0..n {
        // agreement of each finished codeword with the prefix of v, capped
        let mut agree = vec![0usize; v];
        let mut word = Vec::with_capacity(len);
        for p in 0..len {
            let remaining = len - p - 1;
            counts.iter_mut().for_each(|c| *c = 0);
            for (u, &k) in agree.iter().enumerate() {
                if k < cap {
                    counts[code[u][p] as usize * cap + k] += 1;
                }
            }
            // Choosing s raises the conditional violation probability of
            // each pair (u, v) with u[p] = s by delta[remaining][k_u]; the
            // common baseline is the same for every s and is dropped.
            let mut best = 0usize;
            let mut best_cost: Option<BigUint> = None;
            for s in 0..q {
                let mut cost = BigUint::from(0u32);
                for k in 0..cap {
                    let c = counts[s * cap + k];
                    if c != 0 {
                        cost += &delta[remaining][k] * c;
                    }
                }
                if best_cost.as_ref().is_none_or(|b| cost < *b) {
                    best = s;
                    best_cost = Some(cost);
                }
            }
            for (u, k) in agree.iter_mut().enumerate() {
                if code[u][p] as usize == best && *k < cap {
                    *k += 1;
                }
            }
            word.push(best as u32);
        }
        code.push(word);
    }
    code
}

// delta[r][k] = (#length-r suffixes pushing agreement k+1 past the limit)
//             - (#length-r suffixes pushing agreement k past the limit)
fn agreement_deltas(len: usize, cap: usize, q: u32) -> Vec<Vec<BigUint>> {
    // tail[r][k]: number of q-ary suffixes of length r for which a pair that
    // already agrees in k positions ends with agreement >= cap.
    let zero = BigUint::from(0u32);
    let mut tail: Vec<Vec<BigUint>> = Vec::with_capacity(len);
    let mut row: Vec<BigUint> = (0..=cap)
        .map(|k| if k >= cap { BigUint::from(1u32) } else { zero.clone() })
        .collect();
    for _ in 0..len {
        tail.push(row.clone());
        let next: Vec<BigUint> = (0..=cap)
            .map(|k| &row[(k + 1).min(cap)] + &row[k] * (q - 1))
            .collect();
        row = next;
    }
    tail.into_iter()
        .map(|t| (0..cap).map(|k| &t[k + 1] - &t[k]).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cff::verify_cff;

    fn max_agreement(code: &[Vec<u32>]) -> usize {
        let mut worst = 0;
        for a in 0..code.len() {
            for b in a + 1..code.len() {
                let agree = code[a].iter().zip(&code[b]).filter(|(x, y)| x == y).count();
                worst = worst.max(agree);
            }
        }
        worst
    }

    // Floating-point evaluation of the same bound, used as an independent
    // check of the exact search.
    fn float_length(d: u32, n: usize, q: u32) -> u32 {
        let pairs = n as f64 * (n as f64 - 1.0) / 2.0;
        let p = 1.0 / q as f64;
        (1..)
            .find(|&len: &u32| {
                let a = (len - 1) / d;
                let mut tail = 0.0;
                let mut binom = 1.0;
                for j in 0..=len {
                    if j > a {
                        tail += binom * p.powi(j as i32) * (1.0 - p).powi((len - j) as i32);
                    }
                    binom = binom * (len - j) as f64 / (j + 1) as f64;
                }
                pairs * tail < 1.0
            })
            .unwrap()
    }

    #[test]
    fn parameters_match_float_bound() {
        for (d, n) in [(2, 3), (2, 16), (2, 40), (3, 30), (2, 1024), (3, 1024), (5, 500)] {
            let p = pr_code_parameters(d, n).unwrap();
            assert_eq!(p.q as u64, next_prime(2 * (d as u64 + 1)));
            assert_eq!(p.length, float_length(d, n, p.q), "d={d} n={n}");
            assert_eq!(p.max_agreement, (p.length - 1) / d);
        }
    }

    #[test]
    fn small_degenerate_case() {
        let p = pr_code_parameters(2, 3).unwrap();
        assert_eq!((p.q, p.length, p.max_agreement), (7, 1, 0));
        let m = build_pr_greedy(2, 3).unwrap();
        assert_eq!(m.t(), 7);
        assert!(verify_cff(&m, 2));
    }

    #[test]
    fn d2_n16() {
        let m = build_pr_greedy(2, 16).unwrap();
        assert_eq!(m.params().field_size, Some(7));
        assert!(verify_cff(&m, 2));
    }

    #[test]
    fn agreement_bound_holds() {
        for (d, n) in [(2, 16), (2, 40), (3, 40), (2, 200), (4, 120)] {
            let p = pr_code_parameters(d, n).unwrap();
            let code = greedy_code(n, p);
            assert!(max_agreement(&code) <= p.max_agreement as usize, "d={d} n={n}");
        }
    }

    #[test]
    fn tail_table_matches_direct_count() {
        // q = 3, cap = 2: enumerate all suffixes of length 3 by brute force
        let delta = agreement_deltas(4, 2, 3);
        for (k, expected) in delta[3].iter().enumerate().take(2) {
            let mut direct = [0i64; 2];
            for (slot, start) in direct.iter_mut().zip([k, k + 1]) {
                for pattern in 0..27u32 {
                    let mut x = pattern;
                    let mut agree = start;
                    for _ in 0..3 {
                        if x % 3 == 0 {
                            agree += 1;
                        }
                        x /= 3;
                    }
                    if agree >= 2 {
                        *slot += 1;
                    }
                }
            }
            assert_eq!(*expected, BigUint::from((direct[1] - direct[0]) as u64));
        }
    }
}
