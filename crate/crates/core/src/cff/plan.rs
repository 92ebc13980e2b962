use serde::Serialize;

use super::{check_dims, isqrt, sperner_rows, CffError, ConstructionId};

/// Formula-level row count and weight for a construction choice.
///
/// These are the figures the construction bounds predict, which is what the
/// published parameter tables list. The matrix actually built for the same
/// `(d, n)` may be taller (prime and integer constraints) and its weight may
/// differ; [`super::build`] exposes the realized values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CffPlan {
    pub construction: ConstructionId,
    pub t: u64,
    pub w: u64,
    pub d: u32,
    pub n: u64,
}

/// Selects a construction for `(d, n)`.
///
/// `d = 1` always uses a Sperner family. `d >= n` uses the identity. Otherwise
/// the candidates are
///
/// * greedy code: `t = floor((d+1)^2 ln n)`, `w = floor((d+1)/2 * n ln n)`
/// * Reed-Solomon: `t = floor((d+1) sqrt n)`, `w = n (d+1)`
/// * identity: `t = w = n`
///
/// and the one with the smallest `t` wins, ties going to the smaller `w`.
pub fn plan(d: u32, n: usize) -> Result<CffPlan, CffError> {
    check_dims(d, n)?;
    let nn = n as u64;
    let mk = |construction, t, w| CffPlan {
        construction,
        t,
        w,
        d,
        n: nn,
    };

    if d as u64 >= nn {
        return Ok(mk(ConstructionId::Identity, nn, nn));
    }
    if d == 1 {
        let t = sperner_rows(n) as u64;
        return Ok(mk(ConstructionId::Sperner, t, nn * t / 2));
    }

    let k = d as u64 + 1;
    let ln_n = (n as f64).ln();
    let pr = mk(
        ConstructionId::PrGreedy,
        ((k * k) as f64 * ln_n).floor() as u64,
        (k as f64 / 2.0 * n as f64 * ln_n).floor() as u64,
    );
    let ks = mk(
        ConstructionId::KsRs,
        isqrt(k as u128 * k as u128 * nn as u128) as u64,
        nn * k,
    );
    let id = mk(ConstructionId::Identity, nn, nn);

    Ok([pr, ks, id]
        .into_iter()
        .min_by_key(|p| (p.t, p.w))
        .expect("non-empty candidate list"))
}
