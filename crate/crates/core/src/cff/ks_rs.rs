use super::{check_dims, next_prime, CffError, CffMatrix, ConstructionId, ConstructionParams};

/// Smallest prime `q >= max(ceil(sqrt n), d + 1)`.
pub fn ks_rs_field_size(d: u32, n: usize) -> Result<u32, CffError> {
    let mut root = super::isqrt(n as u128) as u64;
    if root * root < n as u64 {
        root += 1;
    }
    let q = next_prime(root.max(d as u64 + 1));
    u32::try_from(q).map_err(|_| CffError::Overflow("field size exceeds u32"))
}

/// Kautz-Singleton matrix from the Reed-Solomon code of degree-1
/// polynomials over GF(q).
///
/// Column `j` is the polynomial `a x + b` with `a = j / q`, `b = j mod q`.
/// Row block `i` (for `i = 0..=d`) has `q` rows, and the column's single one
/// in block `i` sits at offset `(a i + b) mod q`. Two distinct lines meet in
/// at most one point, so `d` columns cover at most `d` of another column's
/// `d + 1` ones.
pub fn build_ks_rs(d: u32, n: usize) -> Result<CffMatrix, CffError> {
    check_dims(d, n)?;
    if d < 2 {
        return Err(CffError::ThresholdTooSmall { required: 2, got: d });
    }
    let q = ks_rs_field_size(d, n)? as u64;
    let blocks = d as u64 + 1;
    let t = usize::try_from(q * blocks).map_err(|_| CffError::Overflow("t exceeds usize"))?;
    let mut rows: Vec<Vec<u32>> = vec![Vec::new(); t];
    for j in 0..n as u64 {
        let (a, b) = (j / q, j % q);
        for i in 0..blocks {
            let r = i * q + (a * i + b) % q;
            rows[r as usize].push(j as u32);
        }
    }
    CffMatrix::from_rows(
        d,
        n,
        rows,
        ConstructionId::KsRs,
        ConstructionParams {
            field_size: Some(q as u32),
            code_length: Some(blocks as u32),
            max_agreement: Some(1),
            column_weight: Some(blocks as u32),
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_sizes() {
        assert_eq!(ks_rs_field_size(2, 9).unwrap(), 3);
        assert_eq!(ks_rs_field_size(2, 4).unwrap(), 3);
        assert_eq!(ks_rs_field_size(10, 256).unwrap(), 17);
        assert_eq!(ks_rs_field_size(2, 10).unwrap(), 5);
    }

    #[test]
    fn shapes() {
        let m = build_ks_rs(2, 9).unwrap();
        assert_eq!(m.t(), 9);
        assert!(m.columns().iter().all(|c| c.len() == 3));

        let m = build_ks_rs(2, 4).unwrap();
        assert_eq!((m.t(), m.n()), (9, 4));

        let m = build_ks_rs(10, 256).unwrap();
        assert_eq!(m.t(), 187);
        assert_eq!(m.weight(), 256 * 11);
    }

    #[test]
    fn rejects_d1() {
        assert_eq!(
            build_ks_rs(1, 9),
            Err(CffError::ThresholdTooSmall { required: 2, got: 1 })
        );
    }

    #[test]
    fn columns_share_at_most_one_block() {
        for (d, n) in [(2, 9), (3, 25), (4, 49), (6, 100)] {
            let m = build_ks_rs(d, n).unwrap();
            let cols = m.columns();
            for a in 0..n {
                for b in a + 1..n {
                    let shared = cols[a].iter().filter(|r| cols[b].contains(r)).count();
                    assert!(shared <= 1, "d={d} n={n} cols {a},{b} share {shared}");
                }
            }
        }
    }
}
