use super::{check_dims, CffError, CffMatrix, ConstructionId, ConstructionParams};

/// `t(1, n) = min { s : C(s, floor(s/2)) >= n }`.
pub fn sperner_rows(n: usize) -> usize {
    let mut s = 1usize;
    while central_binomial_below(s, n) {
        s += 1;
    }
    s
}

// true while C(s, s/2) < n
fn central_binomial_below(s: usize, n: usize) -> bool {
    let k = s / 2;
    let mut c: u128 = 1;
    for i in 0..k {
        c = c * (s - i) as u128 / (i + 1) as u128;
        if c >= n as u128 {
            return false;
        }
    }
    c < n as u128
}

/// Optimal 1-CFF from a family of `floor(t/2)`-subsets of the rows.
///
/// Column `j` is the `j`-th such subset in lexicographic order of its sorted
/// elements. Equal-size distinct sets never contain one another, so no column
/// covers another.
pub fn build_sperner(n: usize) -> Result<CffMatrix, CffError> {
    check_dims(1, n)?;
    let t = sperner_rows(n);
    let k = t / 2;
    let mut rows: Vec<Vec<u32>> = vec![Vec::new(); t];
    let mut subset: Vec<usize> = (0..k).collect();
    for j in 0..n as u32 {
        for &r in &subset {
            rows[r].push(j);
        }
        next_combination(&mut subset, t);
    }
    CffMatrix::from_rows(
        1,
        n,
        rows,
        ConstructionId::Sperner,
        ConstructionParams {
            column_weight: Some(k as u32),
            ..Default::default()
        },
    )
}

// Advances to the next k-subset of 0..t in lexicographic order. Returns
// false (leaving the slice unchanged) after the last subset.
fn next_combination(subset: &mut [usize], t: usize) -> bool {
    let k = subset.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if subset[i] < t - k + i {
            subset[i] += 1;
            for j in i + 1..k {
                subset[j] = subset[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
