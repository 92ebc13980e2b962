use super::CffMatrix;

/// Exhaustive d-cover-free check: for every set `C` of `min(d, n-1)` columns
/// and every column `c` outside `C`, some row has a one at `c` and zeros on
/// all of `C`.
///
/// Cost is about `C(n, d) * n * t / 64` word operations, so this is meant for
/// small instances.
pub fn verify_cff(m: &CffMatrix, d: u32) -> bool {
    let n = m.n();
    if n == 0 {
        return true;
    }
    let size = (d as usize).min(n - 1);
    let words = m.t().div_ceil(64).max(1);

    // bitset of rows per column
    let mut cols = vec![0u64; n * words];
    for (i, row) in m.rows().iter().enumerate() {
        for &c in row {
            cols[c as usize * words + i / 64] |= 1 << (i % 64);
        }
    }

    let mut search = Search {
        cols: &cols,
        words,
        n,
        chosen: vec![false; n],
    };
    let union = vec![0u64; words];
    search.subsets(0, size, &union)
}

struct Search<'a> {
    cols: &'a [u64],
    words: usize,
    n: usize,
    chosen: Vec<bool>,
}

impl Search<'_> {
    fn column(&self, c: usize) -> &[u64] {
        &self.cols[c * self.words..(c + 1) * self.words]
    }

    fn subsets(&mut self, start: usize, left: usize, union: &[u64]) -> bool {
        if left == 0 {
            return (0..self.n).all(|c| {
                self.chosen[c] || self.column(c).iter().zip(union).any(|(x, u)| x & !u != 0)
            });
        }
        for j in start..=self.n - left {
            let next: Vec<u64> = union.iter().zip(self.column(j)).map(|(u, x)| u | x).collect();
            self.chosen[j] = true;
            let ok = self.subsets(j + 1, left - 1, &next);
            self.chosen[j] = false;
            if !ok {
                return false;
            }
        }
        true
    }
}
