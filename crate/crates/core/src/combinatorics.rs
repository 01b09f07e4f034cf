//! Exact binomial coefficients and subset ranking.
//!
//! Ranks use the colexicographic number system: a sorted subset
//! `c_0 < c_1 < ... < c_{s-1}` has rank `sum_i C(c_i, i + 1)`.

use num_integer::Integer;

use crate::design::Point;

/// Exact `C(n, r)`, or `None` on `u128` overflow.
pub fn binomial(n: u64, r: u64) -> Option<u128> {
    if r > n {
        return Some(0);
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        // acc * (n - i) is divisible by (i + 1); cancel first to delay overflow
        let d = i as u128 + 1;
        let g = acc.gcd(&d);
        acc = (acc / g).checked_mul((n - i) as u128 / (d / g))?;
    }
    Some(acc)
}

/// `C(n, r)` for arguments that are known to be small. Panics on overflow.
pub fn choose(n: u64, r: u64) -> u128 {
    binomial(n, r).unwrap_or_else(|| panic!("C({n}, {r}) overflows u128"))
}

/// Pascal table `C(n, r)` for `n <= max_n`, `r <= max_r`.
#[derive(Clone, Debug)]
pub struct BinomialTable {
    max_r: usize,
    rows: Vec<u64>,
}

impl BinomialTable {
    pub fn new(max_n: usize, max_r: usize) -> Self {
        let width = max_r + 1;
        let mut rows = vec![0u64; (max_n + 1) * width];
        for n in 0..=max_n {
            rows[n * width] = 1;
            for r in 1..=max_r.min(n) {
                let above = rows[(n - 1) * width + r];
                let diag = rows[(n - 1) * width + r - 1];
                rows[n * width + r] = above
                    .checked_add(diag)
                    .expect("binomial table entry exceeds u64");
            }
        }
        BinomialTable { max_r, rows }
    }

    #[inline]
    pub fn get(&self, n: usize, r: usize) -> u64 {
        debug_assert!(r <= self.max_r);
        self.rows[n * (self.max_r + 1) + r]
    }

    /// Colex rank of a strictly increasing subset.
    #[inline]
    pub fn colex_rank(&self, subset: &[Point]) -> u64 {
        subset
            .iter()
            .enumerate()
            .map(|(i, &p)| self.get(p as usize, i + 1))
            .sum()
    }

    /// Inverse of [`colex_rank`](Self::colex_rank) for subsets of size `s`.
    pub fn colex_unrank(&self, mut rank: u64, s: usize) -> Vec<Point> {
        let mut out = vec![0 as Point; s];
        for i in (0..s).rev() {
            // largest c with C(c, i+1) <= rank
            let mut c = i;
            while self.get(c + 1, i + 1) <= rank {
                c += 1;
            }
            rank -= self.get(c, i + 1);
            out[i] = c as Point;
        }
        out
    }
}

/// Lexicographic rank of a sorted `k`-subset of `0..v`, relative to the
/// lexicographic enumeration used by [`crate::design::complete_design`].
///
/// Uses `lex(c) = C(v,k) - 1 - colex({v-1-c_i})`.
pub fn lex_rank(table: &BinomialTable, v: usize, block: &[Point], scratch: &mut Vec<Point>) -> u64 {
    let k = block.len();
    scratch.clear();
    scratch.extend(block.iter().rev().map(|&p| (v - 1 - p as usize) as Point));
    table.get(v, k) - 1 - table.colex_rank(scratch)
}

/// Calls `f` with every `s`-subset of `block` (in lexicographic order of
/// positions). `buf` is reused between calls.
pub fn for_each_subset<F: FnMut(&[Point])>(block: &[Point], s: usize, buf: &mut Vec<Point>, mut f: F) {
    let k = block.len();
    if s > k {
        return;
    }
    if s == 0 {
        f(&[]);
        return;
    }
    let mut idx: Vec<usize> = (0..s).collect();
    buf.clear();
    buf.extend(idx.iter().map(|&i| block[i]));
    loop {
        f(buf);
        // advance
        let mut pos = s;
        while pos > 0 {
            pos -= 1;
            if idx[pos] < k - s + pos {
                idx[pos] += 1;
                for q in pos + 1..s {
                    idx[q] = idx[q - 1] + 1;
                }
                for q in pos..s {
                    buf[q] = block[idx[q]];
                }
                break;
            }
            if pos == 0 {
                return;
            }
        }
    }
}

/// Advances a sorted `k`-subset of `0..v` to its lexicographic successor.
/// Returns `false` after the last subset.
pub fn next_combination(c: &mut [Point], v: usize) -> bool {
    let k = c.len();
    let mut pos = k;
    while pos > 0 {
        pos -= 1;
        if (c[pos] as usize) < v - k + pos {
            c[pos] += 1;
            for q in pos + 1..k {
                c[q] = c[q - 1] + 1;
            }
            return true;
        }
    }
    false
}
