use num_integer::Integer;

use super::ResolvedDesign;
use crate::combinatorics::{lex_rank, BinomialTable};
use crate::design::{complete_design, Point};
use crate::error::{Error, Result};

/// Resolution of the complete `k`-subset design into orbits of
/// `x -> x + 1 (mod v)`.
///
/// With `gcd(v, k) = 1` every orbit has exactly `v` blocks and each point
/// lies in `k` of them. Classes are ordered by their lexicographically
/// least block.
pub fn cyclic_orbit_resolution(v: usize, k: usize) -> Result<ResolvedDesign> {
    if k < 2 || v <= k {
        return Err(Error::params(format!("need v > k >= 2, got v={v}, k={k}")));
    }
    if v.gcd(&k) != 1 {
        return Err(Error::params(format!("orbit resolution needs gcd(v,k) = 1, got gcd({v},{k}) = {}", v.gcd(&k))));
    }
    let design = complete_design(v, k)?;
    let n = design.len();
    let table = BinomialTable::new(v, k);
    let mut assigned = vec![false; n];
    let mut class_starts = vec![0u32];
    let mut members: Vec<u32> = Vec::with_capacity(n);
    let mut shifted: Vec<Point> = vec![0; k];
    let mut scratch = Vec::with_capacity(k);
    for idx in 0..n {
        if assigned[idx] {
            continue;
        }
        let start = members.len();
        let rep = design.block(idx);
        for shift in 0..v {
            for (dst, &p) in shifted.iter_mut().zip(rep) {
                *dst = ((p as usize + shift) % v) as Point;
            }
            shifted.sort_unstable();
            let r = lex_rank(&table, v, &shifted, &mut scratch) as usize;
            debug_assert!(!assigned[r], "orbit shorter than v");
            assigned[r] = true;
            members.push(r as u32);
        }
        members[start..].sort_unstable();
        class_starts.push(members.len() as u32);
    }
    Ok(ResolvedDesign::from_csr(design, class_starts, members))
}
