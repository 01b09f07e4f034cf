use super::ResolvedDesign;
use crate::design::Point;
use crate::error::{Error, Result};

/// One-factorization of `K_v` by the circle method.
///
/// Point `v-1` is fixed; in round `r` (`0..v-1`) it meets `r`, and the
/// remaining points `0..v-1` are paired as `{r+d, r-d} (mod v-1)`. Class
/// `r+1` is round `r`.
pub fn round_robin_one_factorization(v: usize) -> Result<ResolvedDesign> {
    if v % 2 == 1 || v < 4 {
        return Err(Error::params(format!("one-factorization needs even v >= 4, got {v}")));
    }
    let n = v - 1;
    let classes = (0..n).map(|r| {
        let mut class: Vec<[Point; 2]> = Vec::with_capacity(v / 2);
        class.push([r as Point, n as Point]);
        for d in 1..v / 2 {
            let a = (r + d) % n;
            let b = (r + n - d) % n;
            class.push([a.min(b) as Point, a.max(b) as Point]);
        }
        class
    });
    ResolvedDesign::from_class_blocks(v, 2, classes)
}
