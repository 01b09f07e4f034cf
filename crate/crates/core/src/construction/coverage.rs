use serde::Serialize;

use super::counts::{validate_spec_with, Checks};
use super::ConstructionSpec;
use crate::combinatorics::choose;
use crate::design::Point;
use crate::error::{Error, Result};
use crate::resolution::ResolvedDesign;

/// Blocks of each type containing a given point set.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Coverage {
    pub type_i: u128,
    pub type_ii: u128,
    pub type_iii: u128,
    pub type_iv: u128,
}

impl Coverage {
    pub fn total(&self) -> u128 {
        self.type_i + self.type_ii + self.type_iii + self.type_iv
    }
}

struct Side<'a> {
    design: &'a ResolvedDesign,
    masks: Vec<u128>,
}

impl<'a> Side<'a> {
    fn new(design: &'a ResolvedDesign) -> Self {
        let masks = design.base_design().blocks().map(mask_of).collect();
        Side { design, masks }
    }

    /// Blocks of each base class containing `m`.
    fn class_counts(&self, m: u128) -> Vec<u64> {
        (0..self.design.base_classes())
            .map(|c| {
                let class = self.design.class(c);
                if m == 0 {
                    class.len() as u64
                } else {
                    class.iter().filter(|&&b| self.masks[b as usize] & m == m).count() as u64
                }
            })
            .collect()
    }
}

fn mask_of(points: &[Point]) -> u128 {
    points.iter().fold(0u128, |m, &p| m | 1u128 << p)
}

/// `Σ_i a[i] · Σ_{d ∈ offsets} b[i + d]` over `w` classes; `a` and `b`
/// repeat with their own periods.
fn annulus_sum(a: &[u64], b: &[u64], w: usize, offsets: &[usize]) -> u128 {
    if a.iter().all(|&x| x == 0) || b.iter().all(|&x| x == 0) {
        return 0;
    }
    let tb = b.len();
    let around: Vec<u128> = (0..tb)
        .map(|i| offsets.iter().map(|&d| b[(i + d) % tb] as u128).sum())
        .collect();
    (0..w).map(|i| a[i % a.len()] as u128 * around[i % tb]).sum()
}

/// Counts blocks of the assembled design through any point set, without
/// materializing the design.
///
/// A block `A ∪ B̃` contains `P ∪ Q̃` iff `P ⊆ A` and `Q ⊆ B`, so the count
/// over one class pair is a product of per-class counts, summed over the
/// annulus.
pub struct CoverageCounter<'a> {
    spec: &'a ConstructionSpec,
    pairs: Vec<(Side<'a>, Side<'a>, Vec<usize>)>,
    half: Option<(Side<'a>, Vec<usize>)>,
    filler: Option<Vec<u128>>,
}

impl<'a> CoverageCounter<'a> {
    /// Needs `v ≤ 128`. Only the structural hypotheses are checked, so
    /// guard-violating specs can be inspected too.
    pub fn new(spec: &'a ConstructionSpec) -> Result<Self> {
        validate_spec_with(spec, Checks::STRUCTURAL).map_err(Error::Validation)?;
        if spec.v > 128 {
            return Err(Error::params(format!("coverage counting supports v ≤ 128, got {}", spec.v)));
        }
        let pairs = spec
            .pairs
            .iter()
            .map(|p| Ok((Side::new(&p.left), Side::new(&p.right), p.annulus.offsets(p.left.w())?)))
            .collect::<Result<_>>()?;
        let half = match &spec.half {
            Some(hp) => Some((Side::new(&hp.design), hp.annulus.offsets(hp.design.w())?)),
            None => None,
        };
        let filler = spec
            .filler
            .as_ref()
            .and_then(|f| f.explicit())
            .map(|d| d.blocks().map(mask_of).collect());
        Ok(CoverageCounter {
            spec,
            pairs,
            half,
            filler,
        })
    }

    fn filler_count(&self, m: u128) -> u128 {
        let Some(f) = &self.spec.filler else { return 0 };
        match &self.filler {
            Some(masks) => masks.iter().filter(|&&b| b & m == m).count() as u128,
            None => {
                let size = m.count_ones() as u64;
                if size as usize > f.k() {
                    0
                } else {
                    choose(f.v() as u64 - size, (f.k() as u64).saturating_sub(size))
                }
            }
        }
    }

    /// Per-type counts of blocks containing the sorted, distinct points.
    pub fn count(&self, subset: &[Point]) -> Result<Coverage> {
        let v = self.spec.v;
        if subset.windows(2).any(|w| w[0] >= w[1]) || subset.last().is_some_and(|&p| p as usize >= 2 * v) {
            return Err(Error::params(format!("{subset:?} is not a sorted subset of 0..{}", 2 * v)));
        }
        let (lo, hi): (Vec<Point>, Vec<Point>) = subset.iter().partition(|&&p| (p as usize) < v);
        let p = mask_of(&lo);
        let q = mask_of(&hi.iter().map(|&x| x - v as Point).collect::<Vec<_>>());

        let mut c = Coverage::default();
        if q == 0 {
            c.type_i += self.filler_count(p);
        }
        if p == 0 {
            c.type_i += self.filler_count(q);
        }
        for (left, right, offsets) in &self.pairs {
            let w = left.design.w();
            c.type_ii += annulus_sum(&left.class_counts(p), &right.class_counts(q), w, offsets);
            c.type_iii += annulus_sum(&left.class_counts(q), &right.class_counts(p), w, offsets);
        }
        if let Some((half, offsets)) = &self.half {
            c.type_iv += annulus_sum(&half.class_counts(p), &half.class_counts(q), half.design.w(), offsets);
        }
        Ok(c)
    }
}
