//! (1,σ)-resolutions: partitions of a block multiset into classes that are
//! each 1-designs with the same replication number σ.

mod baranyai;
mod cyclic;
mod flow;
mod round_robin;

use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;

use crate::design::{counter_for, push_canonical, sort_flat_blocks, triple_lambda, union_copies, Design, Point};
use crate::error::{Error, Result};

pub use baranyai::baranyai_parallelism;
pub use cyclic::cyclic_orbit_resolution;
pub use flow::MaxFlow;
pub use round_robin::round_robin_one_factorization;

/// Circular distance between classes `i` and `j` (1-based) of a resolution
/// with `w` classes.
pub fn class_distance(w: usize, i: usize, j: usize) -> Result<usize> {
    if i == 0 || j == 0 || i > w || j > w {
        return Err(Error::params(format!("class index out of range 1..={w}: ({i}, {j})")));
    }
    let diff = i.abs_diff(j);
    Ok(diff.min(w - diff))
}

/// `t_j` classes of the underlying simple design, concatenated `a_j` times.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SimpleCore {
    pub t: usize,
    pub a: usize,
}

impl SimpleCore {
    pub fn w(&self) -> usize {
        self.t * self.a
    }
}

/// First defect found by [`verify_resolution`]. Class indices are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ResolutionViolation {
    #[error("a resolution needs at least two classes, found {w}")]
    TooFewClasses { w: usize },
    #[error("block #{block} appears in {occurrences} classes")]
    NotAPartition { block: usize, occurrences: usize },
    #[error("class {class} has {size} blocks, class 1 has {expected}")]
    UnequalClassSize { class: usize, size: usize, expected: usize },
    #[error("point {point} lies in {count} blocks of class {class}, expected {expected}")]
    IrregularClass { class: usize, point: usize, count: u64, expected: u64 },
}

/// Per-design quantities needed by the constructions, all obtained by
/// counting.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct IngredientStats {
    pub k: usize,
    /// Number of classes `w`.
    pub w: usize,
    /// Classes of the simple core.
    pub t: usize,
    /// Concatenation count.
    pub a: usize,
    /// Blocks per class, `b`.
    pub b: u64,
    /// Blocks through a point in each class, `u = σ`.
    pub u: u64,
    /// Blocks through three points (0 for `k = 2`).
    pub lambda: u64,
    /// Blocks through two points.
    pub lambda2: u64,
    /// Total number of blocks (with multiplicity).
    pub blocks: u64,
}

/// A design with an ordered resolution.
///
/// The block multiset is `repeats` copies of `design`; the class list is the
/// base classes repeated `repeats` times in order. A freshly generated
/// resolution has `repeats == 1`.
#[derive(Debug)]
pub struct ResolvedDesign {
    design: Design,
    class_starts: Vec<u32>,
    members: Vec<u32>,
    repeats: usize,
    stats: OnceLock<IngredientStats>,
}

impl Clone for ResolvedDesign {
    fn clone(&self) -> Self {
        ResolvedDesign {
            design: self.design.clone(),
            class_starts: self.class_starts.clone(),
            members: self.members.clone(),
            repeats: self.repeats,
            stats: OnceLock::new(),
        }
    }
}

impl ResolvedDesign {
    /// Assembles a resolution from block-index lists. Indices must be in
    /// range; the partition property itself is left to
    /// [`verify_resolution`].
    pub fn from_index_classes(design: Design, classes: Vec<Vec<u32>>) -> Result<Self> {
        let n = design.len();
        let mut class_starts = Vec::with_capacity(classes.len() + 1);
        let mut members = Vec::with_capacity(n);
        class_starts.push(0);
        for c in classes {
            if let Some(&bad) = c.iter().find(|&&i| i as usize >= n) {
                return Err(Error::params(format!("class references block #{bad} of {n}")));
            }
            members.extend(c);
            class_starts.push(members.len() as u32);
        }
        Ok(ResolvedDesign {
            design,
            class_starts,
            members,
            repeats: 1,
            stats: OnceLock::new(),
        })
    }

    /// Builds the canonical design from explicit class contents.
    pub fn from_class_blocks<C, B>(v: usize, k: usize, classes: C) -> Result<Self>
    where
        C: IntoIterator,
        C::Item: IntoIterator<Item = B>,
        B: AsRef<[Point]>,
    {
        if k < 2 || v <= k {
            return Err(Error::params(format!("need v > k >= 2, got v={v}, k={k}")));
        }
        let mut sizes = Vec::new();
        let mut points = Vec::new();
        for class in classes {
            let mut size = 0usize;
            for b in class {
                push_canonical(v, k, b.as_ref(), &mut points)?;
                size += 1;
            }
            sizes.push(size);
        }
        let (sorted, perm) = sort_flat_blocks(k, points);
        // inverse permutation: original position -> sorted index
        let mut inv = vec![0u32; perm.len()];
        for (sorted_idx, &orig) in perm.iter().enumerate() {
            inv[orig as usize] = sorted_idx as u32;
        }
        let mut classes = Vec::with_capacity(sizes.len());
        let mut pos = 0usize;
        for size in sizes {
            let mut c: Vec<u32> = inv[pos..pos + size].to_vec();
            c.sort_unstable();
            classes.push(c);
            pos += size;
        }
        Self::from_index_classes(Design::from_sorted_flat(v, k, sorted), classes)
    }

    pub(crate) fn from_csr(design: Design, class_starts: Vec<u32>, members: Vec<u32>) -> Self {
        ResolvedDesign {
            design,
            class_starts,
            members,
            repeats: 1,
            stats: OnceLock::new(),
        }
    }

    /// One copy of the block multiset.
    pub fn base_design(&self) -> &Design {
        &self.design
    }

    /// The full block multiset (materializes the copies).
    pub fn union_design(&self) -> Design {
        if self.repeats == 1 {
            self.design.clone()
        } else {
            union_copies(&self.design, self.repeats).expect("repeats >= 1")
        }
    }

    pub fn v(&self) -> usize {
        self.design.v()
    }

    pub fn k(&self) -> usize {
        self.design.k()
    }

    pub fn repeats(&self) -> usize {
        self.repeats
    }

    /// Number of classes of the base resolution.
    pub fn base_classes(&self) -> usize {
        self.class_starts.len() - 1
    }

    /// Number of classes `w`.
    pub fn w(&self) -> usize {
        self.base_classes() * self.repeats
    }

    pub fn core(&self) -> SimpleCore {
        SimpleCore {
            t: self.base_classes(),
            a: self.repeats,
        }
    }

    /// Total block count with multiplicity.
    pub fn block_count(&self) -> usize {
        self.design.len() * self.repeats
    }

    /// Block indices (into [`base_design`](Self::base_design)) of class `i`,
    /// 0-based, `i < w`.
    pub fn class(&self, i: usize) -> &[u32] {
        let i = i % self.base_classes();
        &self.members[self.class_starts[i] as usize..self.class_starts[i + 1] as usize]
    }

    pub fn class_blocks(&self, i: usize) -> impl Iterator<Item = &[Point]> + '_ {
        self.class(i).iter().map(move |&b| self.design.block(b as usize))
    }

    /// Checks the resolution and returns counted ingredient parameters.
    /// The result is cached.
    pub fn stats(&self) -> Result<&IngredientStats> {
        if let Some(s) = self.stats.get() {
            return Ok(s);
        }
        let u = verify_resolution(self)?;
        let k = self.k();
        let t = k.min(3);
        let profile = counter_for(&self.design, t, self.repeats as u64)?.finish();
        let lambda2 = profile.lambda(2).ok_or_else(|| {
            let l = &profile.levels[2];
            Error::Verification(format!(
                "ingredient is not a 2-design: pair {:?} in {} blocks, pair {:?} in {}",
                l.min_witness, l.min, l.max_witness, l.max
            ))
        })?;
        let lambda = triple_lambda(k, &profile)?;
        let s = IngredientStats {
            k,
            w: self.w(),
            t: self.base_classes(),
            a: self.repeats,
            b: self.class(0).len() as u64,
            u,
            lambda,
            lambda2,
            blocks: self.block_count() as u64,
        };
        Ok(self.stats.get_or_init(|| s))
    }
}

/// Repeats the class list of a simple resolved design `a` times.
pub fn concatenate_resolution(core: &ResolvedDesign, a: usize) -> Result<(ResolvedDesign, SimpleCore)> {
    if a == 0 {
        return Err(Error::params("concatenation count must be at least 1"));
    }
    if core.repeats != 1 {
        return Err(Error::params("core is already a union of copies, hence not simple"));
    }
    if let Err(b) = crate::design::is_simple(&core.design) {
        return Err(Error::params(format!("core design is not simple: block {b:?} repeats")));
    }
    let mut out = core.clone();
    out.repeats = a;
    let sc = out.core();
    Ok((out, sc))
}

/// Checks the partition and per-class regularity; returns σ.
pub fn verify_resolution(r: &ResolvedDesign) -> std::result::Result<u64, ResolutionViolation> {
    let w = r.w();
    if w < 2 {
        return Err(ResolutionViolation::TooFewClasses { w });
    }
    let n = r.design.len();
    let mut seen = vec![0usize; n];
    for &m in &r.members {
        seen[m as usize] += 1;
    }
    if let Some((block, &occurrences)) = seen.iter().enumerate().find(|(_, &c)| c != 1) {
        return Err(ResolutionViolation::NotAPartition { block, occurrences });
    }
    let t = r.base_classes();
    let expected_size = r.class(0).len();
    if let Some(i) = (0..t).find(|&i| r.class(i).len() != expected_size) {
        return Err(ResolutionViolation::UnequalClassSize {
            class: i + 1,
            size: r.class(i).len(),
            expected: expected_size,
        });
    }
    let v = r.v();
    let degrees = |i: usize| {
        let mut deg = vec![0u64; v];
        for b in r.class_blocks(i) {
            for &p in b {
                deg[p as usize] += 1;
            }
        }
        deg
    };
    let sigma = degrees(0)[0];
    let failures: Vec<Option<ResolutionViolation>> = (0..t)
        .into_par_iter()
        .map(|i| {
            let deg = degrees(i);
            deg.iter()
                .position(|&d| d != sigma)
                .map(|p| ResolutionViolation::IrregularClass {
                    class: i + 1,
                    point: p,
                    count: deg[p],
                    expected: sigma,
                })
        })
        .collect();
    match failures.into_iter().flatten().next() {
        Some(f) => Err(f),
        None => Ok(sigma),
    }
}
