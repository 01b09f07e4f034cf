//! Block designs as sorted block multisets, and exact parameter counting.

use rayon::prelude::*;
use serde::Serialize;

use crate::combinatorics::{for_each_subset, next_combination, BinomialTable};
use crate::error::{Error, Result};

/// A point label. Labels are dense: `0..v`.
pub type Point = u16;

/// Largest supported point count.
pub const MAX_POINTS: usize = Point::MAX as usize;

/// An owned block: strictly increasing point labels.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Block(Vec<Point>);

impl Block {
    /// Sorts the labels and rejects repeated points.
    pub fn new(mut points: Vec<Point>) -> Result<Self> {
        points.sort_unstable();
        if points.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidBlock {
                block: points.iter().map(|&p| p as u64).collect(),
                reason: "repeated point".into(),
            });
        }
        Ok(Block(points))
    }

    pub fn points(&self) -> &[Point] {
        &self.0
    }

    pub fn into_points(self) -> Vec<Point> {
        self.0
    }
}

impl AsRef<[Point]> for Block {
    fn as_ref(&self) -> &[Point] {
        &self.0
    }
}

/// A design on points `0..v` with blocks of size `k`.
///
/// Blocks are stored flat (stride `k`) in lexicographic order; repeated
/// blocks are adjacent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Design {
    v: usize,
    k: usize,
    points: Vec<Point>,
}

fn check_vk(v: usize, k: usize) -> Result<()> {
    if k < 2 || v <= k {
        return Err(Error::params(format!("need v > k >= 2, got v={v}, k={k}")));
    }
    if v > MAX_POINTS {
        return Err(Error::params(format!("v={v} exceeds {MAX_POINTS}")));
    }
    Ok(())
}

impl Design {
    /// Builds a design from arbitrary blocks, canonicalizing each block and
    /// the block order.
    pub fn new<I, B>(v: usize, k: usize, blocks: I) -> Result<Self>
    where
        I: IntoIterator<Item = B>,
        B: AsRef<[Point]>,
    {
        check_vk(v, k)?;
        let mut points = Vec::new();
        for b in blocks {
            push_canonical(v, k, b.as_ref(), &mut points)?;
        }
        let (points, _) = sort_flat_blocks(k, points);
        Ok(Design { v, k, points })
    }

    /// Flat, already validated and sorted blocks.
    pub(crate) fn from_sorted_flat(v: usize, k: usize, points: Vec<Point>) -> Self {
        debug_assert_eq!(points.len() % k, 0);
        debug_assert!(points
            .chunks_exact(k)
            .zip(points.chunks_exact(k).skip(1))
            .all(|(a, b)| a <= b));
        Design { v, k, points }
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of blocks, counted with multiplicity.
    pub fn len(&self) -> usize {
        self.points.len() / self.k
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn block(&self, i: usize) -> &[Point] {
        &self.points[i * self.k..(i + 1) * self.k]
    }

    pub fn blocks(&self) -> std::slice::ChunksExact<'_, Point> {
        self.points.chunks_exact(self.k)
    }
}

/// Appends the sorted form of `b` to `out` after checking size, labels
/// and distinctness.
pub(crate) fn push_canonical(v: usize, k: usize, b: &[Point], out: &mut Vec<Point>) -> Result<()> {
    let start = out.len();
    out.extend_from_slice(b);
    let block = &mut out[start..];
    block.sort_unstable();
    let bad = if block.len() != k {
        Some(format!("expected {k} points"))
    } else if block.windows(2).any(|w| w[0] == w[1]) {
        Some("repeated point".to_string())
    } else if block.last().is_some_and(|&p| p as usize >= v) {
        Some(format!("label out of range 0..{v}"))
    } else {
        None
    };
    if let Some(reason) = bad {
        out.truncate(start);
        return Err(Error::InvalidBlock {
            block: b.iter().map(|&p| p as u64).collect(),
            reason,
        });
    }
    Ok(())
}

/// Sorts stride-`k` blocks lexicographically. Returns the sorted buffer and
/// the permutation `perm` with `sorted[i] = original[perm[i]]`.
pub(crate) fn sort_flat_blocks(k: usize, points: Vec<Point>) -> (Vec<Point>, Vec<u32>) {
    let n = points.len() / k;
    let mut perm: Vec<u32> = (0..n as u32).collect();
    let already_sorted = points
        .chunks_exact(k)
        .zip(points.chunks_exact(k).skip(1))
        .all(|(a, b)| a <= b);
    if already_sorted {
        return (points, perm);
    }
    let key = |i: u32| &points[i as usize * k..(i as usize + 1) * k];
    perm.par_sort_by(|&a, &b| key(a).cmp(key(b)).then(a.cmp(&b)));
    let mut sorted = Vec::with_capacity(points.len());
    for &i in &perm {
        sorted.extend_from_slice(key(i));
    }
    (sorted, perm)
}

/// All `C(v,k)` k-subsets of `0..v`, in lexicographic order.
pub fn complete_design(v: usize, k: usize) -> Result<Design> {
    check_vk(v, k)?;
    let n = crate::combinatorics::binomial(v as u64, k as u64)
        .filter(|&n| n <= (u32::MAX as u128))
        .ok_or_else(|| Error::params(format!("C({v},{k}) blocks is too many to enumerate")))?;
    let mut points = Vec::with_capacity(n as usize * k);
    let mut c: Vec<Point> = (0..k as Point).collect();
    loop {
        points.extend_from_slice(&c);
        if !next_combination(&mut c, v) {
            break;
        }
    }
    Ok(Design::from_sorted_flat(v, k, points))
}

/// The multiset union of `a` copies of `d`.
pub fn union_copies(d: &Design, a: usize) -> Result<Design> {
    if a == 0 {
        return Err(Error::params("copy count must be at least 1"));
    }
    let mut points = Vec::with_capacity(d.points.len() * a);
    for b in d.blocks() {
        for _ in 0..a {
            points.extend_from_slice(b);
        }
    }
    Ok(Design::from_sorted_flat(d.v, d.k, points))
}

/// Relabels `x -> x + offset` into a design on `new_v` points.
pub fn translate(d: &Design, offset: usize, new_v: usize) -> Result<Design> {
    if offset + d.v > new_v {
        return Err(Error::params(format!(
            "offset {offset} + v {} exceeds new point count {new_v}",
            d.v
        )));
    }
    check_vk(new_v, d.k)?;
    let points = d.points.iter().map(|&p| p + offset as Point).collect();
    Ok(Design::from_sorted_flat(new_v, d.k, points))
}

/// `Ok(())` if no block is repeated, otherwise the first repeated block.
pub fn is_simple(d: &Design) -> std::result::Result<(), Vec<Point>> {
    let mut prev: Option<&[Point]> = None;
    for b in d.blocks() {
        if prev == Some(b) {
            return Err(b.to_vec());
        }
        prev = Some(b);
    }
    Ok(())
}

/// Replication counts for one subset size `s`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LambdaLevel {
    pub s: usize,
    pub min: u64,
    pub max: u64,
    /// An `s`-subset attaining `min`.
    pub min_witness: Vec<Point>,
    /// An `s`-subset attaining `max`.
    pub max_witness: Vec<Point>,
}

impl LambdaLevel {
    pub fn is_design(&self) -> bool {
        self.min == self.max
    }

    /// The common count, when every `s`-subset is covered equally.
    pub fn lambda(&self) -> Option<u64> {
        self.is_design().then_some(self.min)
    }
}

/// Counted `lambda_s` for `s = 0..=t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LambdaProfile {
    pub v: usize,
    pub k: usize,
    pub t: usize,
    pub levels: Vec<LambdaLevel>,
}

impl LambdaProfile {
    pub fn lambda(&self, s: usize) -> Option<u64> {
        self.levels.get(s).and_then(LambdaLevel::lambda)
    }

    pub fn is_design(&self, s: usize) -> bool {
        self.levels.get(s).is_some_and(LambdaLevel::is_design)
    }

    /// Largest `s <= t` such that the design is an `s`-design.
    pub fn strength(&self) -> usize {
        self.levels
            .iter()
            .take_while(|l| l.is_design())
            .last()
            .map_or(0, |l| l.s)
    }

    /// First level that is not regular, for error reporting.
    pub fn first_failure(&self) -> Option<&LambdaLevel> {
        self.levels.iter().find(|l| !l.is_design())
    }
}

/// Streaming counter of `s`-subset replication numbers for `s = 1..=t`.
///
/// Blocks may be fed one at a time; two counters over disjoint block sets
/// can be merged.
#[derive(Clone, Debug)]
pub struct LambdaCounter {
    v: usize,
    k: usize,
    t: usize,
    blocks: u64,
    table: std::sync::Arc<BinomialTable>,
    counts: Vec<Vec<u64>>,
    buf: Vec<Point>,
}

impl LambdaCounter {
    pub fn new(v: usize, k: usize, t: usize) -> Result<Self> {
        check_vk(v, k)?;
        if t == 0 || t > k {
            return Err(Error::params(format!("strength t={t} must satisfy 1 <= t <= k={k}")));
        }
        let table = std::sync::Arc::new(BinomialTable::new(v, t));
        Ok(Self::with_table(v, k, t, table))
    }

    fn with_table(v: usize, k: usize, t: usize, table: std::sync::Arc<BinomialTable>) -> Self {
        let counts = (1..=t).map(|s| vec![0u64; table.get(v, s) as usize]).collect();
        LambdaCounter {
            v,
            k,
            t,
            blocks: 0,
            table,
            counts,
            buf: Vec::with_capacity(t),
        }
    }

    pub(crate) fn empty_like(&self) -> Self {
        Self::with_table(self.v, self.k, self.t, self.table.clone())
    }

    /// Adds one block with multiplicity `weight`.
    pub fn add_weighted(&mut self, block: &[Point], weight: u64) {
        debug_assert_eq!(block.len(), self.k);
        self.blocks += weight;
        let table = &self.table;
        for s in 1..=self.t {
            let counts = &mut self.counts[s - 1];
            for_each_subset(block, s, &mut self.buf, |sub| {
                counts[table.colex_rank(sub) as usize] += weight;
            });
        }
    }

    pub fn add(&mut self, block: &[Point]) {
        self.add_weighted(block, 1);
    }

    pub fn merge(&mut self, other: &LambdaCounter) {
        self.blocks += other.blocks;
        for (mine, theirs) in self.counts.iter_mut().zip(&other.counts) {
            for (a, b) in mine.iter_mut().zip(theirs) {
                *a += *b;
            }
        }
    }

    /// Number of blocks containing the given sorted subset.
    pub fn count_of(&self, subset: &[Point]) -> u64 {
        match subset.len() {
            0 => self.blocks,
            s => self.counts[s - 1][self.table.colex_rank(subset) as usize],
        }
    }

    pub fn finish(&self) -> LambdaProfile {
        let mut levels = vec![LambdaLevel {
            s: 0,
            min: self.blocks,
            max: self.blocks,
            min_witness: vec![],
            max_witness: vec![],
        }];
        for s in 1..=self.t {
            let counts = &self.counts[s - 1];
            let (mut lo, mut hi) = (0usize, 0usize);
            for (i, &c) in counts.iter().enumerate() {
                if c < counts[lo] {
                    lo = i;
                }
                if c > counts[hi] {
                    hi = i;
                }
            }
            levels.push(LambdaLevel {
                s,
                min: counts[lo],
                max: counts[hi],
                min_witness: self.table.colex_unrank(lo as u64, s),
                max_witness: self.table.colex_unrank(hi as u64, s),
            });
        }
        LambdaProfile {
            v: self.v,
            k: self.k,
            t: self.t,
            levels,
        }
    }
}

const PAR_CHUNK: usize = 1 << 14;

/// Counts, for every `s <= t`, the blocks through each `s`-subset.
///
/// Work is split across threads by block ranges; integer sums make the
/// result independent of the thread count.
pub fn lambda_profile(d: &Design, t: usize) -> Result<LambdaProfile> {
    Ok(counter_for(d, t, 1)?.finish())
}

/// Like [`lambda_profile`] but for `d` repeated `weight` times.
pub(crate) fn counter_for(d: &Design, t: usize, weight: u64) -> Result<LambdaCounter> {
    let proto = LambdaCounter::new(d.v, d.k, t)?;
    let chunk = PAR_CHUNK * d.k;
    let total = d
        .points
        .par_chunks(chunk)
        .fold(
            || proto.empty_like(),
            |mut acc, blocks| {
                for b in blocks.chunks_exact(d.k) {
                    acc.add_weighted(b, weight);
                }
                acc
            },
        )
        .reduce(
            || proto.empty_like(),
            |mut a, b| {
                a.merge(&b);
                a
            },
        );
    Ok(total)
}

/// Exact `lambda_3` of `d`, treating block size 2 as a 3-design with
/// `lambda = 0`. Errors if `d` is not a 3-design.
pub(crate) fn triple_lambda(profile_k: usize, profile: &LambdaProfile) -> Result<u64> {
    if profile_k < 3 {
        return Ok(0);
    }
    profile.lambda(3).ok_or_else(|| {
        let l = &profile.levels[3];
        Error::Verification(format!(
            "not a 3-design: triple {:?} lies in {} blocks, triple {:?} in {}",
            l.min_witness, l.min, l.max_witness, l.max
        ))
    })
}
