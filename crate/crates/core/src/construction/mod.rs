//! Constructions I and II: cross blocks between two copies of the point set.
//!
//! Points `0..v` form `X`, points `v..2v` form the copy `X̃`. For a pair
//! `(D_h, D_{n+h})` with classes `π_i`, `π'_j`, every class pair whose
//! circular distance lies in the annulus `ε ≤ d(i,j) ≤ s` contributes the
//! blocks `A ∪ B̃` (type II) and `Ã ∪ B` (type III). A half pair in mode II
//! contributes only `A ∪ B̃` (type IV). A filler 3-design `D` and its copy
//! `D̃` (type I) balance triples lying inside one half.

mod assemble;
mod counts;
mod coverage;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::combinatorics::choose;
use crate::design::{complete_design, is_simple, lambda_profile, Design};
use crate::error::{Error, Result};
use crate::resolution::{ResolvedDesign, SimpleCore};

pub use assemble::{assemble, assemble_with, construct_and_verify, Assembled, BlockProvenance, BlockType, Verified};
pub use counts::{compute_counts, validate_spec, validate_spec_with, Checks, CountingSummary, PairCounts};
pub use coverage::{Coverage, CoverageCounter};

/// Annulus parameters `(ε, s)`: class pairs at circular distance in
/// `ε..=s` are combined.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Annulus {
    pub epsilon: usize,
    pub s: usize,
}

impl Annulus {
    pub fn new(epsilon: usize, s: usize) -> Self {
        Annulus { epsilon, s }
    }

    /// Number `z` of classes `j` in the annulus around any fixed `i`.
    pub fn width(&self, w: usize) -> Result<usize> {
        annulus_width(w, self.epsilon, self.s)
    }

    /// Offsets `d` in `0..w` such that `j = i + d (mod w)` lies in the
    /// annulus around `i`, ascending.
    pub fn offsets(&self, w: usize) -> Result<Vec<usize>> {
        self.width(w)?;
        Ok((0..w).filter(|&d| (self.epsilon..=self.s).contains(&d.min(w - d))).collect())
    }

    /// `2s + 1 - ε`, the width the annulus would have if it did not wrap.
    pub(crate) fn nominal_width(&self) -> usize {
        (2 * self.s + 1).saturating_sub(self.epsilon)
    }
}

impl fmt::Display for Annulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(ε={}, s={})", self.epsilon, self.s)
    }
}

/// `z = |{j : ε ≤ d(i,j) ≤ s}|` for `w` classes.
pub fn annulus_width(w: usize, epsilon: usize, s: usize) -> Result<usize> {
    if w == 0 {
        return Err(Error::params("annulus over zero classes"));
    }
    if epsilon > 1 {
        return Err(Error::params(format!("ε must be 0 or 1, got {epsilon}")));
    }
    if s < epsilon || 2 * s > w {
        return Err(Error::params(format!(
            "annulus radius s={s} outside {epsilon}..={} for w={w}",
            w / 2
        )));
    }
    Ok(if 2 * s < w { 2 * s + 1 - epsilon } else { 2 * s - epsilon })
}

/// Canonical `(ε, s)` with [`annulus_width`] equal to `z`.
pub fn choose_annulus(w: usize, z: usize) -> Result<Annulus> {
    if z == 0 || z > w {
        return Err(Error::params(format!("annulus width z={z} outside 1..={w}")));
    }
    let a = if z % 2 == 1 {
        Annulus::new(0, (z - 1) / 2)
    } else if z < w {
        Annulus::new(1, z / 2)
    } else {
        Annulus::new(0, w / 2)
    };
    debug_assert_eq!(a.width(w).ok(), Some(z));
    Ok(a)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    I,
    II,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::I => "I",
            Mode::II => "II",
        })
    }
}

/// One ingredient pair `(D_h, D_{n+h})`; `left` has the smaller block size.
#[derive(Clone, Debug)]
pub struct PairSpec {
    pub left: Arc<ResolvedDesign>,
    pub right: Arc<ResolvedDesign>,
    pub annulus: Annulus,
}

impl PairSpec {
    pub fn new(left: impl Into<Arc<ResolvedDesign>>, right: impl Into<Arc<ResolvedDesign>>, annulus: Annulus) -> Self {
        PairSpec {
            left: left.into(),
            right: right.into(),
            annulus,
        }
    }

    pub fn left_core(&self) -> SimpleCore {
        self.left.core()
    }

    pub fn right_core(&self) -> SimpleCore {
        self.right.core()
    }
}

/// The self-paired design `D_n = D_{2n}` of mode II.
#[derive(Clone, Debug)]
pub struct HalfPair {
    pub design: Arc<ResolvedDesign>,
    pub annulus: Annulus,
}

impl HalfPair {
    pub fn new(design: impl Into<Arc<ResolvedDesign>>, annulus: Annulus) -> Self {
        HalfPair {
            design: design.into(),
            annulus,
        }
    }
}

#[derive(Clone, Debug)]
enum FillerKind {
    Complete,
    Explicit(Arc<Design>),
}

/// A simple 3-design on `v` points supplying the type I blocks.
///
/// Explicit designs are counted once when the filler is created; the
/// complete design is kept symbolic until assembly.
#[derive(Clone, Debug)]
pub struct Filler {
    v: usize,
    k: usize,
    lambda: u64,
    kind: FillerKind,
}

impl Filler {
    /// All `k`-subsets of `0..v`, a 3-design with `λ = C(v-3, k-3)`.
    pub fn complete(v: usize, k: usize) -> Result<Self> {
        if k < 3 || v <= k {
            return Err(Error::params(format!("complete filler needs v > k >= 3, got v={v}, k={k}")));
        }
        let lambda = crate::combinatorics::binomial(v as u64 - 3, k as u64 - 3)
            .filter(|&l| l <= u64::MAX as u128)
            .ok_or_else(|| Error::params("filler λ overflows"))? as u64;
        Ok(Filler {
            v,
            k,
            lambda,
            kind: FillerKind::Complete,
        })
    }

    /// Checks that `d` is a simple 3-design and records its `λ`.
    pub fn from_design(d: impl Into<Arc<Design>>) -> Result<Self> {
        let d: Arc<Design> = d.into();
        if d.k() < 3 {
            return Err(Error::params(format!("filler block size {} is below 3", d.k())));
        }
        if let Err(b) = is_simple(&d) {
            return Err(Error::Verification(format!("filler is not simple: block {b:?} repeats")));
        }
        let profile = lambda_profile(&d, 3)?;
        let lambda = crate::design::triple_lambda(d.k(), &profile)?;
        Ok(Filler {
            v: d.v(),
            k: d.k(),
            lambda,
            kind: FillerKind::Explicit(d),
        })
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn lambda(&self) -> u64 {
        self.lambda
    }

    pub fn is_complete(&self) -> bool {
        matches!(self.kind, FillerKind::Complete)
    }

    /// Number of blocks of one copy.
    pub fn block_count(&self) -> u128 {
        match &self.kind {
            FillerKind::Complete => choose(self.v as u64, self.k as u64),
            FillerKind::Explicit(d) => d.len() as u128,
        }
    }

    /// The explicit design, when the filler is not symbolic.
    pub fn explicit(&self) -> Option<&Design> {
        match &self.kind {
            FillerKind::Complete => None,
            FillerKind::Explicit(d) => Some(d),
        }
    }

    pub fn materialize(&self) -> Result<Arc<Design>> {
        match &self.kind {
            FillerKind::Complete => Ok(Arc::new(complete_design(self.v, self.k)?)),
            FillerKind::Explicit(d) => Ok(d.clone()),
        }
    }
}

/// Full input of a construction.
#[derive(Clone, Debug)]
pub struct ConstructionSpec {
    pub v: usize,
    pub k: usize,
    pub mode: Mode,
    /// Full pairs, by increasing left block size.
    pub pairs: Vec<PairSpec>,
    /// Mode II only.
    pub half: Option<HalfPair>,
    pub filler: Option<Filler>,
}

impl ConstructionSpec {
    /// 1-based index used for the half pair in provenance and summaries.
    pub fn half_index(&self) -> usize {
        self.pairs.len() + 1
    }
}

/// Part of a spec a violation refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    Spec,
    /// 1-based full pair index.
    Pair(usize),
    Half,
    Filler,
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Spec => f.write_str("spec"),
            Target::Pair(h) => write!(f, "pair {h}"),
            Target::Half => f.write_str("half pair"),
            Target::Filler => f.write_str("filler"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    Mode,
    Points,
    BlockSize,
    SizeOrder,
    WMismatch,
    AnnulusRange,
    SimplicityGuard,
    SimpleSide,
    Resolution,
    Filler,
    NegativeLambda,
}

impl Rule {
    pub fn name(&self) -> &'static str {
        match self {
            Rule::Mode => "mode",
            Rule::Points => "points",
            Rule::BlockSize => "block-size",
            Rule::SizeOrder => "size-order",
            Rule::WMismatch => "w-mismatch",
            Rule::AnnulusRange => "annulus-range",
            Rule::SimplicityGuard => "simplicity-guard",
            Rule::SimpleSide => "simple-side",
            Rule::Resolution => "resolution",
            Rule::Filler => "filler",
            Rule::NegativeLambda => "negative-lambda",
        }
    }
}

/// One failed hypothesis of a construction spec.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub target: Target,
    pub rule: Rule,
    pub detail: String,
}

impl Violation {
    pub(crate) fn new(target: Target, rule: Rule, detail: impl Into<String>) -> Self {
        Violation {
            target,
            rule,
            detail: detail.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}: {}", self.target, self.rule.name(), self.detail)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resolution::class_distance;

    #[test]
    fn annulus_width_examples() {
        assert_eq!(annulus_width(7, 0, 2).unwrap(), 5);
        assert_eq!(annulus_width(6, 0, 3).unwrap(), 6);
        assert_eq!(annulus_width(10, 0, 0).unwrap(), 1);
        assert_eq!(annulus_width(6, 1, 3).unwrap(), 5);
        assert!(annulus_width(7, 0, 4).is_err());
        assert!(annulus_width(7, 2, 2).is_err());
        assert!(annulus_width(7, 1, 0).is_err());
    }

    #[test]
    fn annulus_width_counts_classes() {
        for w in 1..40 {
            for epsilon in 0..=1 {
                for s in epsilon..=w / 2 {
                    let z = annulus_width(w, epsilon, s).unwrap();
                    for i in 1..=w {
                        let direct = (1..=w)
                            .filter(|&j| (epsilon..=s).contains(&class_distance(w, i, j).unwrap()))
                            .count();
                        assert_eq!(direct, z, "w={w} ε={epsilon} s={s} i={i}");
                    }
                    assert_eq!(Annulus::new(epsilon, s).offsets(w).unwrap().len(), z);
                }
            }
        }
    }

    #[test]
    fn choose_annulus_examples() {
        assert_eq!(choose_annulus(7, 5).unwrap(), Annulus::new(0, 2));
        assert_eq!(choose_annulus(7, 2).unwrap(), Annulus::new(1, 1));
        assert_eq!(choose_annulus(6, 6).unwrap(), Annulus::new(0, 3));
        assert!(choose_annulus(6, 7).is_err());
        assert!(choose_annulus(6, 0).is_err());
    }

    #[test]
    fn choose_annulus_round_trips() {
        for w in 1..=50 {
            for z in 1..=w {
                let a = choose_annulus(w, z).unwrap();
                assert!(a.s <= w / 2);
                assert_eq!(annulus_width(w, a.epsilon, a.s).unwrap(), z);
            }
        }
    }

    #[test]
    fn complete_filler_is_symbolic() {
        let f = Filler::complete(60, 5).unwrap();
        assert_eq!(f.lambda(), 1596);
        assert_eq!(f.block_count(), choose(60, 5));
        assert!(f.explicit().is_none());
        assert!(Filler::complete(5, 5).is_err());
    }

    #[test]
    fn explicit_filler_is_counted() {
        let f = Filler::from_design(complete_design(8, 6).unwrap()).unwrap();
        assert_eq!(f.lambda(), 10);
        let doubled = crate::design::union_copies(&complete_design(8, 6).unwrap(), 2).unwrap();
        assert!(matches!(Filler::from_design(doubled), Err(Error::Verification(_))));
        let blocks: Vec<_> = complete_design(8, 6).unwrap().blocks().skip(1).map(|b| b.to_vec()).collect();
        let broken = Design::new(8, 6, blocks).unwrap();
        let err = Filler::from_design(broken).unwrap_err().to_string();
        assert!(err.contains("not a 3-design"), "{err}");
    }
}
