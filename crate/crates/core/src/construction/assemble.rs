use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::counts::{validate_spec_with, Checks, CountingSummary};
use super::ConstructionSpec;
use crate::design::{is_simple, lambda_profile, sort_flat_blocks, Design, LambdaProfile, Point, MAX_POINTS};
use crate::error::{Error, Result};
use crate::resolution::ResolvedDesign;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BlockType {
    /// Filler block or its copy.
    I,
    /// `A ∪ B̃` from a full pair.
    II,
    /// `Ã ∪ B` from a full pair.
    III,
    /// `A ∪ B̃` from the half pair.
    IV,
}

/// Origin of one constructed block.
///
/// `pair` is 1-based (0 for filler blocks); `i` and `j` are the 1-based
/// classes of the left and right ingredient (0 for filler blocks).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BlockProvenance {
    pub pair: u32,
    pub i: u32,
    pub j: u32,
    pub btype: BlockType,
}

impl BlockProvenance {
    const FILLER: BlockProvenance = BlockProvenance {
        pair: 0,
        i: 0,
        j: 0,
        btype: BlockType::I,
    };
}

/// An assembled design; `provenance[b]` describes `design.block(b)`.
#[derive(Clone, Debug)]
pub struct Assembled {
    pub design: Design,
    pub provenance: Vec<BlockProvenance>,
    pub summary: CountingSummary,
}

/// An assembled design whose λ-profile and simplicity were checked.
#[derive(Clone, Debug)]
pub struct Verified {
    pub assembled: Assembled,
    pub profile: LambdaProfile,
}

/// Validates the spec and emits all blocks on `2v` points, canonically
/// sorted.
pub fn assemble(spec: &ConstructionSpec) -> Result<Assembled> {
    assemble_with(spec, Checks::ALL)
}

/// Cross blocks of one class row `i`, in order of ascending `j`.
#[allow(clippy::too_many_arguments)]
fn emit_row(
    left: &ResolvedDesign,
    right: &ResolvedDesign,
    v: usize,
    i: usize,
    offsets: &[usize],
    pair: u32,
    mirrored: bool,
    points: &mut Vec<Point>,
    prov: &mut Vec<BlockProvenance>,
) {
    let w = left.w();
    let mut js: Vec<usize> = offsets.iter().map(|&d| (i + d) % w).collect();
    js.sort_unstable();
    let shift = v as Point;
    for j in js {
        let mut tag = BlockProvenance {
            pair,
            i: i as u32 + 1,
            j: j as u32 + 1,
            btype: if mirrored { BlockType::II } else { BlockType::IV },
        };
        for a in left.class_blocks(i) {
            for b in right.class_blocks(j) {
                points.extend_from_slice(a);
                points.extend(b.iter().map(|&p| p + shift));
                prov.push(tag);
            }
        }
        if mirrored {
            tag.btype = BlockType::III;
            for a in left.class_blocks(i) {
                for b in right.class_blocks(j) {
                    points.extend_from_slice(b);
                    points.extend(a.iter().map(|&p| p + shift));
                    prov.push(tag);
                }
            }
        }
    }
}

fn emit_pair(
    left: &ResolvedDesign,
    right: &ResolvedDesign,
    v: usize,
    offsets: &[usize],
    pair: u32,
    mirrored: bool,
    points: &mut Vec<Point>,
    prov: &mut Vec<BlockProvenance>,
) {
    let rows: Vec<(Vec<Point>, Vec<BlockProvenance>)> = (0..left.w())
        .into_par_iter()
        .map(|i| {
            let (mut p, mut t) = (Vec::new(), Vec::new());
            emit_row(left, right, v, i, offsets, pair, mirrored, &mut p, &mut t);
            (p, t)
        })
        .collect();
    for (p, t) in rows {
        points.extend_from_slice(&p);
        prov.extend_from_slice(&t);
    }
}

/// [`assemble`] under a chosen set of checks. With
/// [`Checks::STRUCTURAL`] the result may contain repeated blocks; this is
/// how the simplicity guard is tested.
pub fn assemble_with(spec: &ConstructionSpec, checks: Checks) -> Result<Assembled> {
    let summary = validate_spec_with(spec, checks).map_err(Error::Validation)?;
    let (v, k) = (spec.v, spec.k);
    if 2 * v > MAX_POINTS {
        return Err(Error::params(format!("2v = {} exceeds {MAX_POINTS} points", 2 * v)));
    }
    let total = summary.total_blocks();
    if total > u32::MAX as u128 || total * k as u128 > isize::MAX as u128 / 2 {
        return Err(Error::params(format!("{total} blocks are too many to assemble")));
    }
    let mut points: Vec<Point> = Vec::with_capacity(total as usize * k);
    let mut prov: Vec<BlockProvenance> = Vec::with_capacity(total as usize);

    if let Some(f) = &spec.filler {
        let d = f.materialize()?;
        for shift in [0, v as Point] {
            for b in d.blocks() {
                points.extend(b.iter().map(|&p| p + shift));
                prov.push(BlockProvenance::FILLER);
            }
        }
    }
    for (h, p) in spec.pairs.iter().enumerate() {
        let offsets = p.annulus.offsets(p.left.w())?;
        emit_pair(&p.left, &p.right, v, &offsets, h as u32 + 1, true, &mut points, &mut prov);
    }
    if let Some(hp) = &spec.half {
        let offsets = hp.annulus.offsets(hp.design.w())?;
        let idx = spec.half_index() as u32;
        emit_pair(&hp.design, &hp.design, v, &offsets, idx, false, &mut points, &mut prov);
    }

    let (sorted, perm) = sort_flat_blocks(k, points);
    let provenance = perm.iter().map(|&o| prov[o as usize]).collect();
    Ok(Assembled {
        design: Design::from_sorted_flat(2 * v, k, sorted),
        provenance,
        summary,
    })
}

/// Assembles, then checks block count, simplicity and `λ₃ = Θ` by
/// counting every triple.
pub fn construct_and_verify(spec: &ConstructionSpec) -> Result<Verified> {
    let assembled = assemble(spec)?;
    let s = &assembled.summary;
    let d = &assembled.design;
    if Some(d.len() as u128) != s.predicted_blocks() {
        return Err(Error::Verification(format!(
            "{} blocks assembled, a 3-design with λ = {} on {} points needs {:?}",
            d.len(),
            s.theta,
            d.v(),
            s.predicted_blocks()
        )));
    }
    if let Err(b) = is_simple(d) {
        return Err(Error::Verification(format!("assembled design repeats block {b:?}")));
    }
    let profile = lambda_profile(d, 3)?;
    let level = &profile.levels[3];
    if !level.is_design() || level.min as u128 != s.theta {
        return Err(Error::Verification(format!(
            "expected λ₃ = {}: triple {:?} lies in {} blocks, triple {:?} in {}",
            s.theta, level.min_witness, level.min, level.max_witness, level.max
        )));
    }
    Ok(Verified { assembled, profile })
}
