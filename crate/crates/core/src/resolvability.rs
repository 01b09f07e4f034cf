//! (1,σ)-resolutions of filler-free constructions.
//!
//! Blocks built from class pair `(i, j)` of pair `h` form a cell in which
//! every point lies in `σ_h` blocks. Grouping `m_h` cells of each pair so
//! that `m_h σ_h` is constant gives the resolution.

use std::collections::BTreeMap;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::construction::{BlockProvenance, BlockType, CountingSummary};
use crate::design::Design;
use crate::error::{Error, Result};
use crate::resolution::{verify_resolution, ResolvedDesign};

/// Cell regularity of one pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairSigma {
    /// 1-based pair index, half pair last.
    pub pair: usize,
    pub sigma: u64,
    pub cell_count: u128,
    pub cell_size: u128,
}

/// `m_h` per pair and the common `σ = m_h σ_h`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultiplierChoice {
    pub multipliers: Vec<u128>,
    pub sigma: u128,
}

/// `σ_h = u_L b_R + u_R b_L`, or `u b` for the half pair.
pub fn pair_sigmas(summary: &CountingSummary) -> Result<Vec<PairSigma>> {
    if summary.lambda != 0 || summary.filler_blocks != 0 {
        return Err(Error::params(format!(
            "resolutions are only produced for Θ = Δ without filler, here Λ = {}",
            summary.lambda
        )));
    }
    Ok(summary
        .pairs
        .iter()
        .map(|p| PairSigma {
            pair: p.index,
            sigma: if p.half {
                p.u_left * p.b_left
            } else {
                p.u_left * p.b_right + p.u_right * p.b_left
            },
            cell_count: p.cells(),
            cell_size: p.cell_size(),
        })
        .collect())
}

/// Least common `σ`: `m_h = L/σ_h` with `L = lcm(σ_h)`, provided every
/// `m_h` divides its cell count.
///
/// Scaling all `m_h` by some `c > 1` never helps: `c·m_h | n` implies
/// `m_h | n`. So the least-`σ` choice is infeasible exactly when this is.
pub fn find_multipliers(sigmas: &[u64], cell_counts: &[u128]) -> Result<MultiplierChoice> {
    if sigmas.is_empty() || sigmas.len() != cell_counts.len() {
        return Err(Error::params("need one cell count per σ"));
    }
    if sigmas.contains(&0) {
        return Err(Error::params("σ must be positive"));
    }
    let l = sigmas.iter().fold(1u128, |acc, &s| acc.lcm(&(s as u128)));
    let multipliers: Vec<u128> = sigmas.iter().map(|&s| l / s as u128).collect();
    if let Some(h) = (0..sigmas.len()).find(|&h| cell_counts[h] % multipliers[h] != 0) {
        return Err(Error::params(format!(
            "no multipliers: pair {} needs m = {} dividing its {} cells (σ = {sigmas:?})",
            h + 1,
            multipliers[h],
            cell_counts[h]
        )));
    }
    Ok(MultiplierChoice { multipliers, sigma: l })
}

/// Block indices of each cell keyed by `(pair, i, j)`. Fails on filler
/// blocks, which belong to no cell.
pub fn cells(provenance: &[BlockProvenance]) -> Result<BTreeMap<(u32, u32, u32), Vec<u32>>> {
    let mut out: BTreeMap<(u32, u32, u32), Vec<u32>> = BTreeMap::new();
    for (n, p) in provenance.iter().enumerate() {
        if p.btype == BlockType::I {
            return Err(Error::params(format!("block #{n} comes from the filler")));
        }
        out.entry((p.pair, p.i, p.j)).or_default().push(n as u32);
    }
    Ok(out)
}

/// Checks that each cell of pair `h` is a 1-design with `σ_h`.
pub fn verify_cells(design: &Design, provenance: &[BlockProvenance], sigmas: &[PairSigma]) -> Result<()> {
    let by_pair: BTreeMap<usize, &PairSigma> = sigmas.iter().map(|s| (s.pair, s)).collect();
    let mut deg = vec![0u64; design.v()];
    for ((h, i, j), members) in cells(provenance)? {
        let s = by_pair
            .get(&(h as usize))
            .ok_or_else(|| Error::params(format!("cell of unknown pair {h}")))?;
        if members.len() as u128 != s.cell_size {
            return Err(Error::Verification(format!(
                "cell ({h}; {i}, {j}) has {} blocks, expected {}",
                members.len(),
                s.cell_size
            )));
        }
        deg.iter_mut().for_each(|d| *d = 0);
        for &b in &members {
            for &p in design.block(b as usize) {
                deg[p as usize] += 1;
            }
        }
        if let Some(p) = deg.iter().position(|&d| d != s.sigma) {
            return Err(Error::Verification(format!(
                "point {p} lies in {} blocks of cell ({h}; {i}, {j}), expected σ = {}",
                deg[p], s.sigma
            )));
        }
    }
    Ok(())
}

/// Groups the cells of each pair, ordered by `(i, j)`, into consecutive
/// runs of `m_h` and verifies the result is a `(1,σ)`-resolution.
pub fn partition_constructed(
    design: &Design,
    provenance: &[BlockProvenance],
    sigmas: &[PairSigma],
    choice: &MultiplierChoice,
) -> Result<ResolvedDesign> {
    if provenance.len() != design.len() {
        return Err(Error::params(format!(
            "{} provenance records for {} blocks",
            provenance.len(),
            design.len()
        )));
    }
    if sigmas.len() != choice.multipliers.len() {
        return Err(Error::params("one multiplier per pair required"));
    }
    let m_of: BTreeMap<u32, u128> = sigmas
        .iter()
        .zip(&choice.multipliers)
        .map(|(s, &m)| (s.pair as u32, m))
        .collect();
    let mut per_pair: BTreeMap<u32, Vec<Vec<u32>>> = BTreeMap::new();
    for ((h, _, _), members) in cells(provenance)? {
        per_pair.entry(h).or_default().push(members);
    }
    let mut classes = Vec::new();
    for (h, cs) in per_pair {
        let m = *m_of
            .get(&h)
            .ok_or_else(|| Error::params(format!("no multiplier for pair {h}")))? as usize;
        if cs.len() % m != 0 {
            return Err(Error::params(format!("pair {h}: {} cells not divisible by m = {m}", cs.len())));
        }
        for chunk in cs.chunks(m) {
            classes.push(chunk.concat());
        }
    }
    let r = ResolvedDesign::from_index_classes(design.clone(), classes)?;
    let sigma = verify_resolution(&r).map_err(|e| Error::Verification(e.to_string()))?;
    if sigma as u128 != choice.sigma {
        return Err(Error::Verification(format!(
            "classes are {sigma}-regular, expected σ = {}",
            choice.sigma
        )));
    }
    Ok(r)
}
