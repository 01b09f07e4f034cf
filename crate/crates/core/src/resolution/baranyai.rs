use std::collections::HashMap;

use super::{MaxFlow, ResolvedDesign};
use crate::combinatorics::binomial;
use crate::design::Point;
use crate::error::{Error, Result};

/// Largest point count handled by the bitmask representation.
pub const MAX_BARANYAI_POINTS: usize = 128;

/// Partition of all `k`-subsets of `0..v` into `C(v-1, k-1)` parallel
/// classes, following the inductive flow argument.
///
/// Every class starts as `v/k` empty parts. Points are added one at a time;
/// before adding point `p` each class must choose one of its parts to grow.
/// A part `S` has to be grown in exactly `C(v-p-1, k-|S|-1)` classes. The
/// uniform fractional choice satisfies all of these demands, so the integral
/// max flow on `source -> class -> part type -> sink` saturates every class,
/// and its value is forced to be integral. After `v` rounds every part is a
/// `k`-set and every `k`-set occurs exactly once.
///
/// Class `i` is the `i`-th class of the induction; blocks within a class
/// are sorted.
pub fn baranyai_parallelism(v: usize, k: usize) -> Result<ResolvedDesign> {
    if k < 2 || v <= k {
        return Err(Error::params(format!("need v > k >= 2, got v={v}, k={k}")));
    }
    if v % k != 0 {
        return Err(Error::params(format!("parallelism needs k | v, got v={v}, k={k}")));
    }
    if v > MAX_BARANYAI_POINTS {
        return Err(Error::params(format!("v={v} exceeds {MAX_BARANYAI_POINTS} points")));
    }
    let classes = binomial(v as u64 - 1, k as u64 - 1)
        .filter(|&c| c <= u32::MAX as u128)
        .ok_or_else(|| Error::params("too many classes"))? as usize;
    let parts_per_class = v / k;
    let mut parts = vec![0u128; classes * parts_per_class];

    for p in 0..v {
        let remaining = (v - p - 1) as u64;
        let demand = |mask: u128| -> i64 {
            let size = mask.count_ones() as u64;
            if size as usize >= k {
                return 0;
            }
            binomial(remaining, k as u64 - size - 1).expect("small binomial") as i64
        };

        let mut net = MaxFlow::new(classes + 2);
        let (source, sink) = (classes, classes + 1);
        let mut type_node: HashMap<u128, usize> = HashMap::new();
        let mut type_masks: Vec<u128> = Vec::new();
        // (class, arc id, part mask) for class -> type arcs
        let mut choice_arcs: Vec<(usize, usize, u128)> = Vec::new();
        for c in 0..classes {
            net.add_edge(source, c, 1);
            let own = &parts[c * parts_per_class..(c + 1) * parts_per_class];
            let mut distinct: Vec<(u128, i64)> = Vec::new();
            for &m in own {
                if demand(m) == 0 {
                    continue;
                }
                match distinct.iter_mut().find(|(x, _)| *x == m) {
                    Some((_, n)) => *n += 1,
                    None => distinct.push((m, 1)),
                }
            }
            for (m, mult) in distinct {
                let node = *type_node.entry(m).or_insert_with(|| {
                    type_masks.push(m);
                    net.add_node()
                });
                let arc = net.add_edge(c, node, mult);
                choice_arcs.push((c, arc, m));
            }
        }
        for &m in &type_masks {
            net.add_edge(type_node[&m], sink, demand(m));
        }
        let value = net.run(source, sink);
        if value != classes as i64 {
            return Err(Error::Verification(format!(
                "flow saturated {value} of {classes} classes at point {p}"
            )));
        }
        let bit = 1u128 << p;
        for (c, arc, m) in choice_arcs {
            if net.flow(arc) == 1 {
                let own = &mut parts[c * parts_per_class..(c + 1) * parts_per_class];
                let slot = own.iter_mut().find(|x| **x == m).expect("chosen part exists");
                *slot |= bit;
            }
        }
    }

    let class_blocks = parts.chunks_exact(parts_per_class).map(|own| {
        own.iter()
            .map(|&m| {
                debug_assert_eq!(m.count_ones() as usize, k);
                (0..v).filter(|&x| m >> x & 1 == 1).map(|x| x as Point).collect::<Vec<_>>()
            })
            .collect::<Vec<_>>()
    });
    ResolvedDesign::from_class_blocks(v, k, class_blocks)
}
