#![allow(dead_code)]

use std::collections::{HashMap, HashSet};
use std::sync::{Arc, OnceLock};

use rand::seq::SliceRandom;
use rand::Rng;

use tridesign::construction::{validate_spec_with, Annulus, Checks, ConstructionSpec, Filler, HalfPair, Mode, PairSpec};
use tridesign::resolution::{baranyai_parallelism, concatenate_resolution, cyclic_orbit_resolution, round_robin_one_factorization};
use tridesign::{Design, Point, ResolvedDesign};

// ---- GF(32) and PGL(2,32) on the projective line ----

/// x^5 + x^2 + 1
const GF32_POLY: u8 = 0b100101;
pub const INF: u8 = 32;

pub fn gf_mul(mut a: u8, mut b: u8) -> u8 {
    let mut r = 0u8;
    while b != 0 {
        if b & 1 != 0 {
            r ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a & 32 != 0 {
            a ^= GF32_POLY;
        }
    }
    r
}

pub fn gf_inv(a: u8) -> u8 {
    assert_ne!(a, 0);
    (1..32).find(|&b| gf_mul(a, b) == 1).unwrap()
}

/// `x ↦ (ax+b)/(cx+d)` on `GF(32) ∪ {∞}`.
#[derive(Clone, Copy, Debug)]
pub struct Mobius {
    pub a: u8,
    pub b: u8,
    pub c: u8,
    pub d: u8,
}

impl Mobius {
    pub fn apply(&self, x: u8) -> u8 {
        let (num, den) = if x == INF {
            (self.a, self.c)
        } else {
            (gf_mul(self.a, x) ^ self.b, gf_mul(self.c, x) ^ self.d)
        };
        if den == 0 {
            INF
        } else {
            gf_mul(num, gf_inv(den))
        }
    }
}

/// All of PGL(2,32), one normalized matrix per element.
pub fn pgl2_32() -> &'static [Mobius] {
    static G: OnceLock<Vec<Mobius>> = OnceLock::new();
    G.get_or_init(|| {
        let mut out = Vec::new();
        for a in 0..32u8 {
            for b in 0..32u8 {
                for c in 0..32u8 {
                    for d in 0..32u8 {
                        // normalize: c = 1, or c = 0 and d = 1
                        if !(c == 1 || (c == 0 && d == 1)) {
                            continue;
                        }
                        if gf_mul(a, d) ^ gf_mul(b, c) == 0 {
                            continue;
                        }
                        out.push(Mobius { a, b, c, d });
                    }
                }
            }
        }
        out
    })
}

pub fn orbit(set: &[u8]) -> HashSet<Vec<u8>> {
    pgl2_32()
        .iter()
        .map(|g| {
            let mut b: Vec<u8> = set.iter().map(|&x| g.apply(x)).collect();
            b.sort_unstable();
            b
        })
        .collect()
}

fn to_design(k: usize, blocks: impl IntoIterator<Item = Vec<u8>>) -> Design {
    Design::new(33, k, blocks.into_iter().map(|b| b.into_iter().map(Point::from).collect::<Vec<_>>())).unwrap()
}

/// Five full orbits of 5-sets: a simple 3-(33,5,300) design.
pub fn pgl_3_33_5_300() -> &'static Design {
    static D: OnceLock<Design> = OnceLock::new();
    D.get_or_init(|| {
        let full = pgl2_32().len();
        let mut seen: HashSet<Vec<u8>> = HashSet::new();
        let mut blocks = Vec::new();
        let mut orbits = 0;
        'outer: for a in 2..32u8 {
            for b in a + 1..32u8 {
                let rep = vec![0, 1, a, b, INF];
                let mut sorted = rep.clone();
                sorted.sort_unstable();
                if seen.contains(&sorted) {
                    continue;
                }
                let o = orbit(&rep);
                if o.len() != full {
                    continue;
                }
                seen.extend(o.iter().cloned());
                blocks.extend(o);
                orbits += 1;
                if orbits == 5 {
                    break 'outer;
                }
            }
        }
        assert_eq!(orbits, 5);
        to_design(5, blocks)
    })
}

/// One orbit of 6-sets with stabilizer of order 2 (λ₃ = 60) and two with
/// stabilizer of order 6 (λ₃ = 20 each): a simple 3-(33,6,100) design.
pub fn pgl_3_33_6_100() -> &'static Design {
    static D: OnceLock<Design> = OnceLock::new();
    D.get_or_init(|| {
        let full = pgl2_32().len();
        let mut want = vec![full / 2, full / 6, full / 6];
        let mut seen: HashSet<Vec<u8>> = HashSet::new();
        let mut blocks = Vec::new();
        'outer: for a in 2..32u8 {
            for b in a + 1..32u8 {
                for c in b + 1..32u8 {
                    let rep = vec![0, 1, a, b, c, INF];
                    if seen.contains(&rep) {
                        continue;
                    }
                    let o = orbit(&rep);
                    if let Some(pos) = want.iter().position(|&n| n == o.len()) {
                        want.remove(pos);
                        seen.extend(o.iter().cloned());
                        blocks.extend(o);
                        if want.is_empty() {
                            break 'outer;
                        }
                    }
                }
            }
        }
        assert!(want.is_empty());
        to_design(6, blocks)
    })
}

// ---- ingredient catalog for randomized specs ----

/// Simple resolved designs on `v` points with their names.
pub fn base_resolutions(v: usize) -> Arc<Vec<(String, Arc<ResolvedDesign>)>> {
    static CACHE: OnceLock<std::sync::Mutex<HashMap<usize, Arc<Vec<(String, Arc<ResolvedDesign>)>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(x) = cache.lock().unwrap().get(&v) {
        return x.clone();
    }
    let mut out = Vec::new();
    if v % 2 == 0 {
        out.push((format!("rr({v})"), Arc::new(round_robin_one_factorization(v).unwrap())));
    }
    for k in 2..v {
        if num_integer::gcd(v, k) == 1 {
            out.push((format!("cyclic({v},{k})"), Arc::new(cyclic_orbit_resolution(v, k).unwrap())));
        }
        if k >= 3 && v % k == 0 && k < v {
            out.push((format!("baranyai({v},{k})"), Arc::new(baranyai_parallelism(v, k).unwrap())));
        }
    }
    let out = Arc::new(out);
    cache.lock().unwrap().insert(v, out.clone());
    out
}

/// All annuli on `w` classes, each once per width.
pub fn all_annuli(w: usize) -> Vec<Annulus> {
    let mut out = Vec::new();
    for eps in 0..=1 {
        for s in eps..=w / 2 {
            let a = Annulus::new(eps, s);
            if a.width(w).is_ok() {
                out.push(a);
            }
        }
    }
    out
}

fn concat_to(r: &Arc<ResolvedDesign>, w: usize) -> Option<Arc<ResolvedDesign>> {
    let t = r.w();
    if w % t != 0 {
        return None;
    }
    if w == t {
        return Some(r.clone());
    }
    Some(Arc::new(concatenate_resolution(r, w / t).ok()?.0))
}

/// Pairs `(left, right)` with `k_L < k_R`, `k_L + k_R = k`, matched class
/// counts, one side concatenated if needed.
pub fn pair_candidates(v: usize, k: usize) -> Vec<(String, Arc<ResolvedDesign>, Arc<ResolvedDesign>)> {
    let bases = base_resolutions(v);
    let mut out = Vec::new();
    for (ln, l) in bases.iter() {
        for (rn, r) in bases.iter() {
            if l.k() + r.k() != k || 2 * l.k() >= k {
                continue;
            }
            let (tl, tr) = (l.w(), r.w());
            let w = tl.max(tr);
            if let (Some(l2), Some(r2)) = (concat_to(l, w), concat_to(r, w)) {
                out.push((format!("{ln}x{}|{rn}x{}", w / tl, w / tr), l2, r2));
            }
        }
    }
    out
}

pub fn half_candidates(v: usize, k: usize) -> Vec<(String, Arc<ResolvedDesign>)> {
    base_resolutions(v).iter().filter(|(_, r)| r.k() == k).cloned().collect()
}

/// One drawn spec and whether the structural rules plus the guard admit it.
pub struct Drawn {
    pub name: String,
    pub spec: ConstructionSpec,
}

const MAX_BLOCKS: u128 = 60_000;

fn cross_blocks(spec: &ConstructionSpec) -> Option<u128> {
    validate_spec_with(spec, Checks::STRUCTURAL).ok().map(|s| s.cross_blocks())
}

/// Attaches the complete filler when `Λ` equals its `λ`.
fn with_filler(mut spec: ConstructionSpec) -> ConstructionSpec {
    if let Ok(s) = validate_spec_with(&spec, Checks::STRUCTURAL) {
        let k = spec.k;
        if s.lambda > 0 && k < spec.v {
            if let Ok(f) = Filler::complete(spec.v, k) {
                if f.lambda() as i128 == s.lambda {
                    spec.filler = Some(f);
                }
            }
        }
    }
    spec
}

/// Draws a small random spec (v ≤ 12). Annuli are drawn from those that
/// balance against the complete filler (or to Λ = 0) when possible.
pub fn draw_spec<R: Rng>(rng: &mut R) -> Drawn {
    loop {
        let v = rng.gen_range(5..=12);
        let mode = if rng.gen_bool(0.5) { Mode::I } else { Mode::II };
        let bases = base_resolutions(v);
        let sizes: Vec<usize> = bases.iter().map(|(_, r)| r.k()).collect();
        let (name, spec_for): (String, Box<dyn Fn(&[Annulus]) -> ConstructionSpec>) = match mode {
            Mode::I => {
                let k = rng.gen_range(5..=9);
                let cands = pair_candidates(v, k);
                let Some((n, l, r)) = cands.choose(rng).cloned() else { continue };
                (
                    n,
                    Box::new(move |a: &[Annulus]| ConstructionSpec {
                        v,
                        k,
                        mode: Mode::I,
                        pairs: vec![PairSpec::new(l.clone(), r.clone(), a[0])],
                        half: None,
                        filler: None,
                    }),
                )
            }
            Mode::II => {
                let Some(&kh) = sizes.choose(rng) else { continue };
                let k = 2 * kh;
                let halves = half_candidates(v, kh);
                let (hn, h) = halves.choose(rng).cloned().unwrap();
                let pair = if rng.gen_bool(0.4) {
                    pair_candidates(v, k).choose(rng).cloned()
                } else {
                    None
                };
                let n = match &pair {
                    Some((pn, _, _)) => format!("{pn} + half {hn}"),
                    None => format!("half {hn}"),
                };
                (
                    n,
                    Box::new(move |a: &[Annulus]| ConstructionSpec {
                        v,
                        k,
                        mode: Mode::II,
                        pairs: pair
                            .iter()
                            .map(|(_, l, r)| PairSpec::new(l.clone(), r.clone(), a[1]))
                            .collect(),
                        half: Some(HalfPair::new(h.clone(), a[0])),
                        filler: None,
                    }),
                )
            }
        };
        // enumerate annulus choices, keep those within the size cap
        let probe = spec_for(&[Annulus::new(0, 0), Annulus::new(0, 0)]);
        let w0 = probe.half.as_ref().map_or_else(|| probe.pairs[0].left.w(), |h| h.design.w());
        let w1 = probe.pairs.first().map_or(1, |p| p.left.w());
        let mut options = Vec::new();
        for a0 in all_annuli(w0) {
            let second: Vec<Annulus> = if probe.half.is_some() && !probe.pairs.is_empty() {
                all_annuli(w1)
            } else {
                vec![Annulus::new(0, 0)]
            };
            for a1 in second {
                let spec = with_filler(spec_for(&[a0, a1]));
                if cross_blocks(&spec).is_some_and(|b| b <= MAX_BLOCKS) {
                    options.push(spec);
                }
            }
        }
        if options.is_empty() {
            continue;
        }
        let balanced: Vec<&ConstructionSpec> = options
            .iter()
            .filter(|s| validate_spec_with(s, Checks::ALL).is_ok())
            .collect();
        let spec = if !balanced.is_empty() && rng.gen_bool(0.8) {
            (*balanced.choose(rng).unwrap()).clone()
        } else {
            options.choose(rng).unwrap().clone()
        };
        let desc = format!("v={v} {} {name} {}", spec.mode, annuli_desc(&spec));
        return Drawn { name: desc, spec };
    }
}

fn annuli_desc(spec: &ConstructionSpec) -> String {
    let mut parts: Vec<String> = spec.pairs.iter().map(|p| p.annulus.to_string()).collect();
    if let Some(h) = &spec.half {
        parts.push(format!("half {}", h.annulus));
    }
    if spec.filler.is_some() {
        parts.push("complete filler".into());
    }
    parts.join(", ")
}

/// Specs that break only the simplicity guard (structurally valid), with
/// at most `MAX_BLOCKS` cross blocks, over all catalog pairs at `v`.
pub fn guard_violations(v: usize) -> Vec<Drawn> {
    let mut out = Vec::new();
    for k in 5..=9 {
        for (n, l, r) in pair_candidates(v, k) {
            if l.repeats() == 1 && r.repeats() == 1 {
                continue;
            }
            for a in all_annuli(l.w()) {
                let spec = ConstructionSpec {
                    v,
                    k,
                    mode: Mode::I,
                    pairs: vec![PairSpec::new(l.clone(), r.clone(), a)],
                    half: None,
                    filler: None,
                };
                let Ok(s) = validate_spec_with(&spec, Checks::STRUCTURAL) else { continue };
                if s.cross_blocks() > MAX_BLOCKS {
                    continue;
                }
                let guarded = Checks {
                    simplicity_guard: true,
                    filler_balance: false,
                };
                if validate_spec_with(&spec, guarded).is_err() {
                    out.push(Drawn {
                        name: format!("v={v} {n} {a}"),
                        spec,
                    });
                }
            }
        }
    }
    out
}
