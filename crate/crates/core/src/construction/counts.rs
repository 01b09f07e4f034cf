use serde::{Deserialize, Serialize};

use super::{Annulus, ConstructionSpec, Mode, Rule, Target, Violation};
use crate::combinatorics::choose;
use crate::design::is_simple;
use crate::error::{Error, Result};
use crate::resolution::{IngredientStats, ResolvedDesign};

/// Which groups of hypotheses [`validate_spec_with`] enforces. Structural
/// rules (sizes, class counts, annulus range, resolutions) always apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Checks {
    /// Bound on `z` against the simple core of a concatenated side.
    pub simplicity_guard: bool,
    /// `Λ = Θ - Δ` must be nonnegative and matched by the filler.
    pub filler_balance: bool,
}

impl Checks {
    pub const ALL: Checks = Checks {
        simplicity_guard: true,
        filler_balance: true,
    };
    /// Only what is needed to emit the cross blocks.
    pub const STRUCTURAL: Checks = Checks {
        simplicity_guard: false,
        filler_balance: false,
    };
}

/// Counted parameters of one pair and its share of `Θ` and `Δ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCounts {
    /// 1-based; the half pair comes last.
    pub index: usize,
    pub half: bool,
    pub k_left: usize,
    pub k_right: usize,
    pub b_left: u64,
    pub b_right: u64,
    pub u_left: u64,
    pub u_right: u64,
    pub lambda_left: u64,
    pub lambda_right: u64,
    pub lambda2_left: u64,
    pub lambda2_right: u64,
    pub w: usize,
    pub z: usize,
    pub annulus: Annulus,
    pub theta: u128,
    pub delta: u128,
}

impl PairCounts {
    /// Number of class pairs `(i, j)` in the annulus.
    pub fn cells(&self) -> u128 {
        self.w as u128 * self.z as u128
    }

    /// Blocks contributed by one class pair.
    pub fn cell_size(&self) -> u128 {
        let prod = self.b_left as u128 * self.b_right as u128;
        if self.half {
            prod
        } else {
            2 * prod
        }
    }

    pub fn blocks(&self) -> u128 {
        self.cells() * self.cell_size()
    }
}

/// Exact `Θ`, `Δ` and `Λ = Θ - Δ` of a construction (`Θ*`, `Δ*` in mode II).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountingSummary {
    pub v: usize,
    pub k: usize,
    pub mode: Mode,
    pub pairs: Vec<PairCounts>,
    pub theta: u128,
    pub delta: u128,
    pub lambda: i128,
    /// Blocks of one copy of the filler; 0 without filler.
    pub filler_blocks: u128,
}

impl CountingSummary {
    pub fn cross_blocks(&self) -> u128 {
        self.pairs.iter().map(PairCounts::blocks).sum()
    }

    pub fn total_blocks(&self) -> u128 {
        self.cross_blocks() + 2 * self.filler_blocks
    }

    /// `Θ · C(2v,3) / C(k,3)`, the block count of a 3-design with `λ = Θ`.
    pub fn predicted_blocks(&self) -> Option<u128> {
        let num = self.theta.checked_mul(choose(2 * self.v as u64, 3))?;
        let den = choose(self.k as u64, 3);
        (den > 0 && num % den == 0).then(|| num / den)
    }
}

/// Validates every hypothesis and returns the counts.
pub fn validate_spec(spec: &ConstructionSpec) -> std::result::Result<CountingSummary, Vec<Violation>> {
    validate_spec_with(spec, Checks::ALL)
}

/// [`validate_spec`] with violations wrapped in an [`Error`].
pub fn compute_counts(spec: &ConstructionSpec) -> Result<CountingSummary> {
    validate_spec(spec).map_err(Error::Validation)
}

fn side_stats<'a>(
    d: &'a ResolvedDesign,
    target: Target,
    side: &str,
    out: &mut Vec<Violation>,
) -> Option<&'a IngredientStats> {
    match d.stats() {
        Ok(s) => Some(s),
        Err(e) => {
            out.push(Violation::new(target, Rule::Resolution, format!("{side}: {e}")));
            None
        }
    }
}

fn check_points(spec: &ConstructionSpec, d: &ResolvedDesign, target: Target, side: &str, out: &mut Vec<Violation>) {
    if d.v() != spec.v {
        out.push(Violation::new(
            target,
            Rule::Points,
            format!("{side} design has {} points, expected {}", d.v(), spec.v),
        ));
    }
}

fn check_base_simple(d: &ResolvedDesign, target: Target, side: &str, out: &mut Vec<Violation>) {
    if let Err(b) = is_simple(d.base_design()) {
        out.push(Violation::new(
            target,
            Rule::SimpleSide,
            format!("{side} design is not a union of copies of a simple design: block {b:?} repeats within one copy"),
        ));
    }
}

/// The bound relating `z` to the simple core of one side.
///
/// With `a ≥ 2` copies, classes `i` and `i + t` are equal, so the annulus
/// offsets must be pairwise distinct mod `t`. This forces `z ≤ t`, and for
/// `ε = 1` it fails as soon as `±s` are distinct offsets with `2s ≥ t`.
fn guard(annulus: Annulus, w: usize, t: usize, a: usize, target: Target, side: &str, out: &mut Vec<Violation>) {
    if a < 2 {
        return;
    }
    let Ok(offsets) = annulus.offsets(w) else {
        let z = annulus.nominal_width();
        if z > t {
            out.push(Violation::new(
                target,
                Rule::SimplicityGuard,
                format!("z = {z} exceeds the t = {t} classes of the {side} simple core"),
            ));
        }
        return;
    };
    let mut first = vec![None; t];
    for &d in &offsets {
        if let Some(d0) = first[d % t] {
            let z = offsets.len();
            let detail = if z > t {
                format!("z = {z} exceeds the t = {t} classes of the {side} simple core")
            } else {
                format!(
                    "offsets {d0} and {d} agree mod t = {t}: two classes of the annulus on the {side} side are copies of one class"
                )
            };
            out.push(Violation::new(target, Rule::SimplicityGuard, detail));
            return;
        }
        first[d % t] = Some(d);
    }
}

/// Validates with a chosen set of checks.
pub fn validate_spec_with(
    spec: &ConstructionSpec,
    checks: Checks,
) -> std::result::Result<CountingSummary, Vec<Violation>> {
    let mut out = Vec::new();
    let k = spec.k;
    match spec.mode {
        Mode::I if spec.half.is_some() => {
            out.push(Violation::new(Target::Spec, Rule::Mode, "mode I takes no half pair"));
        }
        Mode::II if k % 2 != 0 => {
            out.push(Violation::new(Target::Spec, Rule::Mode, format!("mode II needs even k, got {k}")));
        }
        Mode::II if spec.half.is_none() => {
            out.push(Violation::new(Target::Spec, Rule::Mode, "mode II needs a half pair"));
        }
        _ => {}
    }
    if spec.pairs.is_empty() && spec.half.is_none() {
        out.push(Violation::new(Target::Spec, Rule::Mode, "no ingredient pairs"));
    }

    let mut prev_k = 0usize;
    let mut stats = Vec::with_capacity(spec.pairs.len());
    for (h, p) in spec.pairs.iter().enumerate() {
        let target = Target::Pair(h + 1);
        check_points(spec, &p.left, target, "left", &mut out);
        check_points(spec, &p.right, target, "right", &mut out);
        let (kl, kr) = (p.left.k(), p.right.k());
        if kl + kr != k {
            out.push(Violation::new(target, Rule::BlockSize, format!("k_h + k_(n+h) = {kl} + {kr} ≠ k = {k}")));
        }
        if 2 * kl >= k {
            out.push(Violation::new(target, Rule::SizeOrder, format!("k_h = {kl} is not below k/2")));
        }
        if kl <= prev_k {
            out.push(Violation::new(
                target,
                Rule::SizeOrder,
                format!("k_h = {kl} does not exceed the previous pair's {prev_k}"),
            ));
        }
        prev_k = prev_k.max(kl);
        let w = p.left.w();
        if w != p.right.w() {
            out.push(Violation::new(
                target,
                Rule::WMismatch,
                format!("left has {w} classes, right has {}", p.right.w()),
            ));
        }
        if let Err(e) = p.annulus.width(w) {
            out.push(Violation::new(target, Rule::AnnulusRange, e.to_string()));
        }
        check_base_simple(&p.left, target, "left", &mut out);
        check_base_simple(&p.right, target, "right", &mut out);
        let (lc, rc) = (p.left_core(), p.right_core());
        if lc.a > 1 && rc.a > 1 {
            out.push(Violation::new(
                target,
                Rule::SimpleSide,
                format!("both sides are unions of copies (a = {} and {})", lc.a, rc.a),
            ));
        }
        if checks.simplicity_guard {
            guard(p.annulus, w, lc.t, lc.a, target, "left", &mut out);
            guard(p.annulus, w, rc.t, rc.a, target, "right", &mut out);
        }
        let l = side_stats(&p.left, target, "left", &mut out);
        let r = side_stats(&p.right, target, "right", &mut out);
        stats.push((l, r));
    }

    let mut half_stats = None;
    if let Some(hp) = &spec.half {
        let target = Target::Half;
        check_points(spec, &hp.design, target, "half", &mut out);
        if 2 * hp.design.k() != k {
            out.push(Violation::new(
                target,
                Rule::BlockSize,
                format!("half pair block size {} is not k/2 = {k}/2", hp.design.k()),
            ));
        }
        if spec.pairs.iter().any(|p| p.left.k() >= hp.design.k()) {
            out.push(Violation::new(target, Rule::SizeOrder, "full pairs must have k_h below k/2"));
        }
        let w = hp.design.w();
        if let Err(e) = hp.annulus.width(w) {
            out.push(Violation::new(target, Rule::AnnulusRange, e.to_string()));
        }
        check_base_simple(&hp.design, target, "half", &mut out);
        if hp.design.repeats() > 1 {
            out.push(Violation::new(target, Rule::SimpleSide, "the half pair design must be simple"));
        }
        if checks.simplicity_guard {
            let c = hp.design.core();
            guard(hp.annulus, w, c.t, c.a, target, "half", &mut out);
        }
        half_stats = side_stats(&hp.design, target, "half", &mut out);
    }

    if let Some(f) = &spec.filler {
        if f.v() != spec.v || f.k() != k {
            out.push(Violation::new(
                Target::Filler,
                Rule::Filler,
                format!("filler is on {} points with blocks of size {}, expected {} and {k}", f.v(), f.k(), spec.v),
            ));
        }
    }
    if !out.is_empty() {
        return Err(out);
    }

    let overflow = || vec![Violation::new(Target::Spec, Rule::Mode, "counts overflow 128 bits")];
    let mut pairs = Vec::new();
    for (h, (p, (l, r))) in spec.pairs.iter().zip(stats).enumerate() {
        let (l, r) = (l.expect("checked"), r.expect("checked"));
        let z = p.annulus.width(l.w).expect("checked");
        pairs.push(pair_counts(h + 1, false, l, r, p.annulus, z).ok_or_else(overflow)?);
    }
    if let (Some(hp), Some(s)) = (&spec.half, half_stats) {
        let z = hp.annulus.width(s.w).expect("checked");
        pairs.push(pair_counts(spec.half_index(), true, s, s, hp.annulus, z).ok_or_else(overflow)?);
    }
    let theta: u128 = pairs.iter().try_fold(0u128, |acc, p| acc.checked_add(p.theta)).ok_or_else(overflow)?;
    let delta: u128 = pairs.iter().try_fold(0u128, |acc, p| acc.checked_add(p.delta)).ok_or_else(overflow)?;
    let lambda = theta as i128 - delta as i128;

    if checks.filler_balance {
        match (&spec.filler, lambda) {
            (_, l) if l < 0 => out.push(Violation::new(
                Target::Spec,
                Rule::NegativeLambda,
                format!("Θ - Δ = {theta} - {delta} is negative"),
            )),
            (Some(_), 0) => out.push(Violation::new(
                Target::Filler,
                Rule::Filler,
                "Θ - Δ = 0, so no filler may be supplied",
            )),
            (Some(f), l) if f.lambda() as i128 != l => out.push(Violation::new(
                Target::Filler,
                Rule::Filler,
                format!("filler has λ = {}, but Θ - Δ = {l}", f.lambda()),
            )),
            (None, l) if l > 0 => out.push(Violation::new(
                Target::Filler,
                Rule::Filler,
                format!("Θ - Δ = {l} requires a filler 3-(v,k,{l}) design"),
            )),
            _ => {}
        }
        if !out.is_empty() {
            return Err(out);
        }
    }

    Ok(CountingSummary {
        v: spec.v,
        k,
        mode: spec.mode,
        pairs,
        theta,
        delta,
        lambda,
        filler_blocks: spec.filler.as_ref().map_or(0, |f| f.block_count()),
    })
}

fn pair_counts(
    index: usize,
    half: bool,
    l: &IngredientStats,
    r: &IngredientStats,
    annulus: Annulus,
    z: usize,
) -> Option<PairCounts> {
    let z128 = z as u128;
    let m = |a: u64, b: u64| (a as u128).checked_mul(b as u128);
    let (theta, delta) = if half {
        (m(l.lambda2, l.u)?.checked_mul(z128)?, m(l.lambda, l.b)?.checked_mul(z128)?)
    } else {
        (
            m(l.lambda2, r.u)?.checked_add(m(r.lambda2, l.u)?)?.checked_mul(z128)?,
            m(l.lambda, r.b)?.checked_add(m(r.lambda, l.b)?)?.checked_mul(z128)?,
        )
    };
    Some(PairCounts {
        index,
        half,
        k_left: l.k,
        k_right: r.k,
        b_left: l.b,
        b_right: r.b,
        u_left: l.u,
        u_right: r.u,
        lambda_left: l.lambda,
        lambda_right: r.lambda,
        lambda2_left: l.lambda2,
        lambda2_right: r.lambda2,
        w: l.w,
        z,
        annulus,
        theta,
        delta,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::construction::{choose_annulus, Filler, HalfPair, PairSpec};
    use crate::resolution::{concatenate_resolution, cyclic_orbit_resolution, round_robin_one_factorization};

    fn thm31_v8(z: usize) -> ConstructionSpec {
        let rr = round_robin_one_factorization(8).unwrap();
        let cyc = cyclic_orbit_resolution(8, 3).unwrap();
        ConstructionSpec {
            v: 8,
            k: 5,
            mode: Mode::I,
            pairs: vec![PairSpec::new(rr, cyc, choose_annulus(7, z).unwrap())],
            half: None,
            filler: Some(Filler::complete(8, 5).unwrap()),
        }
    }

    fn rules(v: &[Violation]) -> Vec<(Target, Rule)> {
        v.iter().map(|x| (x.target, x.rule)).collect()
    }

    #[test]
    fn counts_for_doubled_eight() {
        let s = compute_counts(&thm31_v8(2)).unwrap();
        assert_eq!((s.theta, s.delta, s.lambda), (18, 8, 10));
        let p = &s.pairs[0];
        assert_eq!((p.b_left, p.b_right, p.u_left, p.u_right), (4, 8, 1, 3));
        assert_eq!((p.lambda2_left, p.lambda2_right, p.lambda_left, p.lambda_right), (1, 6, 0, 1));
        assert_eq!(s.predicted_blocks(), Some(1008));
        assert_eq!(s.total_blocks(), 1008);
    }

    #[test]
    fn half_pair_counts() {
        let cyc = cyclic_orbit_resolution(8, 3).unwrap();
        let spec = ConstructionSpec {
            v: 8,
            k: 6,
            mode: Mode::II,
            pairs: vec![],
            half: Some(HalfPair::new(cyc, choose_annulus(7, 1).unwrap())),
            filler: Some(Filler::complete(8, 6).unwrap()),
        };
        let s = compute_counts(&spec).unwrap();
        assert_eq!((s.theta, s.delta, s.lambda), (18, 8, 10));
        assert_eq!(s.total_blocks(), 504);
    }

    #[test]
    fn z_beyond_classes_is_rejected() {
        let mut spec = thm31_v8(2);
        spec.pairs[0].annulus = Annulus::new(1, 4);
        let v = validate_spec(&spec).unwrap_err();
        let r = rules(&v);
        assert!(r.contains(&(Target::Pair(1), Rule::AnnulusRange)));
        // no concatenated side, so no copies to collide
        assert!(!r.contains(&(Target::Pair(1), Rule::SimplicityGuard)));
    }

    #[test]
    fn mismatched_class_counts_are_rejected() {
        let rr = round_robin_one_factorization(8).unwrap();
        let c73 = cyclic_orbit_resolution(7, 3).unwrap();
        let spec = ConstructionSpec {
            v: 8,
            k: 5,
            mode: Mode::I,
            pairs: vec![PairSpec::new(rr, c73, Annulus::new(0, 0))],
            half: None,
            filler: None,
        };
        let r = rules(&validate_spec(&spec).unwrap_err());
        assert!(r.contains(&(Target::Pair(1), Rule::WMismatch)));
        assert!(r.contains(&(Target::Pair(1), Rule::Points)));
    }

    #[test]
    fn filler_balance() {
        let mut spec = thm31_v8(2);
        spec.filler = None;
        let r = rules(&validate_spec(&spec).unwrap_err());
        assert_eq!(r, vec![(Target::Filler, Rule::Filler)]);
        assert!(validate_spec_with(&spec, Checks::STRUCTURAL).is_ok());

        let mut spec = thm31_v8(4);
        let r = rules(&validate_spec(&spec).unwrap_err());
        assert_eq!(r, vec![(Target::Filler, Rule::Filler)]);
        spec.filler = Some(Filler::complete(8, 4).unwrap());
        assert!(rules(&validate_spec(&spec).unwrap_err()).contains(&(Target::Filler, Rule::Filler)));
    }

    #[test]
    fn refined_guard_for_concatenated_side() {
        // five copies of the 7-class one-factorization against 35 parallel classes
        let rr = round_robin_one_factorization(8).unwrap();
        let (d1, core) = concatenate_resolution(&rr, 5).unwrap();
        assert_eq!((core.t, core.a), (7, 5));
        let d1 = Arc::new(d1);
        let par = Arc::new(crate::resolution::baranyai_parallelism(8, 4).unwrap());
        let guard_hit = |a: Annulus| {
            let spec = ConstructionSpec {
                v: 8,
                k: 6,
                mode: Mode::I,
                pairs: vec![PairSpec::new(d1.clone(), par.clone(), a)],
                half: None,
                filler: None,
            };
            let checks = Checks {
                simplicity_guard: true,
                filler_balance: false,
            };
            validate_spec_with(&spec, checks)
                .err()
                .is_some_and(|v| v.iter().any(|x| x.rule == Rule::SimplicityGuard))
        };
        assert!(!guard_hit(Annulus::new(0, 3))); // z = 7 = t
        assert!(guard_hit(Annulus::new(0, 4))); // z = 9 > t
        assert!(!guard_hit(Annulus::new(1, 3))); // z = 6, 2s < t
        assert!(guard_hit(Annulus::new(1, 4))); // z = 8 > t
        assert!(guard_hit(Annulus::new(1, 17))); // s = w/2
    }

    #[test]
    fn refined_guard_even_core() {
        // t = 4: with ε = 1, s = 2 the classes j-2 and j+2 coincide
        let (d1, core) = concatenate_resolution(&crate::resolution::cyclic_orbit_resolution(9, 2).unwrap(), 7).unwrap();
        assert_eq!((core.t, core.a), (4, 7));
        let d1 = Arc::new(d1);
        let par = Arc::new(crate::resolution::baranyai_parallelism(9, 3).unwrap());
        let spec = |a: Annulus| ConstructionSpec {
            v: 9,
            k: 5,
            mode: Mode::I,
            pairs: vec![PairSpec::new(d1.clone(), par.clone(), a)],
            half: None,
            filler: None,
        };
        let checks = Checks {
            simplicity_guard: true,
            filler_balance: false,
        };
        for (a, hit) in [(Annulus::new(1, 2), true), (Annulus::new(1, 1), false), (Annulus::new(0, 1), false)] {
            let r = validate_spec_with(&spec(a), checks);
            assert_eq!(r.is_err(), hit, "{a:?}");
            let built = crate::construction::assemble_with(&spec(a), Checks::STRUCTURAL).unwrap();
            assert_eq!(crate::design::is_simple(&built.design).is_err(), hit, "{a:?}");
        }
    }

    #[test]
    fn mode_rules() {
        let mut spec = thm31_v8(2);
        spec.mode = Mode::II;
        let r = rules(&validate_spec(&spec).unwrap_err());
        assert!(r.contains(&(Target::Spec, Rule::Mode)));
        let mut spec = thm31_v8(2);
        spec.k = 6;
        let r = rules(&validate_spec(&spec).unwrap_err());
        assert!(r.contains(&(Target::Pair(1), Rule::BlockSize)));
    }
}
