//! Named parameter families: hypotheses, ingredients and closed-form λ.
//!
//! Every family returns a [`ConstructionSpec`] together with the λ its
//! closed form predicts; the counted `Θ` of the spec must agree.

use std::sync::Arc;

use num_integer::Integer;
use num_rational::Ratio;

use crate::combinatorics::binomial;
use crate::construction::{choose_annulus, validate_spec, ConstructionSpec, Filler, HalfPair, Mode, PairSpec};
use crate::error::{Error, Result};
use crate::resolution::{
    baranyai_parallelism, concatenate_resolution, cyclic_orbit_resolution, round_robin_one_factorization,
    ResolvedDesign,
};

type Q = Ratio<i128>;

/// Family identifiers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilyId {
    /// `3-(2v,5,¾(v-2)(v-4))`, `v ≡ 2 (mod 6)`.
    Thm31,
    /// `3-(2(2^f+1),5,15(2^f-1))` from an imported filler.
    Thm32,
    /// `3-(2v,7,(35/4)v(v-2)(v-3)m)`, two pairs, no filler.
    Thm33,
    /// `3-(2(2^f+1),6,(2^f-1)λ/2)` from an imported filler.
    Thm34,
    /// `3-(2v,2k,k(v-2)Λ/(2(v-k)))` from any simple filler.
    Gen2k,
    /// [`FamilyId::Gen2k`] with the complete filler.
    Cor2k,
    /// `3-(2v,2(k+1),Θ*)` with `Θ* = Δ*`.
    ThmAb,
    /// [`FamilyId::ThmAb`] for `k = 3, 4` with the listed congruences.
    CorAb,
}

impl FamilyId {
    pub fn name(&self) -> &'static str {
        match self {
            FamilyId::Thm31 => "THM_3_1",
            FamilyId::Thm32 => "THM_3_2",
            FamilyId::Thm33 => "THM_3_3",
            FamilyId::Thm34 => "THM_3_4",
            FamilyId::Gen2k => "GEN_2K",
            FamilyId::Cor2k => "COR_2K",
            FamilyId::ThmAb => "THM_AB",
            FamilyId::CorAb => "COR_AB",
        }
    }
}

/// A family together with its parameters.
#[derive(Clone, Debug)]
pub enum FamilyRequest {
    Thm31 { v: usize },
    Thm32 { f: u32, ingredient: Filler },
    Thm33 { v: usize, m: usize },
    Thm34 { f: u32, lam: u64, ingredient: Filler },
    Gen2k { v: usize, k: usize, filler: Filler },
    Cor2k { v: usize, k: usize },
    ThmAb { v: usize, k: usize, z1: usize },
    CorAb { v: usize, k: usize, z1: usize },
}

impl FamilyRequest {
    pub fn id(&self) -> FamilyId {
        match self {
            FamilyRequest::Thm31 { .. } => FamilyId::Thm31,
            FamilyRequest::Thm32 { .. } => FamilyId::Thm32,
            FamilyRequest::Thm33 { .. } => FamilyId::Thm33,
            FamilyRequest::Thm34 { .. } => FamilyId::Thm34,
            FamilyRequest::Gen2k { .. } => FamilyId::Gen2k,
            FamilyRequest::Cor2k { .. } => FamilyId::Cor2k,
            FamilyRequest::ThmAb { .. } => FamilyId::ThmAb,
            FamilyRequest::CorAb { .. } => FamilyId::CorAb,
        }
    }

    pub fn build(&self) -> Result<FamilyBuild> {
        match self {
            FamilyRequest::Thm31 { v } => family_thm_3_1(*v),
            FamilyRequest::Thm32 { f, ingredient } => family_thm_3_2(*f, ingredient.clone()),
            FamilyRequest::Thm33 { v, m } => family_thm_3_3(*v, *m),
            FamilyRequest::Thm34 { f, lam, ingredient } => family_thm_3_4(*f, *lam, ingredient.clone()),
            FamilyRequest::Gen2k { v, k, filler } => family_gen_2k(*v, *k, filler.clone()),
            FamilyRequest::Cor2k { v, k } => family_cor_2k(*v, *k),
            FamilyRequest::ThmAb { v, k, z1 } => family_thm_ab(*v, *k, *z1),
            FamilyRequest::CorAb { v, k, z1 } => family_cor_ab(*v, *k, *z1),
        }
    }
}

/// A family instance: the spec and the λ predicted by the closed form.
#[derive(Clone, Debug)]
pub struct FamilyBuild {
    pub id: FamilyId,
    pub spec: ConstructionSpec,
    pub expected_lambda: u128,
}

impl FamilyBuild {
    /// `"3-(2v,k,λ)"` with the predicted λ.
    pub fn label(&self) -> String {
        format!("3-({},{},{})", 2 * self.spec.v, self.spec.k, self.expected_lambda)
    }
}

fn fail(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Err(Error::InvalidParameters(msg()))
    } else {
        Ok(())
    }
}

fn c(n: usize, r: usize) -> Result<u128> {
    if r > n {
        return Ok(0);
    }
    binomial(n as u64, r as u64).ok_or_else(|| Error::params(format!("C({n},{r}) overflows")))
}

fn q(n: u128) -> Q {
    Q::from_integer(n as i128)
}

fn integral(x: Q, what: &str) -> Result<u128> {
    if x.is_integer() && *x.numer() >= 0 {
        Ok(x.to_integer() as u128)
    } else {
        Err(Error::params(format!("{what} = {x} is not a nonnegative integer")))
    }
}

fn concat(core: ResolvedDesign, a: usize) -> Result<Arc<ResolvedDesign>> {
    Ok(Arc::new(concatenate_resolution(&core, a)?.0))
}

/// Guarantees the family invariant that every returned spec validates.
fn finish(id: FamilyId, spec: ConstructionSpec, expected_lambda: u128) -> Result<FamilyBuild> {
    validate_spec(&spec).map_err(Error::Validation)?;
    Ok(FamilyBuild {
        id,
        spec,
        expected_lambda,
    })
}

fn filler_matches(f: &Filler, v: usize, k: usize, lambda: u128) -> Result<()> {
    if f.v() != v || f.k() != k || f.lambda() as u128 != lambda {
        return Err(Error::Verification(format!(
            "ingredient is a 3-({},{},{}) design, expected 3-({v},{k},{lambda})",
            f.v(),
            f.k(),
            f.lambda()
        )));
    }
    Ok(())
}

/// Hypotheses of the `k = 5` one-pair family.
pub fn check_thm_3_1(v: usize) -> Result<()> {
    fail(v <= 5, || format!("v = {v} must exceed 5"))?;
    fail(v % 6 != 2, || format!("v = {v}: v ≢ 2 mod 6"))
}

/// One pair: `(v-2)/6` copies of a one-factorization of `K_v` against the
/// cyclic resolution of all triples, complete 3-(v,5) filler,
/// `z₁ = (v-4)/2`.
pub fn family_thm_3_1(v: usize) -> Result<FamilyBuild> {
    check_thm_3_1(v)?;
    let d1 = concat(round_robin_one_factorization(v)?, (v - 2) / 6)?;
    let d2 = Arc::new(cyclic_orbit_resolution(v, 3)?);
    let annulus = choose_annulus(d1.w(), (v - 4) / 2)?;
    let spec = ConstructionSpec {
        v,
        k: 5,
        mode: Mode::I,
        pairs: vec![PairSpec::new(d1, d2, annulus)],
        half: None,
        filler: Some(Filler::complete(v, 5)?),
    };
    let lambda = 3 * (v as u128 - 2) * (v as u128 - 4) / 4;
    finish(FamilyId::Thm31, spec, lambda)
}

/// `gcd(f, 6) = 1`, `f > 1`, and `2^f + 1` within the parallelism range.
pub fn check_f(f: u32) -> Result<()> {
    fail(f <= 1, || format!("f = {f} must exceed 1"))?;
    fail(f.gcd(&6) != 1, || format!("f = {f}: gcd(f,6) ≠ 1"))?;
    fail(f > 6, || format!("f = {f}: 2^f+1 exceeds the 128 points supported by the parallelism"))
}

/// One pair: `2^f - 1` copies of the cyclic (1,2)-resolution of `K_v`
/// against a parallelism of all triples, `v = 2^f + 1`, `z₁ = 5`, with an
/// imported simple 3-(v,5,10(2^f-2)) filler.
pub fn family_thm_3_2(f: u32, ingredient: Filler) -> Result<FamilyBuild> {
    check_f(f)?;
    let p = 1usize << f;
    let v = p + 1;
    filler_matches(&ingredient, v, 5, 10 * (p as u128 - 2))?;
    let d1 = concat(cyclic_orbit_resolution(v, 2)?, p - 1)?;
    let d2 = Arc::new(baranyai_parallelism(v, 3)?);
    let annulus = choose_annulus(d1.w(), 5)?;
    let spec = ConstructionSpec {
        v,
        k: 5,
        mode: Mode::I,
        pairs: vec![PairSpec::new(d1, d2, annulus)],
        half: None,
        filler: Some(ingredient),
    };
    finish(FamilyId::Thm32, spec, 15 * (p as u128 - 1))
}

/// Conditions on `v` alone for the `k = 7` two-pair family.
pub fn thm_3_3_conditions(v: usize) -> Result<()> {
    fail(v < 8, || format!("v = {v} is too small"))?;
    fail(v % 4 != 0, || format!("v = {v}: v ≢ 0 mod 4"))?;
    fail(v % 3 == 0, || format!("v = {v}: gcd(v,3) ≠ 1"))?;
    fail(v % 5 == 0, || format!("v = {v}: gcd(v,5) ≠ 1"))?;
    fail(c(v - 2, 3)? % 20 != 0, || format!("v = {v}: C(v-2,3)/20 is not an integer"))
}

pub fn check_thm_3_3(v: usize, m: usize) -> Result<()> {
    thm_3_3_conditions(v)?;
    fail(m == 0, || "m must be positive".into())?;
    fail(30 * m > v - 1, || format!("m = {m} exceeds (v-1)/30 = {}/30", v - 1))
}

/// Two pairs, `z₁ = 30m`, `z₂ = (v+10)m`, no filler.
pub fn family_thm_3_3(v: usize, m: usize) -> Result<FamilyBuild> {
    check_thm_3_3(v, m)?;
    let a1 = (c(v - 2, 3)? / 20) as usize;
    let d1 = concat(round_robin_one_factorization(v)?, a1)?;
    let d3 = Arc::new(cyclic_orbit_resolution(v, 5)?);
    let d2 = concat(cyclic_orbit_resolution(v, 3)?, v - 3)?;
    let d4 = Arc::new(baranyai_parallelism(v, 4)?);
    let a1 = choose_annulus(d1.w(), 30 * m)?;
    let a2 = choose_annulus(d2.w(), (v + 10) * m)?;
    let spec = ConstructionSpec {
        v,
        k: 7,
        mode: Mode::I,
        pairs: vec![PairSpec::new(d1, d3, a1), PairSpec::new(d2, d4, a2)],
        half: None,
        filler: None,
    };
    let v = v as u128;
    finish(FamilyId::Thm33, spec, 35 * v * (v - 2) * (v - 3) * m as u128 / 4)
}

/// Values of the 4-design λ admitted for the `k = 6` filler family.
pub const THM_3_4_LAMBDAS: [u64; 7] = [10, 60, 70, 90, 100, 150, 160];

/// Half pair: parallelism of all triples on `2^f + 1` points, `z = λ/2`,
/// with an imported simple 3-(2^f+1,6,λ(2^f-2)/3) filler.
pub fn family_thm_3_4(f: u32, lam: u64, ingredient: Filler) -> Result<FamilyBuild> {
    check_f(f)?;
    fail(!THM_3_4_LAMBDAS.contains(&lam), || {
        format!("λ = {lam} is not in {{10,60,70,90,100,150,160}}")
    })?;
    let p = 1usize << f;
    let v = p + 1;
    filler_matches(&ingredient, v, 6, lam as u128 * (p as u128 - 2) / 3)?;
    let half = Arc::new(baranyai_parallelism(v, 3)?);
    let annulus = choose_annulus(half.w(), lam as usize / 2)?;
    let spec = ConstructionSpec {
        v,
        k: 6,
        mode: Mode::II,
        pairs: vec![],
        half: Some(HalfPair::new(half, annulus)),
        filler: Some(ingredient),
    };
    finish(FamilyId::Thm34, spec, (p as u128 - 1) * lam as u128 / 2)
}

/// `m = Λ / (2 C(v-3,k-2))` after checking `gcd(v,k) = 1`, `v > 2k`,
/// `k ≥ 3` and `1 ≤ m ≤ C(v-1,k-1)/k`.
pub fn gen_2k_multiplier(v: usize, k: usize, big_lambda: u128) -> Result<u128> {
    fail(k < 3, || format!("k = {k} must be at least 3"))?;
    fail(v <= 2 * k, || format!("v = {v} must exceed 2k = {}", 2 * k))?;
    fail(v.gcd(&k) != 1, || format!("gcd(v,k) = gcd({v},{k}) ≠ 1"))?;
    let den = 2 * c(v - 3, k - 2)?;
    fail(big_lambda % den != 0, || {
        format!("m = Λ/2C(v-3,k-2) = {big_lambda}/{den} is not an integer")
    })?;
    let m = big_lambda / den;
    let bound = c(v - 1, k - 1)? / k as u128;
    fail(m == 0 || m > bound, || format!("m = {m} outside 1..=C(v-1,k-1)/k = {bound}"))?;
    Ok(m)
}

/// Half pair: cyclic resolution of all `k`-subsets, `z = m`.
pub fn family_gen_2k(v: usize, k: usize, filler: Filler) -> Result<FamilyBuild> {
    fail(filler.v() != v || filler.k() != 2 * k, || {
        format!("filler is on {} points with block size {}, expected {v} and {}", filler.v(), filler.k(), 2 * k)
    })?;
    let big_lambda = filler.lambda() as u128;
    let m = gen_2k_multiplier(v, k, big_lambda)?;
    let expected = integral(
        Q::new(k as i128 * (v as i128 - 2) * big_lambda as i128, 2 * (v as i128 - k as i128)),
        "k(v-2)Λ/(2(v-k))",
    )?;
    let half = Arc::new(cyclic_orbit_resolution(v, k)?);
    let annulus = choose_annulus(half.w(), m as usize)?;
    let spec = ConstructionSpec {
        v,
        k: 2 * k,
        mode: Mode::II,
        pairs: vec![],
        half: Some(HalfPair::new(half, annulus)),
        filler: Some(filler),
    };
    finish(FamilyId::Gen2k, spec, expected)
}

/// Hypotheses of [`family_cor_2k`].
pub fn check_cor_2k(v: usize, k: usize) -> Result<u128> {
    fail(k < 3, || format!("k = {k} must be at least 3"))?;
    fail(v <= 2 * k, || format!("v = {v} must exceed 2k = {}", 2 * k))?;
    gen_2k_multiplier(v, k, c(v - 3, 2 * k - 3)?)
}

/// [`family_gen_2k`] with the complete 3-(v,2k) filler.
pub fn family_cor_2k(v: usize, k: usize) -> Result<FamilyBuild> {
    check_cor_2k(v, k)?;
    let mut b = family_gen_2k(v, k, Filler::complete(v, 2 * k)?)?;
    b.id = FamilyId::Cor2k;
    Ok(b)
}

/// Coefficients of `Θ* - Δ* = -A z₁ + B z₂` for the two-pair mode II
/// family, from their defining expressions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ABPair {
    pub a: Ratio<i128>,
    pub b: Ratio<i128>,
}

impl ABPair {
    pub fn ratio(&self) -> Ratio<i128> {
        self.a / self.b
    }

    /// `A/B` when it is an integer.
    pub fn integral_ratio(&self) -> Option<u128> {
        let r = self.ratio();
        r.is_integer().then(|| r.to_integer() as u128)
    }
}

/// `A = C(v-3,2k-3)·(v(4k²-10k+2)+8k)/((2k-2)(2k-1))`,
/// `B = 2·C(v-3,k-2)·(v-k-1)/(k-1)`.
///
/// Requires `k ≥ 3`, `v > k + 1` (so that `B > 0`), `gcd(v,2k) = 1` and
/// `gcd(v,k+1) = 1`. `A` may vanish or be fractional.
pub fn compute_ab(v: usize, k: usize) -> Result<ABPair> {
    fail(k < 3, || format!("k = {k} must be at least 3"))?;
    fail(v <= k + 1, || format!("v = {v} must exceed k + 1 = {}", k + 1))?;
    fail(v.gcd(&(2 * k)) != 1, || format!("gcd(v,2k) = gcd({v},{}) ≠ 1", 2 * k))?;
    fail(v.gcd(&(k + 1)) != 1, || format!("gcd(v,k+1) = gcd({v},{}) ≠ 1", k + 1))?;
    let (vi, ki) = (v as i128, k as i128);
    let a = q(c(v - 3, 2 * k - 3)?) * Q::new(vi * (4 * ki * ki - 10 * ki + 2) + 8 * ki, (2 * ki - 2) * (2 * ki - 1));
    let b = q(2 * c(v - 3, k - 2)?) * Q::new(vi - ki - 1, ki - 1);
    Ok(ABPair { a, b })
}

/// The simplified closed forms of `A/B` quoted for `k = 3` and `k = 4`:
/// `(v-5)(v-3)/15` and `(v-6)(v-7)(13v+16)/840`.
///
/// The `k = 3` form disagrees with [`compute_ab`] (e.g. 168/15 against 16
/// at `v = 17`); `(v-5)(v+3)/15` is what the definitions give. It is kept
/// only so the discrepancy can be reported.
pub fn simplified_ab_ratio(v: usize, k: usize) -> Option<Ratio<i128>> {
    let v = v as i128;
    match k {
        3 => Some(Q::new((v - 5) * (v - 3), 15)),
        4 => Some(Q::new((v - 6) * (v - 7) * (13 * v + 16), 840)),
        _ => None,
    }
}

/// Hypotheses of [`family_thm_ab`]; returns `(A/B, z₂)`.
pub fn check_thm_ab(v: usize, k: usize, z1: usize) -> Result<(u128, u128)> {
    let ab = compute_ab(v, k)?;
    fail(v <= 2 * k, || format!("v = {v} must exceed 2k = {}", 2 * k))?;
    let r = ab
        .integral_ratio()
        .ok_or_else(|| Error::params(format!("A/B = {} is not an integer", ab.ratio())))?;
    fail(z1 == 0 || z1 > (v - 1) / 2, || format!("z1 = {z1} outside 1..=(v-1)/2 = {}", (v - 1) / 2))?;
    let z2 = r * z1 as u128;
    let w2 = c(v - 1, k)? / (k as u128 + 1);
    fail(z2 == 0, || "z2 = z1·A/B = 0".into())?;
    fail(z2 > w2, || format!("z2 = z1·A/B = {z2} exceeds C(v-1,k)/(k+1) = {w2}"))?;
    fail(c(v - 2, 2 * k - 2)? % (k as u128 * (2 * k as u128 - 1)) != 0, || {
        format!("C(v-2,2k-2)/(k(2k-1)) is not an integer for v = {v}")
    })?;
    Ok((r, z2))
}

/// One full pair (copies of the cyclic (1,2)-resolution of `K_v` against
/// the cyclic resolution of all `2k`-subsets) with `z₁`, and the cyclic
/// resolution of all `(k+1)`-subsets as half pair with `z₂ = z₁·A/B`.
pub fn family_thm_ab(v: usize, k: usize, z1: usize) -> Result<FamilyBuild> {
    let (_, z2) = check_thm_ab(v, k, z1)?;
    let a1 = c(v - 2, 2 * k - 2)? / (k as u128 * (2 * k as u128 - 1));
    let d1 = concat(cyclic_orbit_resolution(v, 2)?, a1 as usize)?;
    let d3 = Arc::new(cyclic_orbit_resolution(v, 2 * k)?);
    let d2 = Arc::new(cyclic_orbit_resolution(v, k + 1)?);
    let pair = PairSpec::new(d1.clone(), d3, choose_annulus(d1.w(), z1)?);
    let half = HalfPair::new(d2.clone(), choose_annulus(d2.w(), z2 as usize)?);
    let spec = ConstructionSpec {
        v,
        k: 2 * k + 2,
        mode: Mode::II,
        pairs: vec![pair],
        half: Some(half),
        filler: None,
    };
    let expected = integral(
        q(c(v - 2, 2 * k - 2)?) * Q::new(4 * k as i128, 2 * k as i128 - 1) * q(z1 as u128)
            + q(c(v - 2, k - 1)? * (k as u128 + 1) * z2),
        "Θ*",
    )?;
    finish(FamilyId::ThmAb, spec, expected)
}

/// Conditions of the `k = 3, 4` AB family, from the
/// definitions: `gcd(v,2k) = gcd(v,k+1) = 1`, `v > 2k` and `A/B` integral.
pub fn cor_ab_conditions(v: usize, k: usize) -> Result<u128> {
    fail(!(3..=4).contains(&k), || format!("k = {k}: COR_AB covers k = 3, 4"))?;
    fail(v <= 2 * k, || format!("v = {v} must exceed 2k = {}", 2 * k))?;
    let ab = compute_ab(v, k)?;
    ab.integral_ratio()
        .ok_or_else(|| Error::params(format!("A/B = {} is not an integer", ab.ratio())))
}

/// [`family_thm_ab`] for `k = 3, 4`, checked against the
/// closed forms `(7/30)v(v-2)(v-3)(v-5)z₁` and `81v·C(v-2,6)z₁/(7(v-5))`.
pub fn family_cor_ab(v: usize, k: usize, z1: usize) -> Result<FamilyBuild> {
    cor_ab_conditions(v, k)?;
    let mut b = family_thm_ab(v, k, z1)?;
    let (vq, z) = (v as i128, z1 as i128);
    let closed = match k {
        3 => Q::new(7 * vq * (vq - 2) * (vq - 3) * (vq - 5) * z, 30),
        _ => q(c(v - 2, 6)?) * Q::new(81 * vq * z, 7 * (vq - 5)),
    };
    let closed = integral(closed, "closed-form λ")?;
    if closed != b.expected_lambda {
        return Err(Error::Verification(format!(
            "closed form {closed} differs from Θ* = {}",
            b.expected_lambda
        )));
    }
    b.id = FamilyId::CorAb;
    Ok(b)
}

/// All `(z₁, z₂)` with `A z₁ = B z₂`, `1 ≤ z₁ ≤ z1_max`, `1 ≤ z₂ ≤ z2_max`,
/// ascending: the multiples of `(B/g, A/g)` with `g = gcd(A, B)`.
pub fn solve_z(a: u128, b: u128, z1_max: u128, z2_max: u128) -> Vec<(u128, u128)> {
    if a == 0 || b == 0 {
        return Vec::new();
    }
    let g = a.gcd(&b);
    let (s1, s2) = (b / g, a / g);
    (1..)
        .map(|n| (n * s1, n * s2))
        .take_while(|&(z1, z2)| z1 <= z1_max && z2 <= z2_max)
        .collect()
}
