mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tridesign::combinatorics::binomial;
use tridesign::construction::{assemble, choose_annulus, validate_spec, Annulus, BlockType, CoverageCounter};
use tridesign::families::solve_z;
use tridesign::io::{read_raw, write_design, Declared, Format};
use tridesign::resolution::{baranyai_parallelism, cyclic_orbit_resolution};
use tridesign::resolvability::{cells, find_multipliers, pair_sigmas, partition_constructed, verify_cells};
use tridesign::{
    class_distance, complete_design, concatenate_resolution, is_simple, lambda_profile, union_copies,
    verify_resolution, Design, Point,
};

/// Least common σ by brute force over `σ ≤ min cells_h·σ_h`.
fn brute_sigma(s: &[u64], cells: &[u128]) -> Option<u128> {
    let bound = s.iter().zip(cells).map(|(&x, &n)| x as u128 * n).min()?;
    (1..=bound).find(|&sigma| {
        s.iter()
            .zip(cells)
            .all(|(&x, &n)| sigma % x as u128 == 0 && n % (sigma / x as u128) == 0)
    })
}

fn complete_union_check(r: &tridesign::ResolvedDesign) {
    let all = complete_design(r.v(), r.k()).unwrap();
    assert_eq!(r.base_design(), &all);
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn class_distance_is_a_circular_metric(w in 2usize..60, i in 1usize..60, j in 1usize..60) {
        let (i, j) = (1 + (i - 1) % w, 1 + (j - 1) % w);
        let d = class_distance(w, i, j).unwrap();
        prop_assert_eq!(d, class_distance(w, j, i).unwrap());
        prop_assert!(d <= w / 2);
        prop_assert_eq!(d == 0, i == j);
    }

    #[test]
    fn annulus_width_counts_offsets(w in 1usize..80, eps in 0usize..2, s in 0usize..45) {
        let a = Annulus::new(eps, s);
        if let Ok(z) = a.width(w) {
            prop_assert_eq!(a.offsets(w).unwrap().len(), z);
            let direct = (1..=w).filter(|&j| {
                let d = class_distance(w, 1, j).unwrap();
                eps <= d && d <= s
            }).count();
            prop_assert_eq!(direct, z);
        }
    }

    #[test]
    fn choose_annulus_realizes_every_width(w in 1usize..120, z in 1usize..120) {
        prop_assume!(z <= w);
        let a = choose_annulus(w, z).unwrap();
        prop_assert_eq!(a.width(w).unwrap(), z);
    }

    #[test]
    fn pascal_identity(n in 1u64..120, r in 1u64..60) {
        let lhs = binomial(n, r);
        let rhs = binomial(n - 1, r).zip(binomial(n - 1, r - 1)).and_then(|(a, b)| a.checked_add(b));
        if let (Some(l), Some(r)) = (lhs, rhs) {
            prop_assert_eq!(l, r);
        }
    }

    #[test]
    fn cyclic_orbits_resolve_the_complete_design(v in 4usize..16, k in 2usize..6) {
        prop_assume!(k + 1 < v && num_integer::gcd(v, k) == 1);
        let r = cyclic_orbit_resolution(v, k).unwrap();
        prop_assert_eq!(verify_resolution(&r).unwrap(), k as u64);
        prop_assert_eq!(r.w() as u128 * v as u128, binomial(v as u64, k as u64).unwrap());
        complete_union_check(&r);
    }

    #[test]
    fn concatenation_repeats_classes(a in 1usize..5) {
        let base = cyclic_orbit_resolution(7, 3).unwrap();
        let (r, core) = concatenate_resolution(&base, a).unwrap();
        prop_assert_eq!((core.t, core.a), (5, a));
        prop_assert_eq!(r.w(), 5 * a);
        prop_assert_eq!(verify_resolution(&r).unwrap(), 3);
        for i in 0..r.w() {
            prop_assert_eq!(r.class(i), base.class(i % 5));
        }
    }

    #[test]
    fn union_copies_scales_the_profile(a in 1usize..4, v in 5usize..9, k in 2usize..4) {
        let d = complete_design(v, k).unwrap();
        let u = union_copies(&d, a).unwrap();
        let (p, q) = (lambda_profile(&d, k).unwrap(), lambda_profile(&u, k).unwrap());
        for s in 0..=k {
            prop_assert_eq!(q.lambda(s).unwrap(), a as u64 * p.lambda(s).unwrap());
        }
        prop_assert_eq!(is_simple(&u).is_ok(), a == 1);
    }

    #[test]
    fn text_and_json_round_trip(seed in any::<u64>(), json in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = rand::Rng::gen_range(&mut rng, 4..20usize);
        let k = rand::Rng::gen_range(&mut rng, 2..v);
        let n = rand::Rng::gen_range(&mut rng, 0..40usize);
        let blocks: Vec<Vec<Point>> = (0..n).map(|_| {
            let mut pts: Vec<Point> = (0..v as Point).collect();
            rand::seq::SliceRandom::shuffle(&mut pts[..], &mut rng);
            pts.truncate(k);
            pts
        }).collect();
        let d = Design::new(v, k, &blocks).unwrap();
        let format = if json { Format::Json } else { Format::Text };
        let mut buf = Vec::new();
        write_design(&mut buf, &d, &Declared::default(), format).unwrap();
        let raw = read_raw(&buf[..], format).unwrap();
        let back = Design::new(raw.v, raw.k, raw.blocks()).unwrap();
        prop_assert_eq!(&back, &d);
        let mut again = Vec::new();
        write_design(&mut again, &back, &Declared::default(), format).unwrap();
        prop_assert_eq!(buf, again);
    }

    #[test]
    fn solve_z_is_complete(a in 1u128..200, b in 1u128..200, m1 in 1u128..60, m2 in 1u128..60) {
        let sols = solve_z(a, b, m1, m2);
        for &(z1, z2) in &sols {
            prop_assert_eq!(a * z1, b * z2);
        }
        let brute: Vec<(u128, u128)> = (1..=m1)
            .flat_map(|z1| (1..=m2).map(move |z2| (z1, z2)))
            .filter(|&(z1, z2)| a * z1 == b * z2)
            .collect();
        prop_assert_eq!(sols, brute);
    }

    #[test]
    fn multipliers_equalize_sigma(s in prop::collection::vec(1u64..40, 1..4), c in prop::collection::vec(1u128..400, 4)) {
        let cells = &c[..s.len()];
        match find_multipliers(&s, cells) {
            Ok(choice) => {
                prop_assert_eq!(Some(choice.sigma), brute_sigma(&s, cells));
                for h in 0..s.len() {
                    prop_assert_eq!(choice.multipliers[h] * s[h] as u128, choice.sigma);
                    prop_assert_eq!(cells[h] % choice.multipliers[h], 0);
                }
            }
            Err(_) => prop_assert_eq!(brute_sigma(&s, cells), None),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn baranyai_partitions_all_subsets(idx in 0usize..8) {
        let (v, k) = [(6, 2), (6, 3), (8, 4), (9, 3), (10, 5), (12, 3), (12, 4), (12, 6)][idx];
        let r = baranyai_parallelism(v, k).unwrap();
        prop_assert_eq!(verify_resolution(&r).unwrap(), 1);
        complete_union_check(&r);
    }

    #[test]
    fn random_specs_meet_their_counts(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let drawn = common::draw_spec(&mut rng);
        let Ok(summary) = validate_spec(&drawn.spec) else { return Ok(()); };
        let built = assemble(&drawn.spec).unwrap();
        prop_assert_eq!(built.design.len() as u128, summary.total_blocks());
        prop_assert!(is_simple(&built.design).is_ok(), "{}", drawn.name);
        let p = lambda_profile(&built.design, 3).unwrap();
        prop_assert_eq!(p.lambda(3).map(u128::from), Some(summary.theta), "{}", drawn.name);

        // mirrored types come in equal numbers
        let count = |t: BlockType| built.provenance.iter().filter(|p| p.btype == t).count();
        prop_assert_eq!(count(BlockType::II), count(BlockType::III));

        // coverage counter agrees on a few triples
        let counter = CoverageCounter::new(&drawn.spec).unwrap();
        let n = 2 * drawn.spec.v as Point;
        for (a, b, c) in [(0, 1, 2), (0, n / 2, n - 1), (1, n / 2 + 1, n / 2 + 2)] {
            let t = [a, b, c];
            prop_assert_eq!(counter.count(&t).unwrap().total(), summary.theta);
        }

        if summary.lambda == 0 {
            let sig = pair_sigmas(&summary).unwrap();
            verify_cells(&built.design, &built.provenance, &sig).unwrap();
            let choice = find_multipliers(
                &sig.iter().map(|s| s.sigma).collect::<Vec<_>>(),
                &sig.iter().map(|s| s.cell_count).collect::<Vec<_>>(),
            );
            if let Ok(choice) = choice {
                let r = partition_constructed(&built.design, &built.provenance, &sig, &choice).unwrap();
                let expected: u128 = sig.iter().zip(&choice.multipliers).map(|(s, m)| s.cell_count / m).sum();
                prop_assert_eq!(r.w() as u128, expected);
                prop_assert_eq!(cells(&built.provenance).unwrap().len() as u128, sig.iter().map(|s| s.cell_count).sum::<u128>());
            }
        }
    }
}
