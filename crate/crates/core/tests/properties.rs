mod common;

use carpet_core::closed_form::{baranski_dims, gl_dims, gl_hausdorff};
use carpet_core::geometry::{approximate_square, cylinders_to_scale, hausdorff_distance, PointCloud, Valuation};
use carpet_core::moran::theta_window;
use carpet_core::{
    classify_word, nonauto_assouad, solve_moran, validate, Axis, ColumnSequence, EventuallyPeriodicWord, OmegaClass,
    RatioMultiset,
};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn ratios() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.01f64..0.99, 1..8)
}

fn random_word(rng: &mut impl Rng, n: usize, len: usize) -> Vec<usize> {
    (0..len).map(|_| rng.gen_range(0..n)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn moran_root_is_a_root(rs in ratios()) {
        let s = solve_moran(&rs).unwrap();
        prop_assert!(s >= 0.0);
        if rs.len() > 1 {
            let sum: f64 = rs.iter().map(|r| r.powf(s)).sum();
            prop_assert!((sum - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn moran_ignores_order(mut rs in ratios(), seed in any::<u64>()) {
        let s = solve_moran(&rs).unwrap();
        rs.shuffle(&mut rng(seed));
        prop_assert!((solve_moran(&rs).unwrap() - s).abs() < 1e-12);
    }

    #[test]
    fn moran_grows_with_more_maps(rs in ratios(), extra in 0.01f64..0.99) {
        let s = solve_moran(&rs).unwrap();
        let mut more = rs.clone();
        more.push(extra);
        prop_assert!(solve_moran(&more).unwrap() > s);
    }

    #[test]
    fn joined_windows_sit_between_the_parts(seed in any::<u64>(), l1 in 1usize..5, l2 in 1usize..5) {
        let mut g = rng(seed);
        let w1 = common::random_window(&mut g, l1);
        let w2 = common::random_window(&mut g, l2);
        let (t1, t2) = (theta_window(&w1).unwrap(), theta_window(&w2).unwrap());
        let joined: Vec<RatioMultiset> = w1.iter().chain(&w2).cloned().collect();
        let t = theta_window(&joined).unwrap();
        prop_assert!(t >= t1.min(t2) - 1e-12 && t <= t1.max(t2) + 1e-12);
    }

    #[test]
    fn repeated_window_keeps_theta(seed in any::<u64>(), m in 1usize..8) {
        let mut g = rng(seed);
        let one = common::random_window(&mut g, 1);
        let copies = vec![one[0].clone(); m];
        prop_assert!((theta_window(&copies).unwrap() - theta_window(&one).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn fiber_assouad_depends_only_on_the_period_cycle(seed in any::<u64>(), len in 1usize..5, shift in 0usize..5) {
        let mut g = rng(seed);
        let period = common::random_window(&mut g, len);
        let base = nonauto_assouad(&ColumnSequence::periodic(period.clone()).unwrap());
        let n = g.gen_range(0..4usize);
        let pre = common::random_window(&mut g, n);
        let with_pre = nonauto_assouad(&ColumnSequence::new(pre, period.clone()).unwrap());
        let mut rotated = period.clone();
        rotated.rotate_left(shift % len);
        let doubled: Vec<RatioMultiset> = period.iter().chain(&period).cloned().collect();
        prop_assert!((with_pre - base).abs() < 1e-12);
        prop_assert!((nonauto_assouad(&ColumnSequence::periodic(rotated).unwrap()) - base).abs() < 1e-12);
        prop_assert!((nonauto_assouad(&ColumnSequence::periodic(doubled).unwrap()) - base).abs() < 1e-12);
    }

    #[test]
    fn grid_distance_matches_brute_force(
        a in prop::collection::vec((0.0f64..1.0, 0.0f64..1.0), 1..60),
        b in prop::collection::vec((0.0f64..1.0, 0.0f64..1.0), 1..60),
    ) {
        let directed = |p: &[(f64, f64)], q: &[(f64, f64)]| {
            p.iter()
                .map(|x| q.iter().map(|y| (x.0 - y.0).hypot(x.1 - y.1)).fold(f64::INFINITY, f64::min))
                .fold(0.0, f64::max)
        };
        let brute = directed(&a, &b).max(directed(&b, &a));
        let got = hausdorff_distance(&PointCloud::new(a, 0.0).unwrap(), &PointCloud::new(b, 0.0).unwrap()).unwrap();
        prop_assert!((got - brute).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn gl_dimension_ordering(seed in any::<u64>()) {
        let sys = common::random_gl(&mut rng(seed));
        let r = gl_dims(&sys).unwrap();
        let tol = 1e-9;
        prop_assert!(r.dim_l <= r.dim_h + tol && r.dim_h <= r.dim_b + tol && r.dim_b <= r.dim_a + tol, "{r:?}");
        prop_assert!(r.diagnostics.box_residual <= 1e-12);
        if r.diagnostics.interior_maximizer {
            prop_assert!(r.argmax_p.iter().all(|&p| p >= 1e-9));
        }
        // a GL carpet is a Barański carpet whose second direction is empty
        let b = baranski_dims(&sys).unwrap();
        prop_assert!(b.axis(Axis::Y).d.is_none());
        prop_assert!((b.axis(Axis::X).d.unwrap() - gl_hausdorff(&sys).unwrap().0).abs() < 1e-6);
    }

    #[test]
    fn gl_points_are_in_omega_one(seed in any::<u64>()) {
        let mut g = rng(seed);
        let sys = common::random_gl(&mut g);
        let n = sys.len();
        let (lp, lq) = (g.gen_range(0..4), g.gen_range(1..4));
        let gamma = EventuallyPeriodicWord::new(random_word(&mut g, n, lp), random_word(&mut g, n, lq)).unwrap();
        let c = classify_word(&sys, &gamma).unwrap();
        prop_assert_eq!(c.class, OmegaClass::Omega1);
        let bare = EventuallyPeriodicWord::periodic(gamma.period.clone()).unwrap();
        prop_assert_eq!(classify_word(&sys, &bare).unwrap(), c);
    }

    #[test]
    fn relabelling_maps_keeps_the_structure(seed in any::<u64>()) {
        let mut g = rng(seed);
        let sys = common::random_gl(&mut g);
        let mut maps = sys.maps().to_vec();
        maps.shuffle(&mut g);
        let other = validate(maps).unwrap();
        prop_assert_eq!(other.class(), sys.class());
        for axis in Axis::BOTH {
            let sizes = |s: &carpet_core::CarpetSystem| {
                let mut v: Vec<usize> = s.partition(axis).iter().map(Vec::len).collect();
                v.sort();
                v
            };
            prop_assert_eq!(sizes(&other), sizes(&sys));
            prop_assert_eq!(other.ssc(axis), sys.ssc(axis));
        }
    }

    #[test]
    fn cylinder_sections(seed in any::<u64>(), e in 1.0f64..6.0) {
        let sys = common::random_gl(&mut rng(seed));
        let r = 2f64.powf(-e);
        let section = cylinders_to_scale(&sys, r, Valuation::MinSide).unwrap();
        let total_area: f64 = section.iter().map(|c| c.rect.width * c.rect.height).sum();
        let full: f64 = sys.maps().iter().map(|m| m.r1 * m.r2).sum::<f64>();
        for c in &section {
            let short = c.rect.width.min(c.rect.height);
            prop_assert!(short <= r * (1.0 + 1e-12));
            let parent = sys.word_rect(&c.word[..c.word.len() - 1]);
            prop_assert!(parent.width.min(parent.height) > r * (1.0 - 1e-12));
        }
        // a section never holds a word together with one of its prefixes
        let words: std::collections::HashSet<&[usize]> = section.iter().map(|c| c.word.as_slice()).collect();
        for c in &section {
            for k in 1..c.word.len() {
                prop_assert!(!words.contains(&c.word[..k]));
            }
        }
        prop_assert!(total_area <= full + 1e-12);
    }

    #[test]
    fn approximate_squares_are_roughly_square(seed in any::<u64>(), k in 1usize..8) {
        let mut g = rng(seed);
        let sys = common::random_gl(&mut g);
        let n = sys.len();
        let gamma = EventuallyPeriodicWord::periodic(random_word(&mut g, n, 3)).unwrap();
        let q = approximate_square(&sys, &gamma, k).unwrap();
        let bound = 1.0 / sys.min_ratio(q.axis);
        prop_assert!(q.aspect() >= 1.0 - 1e-12 && q.aspect() <= bound * (1.0 + 1e-12), "{} vs {bound}", q.aspect());
    }
}
