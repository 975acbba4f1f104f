#![allow(dead_code)]

use carpet_core::{validate, CarpetSystem, DiagonalMap, RatioMultiset};
use rand::Rng;

/// Column A holds maps 0 and 1, column B holds map 2; every map is 1/2 x 1/4.
pub fn gl3() -> CarpetSystem {
    validate(
        [[0, 1, 0, 1], [0, 1, 1, 2], [1, 2, 0, 1]]
            .iter()
            .map(|&[n1, d1, n2, d2]| DiagonalMap::from_rationals([(1, 2), (1, 4), (n1, d1), (n2, d2)]).unwrap())
            .collect(),
    )
    .unwrap()
}

/// Two 1/2 x 1/4 maps side by side on the bottom row.
pub fn two_map() -> CarpetSystem {
    validate(vec![
        DiagonalMap::from_rationals([(1, 2), (1, 4), (0, 1), (0, 1)]).unwrap(),
        DiagonalMap::from_rationals([(1, 2), (1, 4), (1, 2), (0, 1)]).unwrap(),
    ])
    .unwrap()
}

/// Random Gatzouras-Lalley system: 1 to 4 columns of random width, each with 1 to
/// 4 stacked maps shorter than the column is wide, at least two maps overall.
pub fn random_gl(rng: &mut impl Rng) -> CarpetSystem {
    loop {
        let columns = rng.gen_range(1..=4usize);
        let slot = 1.0 / columns as f64;
        let mut maps = Vec::new();
        for c in 0..columns {
            let width = slot * rng.gen_range(0.3..0.95);
            let x = c as f64 * slot + rng.gen_range(0.0..(slot - width));
            let count = rng.gen_range(1..=4usize);
            let row = 1.0 / count as f64;
            for i in 0..count {
                let height = (row * rng.gen_range(0.2..0.95)).min(width * rng.gen_range(0.2..0.95));
                let y = i as f64 * row + rng.gen_range(0.0..(row - height));
                maps.push(DiagonalMap::new(width, height, x, y));
            }
        }
        if maps.len() >= 2 {
            return validate(maps).expect("valid by construction");
        }
    }
}

pub fn random_multiset(rng: &mut impl Rng) -> RatioMultiset {
    let n = rng.gen_range(1..=4usize);
    RatioMultiset::new((0..n).map(|_| rng.gen_range(0.05..0.5)).collect()).unwrap()
}

pub fn random_window(rng: &mut impl Rng, len: usize) -> Vec<RatioMultiset> {
    (0..len).map(|_| random_multiset(rng)).collect()
}
