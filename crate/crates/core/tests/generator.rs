use std::collections::BTreeSet;

use polyunfold::gen::{instance, random_orthoconvex_polyomino, rng_for, GenConfig};
use polyunfold::model::{load_voxels, validate};
use proptest::prelude::*;

type Shape = BTreeSet<(i32, i32)>;

fn normalized(s: &Shape) -> Shape {
    let x0 = s.iter().map(|c| c.0).min().unwrap();
    let y0 = s.iter().map(|c| c.1).min().unwrap();
    s.iter().map(|&(x, y)| (x - x0, y - y0)).collect()
}

fn connected(s: &Shape) -> bool {
    let start = *s.iter().next().unwrap();
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some((x, y)) = stack.pop() {
        for n in [(x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)] {
            if s.contains(&n) && seen.insert(n) {
                stack.push(n);
            }
        }
    }
    seen.len() == s.len()
}

/// Every row and column meets the shape in one run.
fn convex(s: &Shape) -> bool {
    let runs = |line: Vec<i32>| line.windows(2).all(|w| w[1] == w[0] + 1);
    let xs: BTreeSet<i32> = s.iter().map(|c| c.0).collect();
    let ys: BTreeSet<i32> = s.iter().map(|c| c.1).collect();
    xs.iter().all(|&x| runs(s.iter().filter(|c| c.0 == x).map(|c| c.1).collect()))
        && ys.iter().all(|&y| runs(s.iter().filter(|c| c.1 == y).map(|c| c.0).collect()))
}

/// All fixed connected orthoconvex shapes of `n` cells, by subset enumeration of an `n x n` box.
fn enumerate(n: usize) -> BTreeSet<Shape> {
    let cells: Vec<(i32, i32)> = (0..n as i32).flat_map(|y| (0..n as i32).map(move |x| (x, y))).collect();
    let mut out = BTreeSet::new();
    for mask in 0u32..(1 << cells.len()) {
        if mask.count_ones() as usize != n {
            continue;
        }
        let s: Shape = cells.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &c)| c).collect();
        if connected(&s) && convex(&s) {
            out.insert(normalized(&s));
        }
    }
    out
}

#[test]
fn tetromino_classes_all_appear() {
    let oracle = enumerate(4);
    assert_eq!(oracle.len(), 19);
    let mut rng = rng_for(42, 0);
    let mut seen = BTreeSet::new();
    for _ in 0..10_000 {
        let s = random_orthoconvex_polyomino(&mut rng, 4).unwrap();
        if s.len() == 4 {
            let s = normalized(&s);
            assert!(oracle.contains(&s), "{s:?}");
            seen.insert(s);
        }
    }
    assert_eq!(seen, oracle);
}

#[test]
fn small_polyominoes_match_enumeration() {
    for n in 1..=3 {
        let oracle = enumerate(n);
        let mut rng = rng_for(9, n as u64);
        let mut seen = BTreeSet::new();
        for _ in 0..5_000 {
            let s = random_orthoconvex_polyomino(&mut rng, n).unwrap();
            if s.len() == n {
                seen.insert(normalized(&s));
            }
        }
        assert_eq!(seen, oracle, "size {n}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn polyominoes_are_convex_connected_and_boxed(seed in any::<u64>(), extent in 1usize..12) {
        let s = random_orthoconvex_polyomino(&mut rng_for(seed, 0), extent).unwrap();
        prop_assert!(connected(&s));
        prop_assert!(convex(&s));
        prop_assert!(s.iter().all(|&(x, y)| (0..extent as i32).contains(&x) && (0..extent as i32).contains(&y)));
    }

    #[test]
    fn instances_validate_and_round_trip(seed in any::<u64>(), k in 0u64..1000, layers in 1usize..7, extent in 1usize..11) {
        let cfg = GenConfig { seed, max_layers: layers, max_extent: extent, ..GenConfig::default() };
        let p = instance(&cfg, k).unwrap();
        prop_assert!(validate(&p).ok());
        prop_assert!(p.layers() <= layers);
        prop_assert_eq!(&load_voxels(&p.to_text()).unwrap(), &p);
        prop_assert_eq!(instance(&cfg, k).unwrap(), p);
    }
}
