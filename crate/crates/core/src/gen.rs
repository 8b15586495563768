//! Seeded random polycubes with orthogonally convex layers.
//!
//! The generator is ChaCha8 seeded from a 64-bit integer; instance `k` of a run draws
//! from stream `k` of that seed, so instances can be produced in any order.

use std::collections::BTreeSet;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geom::Vec3;
use crate::model::{is_connected_polyomino, is_orthogonally_convex, validate, Polycube};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenConfig {
    pub seed: u64,
    pub max_layers: usize,
    /// Side of the square box each layer is drawn in.
    pub max_extent: usize,
    pub attempts: usize,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig { seed: 42, max_layers: 6, max_extent: 10, attempts: 10_000 }
    }
}

pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Values in `[0, n)` arranged to fall then rise (`valley`) or rise then fall.
fn unimodal<R: Rng>(rng: &mut R, len: usize, n: i32, valley: bool) -> Vec<i32> {
    let mut v: Vec<i32> = (0..len).map(|_| rng.gen_range(0..n)).collect();
    let p = rng.gen_range(0..len);
    let (head, tail) = v.split_at_mut(p);
    head.sort_unstable();
    tail.sort_unstable();
    if valley {
        head.reverse();
    } else {
        tail.reverse();
    }
    v
}

/// A connected, orthogonally convex polyomino inside a `max_extent` square box.
pub fn random_orthoconvex_polyomino<R: Rng>(rng: &mut R, max_extent: usize) -> Result<BTreeSet<(i32, i32)>> {
    if max_extent == 0 {
        return Err(Error::Invalid("extent must be at least 1".into()));
    }
    let e = max_extent as i32;
    for _ in 0..10_000 {
        let rows = rng.gen_range(1..=max_extent);
        let y0 = rng.gen_range(0..=e - rows as i32);
        let lefts = unimodal(rng, rows, e, true);
        let rights = unimodal(rng, rows, e, false);
        if lefts.iter().zip(&rights).any(|(l, r)| l > r) {
            continue;
        }
        let overlaps = (1..rows).all(|k| lefts[k].max(lefts[k - 1]) <= rights[k].min(rights[k - 1]));
        if !overlaps {
            continue;
        }
        let cells: BTreeSet<(i32, i32)> =
            (0..rows).flat_map(|k| (lefts[k]..=rights[k]).map(move |x| (x, y0 + k as i32))).collect();
        if is_connected_polyomino(&cells) && is_orthogonally_convex(&cells) {
            return Ok(cells);
        }
    }
    Err(Error::Exhausted(10_000))
}

/// One valid polycube drawn from `rng`.
pub fn polycube_from<R: Rng>(rng: &mut R, cfg: &GenConfig) -> Result<Polycube> {
    if cfg.max_layers == 0 {
        return Err(Error::Invalid("at least one layer is required".into()));
    }
    for _ in 0..cfg.attempts {
        let layers = rng.gen_range(1..=cfg.max_layers);
        let mut cubes: Vec<Vec3> = Vec::new();
        let mut prev: Option<BTreeSet<(i32, i32)>> = None;
        let mut ok = true;
        for z in 0..layers {
            let shape = random_orthoconvex_polyomino(rng, cfg.max_extent)?;
            let placed = match &prev {
                None => shape,
                Some(below) => {
                    let e = cfg.max_extent as i32;
                    let mut found = None;
                    for _ in 0..64 {
                        let (dx, dy) = (rng.gen_range(-e / 2..=e / 2), rng.gen_range(-e / 2..=e / 2));
                        let moved: BTreeSet<(i32, i32)> = shape.iter().map(|&(x, y)| (x + dx, y + dy)).collect();
                        if moved.iter().any(|c| below.contains(c)) {
                            found = Some(moved);
                            break;
                        }
                    }
                    match found {
                        Some(m) => m,
                        None => {
                            ok = false;
                            break;
                        }
                    }
                }
            };
            cubes.extend(placed.iter().map(|&(x, y)| [x, y, z as i32]));
            prev = Some(placed);
        }
        if !ok {
            continue;
        }
        let p = Polycube::new(cubes)?;
        if validate(&p).ok() {
            return Ok(p);
        }
    }
    Err(Error::Exhausted(cfg.attempts))
}

/// First instance of the run described by `cfg`.
pub fn random_polycube(cfg: &GenConfig) -> Result<Polycube> {
    instance(cfg, 0)
}

/// Instance `k` of the run described by `cfg`.
pub fn instance(cfg: &GenConfig, k: u64) -> Result<Polycube> {
    polycube_from(&mut rng_for(cfg.seed, k), cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extent_one_is_a_cell() {
        let mut rng = rng_for(1, 0);
        assert_eq!(random_orthoconvex_polyomino(&mut rng, 1).unwrap(), BTreeSet::from([(0, 0)]));
        let cfg = GenConfig { seed: 1, max_layers: 1, max_extent: 1, attempts: 10 };
        assert_eq!(random_polycube(&cfg).unwrap().len(), 1);
    }

    #[test]
    fn same_config_same_instances() {
        let cfg = GenConfig::default();
        for k in 0..5 {
            assert_eq!(instance(&cfg, k).unwrap(), instance(&cfg, k).unwrap());
        }
        assert_ne!(instance(&cfg, 0).unwrap(), instance(&cfg, 1).unwrap());
    }

    #[test]
    fn instances_validate() {
        let cfg = GenConfig { seed: 7, max_layers: 4, max_extent: 5, attempts: 1000 };
        for k in 0..30 {
            let p = instance(&cfg, k).unwrap();
            assert!(validate(&p).ok());
            assert!(p.layers() <= 4);
        }
    }
}
