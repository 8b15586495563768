use std::collections::BTreeSet;

use polyunfold::gen::{instance, GenConfig};
use polyunfold::model::{extract_surface, load_voxels, validate, Polycube};
use polyunfold::netplan::{records_from_text, records_to_text};
use polyunfold::unfolder::{unfold_with, UnfoldOptions};
use polyunfold::verify::verify_net;
use proptest::prelude::*;

fn checked() -> UnfoldOptions {
    UnfoldOptions { check_properties: true, strict: true }
}

/// Exposed unit faces counted straight from the cube set.
fn exposed(p: &Polycube) -> usize {
    let cubes: BTreeSet<[i32; 3]> = p.cubes().copied().collect();
    let steps = [[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0], [0, 0, 1], [0, 0, -1]];
    cubes
        .iter()
        .map(|c| steps.iter().filter(|d| !cubes.contains(&[c[0] + d[0], c[1] + d[1], c[2] + d[2]])).count())
        .sum()
}

fn small_config(seed: u64) -> GenConfig {
    GenConfig { seed, max_layers: 4, max_extent: 5, ..GenConfig::default() }
}

#[test]
fn staircase_and_slab_unfold() {
    let models = [
        "0 0 0\n1 0 0\n2 0 0\n",
        "0 0 0\n1 0 0\n1 0 1\n2 0 1\n2 0 2\n",
        "###\n###\n###\n\n.#.\n###\n.#.\n\n.#.\n.#.\n.#.\n",
    ];
    for text in models {
        let p = load_voxels(text).unwrap();
        let u = unfold_with(&p, checked()).unwrap();
        let recs = u.net.records(&u.surface);
        assert_eq!(recs.len(), exposed(&p));
        let report = verify_net(&p, &recs);
        assert!(report.ok(), "{}", report.to_text());
    }
}

#[test]
fn net_text_round_trips() {
    let p = instance(&small_config(3), 0).unwrap();
    let u = unfold_with(&p, checked()).unwrap();
    let recs = u.net.records(&u.surface);
    let text = records_to_text(&recs);
    assert_eq!(records_from_text(&text).unwrap(), recs);
    assert!(records_from_text("net cells 2\n").is_err());
    assert!(records_from_text("").is_err());
}

#[test]
fn surface_matches_euler_count() {
    for k in 0..20 {
        let p = instance(&small_config(11), k).unwrap();
        let s = extract_surface(&p).unwrap();
        assert_eq!(s.len(), exposed(&p));
        assert_eq!(s.euler_characteristic(), 2);
        assert_eq!(validate(&p).euler, 2);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn generated_instances_unfold_to_verified_nets(seed in any::<u64>(), k in 0u64..1000) {
        let p = instance(&small_config(seed), k).unwrap();
        let u = unfold_with(&p, checked()).unwrap();
        let recs = u.net.records(&u.surface);
        prop_assert_eq!(recs.len(), exposed(&p));
        let report = verify_net(&p, &recs);
        prop_assert!(report.ok(), "{}", report.to_text());
    }

    #[test]
    fn moving_one_cell_breaks_the_net(seed in any::<u64>(), pick in any::<prop::sample::Index>(), dc in 1i32..4) {
        let p = instance(&small_config(seed), 0).unwrap();
        let u = unfold_with(&p, checked()).unwrap();
        let mut recs = u.net.records(&u.surface);
        let i = pick.index(recs.len());
        recs[i].col += dc;
        prop_assert!(!verify_net(&p, &recs).ok());
    }

    #[test]
    fn dropping_a_cell_breaks_the_net(seed in any::<u64>(), pick in any::<prop::sample::Index>()) {
        let p = instance(&small_config(seed), 1).unwrap();
        let u = unfold_with(&p, checked()).unwrap();
        let mut recs = u.net.records(&u.surface);
        recs.remove(pick.index(recs.len()));
        let report = verify_net(&p, &recs);
        prop_assert!(!report.area_ok);
    }
}
