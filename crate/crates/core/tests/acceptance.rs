//! One line per acceptance criterion, then a single assertion over all of them.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use polyunfold::batch::{fuzz, fuzz_sequential};
use polyunfold::gen::{instance, GenConfig};
use polyunfold::model::{load_voxels, validate, Polycube};
use polyunfold::netplan::{records_to_text, render_svg};
use polyunfold::unfolder::{unfold_with, UnfoldOptions, Unfolding};
use polyunfold::verify::{oracle_suite, verify_net};

const SMALL_BUDGET: Duration = Duration::from_millis(1);
const FIG_BUDGET: Duration = Duration::from_millis(10);
const FUZZ_BUDGET: Duration = Duration::from_secs(60);
const ORACLE_BUDGET: Duration = Duration::from_secs(180);
const FUZZ_COUNT: u64 = 1000;
const FUZZ_SEED: u64 = 42;
const FIG_BRIDGES: [usize; 6] = [1, 5, 6, 1, 1, 0];
/// (layer, right side, label) for the segments named in the worked example.
const FIG_SEGMENTS: [(usize, Option<bool>, &str); 4] =
    [(3, None, "case3/common2"), (4, Some(false), "case2"), (4, Some(true), "case1"), (6, Some(false), "case4/common3")];
const DETERMINISM_COUNT: u64 = 100;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn read(name: &str) -> String {
    std::fs::read_to_string(fixture(name)).unwrap_or_default()
}

fn model(name: &str) -> Polycube {
    load_voxels(&read(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn checked() -> UnfoldOptions {
    UnfoldOptions { check_properties: true, strict: false }
}

/// Time unfold plus verify with the property suite off, then return a checked unfolding.
fn timed_unfold(p: &Polycube) -> (Result<Unfolding, String>, bool, Duration) {
    let plain = UnfoldOptions { check_properties: false, strict: true };
    let t = Instant::now();
    let fast = unfold_with(p, plain).map_err(|e| e.to_string());
    let ok = fast.as_ref().is_ok_and(|u| verify_net(p, &u.net.records(&u.surface)).ok());
    let dt = t.elapsed();
    let u = unfold_with(p, checked()).map_err(|e| e.to_string());
    let same = match (&fast, &u) {
        (Ok(a), Ok(b)) => a.net.records(&a.surface) == b.net.records(&b.surface),
        _ => false,
    };
    (u, ok && same, dt)
}

struct Line {
    pass: bool,
    text: String,
}

fn report(n: usize, pass: bool, text: String) -> Line {
    println!("criterion {n}: {} {text}", if pass { "PASS" } else { "FAIL" });
    Line { pass, text }
}

fn small_models() -> Line {
    let mut pass = true;
    let mut notes = Vec::new();
    for (name, area) in [("cube", 6), ("tower", 10)] {
        let p = model(&format!("{name}.txt"));
        // warm-up so the timing excludes first-touch allocation
        let _ = timed_unfold(&p);
        let (u, ok, dt) = timed_unfold(&p);
        let Ok(u) = u else {
            pass = false;
            notes.push(format!("{name}: unfold failed"));
            continue;
        };
        let cells = u.net.placed_count();
        let net = records_to_text(&u.net.records(&u.surface));
        let golden_net = net == read(&format!("{name}.net"));
        let golden_trace = u.explain() == read(&format!("{name}.trace"));
        let clean = u.violations.is_empty();
        let fast = dt < SMALL_BUDGET;
        pass &= ok && cells == area && golden_net && golden_trace && clean && fast;
        notes.push(format!(
            "{name}: cells {cells}/{area} verified {ok} golden net {golden_net} trace {golden_trace} {:.3} ms",
            dt.as_secs_f64() * 1e3
        ));
    }
    report(1, pass, notes.join("; "))
}

fn worked_example() -> (Line, usize) {
    let p = model("fig3.txt");
    let _ = timed_unfold(&p);
    let (u, ok, dt) = timed_unfold(&p);
    let Ok(u) = u else {
        return (report(2, false, format!("unfold failed: {}", u.err().unwrap_or_default())), 0);
    };
    let bridges: Vec<usize> = u.selections.layers.iter().take(6).map(|l| l.bridge.len()).collect();
    let layers = u.selections.m();
    let mut missing = Vec::new();
    for (layer, right, label) in FIG_SEGMENTS {
        let hit = u
            .trace
            .segments
            .iter()
            .any(|g| g.layer == layer && right.map_or(true, |r| g.right == r) && g.label() == label);
        if !hit {
            missing.push(format!("layer {layer} {label}"));
        }
    }
    let labels: Vec<String> =
        u.trace.segments.iter().map(|g| format!("{}{}:{}", g.layer, if g.right { "R" } else { "L" }, g.label())).collect();
    let pass = layers == 7 && bridges == FIG_BRIDGES && missing.is_empty() && ok && dt < FIG_BUDGET;
    let text = format!(
        "layers {layers} bridges {bridges:?} segments [{}] missing {missing:?} verified {ok} {:.3} ms",
        labels.join(" "),
        dt.as_secs_f64() * 1e3
    );
    (report(2, pass, text), u.violations.len())
}

fn negative_cases() -> Line {
    let mut pass = true;
    let mut notes = Vec::new();
    // (file, face_connected, manifold, chi, genus_zero, layers_convex)
    let cases = [
        ("torus.txt", true, true, 0, false, true),
        ("u_layer.txt", true, true, 2, true, false),
        ("vertex_pair.txt", false, false, 3, false, true),
    ];
    for (name, fc, mf, chi, g0, cv) in cases {
        let p = model(name);
        let r = validate(&p);
        let flags = (r.face_connected, r.manifold, r.euler, r.genus_zero, r.layers_convex);
        let rejected = !r.ok() && unfold_with(&p, checked()).is_err();
        let exact = flags == (fc, mf, chi, g0, cv);
        pass &= rejected && exact;
        notes.push(format!("{name}: rejected {rejected} flags {flags:?}"));
    }
    report(6, pass, notes.join("; "))
}

fn determinism() -> Line {
    let cfg = GenConfig { seed: FUZZ_SEED, ..GenConfig::default() };
    let mut same = true;
    let names = ["cube.txt", "tower.txt", "fig3.txt"];
    let mut models: Vec<Polycube> = names.iter().map(|n| model(n)).collect();
    models.extend((0..DETERMINISM_COUNT).filter_map(|k| instance(&cfg, k).ok()));
    for p in &models {
        let render = |u: &Unfolding| {
            let recs = u.net.records(&u.surface);
            format!("{}{}{}", records_to_text(&recs), u.explain(), render_svg(&u.surface, &recs))
        };
        let a = unfold_with(p, checked()).map(|u| render(&u)).map_err(|e| e.to_string());
        let b = unfold_with(p, checked()).map(|u| render(&u)).map_err(|e| e.to_string());
        same &= a == b;
    }
    let batch_same = fuzz(&cfg, DETERMINISM_COUNT).to_text() == fuzz_sequential(&cfg, DETERMINISM_COUNT).to_text();
    report(
        7,
        same && batch_same,
        format!("{} models unfolded twice identical {same}; batch parallel == sequential {batch_same}", models.len()),
    )
}

#[test]
fn acceptance() {
    let mut lines = vec![small_models()];
    let (fig, fig_violations) = worked_example();
    lines.push(fig);

    let cfg = GenConfig { seed: FUZZ_SEED, max_layers: 6, max_extent: 10, ..GenConfig::default() };
    let t = Instant::now();
    let run = fuzz(&cfg, FUZZ_COUNT);
    let fuzz_time = t.elapsed();
    let summary = run.summary();
    lines.push(report(
        3,
        run.accepted() == FUZZ_COUNT as usize && fuzz_time < FUZZ_BUDGET,
        format!("{summary} in {:.2} s", fuzz_time.as_secs_f64()),
    ));

    let t = Instant::now();
    let oracle_failures: usize = run.outcomes.iter().filter_map(|o| o.model.as_ref()).map(|p| oracle_suite(p).len()).sum();
    let oracle_time = t.elapsed() + fuzz_time;
    let instances = run.outcomes.iter().filter(|o| o.model.is_some()).count();
    lines.push(report(
        4,
        instances == FUZZ_COUNT as usize && oracle_failures == 0 && run.oracle_failures() == 0 && oracle_time < ORACLE_BUDGET,
        format!("{oracle_failures} oracle violations over {instances} instances in {:.2} s", oracle_time.as_secs_f64()),
    ));

    let small_violations: usize = ["cube.txt", "tower.txt"]
        .iter()
        .map(|n| unfold_with(&model(n), checked()).map_or(1, |u| u.violations.len()))
        .sum();
    let props = run.property_failures() + small_violations + fig_violations;
    let debug = cfg!(debug_assertions);
    lines.push(report(
        5,
        debug && props == 0,
        format!("{props} property/invariant violations over {FUZZ_COUNT} instances and fixtures, debug assertions {debug}"),
    ));

    lines.push(negative_cases());
    lines.push(determinism());

    let failed: Vec<&str> = lines.iter().filter(|l| !l.pass).map(|l| l.text.as_str()).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
