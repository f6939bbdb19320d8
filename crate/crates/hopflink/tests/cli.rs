//! End-to-end tests of the command-line interface: documented output
//! formats, exit codes, and determinism.

use std::path::Path;
use std::process::{Command, Output};

use hopflink::{fixtures, io as wire};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hopflink"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn write_basepoint_link(dir: &Path) -> std::path::PathBuf {
    let path = dir.join("basepoint.json");
    std::fs::write(&path, wire::link_to_json(&fixtures::basepoint_link())).unwrap();
    path
}

#[test]
fn lk_reports_plus_one_for_the_standard_link() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_basepoint_link(dir.path());
    let out = run(&["lk", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "+1");
}

#[test]
fn lk_reports_zero_for_a_split_pair() {
    let dir = tempfile::tempdir().unwrap();
    let json = r#"{"components":[
        {"center":[0,0,0],"radius":1.0,"normal":[0,0,1]},
        {"center":[10,0,0],"radius":1.0,"normal":[0,0,1]}]}"#;
    let path = dir.path().join("split.json");
    std::fs::write(&path, json).unwrap();
    let out = run(&["lk", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "0");
}

#[test]
fn lk_exits_2_on_tangent_configuration() {
    let dir = tempfile::tempdir().unwrap();
    // second circle crosses the first circle's boundary
    let json = r#"{"components":[
        {"center":[0,0,0],"radius":1.0,"normal":[0,0,1]},
        {"center":[2,0,0],"radius":1.0,"normal":[0,1,0]}]}"#;
    let path = dir.path().join("tangent.json");
    std::fs::write(&path, json).unwrap();
    let out = run(&["lk", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn canon_prints_the_reference_prism_point() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_basepoint_link(dir.path());
    let out = run(&["canon", path.to_str().unwrap()]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    let sq = std::f64::consts::FRAC_1_SQRT_2;
    assert!((v["w"].as_f64().unwrap() - sq).abs() < 1e-9);
    assert!(v["x"].as_f64().unwrap().abs() < 1e-9);
    assert!(v["y"].as_f64().unwrap().abs() < 1e-9);
    assert!((v["z"].as_f64().unwrap() - sq).abs() < 1e-9);
}

#[test]
fn canon_is_identical_for_deck_images() {
    use hopflink::retraction::{g_act, DeckElement};
    let dir = tempfile::tempdir().unwrap();
    let base = write_basepoint_link(dir.path());
    let acted_path = dir.path().join("acted.json");
    std::fs::write(
        &acted_path,
        wire::link_to_json(&g_act(DeckElement::AlphaS, &fixtures::basepoint_link())),
    )
    .unwrap();
    let out1 = run(&["canon", base.to_str().unwrap()]);
    let out2 = run(&["canon", acted_path.to_str().unwrap()]);
    assert_eq!(stdout(&out1), stdout(&out2));
}

#[test]
fn canon_exits_1_on_malformed_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{ not json").unwrap();
    let out = run(&["canon", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn frames_emits_five_identical_stages_for_the_standard_link() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_basepoint_link(dir.path());
    let out = run(&["frames", path.to_str().unwrap()]);
    assert!(out.status.success());
    let lines: Vec<String> = stdout(&out).lines().map(str::to_owned).collect();
    assert_eq!(lines.len(), 5);
    let links: Vec<serde_json::Value> = lines
        .iter()
        .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap()["link"].clone())
        .collect();
    for l in &links[1..] {
        assert_eq!(l, &links[0]);
    }
    // the final record carries the frame
    let last: serde_json::Value = serde_json::from_str(&lines[4]).unwrap();
    assert!(last["frame"].is_array());
}

#[test]
fn frames_of_a_random_link_converge_monotonically() {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(77);
    let link = hopflink::sample::random_link_pos(&mut rng);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("random.json");
    std::fs::write(&path, wire::link_to_json(&link)).unwrap();
    let out = run(&["frames", path.to_str().unwrap()]);
    assert!(out.status.success());

    let links: Vec<hopflink::roundlink::OrientedRoundHopfLink> = stdout(&out)
        .lines()
        .map(|l| {
            let v: serde_json::Value = serde_json::from_str(l).unwrap();
            wire::parse_link(&v["link"].to_string()).unwrap()
        })
        .collect();
    assert_eq!(links.len(), 5);

    // conditions accumulate: midpoint from stage 1, angle from stage 2,
    // equal radii from stage 3, unit radii from stage 4, endpoints last
    let tol = 1e-8;
    for (i, l) in links.iter().enumerate() {
        let arc = l.arc_of_intersection().unwrap();
        assert!((arc.midpoint - nalgebra::Vector3::new(0.5, 0.0, 0.0)).norm() < tol);
        if i >= 1 {
            assert!((l.dihedral_angle().unwrap() - std::f64::consts::FRAC_PI_2).abs() < tol);
        }
        if i >= 2 {
            assert!((l.first().radius() - l.second().radius()).abs() < tol);
        }
        if i >= 3 {
            assert!((l.first().radius() - 1.0).abs() < tol);
        }
        if i >= 4 {
            assert!((arc.e1 - l.first().center()).norm() < tol);
            assert!((arc.e2 - l.second().center()).norm() < tol);
        }
    }
}

#[test]
fn schedule_of_the_builtin_scene_is_empty() {
    let out = run(&["schedule", "basepoint", "--mesh-res", "32"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["schedule"]["entries"].as_array().unwrap().len(), 0);
    assert_eq!(v["final"]["chords"].as_array().unwrap().len(), 0);
    assert_eq!(v["final"]["points"].as_array().unwrap().len(), 2);
    assert_eq!(v["directive"], "straighten alpha to the poles axis");
}

#[test]
fn schedule_of_the_finger_scene_has_one_removal() {
    let out = run(&["schedule", "finger", "--mesh-res", "96"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["schedule"]["entries"].as_array().unwrap().len(), 1);
    assert_eq!(v["removed"].as_array().unwrap().len(), 1);
    assert_eq!(v["final"]["chords"].as_array().unwrap().len(), 0);
}

#[test]
fn schedule_exits_2_on_a_non_hopf_scene() {
    let dir = tempfile::tempdir().unwrap();
    // a disc far away from the equator: no mixed chord exists
    let scene = hopflink::plgeom::Scene {
        disc_mesh: hopflink::plgeom::TriMesh::flat_disc(
            nalgebra::Vector3::new(8.0, 0.0, 0.0),
            1.0,
            nalgebra::Vector3::y(),
            16,
        )
        .unwrap(),
        equator: fixtures::basepoint_first(),
        h_range: (0.5, 2.0),
    };
    let path = dir.path().join("far.json");
    std::fs::write(&path, wire::scene_to_json(&scene)).unwrap();
    let out = run(&["schedule", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn pattern_command_emits_pattern_json() {
    let out = run(&["pattern", "bubble", "--mesh-res", "96"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["circles"].as_array().unwrap().len(), 1);
    assert_eq!(v["chords"].as_array().unwrap().len(), 0);
}

#[test]
fn xi_and_canon_s3_of_the_standard_plane() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("plane.json");
    std::fs::write(&path, r#"{"x":[1,0,0,0],"y":[0,1,0,0]}"#).unwrap();

    let out = run(&["xi", path.to_str().unwrap()]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["mu"], serde_json::json!([-1.0, 0.0, 0.0]));
    assert_eq!(v["nu"], serde_json::json!([1.0, 0.0, 0.0]));

    let out = run(&["canon-s3", path.to_str().unwrap()]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["first"], serde_json::json!([1.0, 0.0, 0.0]));
    assert_eq!(v["second"], serde_json::json!([1.0, 0.0, 0.0]));
}

#[test]
fn verify_small_scale_passes_and_n_zero_is_usage_error() {
    let out = run(&["verify", "--seed", "3", "--n", "2"]);
    assert!(out.status.success(), "{}", stdout(&out));
    assert_eq!(stdout(&out).lines().count(), 8);
    assert!(stdout(&out).lines().all(|l| l.starts_with("PASS")));

    let out = run(&["verify", "--n", "0"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn sample_output_is_deterministic_and_valid() {
    let a = run(&["sample", "--seed", "11", "--n", "5"]);
    let b = run(&["sample", "--seed", "11", "--n", "5"]);
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&b));
    let lines: Vec<String> = stdout(&a).lines().map(str::to_owned).collect();
    assert_eq!(lines.len(), 5);
    for line in &lines {
        let link = wire::parse_link(line).unwrap();
        assert_eq!(link.linking_number().unwrap(), 1);
    }
    // a different seed gives different links
    let c = run(&["sample", "--seed", "12", "--n", "5"]);
    assert_ne!(stdout(&a), stdout(&c));
}

#[test]
fn out_flag_writes_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let link_path = write_basepoint_link(dir.path());
    let out_path = dir.path().join("result.json");
    let out = run(&[
        "canon",
        link_path.to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).is_empty());
    let content = std::fs::read_to_string(&out_path).unwrap();
    assert!(content.contains("\"w\""));
}

#[test]
fn unknown_subcommand_exits_1() {
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(1));
}
