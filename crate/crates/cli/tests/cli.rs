use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_extcalc")).args(args).current_dir(root()).env_remove("EXTCALC_OUT_DIR").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("extcalc-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn torus_cohomology() {
    let o = run(&["cohomology", "meshes/torus.mesh"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let betti: Vec<String> = stdout(&o)
        .lines()
        .skip(1)
        .take(3)
        .map(|l| l.split_whitespace().nth(1).unwrap().to_string())
        .collect();
    assert_eq!(betti, ["1", "2", "1"]);
    assert!(stdout(&o).contains("euler 0"));
}

#[test]
fn stokes_check_on_disk() {
    let o = run(&["stokes-check", "meshes/disk8.mesh", "meshes/disk8_omega.csv", "meshes/disk8_disk.chain"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("<dw, c> -7"));
    assert!(out.contains("<w, bc> -7"));
}

#[test]
fn demos_pass() {
    for id in ["stokes-disk-minus7", "mobius-twisted-only", "torus-betti", "lorentz-rest-charge"] {
        let o = run(&["demo", id]);
        assert_eq!(o.status.code(), Some(0), "{id}: {}{}", stdout(&o), stderr(&o));
        assert!(stdout(&o).contains(&format!("PASS {id}")));
    }
}

#[test]
fn demo_list_and_unknown_id() {
    let o = run(&["demo", "--list"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), extcalc::demos::DEMO_IDS.len());
    let o = run(&["demo", "no-such-demo"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn usage_error_exit_code() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["cohomology"]).status.code(), Some(2));
}

#[test]
fn parse_error_names_the_line() {
    let dir = scratch("parse");
    let mesh = dir.join("bad.mesh");
    std::fs::write(&mesh, "dim 2\nv 0 0\nv 1 x\n").unwrap();
    let o = run(&["mesh-info", mesh.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));

    let scn = dir.join("bad.scn");
    std::fs::write(&scn, "shape = 6 6 6\nbogus = 1\n").unwrap();
    let o = run(&["maxwell-static-e", scn.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("line 2") && stderr(&o).contains("bogus"), "{}", stderr(&o));
}

#[test]
fn failed_solve_exit_code() {
    let dir = scratch("solve");
    let scn = dir.join("s.scn");
    std::fs::write(&scn, "shape = 6 6 6\ncharge = 3 3 3 1\ntol = 1e-14\nmax_iter = 2\n").unwrap();
    let o = run(&["maxwell-static-e", scn.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn static_flux_matches_charge() {
    let dir = scratch("flux");
    let scn = dir.join("s.scn");
    std::fs::write(&scn, "shape = 6 6 6\ncharge = 3 3 3 1\nbox = 1 1 1 5 5 5\n").unwrap();
    let o = run(&["maxwell-static-e", scn.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let row = stdout(&o).lines().find(|l| l.starts_with("0,")).unwrap().to_string();
    let cols: Vec<f64> = row.split(',').skip(3).map(|x| x.parse().unwrap()).collect();
    assert!((cols[0] - 1.0).abs() < 1e-8 && (cols[1] - 1.0).abs() < 1e-12);
}

#[test]
fn evolve_output_is_deterministic() {
    let mut files = Vec::new();
    for run_id in ["a", "b"] {
        let dir = scratch(&format!("evolve-{run_id}"));
        let o = Command::new(env!("CARGO_BIN_EXE_extcalc"))
            .args(["maxwell-evolve", "scenarios/moving_charge.scn"])
            .current_dir(root())
            .env("EXTCALC_OUT_DIR", &dir)
            .output()
            .unwrap();
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        files.push(std::fs::read(dir.join("moving_charge.csv")).unwrap());
    }
    assert!(!files[0].is_empty());
    assert_eq!(files[0], files[1]);
}
