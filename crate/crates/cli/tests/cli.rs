use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const PHASE: &str = r#"
seed = 0

[yfs]
uv_cutoff = 1.0
resolution = 1.0
points_per_decade = 2
directions = "axes6"
epsilons = [0.125, 0.0625]

[[yfs.legs]]
velocity = [0.0, 0.0, 0.5]
charge = 0.3
direction = "out"

[[yfs.legs]]
velocity = [0.0, 0.0, -0.5]
charge = -0.3
direction = "out"
"#;

const FREE_SCAN: &str = r#"
[grid]
ir_cutoff = 0.1
uv_cutoff = 1.0
points_per_decade = 1
directions = "axes6"

[model]
variant = "scalar"
mass = 1.0
coupling = 0.0
profile = "electron"
max_total = 2
max_per_mode = 2

[scan]
momentum = [0.0, 0.0, 0.3]
lambdas = [0.3, 0.1]
"#;

fn irlab(args: &[&str], cache: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_irlab"))
        .args(args)
        .env("IRLAB_CACHE_DIR", cache)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn help_lists_every_flag() {
    let dir = tempfile::tempdir().unwrap();
    let top = irlab(&["--help"], dir.path());
    let text = String::from_utf8_lossy(&top.stdout);
    for cmd in ["irscan", "dispersion", "cfp", "dollard", "yfs", "phase"] {
        assert!(text.contains(cmd), "{cmd} missing from\n{text}");
    }
    let sub = irlab(&["irscan", "--help"], dir.path());
    let text = String::from_utf8_lossy(&sub.stdout);
    for flag in ["--config", "--out", "--threads", "--seed", "--svg", "--force"] {
        assert!(text.contains(flag), "{flag} missing from\n{text}");
    }
}

#[test]
fn unknown_key_exits_2_and_names_it() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.toml", &PHASE.replace("resolution", "resolutoin"));
    let out = dir.path().join("out");
    let r = irlab(&["phase", "--config", s(&cfg), "--out", s(&out)], &dir.path().join("cache"));
    assert_eq!(r.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&r.stderr).contains("resolutoin"));
    assert!(!out.exists(), "a malformed config must not produce output");
}

#[test]
fn missing_section_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.toml", PHASE);
    let r = irlab(&["dollard", "--config", s(&cfg), "--out", s(&dir.path().join("o"))], &dir.path().join("cache"));
    assert_eq!(r.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&r.stderr).contains("dollard"));
}

#[test]
fn rerun_is_a_bit_identical_cache_hit() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.toml", PHASE);
    let cache = dir.path().join("cache");
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    let first = irlab(&["phase", "--config", s(&cfg), "--out", s(&a), "--svg"], &cache);
    assert_eq!(first.status.code(), Some(0));
    let second = irlab(&["phase", "--config", s(&cfg), "--out", s(&b), "--svg", "--threads", "3"], &cache);
    assert_eq!(second.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&second.stdout).contains("cache hit"));
    for f in ["phase.csv", "phase.svg", "errors.csv"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }
    let manifest: serde_json::Value = serde_json::from_str(&fs::read_to_string(b.join("manifest.json")).unwrap()).unwrap();
    let files = manifest["commands"]["phase"]["files"].as_array().unwrap();
    assert_eq!(files.len(), 3);

    let forced = irlab(&["phase", "--config", s(&cfg), "--out", s(&b), "--svg", "--force"], &cache);
    assert!(!String::from_utf8_lossy(&forced.stdout).contains("cache hit"));
    assert_eq!(fs::read(a.join("phase.csv")).unwrap(), fs::read(b.join("phase.csv")).unwrap());
}

#[test]
fn thread_count_never_changes_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.toml", FREE_SCAN);
    let mut outputs = Vec::new();
    for threads in ["1", "4"] {
        let out = dir.path().join(threads);
        let r = irlab(
            &["irscan", "--config", s(&cfg), "--out", s(&out), "--threads", threads, "--force"],
            &dir.path().join("cache"),
        );
        assert_eq!(r.status.code(), Some(0));
        outputs.push(fs::read(out.join("irscan.csv")).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn free_scan_has_no_photons() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.toml", FREE_SCAN);
    let out = dir.path().join("o");
    let r = irlab(&["irscan", "--config", s(&cfg), "--out", s(&out)], &dir.path().join("cache"));
    assert_eq!(r.status.code(), Some(0));
    let csv = fs::read_to_string(out.join("irscan.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("lambda,E,meanN,vac_overlap,dressedN,residual"));
    let rows: Vec<&str> = lines.filter(|l| !l.starts_with("fit:")).collect();
    assert_eq!(rows.len(), 2);
    for row in rows {
        let cells: Vec<f64> = row.split(',').map(|c| c.parse().unwrap()).collect();
        assert!(cells[2].abs() < 1e-12 && cells[4].abs() < 1e-12, "{row}");
    }
}

#[test]
fn row_failures_set_the_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let yfs = |n_max: usize| {
        PHASE
            .replace("resolution = 1.0", "resolution = 0.1")
            .replace("epsilons = [0.125, 0.0625]", &format!("lambdas = [0.01, 0.001, 0.0001]\nn_max = {n_max}"))
    };
    // the inclusive series needs 8, 11 and 13 terms on these shells
    let partial = write(dir.path(), "p.toml", &yfs(10));
    let out = dir.path().join("p");
    let r = irlab(&["yfs", "--config", s(&partial), "--out", s(&out)], &cache);
    assert_eq!(r.status.code(), Some(1));
    let errors = fs::read_to_string(out.join("errors.csv")).unwrap();
    let rows: Vec<&str> = errors.lines().skip(1).collect();
    assert_eq!(rows.len(), 2, "{errors}");
    assert!(rows[0].starts_with("yfs,1,") && rows[1].starts_with("yfs,2,"));

    let total = write(dir.path(), "t.toml", &yfs(2));
    let r = irlab(&["yfs", "--config", s(&total), "--out", s(&dir.path().join("t"))], &cache);
    assert_eq!(r.status.code(), Some(3));
}
