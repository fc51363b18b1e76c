use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_abphase"))
}

fn example(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("configs")
        .join(name)
}

fn run_config(src: &str) -> (Output, tempfile::TempDir) {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("scenario.toml");
    std::fs::write(&cfg, src).unwrap();
    let out = bin()
        .args(["run", cfg.to_str().unwrap(), "--out"])
        .arg(dir.path().join("out"))
        .output()
        .unwrap();
    (out, dir)
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn examples_run_and_are_byte_identical() {
    for name in [
        "cylinders.toml",
        "ring.toml",
        "solenoid.toml",
        "joint-evolve.toml",
    ] {
        let dirs: Vec<_> = (0..2).map(|_| tempfile::tempdir().unwrap()).collect();
        for d in &dirs {
            let o = bin()
                .arg("run")
                .arg(example(name))
                .arg("--out")
                .arg(d.path())
                .output()
                .unwrap();
            assert!(o.status.success(), "{name}: {}", stderr(&o));
        }
        let mut csvs: Vec<_> = std::fs::read_dir(dirs[0].path())
            .unwrap()
            .map(|e| e.unwrap().file_name())
            .filter(|n| n.to_string_lossy().ends_with(".csv"))
            .collect();
        csvs.sort();
        assert!(!csvs.is_empty(), "{name} wrote no CSV files");
        for f in csvs {
            let a = std::fs::read(dirs[0].path().join(&f)).unwrap();
            let b = std::fs::read(dirs[1].path().join(&f)).unwrap();
            assert_eq!(a, b, "{name}: {f:?} differs between runs");
        }
    }
}

#[test]
fn missing_pulse_key_is_a_config_error() {
    let (o, _d) = run_config(
        "kind = \"cylinders\"\n[cylinders]\ncharge = 1.0\nt_enter = 0.0\nt_exit = 4.0\n\
         capacitance = 1.0\nkappa = 0.0\npointer_width = 1.0\n[cylinders.pulse]\nt_on = 1.0\nheight = 1.0\n",
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(
        stderr(&o).contains("cylinders.pulse.t_off"),
        "{}",
        stderr(&o)
    );
}

#[test]
fn syntax_error_reports_line_and_column() {
    let (o, _d) = run_config("kind = \"ring\"\n[ring\npath_length = 1\n");
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains(":2:"), "{}", stderr(&o));
}

#[test]
fn unknown_key_is_rejected() {
    let (o, _d) = run_config("kind = \"ring\"\nbogus = 1\n");
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn invalid_scenario_exits_3() {
    let (o, _d) = run_config(
        "kind = \"ring\"\n[ring]\npath_length = -1.0\nspeed = 1.0\nmass = 1.0\nbaseline = 1.0\namplitude = 0.5\n",
    );
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn non_finite_evolution_exits_4() {
    let src = std::fs::read_to_string(example("joint-evolve.toml"))
        .unwrap()
        .replace("dt = 0.005", "dt = 1e308")
        .replace("coupling = 0.01", "coupling = 1e300");
    let (o, _d) = run_config(&src);
    assert_eq!(o.status.code(), Some(4), "{}", stderr(&o));
}

#[test]
fn checkpoint_dump_reads_header() {
    let d = tempfile::tempdir().unwrap();
    let o = bin()
        .arg("run")
        .arg(example("joint-evolve.toml"))
        .arg("--out")
        .arg(d.path())
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    let dump = bin()
        .arg("checkpoint-dump")
        .arg(d.path().join("final.abph"))
        .output()
        .unwrap();
    assert!(dump.status.success());
    let text = String::from_utf8_lossy(&dump.stdout);
    assert!(text.contains("grid: 64 x 64"), "{text}");
    assert!(text.contains("version: 1"), "{text}");
}

#[test]
fn unknown_selector_exits_2() {
    let o = bin()
        .args(["acceptance", "no-such-criterion"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown selector"));
}

#[test]
fn acceptance_results_are_reproducible() {
    let dirs: Vec<_> = (0..2).map(|_| tempfile::tempdir().unwrap()).collect();
    for d in &dirs {
        let o = bin()
            .args(["acceptance", "pulse-phase", "--out"])
            .arg(d.path())
            .output()
            .unwrap();
        assert!(o.status.success(), "{}", stderr(&o));
        assert!(String::from_utf8_lossy(&o.stdout).starts_with("PASS criterion  1"));
    }
    let a = std::fs::read(dirs[0].path().join("acceptance.csv")).unwrap();
    let b = std::fs::read(dirs[1].path().join("acceptance.csv")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn thread_count_does_not_change_output() {
    let outs: Vec<Vec<u8>> = ["1", "4"]
        .iter()
        .map(|n| {
            let d = tempfile::tempdir().unwrap();
            let o = bin()
                .env("ABPHASE_THREADS", n)
                .arg("run")
                .arg(example("joint-evolve.toml"))
                .arg("--out")
                .arg(d.path())
                .output()
                .unwrap();
            assert!(o.status.success(), "{}", stderr(&o));
            std::fs::read(d.path().join("observables.csv")).unwrap()
        })
        .collect();
    assert_eq!(outs[0], outs[1]);
}
