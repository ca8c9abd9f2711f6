use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use plap_cli::{resolve, Cli, Command as Sub};

fn plap(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_plap"))
        .args(args)
        .arg("--output")
        .arg(out)
        .env_remove("PLAP_OUTPUT_DIR")
        .output()
        .unwrap()
}

fn read(path: impl AsRef<Path>) -> String {
    std::fs::read_to_string(path.as_ref())
        .unwrap_or_else(|e| panic!("{}: {e}", path.as_ref().display()))
}

fn configs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

#[test]
fn solve_writes_field_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let o = plap(
        &[
            "solve", "--n", "17", "--p", "6", "--exact", "aronsson", "--tol", "1e-8",
        ],
        dir.path(),
    );
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let field = plap::io::read_field_file(dir.path().join("solve_field.csv")).unwrap();
    assert_eq!(field.grid().n(), 17);
    // boundary carries the Dirichlet data
    assert_eq!(field.at(16, 8), 1.0);
    let report =
        plap::io::read_report(read(dir.path().join("solve_report.csv")).as_bytes()).unwrap();
    assert!(report.converged());
    assert!(report.error.is_some());
}

#[test]
fn identical_config_gives_identical_bytes() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let args = [
        "sweep",
        "--n",
        "9,17",
        "--alpha",
        "1/4,1/8",
        "--method",
        "both",
        "--max-iters",
        "50",
    ];
    assert_eq!(
        plap(&args, a.path()).status.code(),
        plap(&args, b.path()).status.code()
    );
    let mut names: Vec<_> = std::fs::read_dir(a.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    // 2 methods x 2 alphas x 2 sizes, field + report each, plus the summary
    assert_eq!(names.len(), 17);
    for name in names {
        assert_eq!(
            read(a.path().join(&name)),
            read(b.path().join(&name)),
            "{name:?}"
        );
    }
}

#[test]
fn sweep_summary_has_one_row_per_solve() {
    let dir = tempfile::tempdir().unwrap();
    let o = plap(
        &[
            "sweep",
            "--n",
            "17",
            "--p",
            "2,6",
            "--exact",
            "aronsson;harmonic_saddle",
            "--write-fields",
            "false",
            "--tol",
            "1e-9",
        ],
        dir.path(),
    );
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let summary = read(dir.path().join("sweep_summary.csv"));
    let lines: Vec<&str> = summary.lines().collect();
    assert_eq!(lines[0], plap_cli::commands::SWEEP_COLUMNS);
    assert_eq!(lines.len(), 5);
    assert!(lines[1].starts_with("semi-implicit,aronsson,17,2,0.5,17,1,Converged"));
    assert!(!dir
        .path()
        .join("sweep_semi-implicit_aronsson_s17_p2_n17_field.csv")
        .exists());
    assert!(dir
        .path()
        .join("sweep_semi-implicit_aronsson_s17_p2_n17_report.csv")
        .exists());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let o = plap(&["solve", "--n", "2"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("'n'"));
    let o = plap(&["solve", "--boundary", "nowhere"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("'boundary'"));
    let o = plap(&["solve", "--bogus-flag", "1"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let o = plap(
        &[
            "solve",
            "--n",
            "33",
            "--p",
            "6",
            "--method",
            "explicit",
            "--max-iters",
            "3",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(4));
    // p = inf semi-implicit on Aronsson data trips the divergence guard
    let o = plap(
        &[
            "solve",
            "--n",
            "65",
            "--p",
            "inf",
            "--tol",
            "1e-12",
            "--max-iters",
            "2000",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(3));
    let report = read(dir.path().join("solve_report.csv"));
    assert!(report.starts_with("# plap-report v1 method=semi-implicit termination=diverged"));
}

#[test]
fn unwritable_output_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "x").unwrap();
    let o = plap(&["contraction-model"], &blocker.join("sub"));
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn env_overrides_output_dir() {
    let (flag, env) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let o = Command::new(env!("CARGO_BIN_EXE_plap"))
        .args(["contraction-model", "--n", "4,5", "--output"])
        .arg(flag.path())
        .env("PLAP_OUTPUT_DIR", env.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(env.path().join("contraction-model_rates.csv").exists());
    assert!(!flag.path().join("contraction-model_rates.csv").exists());
    let table = read(env.path().join("contraction-model_rates.csv"));
    assert!(table.starts_with("n,rate,gap\n4,0.5"));
}

#[test]
fn config_file_wins_with_warning() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.conf");
    std::fs::write(
        &cfg,
        "command = contraction-model\nn = 4\nname = fromfile\n",
    )
    .unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_plap"))
        .args(["contraction-model", "--n", "9", "--config"])
        .arg(&cfg)
        .arg("--output")
        .arg(dir.path())
        .env_remove("PLAP_OUTPUT_DIR")
        .env("RUST_LOG", "warn")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("overriding --n 9"));
    assert_eq!(
        read(dir.path().join("fromfile_rates.csv"))
            .lines()
            .nth(1)
            .unwrap(),
        "4,0.5000000000000001,0.4999999999999999"
    );
}

#[test]
fn consistency_tables() {
    let dir = tempfile::tempdir().unwrap();
    let o = plap(
        &["consistency", "--n", "65,129", "--eps", "0.1,0.02"],
        dir.path(),
    );
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let op = read(dir.path().join("consistency_operator.csv"));
    assert_eq!(op.lines().count(), 1 + 3 * 2);
    let oracle = read(dir.path().join("consistency_oracle.csv"));
    assert_eq!(oracle.lines().count(), 3);
}

#[test]
fn failure_demo_summary() {
    let dir = tempfile::tempdir().unwrap();
    let o = plap(&["failure-demo", "--n", "41", "--tol", "1e-8"], dir.path());
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let summary = read(dir.path().join("failure-demo_summary.csv"));
    let get = |k: &str| -> f64 {
        summary
            .lines()
            .find_map(|l| l.strip_prefix(&format!("{k},")))
            .unwrap()
            .parse()
            .unwrap()
    };
    assert!(get("distance_to_cone_diff") < get("distance_to_aronsson"));
}

#[test]
fn shipped_configs_resolve() {
    let expected = [
        ("figBadSoln", Sub::FailureDemo),
        ("figUsPlusLin", Sub::Sweep),
        ("figUsSurf", Sub::Sweep),
        ("figErrorsILExplicit", Sub::Sweep),
        ("figErrorsILn128", Sub::Sweep),
        ("figErrorsIL", Sub::Sweep),
        ("figErrorsIL3solns", Sub::Sweep),
        ("figConv", Sub::Sweep),
        ("figRate", Sub::Sweep),
    ];
    let mut shipped: Vec<String> = std::fs::read_dir(configs_dir())
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    shipped.sort();
    assert_eq!(shipped.len(), expected.len());
    for (name, command) in expected {
        let path = configs_dir().join(format!("{name}.conf"));
        let cli = <Cli as clap::Parser>::try_parse_from([
            "plap".as_ref(),
            "run".as_ref(),
            path.as_os_str(),
        ])
        .unwrap();
        let config = resolve(&cli, None).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(config.command, command);
        assert_eq!(config.name, name);
    }
    let cli = <Cli as clap::Parser>::try_parse_from([
        "plap",
        "run",
        configs_dir().join("figConv.conf").to_str().unwrap(),
    ])
    .unwrap();
    let conv = resolve(&cli, None).unwrap();
    assert_eq!(conv.exponents.len(), 19);
    assert_eq!(conv.exponents[17].alpha(), 0.5f64.powi(18));
    assert!(conv.exponents[18].p().is_infinite());
}
