//! End-to-end runs of the `magspec` binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_magspec");

fn domain_file(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn magspec(args: &[&str], out: &Path) -> Output {
    Command::new(BIN)
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("MAGSPEC_OUT")
        .output()
        .expect("binary runs")
}

/// The run directory is the first line printed on success.
fn run_dir(o: &Output) -> PathBuf {
    let stdout = String::from_utf8_lossy(&o.stdout);
    PathBuf::from(stdout.lines().next().expect("run directory").trim())
}

#[test]
fn eigs_output_is_deterministic() {
    let tmp = tempfile::tempdir().unwrap();
    let sq = domain_file(tmp.path(), "sq.dom", "kind=rectangle\naspect=1\n");
    let sq = sq.to_str().unwrap();
    let args = [
        "eigs",
        "--domain",
        sq,
        "--B",
        "10,30",
        "--n",
        "3",
        "--resolution",
        "64",
    ];
    let a = magspec(&args, &tmp.path().join("a"));
    let b = magspec(&args, &tmp.path().join("b"));
    assert_eq!(
        a.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&a.stderr)
    );
    assert_eq!(b.status.code(), Some(0));
    let (da, db) = (run_dir(&a), run_dir(&b));
    assert!(da
        .file_name()
        .unwrap()
        .to_str()
        .unwrap()
        .starts_with("eigs-"));
    for f in ["spectra.csv", "decay.csv", "decay.gp"] {
        assert_eq!(
            fs::read(da.join(f)).unwrap(),
            fs::read(db.join(f)).unwrap(),
            "{f} differs"
        );
    }
    let csv = fs::read_to_string(da.join("spectra.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("domain,method,B,n,lambda,residual,resolution")
    );
    assert_eq!(lines.count(), 6);
}

#[test]
fn usage_errors_exit_with_one() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let bad = domain_file(tmp.path(), "bad.dom", "kind=disk\ncolour=red\n");
    let good = domain_file(tmp.path(), "sq.dom", "kind=rectangle\n");
    assert_eq!(magspec(&["eigs"], &out).status.code(), Some(1));
    let o = magspec(&["eigs", "--domain", bad.to_str().unwrap()], &out);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    let o = magspec(
        &["eigs", "--domain", good.to_str().unwrap(), "--B", "-5"],
        &out,
    );
    assert_eq!(o.status.code(), Some(1));
    let o = magspec(
        &[
            "torsion",
            "--domain",
            good.to_str().unwrap(),
            "--resolution",
            "8",
        ],
        &out,
    );
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(magspec(&["--help"], &out).status.code(), Some(0));
}

#[test]
fn unsupported_method_exits_with_two() {
    let tmp = tempfile::tempdir().unwrap();
    let sq = domain_file(tmp.path(), "sq.dom", "kind=rectangle\n");
    let o = magspec(
        &[
            "eigs",
            "--domain",
            sq.to_str().unwrap(),
            "--method",
            "radial",
            "--resolution",
            "64",
        ],
        &tmp.path().join("out"),
    );
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn environment_overrides_out() {
    let tmp = tempfile::tempdir().unwrap();
    let disk = domain_file(tmp.path(), "disk.dom", "kind=disk\n");
    let env_out = tmp.path().join("env");
    let o = Command::new(BIN)
        .args([
            "torsion",
            "--domain",
            disk.to_str().unwrap(),
            "--resolution",
            "64",
            "--out",
        ])
        .arg(tmp.path().join("flag"))
        .env("MAGSPEC_OUT", &env_out)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let dir = run_dir(&o);
    assert!(dir.starts_with(&env_out));
    let mut rdr = csv::Reader::from_path(dir.join("torsion.csv")).unwrap();
    let row = rdr.records().next().unwrap().unwrap();
    let phi: f64 = row[3].parse().unwrap();
    assert!((phi - 1.0 / (4.0 * std::f64::consts::PI)).abs() < 1e-3);
}

#[test]
fn sweep_writes_manifest_and_json() {
    let tmp = tempfile::tempdir().unwrap();
    let e = domain_file(
        tmp.path(),
        "e.dom",
        "# shifted ellipse\nkind=ellipse\naspect=1.5\noffset=0.2,0\n",
    );
    let o = magspec(
        &[
            "sweep",
            "--domain",
            e.to_str().unwrap(),
            "--B",
            "0,10",
            "--n",
            "2",
            "--resolution",
            "64",
            "--format",
            "json",
        ],
        &tmp.path().join("out"),
    );
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let dir = run_dir(&o);
    let spectra: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("spectra.json")).unwrap()).unwrap();
    assert_eq!(spectra.as_array().unwrap().len(), 4);
    let manifest = fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .find(|p| {
            p.file_name()
                .unwrap()
                .to_str()
                .unwrap()
                .starts_with("manifest-")
        })
        .expect("manifest written");
    let m: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(manifest).unwrap()).unwrap();
    assert_eq!(m["command"], "sweep");
    assert_eq!(m["B"], serde_json::json!([0.0, 10.0]));
    assert!(m["files"]
        .as_array()
        .unwrap()
        .iter()
        .any(|f| f == "spectra.json"));
}

#[test]
fn dirac_and_asymmetry_tables() {
    let tmp = tempfile::tempdir().unwrap();
    let e = domain_file(tmp.path(), "e.dom", "kind=ellipse\naspect=1.5\n");
    let e = e.to_str().unwrap();
    let o = magspec(
        &[
            "dirac",
            "--domain",
            e,
            "--B",
            "0,10",
            "--n",
            "2",
            "--resolution",
            "64",
        ],
        &tmp.path().join("d"),
    );
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let text = fs::read_to_string(run_dir(&o).join("dirac_bounds.csv")).unwrap();
    assert_eq!(text.lines().next(), Some("domain,B,K,n,upper,lower"));
    assert_eq!(text.lines().count(), 5);
    let o = magspec(
        &["asymmetry", "--domain", e, "--resolution", "128"],
        &tmp.path().join("a"),
    );
    assert_eq!(o.status.code(), Some(0));
    let mut rdr = csv::Reader::from_path(run_dir(&o).join("asymmetry.csv")).unwrap();
    let alpha: f64 = rdr.records().next().unwrap().unwrap()[2].parse().unwrap();
    // unit-area ellipse with axis ratio 1.5 against the centered disk
    assert!((alpha - 0.2564).abs() < 0.01, "alpha {alpha}");
}
