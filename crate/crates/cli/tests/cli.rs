use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use ltc_core::{parse_stream, CompressionStats};

fn ltc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ltc"))
        .args(args)
        .output()
        .expect("run ltc")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn generate(dir: &Path, name: &str, extra: &[&str]) -> String {
    let path = dir.join(name);
    let p = path.to_str().unwrap().to_string();
    let mut args = vec!["--mode", "generate", "--output", &p];
    args.extend_from_slice(extra);
    let o = ltc(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    p
}

#[test]
fn generate_is_deterministic() {
    let args = [
        "--mode",
        "generate",
        "--kind",
        "random_walk",
        "--n",
        "3",
        "--length",
        "1000",
        "--seed",
        "7",
    ];
    let a = ltc(&args);
    let b = ltc(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.starts_with("t,x,y,z\n"));
    assert_eq!(text.lines().count(), 1001);
}

#[test]
fn roundtrip_is_deterministic_and_bounded() {
    let dir = tempfile::tempdir().unwrap();
    let input = generate(dir.path(), "walk.csv", &["--n", "3", "--seed", "3"]);
    let run = || {
        ltc(&[
            "--mode",
            "roundtrip",
            "--input",
            &input,
            "--epsilon",
            "0.5",
            "--norm",
            "euclidean",
        ])
    };
    let (a, b) = (run(), run());
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let stats = CompressionStats::from_key_value(&stdout(&a)).unwrap();
    assert!(stats.max_error <= 0.5);
    assert_eq!(stats.n_received, 1000);
    assert!(stats.n_transmitted >= 2);
    assert_eq!(stats.wall_time, 0.0);
}

#[test]
fn compress_then_reconstruct_stays_within_epsilon() {
    let dir = tempfile::tempdir().unwrap();
    let input = generate(dir.path(), "sine.csv", &["--kind", "sinusoid", "--n", "2"]);
    let tx = dir.path().join("tx.csv");
    let rec = dir.path().join("rec.csv");
    let o = ltc(&[
        "--mode",
        "compress",
        "--input",
        &input,
        "--epsilon",
        "0.05",
        "--output",
        tx.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = ltc(&[
        "--mode",
        "reconstruct",
        "--input",
        tx.to_str().unwrap(),
        "--reference",
        &input,
        "--output",
        rec.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));

    let orig = parse_stream(&input).unwrap();
    let back = parse_stream(&rec).unwrap();
    assert_eq!(orig.header, back.header);
    assert_eq!(orig.times(), back.times());
    for (a, b) in orig.samples.iter().zip(&back.samples) {
        for (x, y) in a.x.iter().zip(&b.x) {
            assert!((x - y).abs() <= 0.05 + 1e-9, "{} vs {}", x, y);
        }
    }
}

#[test]
fn dims_select_planar_processing() {
    let dir = tempfile::tempdir().unwrap();
    let input = generate(dir.path(), "walk.csv", &["--n", "3"]);
    let o = ltc(&[
        "--mode",
        "compress",
        "--input",
        &input,
        "--epsilon",
        "1",
        "--dims",
        "x,y",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.starts_with("t,x,y\n"));
    assert!(text.lines().skip(1).all(|l| l.split(',').count() == 3));

    let o = ltc(&[
        "--mode",
        "compress",
        "--input",
        &input,
        "--epsilon",
        "1",
        "--dims",
        "2,0",
    ]);
    assert!(stdout(&o).starts_with("t,z,x\n"));
}

#[test]
fn json_stats() {
    let dir = tempfile::tempdir().unwrap();
    let input = generate(
        dir.path(),
        "c.csv",
        &["--kind", "collinear", "--n", "2", "--length", "100"],
    );
    let o = ltc(&[
        "--mode",
        "stats",
        "--input",
        &input,
        "--epsilon",
        "0.1",
        "--format",
        "json",
    ]);
    assert!(o.status.success());
    let stats: CompressionStats = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(stats.n_transmitted, 2);
    assert_eq!(stats.ratio_paper, 50.0);
}

#[test]
fn verify_mode_reports_agreement() {
    let o = ltc(&["--mode", "verify", "--cases", "12", "--seed", "5"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("disagree=0"), "{text}");
}

#[test]
fn input_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "0,1\n0,2\n").unwrap();
    let o = ltc(&[
        "--mode",
        "compress",
        "--input",
        bad.to_str().unwrap(),
        "--epsilon",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));

    let good = generate(dir.path(), "g.csv", &["--n", "1", "--length", "10"]);
    for args in [
        vec![
            "--mode",
            "compress",
            "--input",
            good.as_str(),
            "--epsilon",
            "-1",
        ],
        vec!["--mode", "compress", "--input", good.as_str()],
        vec![
            "--mode",
            "compress",
            "--input",
            "/nonexistent.csv",
            "--epsilon",
            "1",
        ],
        vec![
            "--mode",
            "compress",
            "--input",
            good.as_str(),
            "--epsilon",
            "1",
            "--dims",
            "q",
        ],
        vec!["--mode", "bogus"],
        vec!["--norm", "l7"],
    ] {
        assert_eq!(ltc(&args).status.code(), Some(1), "{args:?}");
    }
}
