use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use minorscale::generators::{ln, random_pm1_pair, Sign};
use minorscale::geometry::{factor_psd, VectorSet};
use minorscale::io;
use minorscale::{
    compare_minors, decide_rescaling, recover_isometry, BiFunction, IsometryVerdict, RescalingKind, Scalar, Tolerance,
    Verdict,
};
use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_minorscale"));
    c.env_remove("MINORSCALE_TOL");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_matrix(dir: &TempDir, name: &str, l: &BiFunction) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, io::to_line(&io::matrix_to_json(l))).unwrap();
    p
}

fn write_vectors(dir: &TempDir, name: &str, v: &VectorSet) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, io::to_line(&io::vectors_to_json(v))).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gen_ln_minus_matches_display() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("L4m.json");
    let o = run(&["gen", "--family", "Ln", "--n", "4", "--sign", "minus", "-o", s(&out)]);
    assert_eq!(code(&o), 0);
    let l = io::read_matrix(&out).unwrap();
    let display = [[4, 1, 0, -1], [1, 4, 1, 0], [0, 1, 4, 1], [-1, 0, 1, 4]];
    for i in 0..4 {
        for j in 0..4 {
            assert_eq!(l.get(i, j), &Scalar::from_i64(display[i][j]));
        }
    }
}

#[test]
fn compare_minors_l3_reports_full_subset() {
    let dir = TempDir::new().unwrap();
    let p = write_matrix(&dir, "p.json", &ln(3, Sign::Plus).unwrap());
    let m = write_matrix(&dir, "m.json", &ln(3, Sign::Minus).unwrap());
    let o = run(&["compare-minors", s(&p), s(&m), "--max-card", "3"]);
    assert_eq!(code(&o), 1);
    let v = io::parse_json(&stdout(&o)).unwrap();
    assert_eq!(v["subset"], serde_json::json!(["1", "2", "3"]));
    assert_eq!(v["L"], "54");
    assert_eq!(v["M"], "50");
    let o = run(&["compare-minors", s(&p), s(&m), "--max-card", "2"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn compare_minors_matches_library() {
    let dir = TempDir::new().unwrap();
    let (l, m) = (ln(5, Sign::Plus).unwrap(), ln(5, Sign::Minus).unwrap());
    let (pl, pm) = (write_matrix(&dir, "l.json", &l), write_matrix(&dir, "m.json", &m));
    let o = run(&["compare-minors", s(&pl), s(&pm)]);
    let d = compare_minors(&l, &m, 5, Tolerance::default()).unwrap().first_diff.unwrap();
    assert_eq!(stdout(&o), io::to_line(&io::minor_pair_line(&d.subset, &d.in_l, &d.in_m, l.labels())));
}

#[test]
fn decide_pm1_matches_library_bytes() {
    let dir = TempDir::new().unwrap();
    for seed in 0..10 {
        let pair = random_pm1_pair(6, 0.4, seed, seed % 2 == 0).unwrap();
        let pl = write_matrix(&dir, "l.json", &pair.l);
        let pm = write_matrix(&dir, "m.json", &pair.m);
        let o = run(&["decide", "--kind", "pm1", s(&pl), s(&pm)]);
        assert_eq!(code(&o), 0, "seed {seed}");
        let Verdict::Accepted(c) = decide_rescaling(&pair.l, &pair.m, RescalingKind::Pm1, Tolerance::default()).unwrap() else {
            panic!("library rejects seed {seed}");
        };
        assert_eq!(stdout(&o), io::to_line(&io::certificate_to_json(&c, pair.l.labels())));
        let o2 = run(&["decide", "--kind", "pm1", "--via-minors", s(&pl), s(&pm)]);
        assert_eq!(stdout(&o2), stdout(&o));
    }
}

#[test]
fn decide_rejects_l3_for_every_kind() {
    let dir = TempDir::new().unwrap();
    let p = write_matrix(&dir, "p.json", &ln(3, Sign::Plus).unwrap());
    let m = write_matrix(&dir, "m.json", &ln(3, Sign::Minus).unwrap());
    for kind in ["general", "symmetric", "hermitean", "reciprocal", "pm1"] {
        let o = run(&["decide", "--kind", kind, s(&p), s(&m)]);
        assert_eq!(code(&o), 1, "{kind}");
        let v = io::parse_json(&stdout(&o)).unwrap();
        assert!(v["variant"].is_string());
    }
}

#[test]
fn generated_pair_files_are_byte_stable() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let args = ["gen", "--family", "randomRescaledPair", "--n", "5", "--seed", "11", "--kind", "hermitean"];
    let o1 = bin().args(args).args(["-o", s(&a), "--second", s(&b)]).output().unwrap();
    assert_eq!(code(&o1), 0);
    let first = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    bin().args(args).args(["-o", s(&a), "--second", s(&b)]).output().unwrap();
    assert_eq!(first, (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap()));
    let o = run(&["decide", "--kind", "hermitean", s(&a), s(&b)]);
    assert_eq!(code(&o), 0);
}

#[test]
fn geometry_commands() {
    let dir = TempDir::new().unwrap();
    let tol = Tolerance::default();
    let v = factor_psd(&ln(3, Sign::Plus).unwrap(), tol).unwrap();
    let w = factor_psd(&ln(3, Sign::Minus).unwrap(), tol).unwrap();
    let (pv, pw) = (write_vectors(&dir, "v.json", &v), write_vectors(&dir, "w.json", &w));
    let o = run(&["recover-isometry", s(&pv), s(&pw)]);
    assert_eq!(code(&o), 1);
    let j = io::parse_json(&stdout(&o)).unwrap();
    assert_eq!(j["variant"], "faceVolumeMismatch");
    assert_eq!(j["subset"], serde_json::json!(["1", "2", "3"]));

    let o = run(&["recover-isometry", s(&pv), s(&pv)]);
    assert_eq!(code(&o), 0);
    let IsometryVerdict::Accepted(wit) = recover_isometry(&v, &v, None, tol).unwrap() else { panic!() };
    assert_eq!(stdout(&o), io::to_line(&io::witness_to_json(&wit)));

    let o = run(&["scaled-isometry", s(&pv), s(&pv)]);
    assert_eq!(code(&o), 0);
    assert!(io::parse_json(&stdout(&o)).unwrap()["g"].is_array());

    let o = run(&["volumes", s(&pv), "--max-card", "1"]);
    assert_eq!(code(&o), 0);
    let lines: Vec<_> = stdout(&o).lines().map(|l| io::parse_json(l).unwrap()).collect();
    assert_eq!(lines.len(), 3);
    let vol = io::real_from_json(&lines[0]["volume"]).unwrap();
    assert!((vol - 2.0).abs() < 1e-12);
}

#[test]
fn minors_lines() {
    let dir = TempDir::new().unwrap();
    let p = write_matrix(&dir, "p.json", &ln(3, Sign::Plus).unwrap());
    let o = run(&["minors", s(&p)]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 7);
    assert_eq!(text.lines().last().unwrap(), r#"{"subset":["1","2","3"],"value":"54"}"#);
}

#[test]
fn errors_exit_two() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let p = write_matrix(&dir, "p.json", &ln(3, Sign::Plus).unwrap());
    let q = write_matrix(&dir, "q.json", &ln(4, Sign::Plus).unwrap());
    for args in [
        vec!["decide", s(&bad), s(&p)],
        vec!["decide", s(&p), s(&q)],
        vec!["decide", "--kind", "weird", s(&p), s(&p)],
        vec!["compare-minors", s(&p), s(&p), "--max-card", "9"],
        vec!["gen", "--family", "Ln", "--n", "2"],
        vec!["gen", "--family", "nope"],
        vec!["frobnicate"],
        vec!["decide", "--tol", "-1", s(&p), s(&p)],
    ] {
        let o = run(&args);
        assert_eq!(code(&o), 2, "{args:?}");
        assert!(!o.stderr.is_empty());
        assert!(o.stdout.is_empty());
    }
}

#[test]
fn tolerance_from_environment() {
    let dir = TempDir::new().unwrap();
    let l = BiFunction::unlabeled(vec![vec![Scalar::from_f64(1.0)]]).unwrap();
    let m = BiFunction::unlabeled(vec![vec![Scalar::from_f64(1.0 + 1e-6)]]).unwrap();
    let (pl, pm) = (write_matrix(&dir, "l.json", &l), write_matrix(&dir, "m.json", &m));
    assert_eq!(code(&run(&["decide", "--kind", "pm1", s(&pl), s(&pm)])), 1);
    let o = bin().env("MINORSCALE_TOL", "1e-4").args(["decide", "--kind", "pm1", s(&pl), s(&pm)]).output().unwrap();
    assert_eq!(code(&o), 0);
}
