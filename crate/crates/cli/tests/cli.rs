use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use symtrans::{run, Command as Cmd, Format, RunConfig};

fn symtrans(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symtrans"))
        .args(args)
        .env_remove("SYMTRANS_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn zero_form_passes_with_k_zero() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "zero.cubic", "cubicform v1 dim=4\n");
    let o = symtrans(&["check", &f, "--format", "structured"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains(r#"{"type":"datum","key":"k","value":"0"}"#));
    assert!(out.contains(r#"{"type":"datum","key":"translation_dim","value":"4"}"#));
    assert!(out.ends_with("{\"type\":\"summary\",\"status\":\"pass\",\"checks\":3,\"failed\":0}\n"));
}

#[test]
fn n1_example_has_stratum_one() {
    // σ = x³ on the Darboux plane: S_{e_1} e_1 = -e_1 spans a line
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "line.cubic", "cubicform v1 dim=2\n0 0 0 1\n");
    let o = symtrans(&["check", &f, "--format", "structured"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains(r#""key":"k","value":"1""#));
    assert!(out.contains(r#""key":"translation_dim","value":"1""#));
    assert!(out.contains(r#""key":"isotropic","value":"true""#));
}

#[test]
fn corrupted_file_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "bad.cubic", "cubicform v1 dim=2\n1 0 0 1\n");
    let o = symtrans(&["check", &f]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    assert_eq!(symtrans(&["check", "/nonexistent/file.cubic"]).status.code(), Some(2));
    assert_eq!(symtrans(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn non_isotropic_form_fails_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "plane.cubic", "cubicform v1 dim=2\n0 0 1 1\n0 1 1 1\n");
    let o = symtrans(&["check", &f, "--format", "structured"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    let line = out.lines().find(|l| l.contains(r#""name":"variety""#)).unwrap();
    assert!(line.contains(r#""X":"[1,0]""#) && line.contains(r#""Y":"[0,1]""#));
    assert!(line.contains(r#""[S_X,S_Y]":"[[-1,-2],[2,1]]""#));
    // the group commands surface the same failure as a verdict
    let g = symtrans(&["group", &f]);
    assert_eq!(g.status.code(), Some(1));
    assert!(stdout(&g).contains("FAIL variety"));
}

#[test]
fn sample_round_trips_through_check() {
    let dir = tempfile::tempdir().unwrap();
    for (n, k) in [(1, 0), (2, 1), (3, 3)] {
        let path = dir.path().join(format!("s{n}{k}.cubic"));
        let p = path.to_string_lossy().into_owned();
        let (ns, ks) = (n.to_string(), k.to_string());
        let o = symtrans(&["sample", "--n", &ns, "--k", &ks, "--seed", "11", "--out", &p]);
        assert_eq!(o.status.code(), Some(0));
        let text = fs::read_to_string(&path).unwrap();
        if k == 0 {
            assert_eq!(text, format!("cubicform v1 dim={}\n", 2 * n));
        }
        let c = stdout(&symtrans(&["check", &p, "--format", "structured"]));
        assert!(c.contains(&format!(r#""key":"k","value":"{k}""#)), "{c}");
        assert!(c.contains(r#""status":"pass""#));
    }
    let a = stdout(&symtrans(&["sample", "--n", "2", "--k", "2", "--seed", "5"]));
    let b = stdout(&symtrans(&["sample", "--n", "2", "--k", "2", "--seed", "5"]));
    assert_eq!(a, b);
    assert!(a.starts_with("cubicform v1 dim=4\n"));
    assert_eq!(symtrans(&["sample", "--n", "2", "--k", "3"]).status.code(), Some(2));
}

#[test]
fn group_commands_pass_on_sampled_form() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("g.cubic").to_string_lossy().into_owned();
    symtrans(&["sample", "--n", "2", "--k", "1", "--seed", "3", "--out", &p]);
    for cmd in ["group", "orbit", "transitivity", "stratum"] {
        let o = symtrans(&[cmd, &p, "--trials", "10"]);
        assert_eq!(o.status.code(), Some(0), "{cmd}: {}", stdout(&o));
    }
}

#[test]
fn seed_falls_back_to_environment() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("g.cubic").to_string_lossy().into_owned();
    symtrans(&["sample", "--n", "1", "--seed", "1", "--out", &p]);
    let with_env = Command::new(env!("CARGO_BIN_EXE_symtrans"))
        .args(["group", &p, "--trials", "3", "--format", "structured"])
        .env("SYMTRANS_SEED", "42")
        .output()
        .unwrap();
    assert!(stdout(&with_env).starts_with(r#"{"type":"header","schema":"symtrans.report","version":1,"command":"group","seed":42,"trials":3}"#));
}

#[test]
fn potential_pipeline_and_geodesic_csv() {
    let dir = tempfile::tempdir().unwrap();
    let pot = dir.path().join("f.pot").to_string_lossy().into_owned();
    let csv = dir.path().join("traj.csv");
    assert_eq!(symtrans(&["sample", "--signature", "1,1", "--seed", "2", "--out", &pot]).status.code(), Some(0));
    let sk = symtrans(&["sk-verify", &pot, "--trials", "4"]);
    assert_eq!(sk.status.code(), Some(0), "{}", stdout(&sk));
    let csv_s = csv.to_string_lossy().into_owned();
    let g = symtrans(&["geodesic", &pot, "--trials", "3", "--dt", "0.01", "--out", &csv_s]);
    assert_eq!(g.status.code(), Some(0), "{}", stdout(&g));
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,x_1,x_2,x_3,x_4"));
    assert_eq!(lines.count(), 101);
}

#[test]
fn quartic_potential_has_no_closed_form_geodesic() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "q.pot", "potential v1 n=2 p=1 q=1\n4 0  1 0\n");
    assert_eq!(symtrans(&["geodesic", &f, "--trials", "1"]).status.code(), Some(2));
    let sk = symtrans(&["sk-verify", &f, "--trials", "3", "--format", "structured"]);
    // z1⁴ has non-isotropic support in signature (1,1)
    assert_eq!(sk.status.code(), Some(1));
    assert!(stdout(&sk).contains(r#""name":"commuting","trials":3,"failures":3"#));
}

#[test]
fn sampled_definite_signature_is_rigid() {
    let mut c = RunConfig::new(Cmd::SkVerify);
    c.signature = Some("3,0".parse().unwrap());
    c.trials = 2;
    c.seed = 1;
    let out = run(&c).unwrap();
    assert_eq!(out.exit_code(), 0);
    let s = out.render(Format::Structured);
    assert!(s.contains(r#""name":"definite_rigidity","trials":1,"failures":0"#));
    assert!(!s.contains("elapsed"));
}

#[test]
fn structured_output_is_deterministic_across_processes() {
    let dir = tempfile::tempdir().unwrap();
    let pot = dir.path().join("f.pot").to_string_lossy().into_owned();
    symtrans(&["sample", "--signature", "2,1", "--k", "1", "--degree", "4", "--seed", "8", "--out", &pot]);
    let args = ["sk-verify", pot.as_str(), "--trials", "5", "--seed", "3", "--format", "structured"];
    let a = symtrans(&args);
    let b = symtrans(&args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
}
