use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn cartan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cartan")).args(args).output().expect("binary runs")
}

fn specs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../specs")
}

fn spec(name: &str) -> String {
    specs().join(name).to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn passing_spec_exits_zero() {
    let o = cartan(&["run", &spec("sphere.json")]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("omega[2,1] = cot(t)·θ2 ok"));
}

#[test]
fn failing_check_exits_one() {
    let o = cartan(&["run", &spec("nunes.json")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("[fail] nunes / evans-equation"));
}

#[test]
fn check_filter_limits_the_run() {
    let o = cartan(&["run", &spec("nunes.json"), "--check", "expected-values"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("1 pass, 0 fail"), "{out}");
}

#[test]
fn builtins_run_by_name() {
    let o = cartan(&["check", "polar-plane"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = cartan(&["run", "--builtin", "s2-levi-civita", "--check", "ricci-contraction-slot"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("[discrepancy-noted]"));
    let o = cartan(&["check", "no-such-thing"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn json_report_is_byte_stable() {
    let a = scratch("a.json");
    let b = scratch("b.json");
    for p in [&a, &b] {
        let o = cartan(&["run", &spec("maxwell-torsion.json"), "--seed", "3", "--json", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    }
    let (a, b) = (std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(v["schema"], "cartan-report/1");
    assert_eq!(v["seed"], 3);
}

#[test]
fn json_to_stdout_replaces_text() {
    let o = cartan(&["check", "polar-plane", "--check", "summary", "--json", "-"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["checks"][0]["name"], "summary");
}

#[test]
fn malformed_specs_exit_two_with_position() {
    let p = scratch("bad-grammar.json");
    let text = std::fs::read_to_string(spec("sphere.json")).unwrap().replace("\"sin(t)\"", "\"sin(t))\"");
    std::fs::write(&p, text).unwrap();
    let o = cartan(&["run", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("cotetrad[1][1]") && err.contains("position 6"), "{err}");
    assert!(stdout(&o).is_empty());

    let p = scratch("bad-json.json");
    std::fs::write(&p, "{\"schema\": \"cartan-spec/1\",\n \"name\": }").unwrap();
    let o = cartan(&["run", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));

    let p = scratch("singular.json");
    let text = std::fs::read_to_string(spec("sphere.json")).unwrap().replace("[\"0\", \"sin(t)\"]", "[\"0\", \"0\"]");
    std::fs::write(&p, text).unwrap();
    let o = cartan(&["run", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("singular"), "{}", stderr(&o));

    let o = cartan(&["run", "/nonexistent/spec.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bad_options_exit_two() {
    assert_eq!(cartan(&["check", "polar-plane", "--samples", "0"]).status.code(), Some(2));
    assert_eq!(cartan(&["check", "polar-plane", "--check", "bogus"]).status.code(), Some(2));
    assert_eq!(cartan(&["run"]).status.code(), Some(2));
}

#[test]
fn list_names_everything() {
    let out = stdout(&cartan(&["list"]));
    for name in ["evans", "maxwell-flat", "cotetrad-wave", "torsion-sign"] {
        assert!(out.contains(name), "{name}");
    }
}
