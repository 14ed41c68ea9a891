use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use heislab::reprs::{parse_config, VerdictRecord};

fn heislab(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heislab"))
        .args(args)
        .current_dir(dir)
        .env_remove("HEISLAB_MAX_BOUND")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("heisenberg.cfg"),
        "ring: Z\nfull_center: false\ngenerators: {\n}\n",
    )
    .unwrap();
    dir
}

#[test]
fn zxz_example_violates_lame() {
    let d = scratch();
    let o = heislab(&["example", "zxz-lame"], d.path());
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("VIOLATED check=lame method=exact_lattice"));
    assert!(out.contains("  b = {e12: 0, e13: 0, e23: (1, 0)}"));
}

#[test]
fn ztheta_example_satisfies_lame() {
    let d = scratch();
    let o = heislab(&["example", "ztheta-lame"], d.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("HOLDS check=lame"));
}

#[test]
fn nzct_on_h_is_exact() {
    let d = scratch();
    let o = heislab(&["check", "NZCT", "--rep", "heisenberg.cfg", "--bound", "3"], d.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("method=exact_lattice"));
    // the search agrees within radius 1
    let o = heislab(&["refute", "NZCT", "--rep", "heisenberg.cfg", "--bound", "1"], d.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("method=bounded_search"));
}

#[test]
fn exit_codes() {
    let d = scratch();
    let code = |args: &[&str]| heislab(args, d.path()).status.code();
    assert_eq!(code(&["tau", "--rep", "tau-fails-zxz"]), Some(1));
    assert_eq!(code(&["tau", "--rep", "heisenberg.cfg"]), Some(0));
    assert_eq!(
        code(&["check", "forall x,y ([x,y]=1)", "--rep", "heisenberg.cfg"]),
        Some(1)
    );
    assert_eq!(
        code(&["check", "torsion_free_qi(2)", "--rep", "heisenberg.cfg"]),
        Some(0)
    );
    assert_eq!(
        code(&["check", "forall x (x^2=1 -> x=1)", "--rep", "heisenberg.cfg"]),
        Some(2)
    );
    assert_eq!(
        code(&["refute", "forall x (x^2=1 -> x=1)", "--rep", "heisenberg.cfg"]),
        Some(2)
    );
    assert_eq!(code(&["check", "sigma", "--rep", "ztheta-lame"]), Some(1));
    assert_eq!(code(&["check", "tau", "--rep", "missing.cfg"]), Some(3));
    assert_eq!(code(&["check", "forall x (", "--rep", "heisenberg.cfg"]), Some(3));
    assert_eq!(
        code(&["refute", "tau", "--rep", "heisenberg.cfg", "--bound", "7"]),
        Some(3)
    );
    assert_eq!(code(&["bogus"]), Some(3));
}

#[test]
fn max_bound_from_environment() {
    let d = scratch();
    let o = Command::new(env!("CARGO_BIN_EXE_heislab"))
        .args(["refute", "tau", "--rep", "heisenberg.cfg", "--bound", "2"])
        .current_dir(d.path())
        .env("HEISLAB_MAX_BOUND", "1")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn json_round_trips() {
    let d = scratch();
    for args in [
        &["lame", "--rep", "zxz-lame", "--json"][..],
        &["nzct", "--rep", "tau-fails-zxz", "--json"],
        &["solve-s", "--z", "theta", "--rep", "ztheta-lame", "--json"],
        &["refute", "CT(0)", "--rep", "heisenberg.cfg", "--json"],
    ] {
        let o = heislab(args, d.path());
        let rec: VerdictRecord = serde_json::from_str(stdout(&o).trim()).unwrap();
        let v = rec.to_verdict().unwrap();
        assert_eq!(v.record(&heislab::parse_ring(&rec.ring).unwrap()), rec);
        // text and json agree on the status
        let text = heislab(&args[..args.len() - 1], d.path());
        assert!(stdout(&text).starts_with(&v.status.to_string()));
        assert_eq!(text.status.code(), o.status.code());
    }
}

#[test]
fn output_is_deterministic() {
    let d = scratch();
    let args = [
        "refute",
        "forall x,y ([x,y]=1)",
        "--rep",
        "tau-fails-zxz",
        "--bound",
        "2",
        "--seed",
        "9",
    ];
    let a = heislab(&args, d.path());
    let b = heislab(&args[..6], d.path());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn constructions_print_configs() {
    let d = scratch();
    let o = heislab(&["extend", "--at", "a1", "--rep", "heisenberg.cfg"], d.path());
    assert_eq!(o.status.code(), Some(0));
    let e = parse_config(&stdout(&o)).unwrap();
    let ex = heislab::reprs::fixtures::ztheta_lame();
    assert_eq!(e.ring(), ex.ring());
    assert_eq!(e.generator("t_theta"), ex.generator("b"));

    let o = heislab(&["adjoin-y", "--z", "(1,0)", "--rep", "zxz-lame"], d.path());
    let g1 = parse_config(&stdout(&o)).unwrap();
    assert!(g1.generator("Y").is_some());
    let path = d.path().join("g1.cfg");
    fs::write(&path, stdout(&o)).unwrap();
    let o = heislab(&["solve-s", "--z", "(1,0)", "--rep", "g1.cfg"], d.path());
    assert_eq!(o.status.code(), Some(0));

    let o = heislab(&["adjoin-center", "--rep", "heisenberg.cfg"], d.path());
    assert!(stdout(&o).contains("full_center: true"));
}

#[test]
fn parse_echoes_canonical_form() {
    let d = scratch();
    fs::write(d.path().join("f.txt"), "forall  x ( x^2 = 1 -> x = 1 )\n").unwrap();
    let o = heislab(&["parse", "f.txt"], d.path());
    assert_eq!(stdout(&o), "forall x (x^2=1 -> x=1)\nclass: quasi_identity\n");
    let o = heislab(&["parse", "heisenberg.cfg"], d.path());
    assert_eq!(stdout(&o), "ring: Z\nfull_center: false\ngenerators: {\n}\n");
}

#[test]
fn discriminate_and_bigpowers() {
    let d = scratch();
    fs::write(d.path().join("w.txt"), "a3\n[a3,a1] * a2^2\n").unwrap();
    let o = heislab(&["discriminate", "--targets", "w.txt"], d.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("a3 -> "));

    fs::write(d.path().join("t.txt"), "{e23: theta-1}\n{e23: theta-2}\n").unwrap();
    let o = heislab(&["bigpowers", "--targets", "t.txt", "--rep", "ztheta-lame"], d.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("theta -> 3\n"));
}

#[test]
fn crank_of_full_ut3_over_zxz() {
    let d = scratch();
    let o = heislab(&["crank", "--rep", "tau-fails-zxz"], d.path());
    assert!(stdout(&o).starts_with("c_rank = 3\n"));
}
