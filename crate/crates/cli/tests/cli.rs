use std::process::{Command, Output};

use qbpd::{symmetric_group, Diagram};

fn qbpd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qbpd"))
        .args(args)
        .env_remove("QBPD_JOBS")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = qbpd(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn enum_counts() {
    assert_eq!(stdout(&["enum", "4213", "--count"]), "5\n");
    assert_eq!(stdout(&["enum", "4132", "--count"]), "9\n");
    assert_eq!(stdout(&["enum", "1", "--count"]), "1\n");
    assert_eq!(stdout(&["enum", "4213", "--unpaired", "--count"]), "3\n");
}

#[test]
fn enum_listing_parses_back() {
    let text = stdout(&["enum", "[2,1,4,3]"]);
    let mut blocks = text.splitn(2, '\n');
    assert_eq!(blocks.next(), Some("5"));
    let diagrams: Vec<Diagram> = blocks
        .next()
        .unwrap()
        .split("\n\n")
        .map(|b| Diagram::from_text(b).unwrap())
        .collect();
    assert_eq!(diagrams.len(), 5);
    assert!(diagrams.iter().all(|d| d.is_valid()));
}

#[test]
fn enum_writes_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.txt");
    assert_eq!(stdout(&["enum", "321", "--out", path.to_str().unwrap()]), "2\n");
    let written = std::fs::read_to_string(&path).unwrap();
    assert_eq!(written.matches("\n\n").count(), 1);
}

#[test]
fn poly_modes_agree_byte_for_byte() {
    assert_eq!(stdout(&["poly", "21", "--mode", "qbpd"]), "x1 - y1\n");
    for w in symmetric_group(4) {
        let w = w.to_string();
        let a = stdout(&["poly", &w, "--mode", "qbpd"]);
        assert_eq!(a, stdout(&["poly", &w, "--mode", "oracle"]), "{w}");
        assert_eq!(a, stdout(&["poly", &w, "--mode", "transition"]), "{w}");
    }
    let json = stdout(&["poly", "4213", "--mode", "oracle", "--format", "json"]);
    assert_eq!(json, stdout(&["poly", "4213", "--mode", "qbpd", "--format", "json"]));
}

#[test]
fn poly_specializations() {
    assert_eq!(stdout(&["poly", "4213", "--specialize", "y,q"]), "x1^3*x2\n");
    assert_eq!(stdout(&["poly", "21", "--specialize", "y"]), "x1\n");
    assert_eq!(qbpd(&["poly", "21", "--specialize", "z"]).status.code(), Some(2));
}

#[test]
fn stats_tables() {
    assert_eq!(
        stdout(&["stats", "--n", "4"]),
        "n,total,average,argmax,max\n4,5,0.208,4132,2\n"
    );
    assert_eq!(
        stdout(&["stats", "--n", "3"]),
        "n,total,average,argmax,max\n3,0,0.000,,0\n"
    );
    assert_eq!(
        stdout(&["stats", "--perm", "615432"]),
        "perm,poly_monomials,qbpd_monomials,cancellations,qbpd_count\n615432,97032,140052,21510,1038\n"
    );
    assert_eq!(
        stdout(&["stats", "--n", "4", "--rows", "--nonzero"]),
        "perm,poly_monomials,qbpd_monomials,cancellations,qbpd_count\n\
         1432,46,48,1,9\n2143,12,14,1,5\n3142,18,20,1,4\n4132,50,54,2,9\n"
    );
    let json: serde_json::Value =
        serde_json::from_str(&stdout(&["stats", "--perm", "2143", "--format", "json"])).unwrap();
    assert_eq!(json["perm"], "2143");
    assert_eq!(json["cancellations"], 1);
}

#[test]
fn stats_ignore_worker_count() {
    let one = stdout(&["--jobs", "1", "stats", "--n", "5", "--rows"]);
    let many = stdout(&["--jobs", "3", "stats", "--n", "5", "--rows"]);
    assert_eq!(one, many);
    let env = Command::new(env!("CARGO_BIN_EXE_qbpd"))
        .args(["stats", "--n", "5", "--rows"])
        .env("QBPD_JOBS", "2")
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(env.stdout).unwrap(), one);
}

#[test]
fn verify_checks_pass() {
    assert_eq!(stdout(&["verify", "theorem", "--n", "4"]), "theorem: pass, 24 permutations\n");
    assert_eq!(stdout(&["verify", "closure", "--n", "4"]), "closure: pass, 24 permutations\n");
    assert_eq!(stdout(&["verify", "monk", "--n", "4"]), "monk: pass, 24 permutations\n");
    assert_eq!(stdout(&["verify", "stability", "--n", "3"]), "stability: pass, 6 permutations\n");
    assert_eq!(
        stdout(&["verify", "transition", "--n", "5", "--sample", "5", "--seed", "9"]),
        "transition: pass, 5 permutations\n"
    );
}

#[test]
fn render_ascii_and_svg() {
    assert_eq!(
        stdout(&["render", "4213", "--index", "1", "--format", "ascii"]),
        "···┌\n·┌─┼\n┌┼─┼\n││┌┼\n"
    );
    assert_eq!(stdout(&["render", "4213", "--index", "2"]), "D··┌\nd┌─┼\n┌┼─┼\n││┌┼\n");
    assert_eq!(stdout(&["render", "1"]), "┌\n");
    let svg = stdout(&["render", "321", "--format", "svg"]);
    assert!(svg.starts_with("<svg") && svg.contains(r#"width="120""#));
}

#[test]
fn render_from_file_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.txt");
    let d = Diagram::from_text("4\n.RSR\n.VNC\nRCHC\nVVRC\n1,1\n").unwrap();
    std::fs::write(&path, d.to_text()).unwrap();
    assert_eq!(
        stdout(&["render", path.to_str().unwrap()]),
        "D┌┐┌\nd│└┼\n┌┼─┼\n││┌┼\n"
    );
    std::fs::write(&path, "2\nRR\nVV\n").unwrap();
    assert_eq!(qbpd(&["render", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(qbpd(&["render", "4213", "--index", "6"]).status.code(), Some(2));
    assert_eq!(qbpd(&["render", "4213", "--index", "0"]).status.code(), Some(2));
    assert_eq!(qbpd(&["enum", "1223"]).status.code(), Some(2));
    assert_eq!(qbpd(&["verify", "closure", "--n", "6"]).status.code(), Some(2));
    assert_eq!(qbpd(&["stats"]).status.code(), Some(2));
    assert_eq!(qbpd(&["bogus"]).status.code(), Some(2));
    assert_eq!(qbpd(&["stats", "--n", "7"]).status.code(), Some(2));
}
