use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ezcasp_cli::checks::{check_is, check_rf, check_wseq};

const BIN: &str = env!("CARGO_BIN_EXE_ezcasp");

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
}

fn ezcasp(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove("EZCASP_STEP_BUDGET")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn light_program_prints_the_documented_answer() {
    let o = ezcasp(&[path(&data("light.ez"))]);
    assert_eq!(o.status.code(), Some(10));
    assert_eq!(
        stdout(&o),
        "{ cspdomain(fd), cspvar(x,0,23), required(x >= 12), switch, lightOn, x=12 }\n"
    );
}

#[test]
fn empty_program_has_the_empty_answer_set() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("empty.ez");
    std::fs::write(&f, "").unwrap();
    let o = ezcasp(&[path(&f), "-n", "0"]);
    assert_eq!(o.status.code(), Some(10));
    assert_eq!(stdout(&o), "{}\n");
}

#[test]
fn riddle_has_one_extended_answer_set() {
    let o = ezcasp(&[path(&data("riddle.ez")), "-n", "0"]);
    assert_eq!(o.status.code(), Some(10));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 1);
    for b in ["age(1)=12", "age(2)=9", "age(3)=6"] {
        assert!(out.contains(b), "{out}");
    }
}

#[test]
fn unsatisfiable_and_error_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("unsat.ez");
    std::fs::write(&f, "cspdomain(fd). cspvar(x,0,3). required(x > 5).").unwrap();
    let o = ezcasp(&[path(&f)]);
    assert_eq!(o.status.code(), Some(20));
    assert_eq!(stdout(&o), "UNSATISFIABLE\n");
    std::fs::write(&f, "p(.").unwrap();
    assert_eq!(ezcasp(&[path(&f)]).status.code(), Some(1));
    assert_eq!(ezcasp(&["/nonexistent/file.ez"]).status.code(), Some(1));
    assert_eq!(
        ezcasp(&[path(&data("light.ez")), "--schema", "blue"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn step_budget_comes_from_the_environment() {
    let o = Command::new(BIN)
        .arg(data("riddle.ez"))
        .env("EZCASP_STEP_BUDGET", "3")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    let o = Command::new(BIN)
        .arg(data("riddle.ez"))
        .env("EZCASP_STEP_BUDGET", "lots")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn clp_export_for_the_light_program() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("light.pl");
    let o = ezcasp(&[path(&data("light.ca")), "--emit-clp", path(&f)]);
    assert_eq!(o.status.code(), Some(10));
    assert_eq!(
        std::fs::read_to_string(&f).unwrap(),
        "solve([x,V_x]) :- V_x >= 0, V_x <= 23, V_x >= 12, labeling([V_x]).\n"
    );
}

#[test]
fn dumped_traces_validate_in_a_separate_process() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("light.ez", &["weak", "full"][..]),
        ("riddle.ez", &["weak", "full"]),
        ("night.ca", &["weak", "full"]),
        ("bench/is.ez", &["weak"]),
        ("bench/rf.ez", &["weak"]),
    ];
    for (i, (file, semantics)) in cases.into_iter().enumerate() {
        for schema in ["black", "grey", "clear"] {
            for &sem in semantics {
                let t = dir.path().join(format!("{i}-{schema}-{sem}.jsonl"));
                let src = data(file);
                let o = ezcasp(&[
                    path(&src),
                    "-n",
                    "0",
                    "--schema",
                    schema,
                    "--semantics",
                    sem,
                    "--dump-trace",
                    path(&t),
                ]);
                assert!(matches!(o.status.code(), Some(10 | 20)), "{file} {schema}");
                let v = ezcasp(&[path(&src), "--semantics", sem, "--validate-trace", path(&t)]);
                assert_eq!(
                    v.status.code(),
                    Some(0),
                    "{file} {schema} {sem}: {}",
                    String::from_utf8_lossy(&v.stderr)
                );
            }
        }
    }
}

#[test]
fn negated_reified_constraints_are_rejected_under_full_semantics() {
    let o = ezcasp(&[path(&data("bench/is.ez")), "--semantics", "full"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("complement"));
}

#[test]
fn tampered_traces_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("t.jsonl");
    let src = data("light.ez");
    ezcasp(&[path(&src), "--schema", "clear", "--dump-trace", path(&t)]);
    let text = std::fs::read_to_string(&t).unwrap();
    let mut lines: Vec<&str> = text.lines().collect();
    lines.remove(lines.len() / 2);
    std::fs::write(&t, lines.join("\n")).unwrap();
    assert_eq!(
        ezcasp(&[path(&src), "--validate-trace", path(&t)])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["-n", "0"][..],
        &["-n", "0", "--schema", "clear", "--semantics", "full"],
        &["--schema", "grey", "-n", "3"],
    ] {
        let file = data("bench/wseq.ez");
        let mut full = vec![path(&file)];
        full.extend_from_slice(args);
        let a = ezcasp(&full);
        let b = ezcasp(&full);
        assert_eq!(a.stdout, b.stdout);
        assert!(!a.stdout.is_empty());
    }
}

#[test]
fn oracle_and_solver_print_the_same_answers() {
    let dir = tempfile::tempdir().unwrap();
    let small = dir.path().join("small.ez");
    std::fs::write(&small, "cspdomain(fd). cspvar(x,0,5). {p}. {q}. required(x > 2) :- p. required(x < 2) :- q. r :- p, not q.")
        .unwrap();
    for src in [data("light.ez"), data("night.ca"), small] {
        let file = src.display().to_string();
        let mut solver: Vec<String> = stdout(&ezcasp(&[path(&src), "-n", "0"]))
            .lines()
            .map(String::from)
            .collect();
        let mut oracle: Vec<String> = stdout(&ezcasp(&[path(&src), "-n", "0", "--oracle"]))
            .lines()
            .map(String::from)
            .collect();
        solver.sort();
        oracle.sort();
        assert_eq!(solver, oracle, "{file}");
    }
}

#[test]
fn dump_ground_prints_the_ground_program() {
    let o = ezcasp(&[path(&data("riddle.ez")), "--dump-ground"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(
        out.contains("required(eq(minus(age(1),age(2)),3))"),
        "{out}"
    );
    assert!(!out.contains("B1"));
}

#[test]
fn bench_table_has_one_row_per_spec_line() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("rows.jsonl");
    let o = ezcasp(&["bench", path(&data("bench/toy.tsv")), "--json", path(&json)]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 10, "{out}");
    let rows: Vec<serde_json::Value> = std::fs::read_to_string(&json)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(rows.len(), 9);
    for chunk in rows.chunks(3) {
        let outcomes: Vec<&str> = chunk
            .iter()
            .map(|r| r["outcome"].as_str().unwrap())
            .collect();
        assert!(
            outcomes.iter().all(|o| o.starts_with("SAT")),
            "{outcomes:?}"
        );
    }

    let empty = dir.path().join("empty.tsv");
    std::fs::write(&empty, "").unwrap();
    let o = ezcasp(&["bench", path(&empty)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 1);

    std::fs::write(&empty, "wseq.ez black\n").unwrap();
    assert_eq!(ezcasp(&["bench", path(&empty)]).status.code(), Some(1));
}

#[test]
fn toy_models_pass_their_post_checks() {
    use ezcasp::engine::{solve_ca, Schema, SchemaConfig};
    use ezcasp_cli::app::load_input;
    use ezcasp_cli::output::Model;
    for (file, check) in [
        (
            "bench/wseq.ez",
            &(|m: &Model| check_wseq(m).map(|_| ())) as &dyn Fn(&Model) -> Result<(), _>,
        ),
        ("bench/is.ez", &|m: &Model| check_is(m).map(|_| ())),
        ("bench/rf.ez", &|m: &Model| check_rf(m).map(|_| ())),
    ] {
        let input = load_input(&data(file)).unwrap();
        for schema in Schema::ALL {
            let cfg = SchemaConfig {
                limit: Some(20),
                ..SchemaConfig::new(schema, ezcasp::ca::Semantics::Weak)
            };
            let out = solve_ca(&input.ca, &cfg).unwrap();
            assert!(!out.answers.is_empty(), "{file}");
            for a in &out.answers {
                check(&Model::new(&input.ca, &a.m, &a.alpha))
                    .unwrap_or_else(|e| panic!("{file} {schema}: {e}"));
            }
        }
    }
}
