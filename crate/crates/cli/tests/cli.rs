use std::path::PathBuf;
use std::process::{Command, Output};

fn palmcheck(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_palmcheck")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("palmcheck-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn full_suite_on_seed_seven_passes() {
    let o = palmcheck(&["check", "--suite", "all", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("0 fail, 0 precondition-failed"));
}

#[test]
fn mutated_instance_exits_one_and_names_the_check() {
    let o = palmcheck(&["check", "--seed", "1", "--mutation", "break_lastTstar"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    let line = text.lines().find(|l| l.contains("palm.transport_formula")).expect("check listed");
    assert!(line.starts_with("PRECONDITION-FAILED"), "{line}");
}

#[test]
fn json_report_carries_digest_and_summary() {
    let o = palmcheck(&["--format", "json", "check", "--seed", "0", "--suite", "deterministic"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["digest"].as_str().unwrap().len(), 16);
    assert_eq!(v["summary"]["fail"], 0);
    let names: Vec<&str> = v["reports"].as_array().unwrap().iter().map(|r| r["check_name"].as_str().unwrap()).collect();
    assert!(names.windows(2).all(|w| w[0] <= w[1]), "reports sorted by name");
}

#[test]
fn trivial_group_has_singleton_orbits() {
    let o = palmcheck(&["--format", "json", "orbits", "--seed", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["order"], 1);
    let orbits = v["orbits"].as_array().unwrap();
    assert_eq!(orbits.len(), v["points"].as_u64().unwrap() as usize);
    assert!(orbits.iter().all(|o| o["members"].as_array().unwrap().len() == 1));
}

#[test]
fn kernel_cells_are_probability_measures() {
    let o = palmcheck(&["--format", "json", "kernel", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let cells = v["kernel"].as_array().unwrap();
    assert!(!cells.is_empty());
    for c in cells {
        let (p, q) = c["atom"].as_str().unwrap().split_once('/').unwrap();
        let size = c["support"].as_array().unwrap().len() as u64;
        assert_eq!(p.parse::<u64>().unwrap() * size, q.parse::<u64>().unwrap(), "{c}");
    }
}

#[test]
fn malformed_json_exits_two_with_position() {
    let path = scratch("bad.json");
    std::fs::write(&path, "{\n  \"name\": \"x\",\n  \"seed\": }\n").unwrap();
    let o = palmcheck(&["check", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
}

#[test]
fn group_order_cap_exits_three() {
    let o = palmcheck(&["--max-group-order", "2", "check", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn missing_source_is_a_usage_error() {
    assert_eq!(palmcheck(&["check"]).status.code(), Some(2));
}

#[test]
fn gen_is_deterministic_and_round_trips_through_check() {
    let a = palmcheck(&["gen", "--seed", "11"]);
    let b = palmcheck(&["gen", "--seed", "11"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);

    let path = scratch("gen-11.json");
    std::fs::write(&path, &a.stdout).unwrap();
    let from_file = palmcheck(&["--format", "json", "check", path.to_str().unwrap()]);
    let from_seed = palmcheck(&["--format", "json", "check", "--seed", "11"]);
    assert_eq!(from_file.status.code(), Some(0));
    assert_eq!(from_file.stdout, from_seed.stdout);
}

#[test]
fn gen_several_needs_a_directory() {
    assert_eq!(palmcheck(&["gen", "--count", "2"]).status.code(), Some(2));
    let dir = scratch("many");
    let o = palmcheck(&["gen", "--seed", "4", "--count", "3", "--out", dir.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read_dir(&dir).unwrap().count(), 3);
}

#[test]
fn report_aggregates_and_fails_on_any_failure() {
    let good = scratch("r-good.json");
    let bad = scratch("r-bad.json");
    palmcheck(&["check", "--seed", "0", "--out", good.to_str().unwrap()]);
    palmcheck(&["check", "--seed", "3", "--mutation", "break_lastTstar", "--out", bad.to_str().unwrap()]);

    let ok = palmcheck(&["report", good.to_str().unwrap()]);
    assert_eq!(ok.status.code(), Some(0));

    let o = palmcheck(&["--format", "json", "report", good.to_str().unwrap(), bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["instances"].as_array().unwrap().len(), 2);
    assert!(v["failures"].as_array().unwrap().iter().any(|r| r["check_name"] == "palm.transport_formula"));
}
