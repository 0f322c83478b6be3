use std::process::{Command, Output};

fn fastleja(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fastleja")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn gen_unit_interval() {
    let o = fastleja(&["gen", "--domain", "0,1", "--n", "5", "--s1", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "index,parameter,re,im\n0,0,0,0\n1,1,1,0\n2,0.5,0.5,0\n3,0.25,0.25,0\n4,0.75,0.75,0\n"
    );
}

#[test]
fn verify_prop3_thousand_trials() {
    let o = fastleja(&["verify", "prop3", "--trials", "1000", "--seed", "42"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 1001);
    assert!(text.starts_with("trial,epsilon,n1,n2,m,lemma2_ok,prop3_ok,prop3_log_margin\n"));
    for line in text.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols[6], "true");
        assert!(cols[7].parse::<f64>().unwrap() > 0.0);
    }
}

#[test]
fn fig3_has_two_blocks() {
    let o = fastleja(&["fig3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let blocks: Vec<&str> = text.split("\n\n").collect();
    assert_eq!(blocks.len(), 2);
    assert_eq!(blocks[0].lines().count(), 2002);
    assert_eq!(blocks[1].lines().count(), 13);
}

#[test]
fn bad_input_exits_two_with_one_line() {
    for args in [
        &["gen", "--domain", "1,0"][..],
        &["gen", "--domain", "curve:spiral"],
        &["gen", "--format", "xml"],
        &["verify", "everything"],
        &["nope"],
    ] {
        let o = fastleja(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(o.stdout.is_empty());
        assert_eq!(String::from_utf8_lossy(&o.stderr).lines().count(), 1, "{args:?}");
    }
}

#[test]
fn invalid_thread_count_is_a_usage_error() {
    let o = Command::new(env!("CARGO_BIN_EXE_fastleja"))
        .args(["gen", "--n", "4"])
        .env("LEJA_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn reruns_are_byte_identical() {
    for args in [
        &["growth", "--domain", "-1,2", "--stages", "4,16,64"][..],
        &["star", "--stages", "16,64,256"],
        &["gen", "--domain", "curve:circle", "--n", "50", "--format", "json"],
    ] {
        let a = fastleja(args);
        let b = Command::new(env!("CARGO_BIN_EXE_fastleja")).args(args).env("LEJA_THREADS", "1").output().unwrap();
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn json_reports_carry_schema_version() {
    let o = fastleja(&["lebesgue", "--stages", "4,8", "--nodes", "chebyshev", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["schema_version"], "1");
    assert_eq!(v["command"], "lebesgue");
    assert_eq!(v["lebesgue"].as_array().unwrap().len(), 2);
    assert!(v["lebesgue"][0]["lambda"].as_f64().unwrap() >= 1.0);
}

#[test]
fn interp_writes_to_output_file() {
    let path = std::env::temp_dir().join(format!("fastleja-interp-{}.csv", std::process::id()));
    let o = fastleja(&["interp", "--function", "x^3", "--stages", "4,5", "--output", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert!(text.starts_with("n,sup_error\n4,"));
    for line in text.lines().skip(1) {
        let e: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert!(e <= 1e-12, "{line}");
    }
}
