use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use actionsieve::pipeline::{DecisionRecord, PipelineStats};
use actionsieve::synth::planted_corpus;
use actionsieve::canonical_serialize;
use tempfile::TempDir;

fn actionsieve(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_actionsieve"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_corpus(dir: &Path, seed: u64, n: usize) -> std::path::PathBuf {
    let mut bytes = Vec::new();
    for p in planted_corpus(seed, n) {
        bytes.extend(canonical_serialize(&p.record));
        bytes.push(b'\n');
    }
    let path = dir.join("detections.jsonl");
    fs::write(&path, bytes).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn run_args<'a>(input: &'a str, out: &'a str, stats: &'a str) -> Vec<&'a str> {
    vec!["run", "--input", input, "--output", out, "--stats", stats]
}

#[test]
fn run_writes_decisions_and_stats() {
    let dir = TempDir::new().unwrap();
    let input = write_corpus(dir.path(), 3, 20);
    let out = dir.path().join("decisions.jsonl");
    let stats = dir.path().join("stats.json");
    let mut args = run_args(s(&input), s(&out), s(&stats));
    args.push("--report");
    let o = actionsieve(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stdout).contains("final_yield"));

    let decisions: Vec<DecisionRecord> = fs::read_to_string(&out)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(decisions.len(), 20);
    let st: PipelineStats = serde_json::from_slice(&fs::read(&stats).unwrap()).unwrap();
    assert_eq!(st.input_count, 20);
    assert_eq!(st.final_passed as usize, decisions.iter().filter(|d| d.final_pass).count());
    assert!(st.is_conserved());
}

#[test]
fn worker_count_does_not_change_output() {
    let dir = TempDir::new().unwrap();
    let input = write_corpus(dir.path(), 8, 60);
    let mut outputs = Vec::new();
    for w in ["1", "8"] {
        let out = dir.path().join(format!("d{w}.jsonl"));
        let stats = dir.path().join(format!("s{w}.json"));
        let mut args = run_args(s(&input), s(&out), s(&stats));
        args.extend(["--workers", w]);
        assert!(actionsieve(&args).status.success());
        outputs.push((fs::read(out).unwrap(), fs::read(stats).unwrap()));
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn thresholds_override_config_file() {
    let dir = TempDir::new().unwrap();
    let input = write_corpus(dir.path(), 4, 10);
    let cfg = dir.path().join("cfg.txt");
    fs::write(&cfg, "# strict\nmin_short_side = 100000\n").unwrap();
    let out = dir.path().join("d.jsonl");
    let stats = dir.path().join("s.json");

    let mut args = run_args(s(&input), s(&out), s(&stats));
    args.extend(["--config", s(&cfg)]);
    assert!(actionsieve(&args).status.success());
    let st: PipelineStats = serde_json::from_slice(&fs::read(&stats).unwrap()).unwrap();
    assert_eq!(st.failures.low_resolution, 10);

    args.extend(["--threshold", "min_short_side=360"]);
    assert!(actionsieve(&args).status.success());
    let st: PipelineStats = serde_json::from_slice(&fs::read(&stats).unwrap()).unwrap();
    assert!(st.failures.low_resolution < 10);
}

#[test]
fn per_line_failures_exit_zero() {
    let dir = TempDir::new().unwrap();
    let input = dir.path().join("bad.jsonl");
    fs::write(&input, "not json\n{\"video_id\":\"v\"}\n").unwrap();
    let out = dir.path().join("d.jsonl");
    let stats = dir.path().join("s.json");
    let o = actionsieve(&run_args(s(&input), s(&out), s(&stats)));
    assert!(o.status.success());
    let st: PipelineStats = serde_json::from_slice(&fs::read(&stats).unwrap()).unwrap();
    assert_eq!((st.input_count, st.parse_errors), (2, 2));
}

#[test]
fn startup_errors_exit_one() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("d.jsonl");
    let stats = dir.path().join("s.json");
    let missing = dir.path().join("missing.jsonl");

    let o = actionsieve(&run_args(s(&missing), s(&out), s(&stats)));
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cannot open"));

    let input = write_corpus(dir.path(), 1, 2);
    let mut args = run_args(s(&input), s(&out), s(&stats));
    args.extend(["--threshold", "bogus=1"]);
    assert_eq!(actionsieve(&args).status.code(), Some(1));

    let mut args = run_args(s(&input), s(&out), s(&stats));
    args.extend(["--workers", "0"]);
    assert_eq!(actionsieve(&args).status.code(), Some(1));

    assert_eq!(actionsieve(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(actionsieve(&["--help"]).status.code(), Some(0));
}

#[test]
fn scenes_reports_cut() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("h.jsonl");
    let a = "[1,0,0,0]";
    let b = "[0,0,0,1]";
    let mut text = String::new();
    for i in 0..6 {
        let h = if i < 4 { a } else { b };
        text.push_str(&format!("{{\"frame_index\":{i},\"channels\":[{h},{h},{h}]}}\n"));
    }
    fs::write(&path, text).unwrap();
    let o = actionsieve(&["scenes", "--histograms", s(&path)]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["boundaries"], serde_json::json!([4]));
    assert_eq!(v["method"], "histogram");

    fs::write(&path, "{\"channels\":[[0.5],[1],[1]]}\n").unwrap();
    assert_eq!(actionsieve(&["scenes", "--histograms", s(&path)]).status.code(), Some(1));
}

#[test]
fn captions_and_qa_commands() {
    let dir = TempDir::new().unwrap();
    let caps = dir.path().join("c.jsonl");
    fs::write(
        &caps,
        concat!(
            r#"{"subjects":[{"subject_id":"s1","attributes":{"gender":"male","age_group":"adult"}}],"events":[{"order_index":1,"subject_id":"s1","description":"waves"}]}"#,
            "\n",
            r#"{"subjects":[{"subject_id":"s1","attributes":{"gender":"male","age_group":"adult"}}],"events":[{"order_index":1,"subject_id":"s9","description":"waves"}]}"#,
            "\n"
        ),
    )
    .unwrap();
    let o = actionsieve(&["captions", "--input", s(&caps)]);
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(o.status.success());
    assert!(text.contains("unknown subject_id s9"), "{text}");
    assert!(text.contains("documents 2 valid 1 invalid 1"), "{text}");

    let qa = dir.path().join("qa.jsonl");
    fs::write(
        &qa,
        r#"{"category":"count","question":"How many times does he clap?","options":["1","2","3","4"],"answer_index":1}"#,
    )
    .unwrap();
    let shuffled = dir.path().join("qa_shuffled.jsonl");
    let o = actionsieve(&["qa", "--input", s(&qa), "--shuffle-seed", "9", "--output", s(&shuffled)]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(fs::read_to_string(&shuffled).unwrap().trim()).unwrap();
    let idx = v["answer_index"].as_u64().unwrap() as usize;
    assert_eq!(v["options"][idx], "2");
}
