use actionsieve::pipeline::{run_pipeline, run_pipeline_to_vec, DecisionRecord};
use actionsieve::synth::{planted_clip, planted_corpus, rng_from_seed, PlantedLabel};
use actionsieve::{canonical_serialize, Cascade};

fn to_jsonl<'a>(records: impl IntoIterator<Item = &'a actionsieve::ClipRecord>) -> Vec<u8> {
    let mut out = Vec::new();
    for r in records {
        out.extend(canonical_serialize(r));
        out.push(b'\n');
    }
    out
}

#[test]
fn three_planted_passes_in_ten_give_thirty_percent() {
    let labels = [
        PlantedLabel::Pass,
        PlantedLabel::NoVerb,
        PlantedLabel::Pass,
        PlantedLabel::BadDuration,
        PlantedLabel::Coverage,
        PlantedLabel::LowResolution,
        PlantedLabel::Pass,
        PlantedLabel::PersonCount,
        PlantedLabel::StaticMotion,
        PlantedLabel::CameraMotion,
    ];
    let mut rng = rng_from_seed(10);
    let clips: Vec<_> = labels
        .iter()
        .enumerate()
        .map(|(i, l)| planted_clip(&mut rng, *l, i).record)
        .collect();
    let (records, stats) = run_pipeline_to_vec(&to_jsonl(&clips), &Cascade::with_defaults(), 4).unwrap();
    let finals: Vec<bool> = records.iter().map(|r| r.final_pass).collect();
    let want: Vec<bool> = labels.iter().map(|l| l.should_pass()).collect();
    assert_eq!(finals, want);
    assert_eq!(stats.final_passed, 3);
    assert_eq!(stats.final_yield, 0.3);
}

#[test]
fn stats_are_conserved_and_monotone() {
    let clips: Vec<_> = planted_corpus(21, 120).into_iter().map(|p| p.record).collect();
    let mut input = to_jsonl(&clips);
    input.extend(b"garbage\n{\"video_id\":\"x\",\"clip_id\":\"y\"}\n");
    let (records, stats) = run_pipeline_to_vec(&input, &Cascade::with_defaults(), 3).unwrap();
    assert_eq!(records.len(), 122);
    assert_eq!(stats.input_count, 122);
    assert_eq!(stats.parse_errors, 2);
    assert!(stats.is_conserved());
    assert!(stats.metadata.passed >= stats.existence.passed);
    assert!(stats.existence.passed >= stats.action.passed);
    assert_eq!(stats.action.passed, stats.final_passed);
    assert_eq!(stats.existence.attempted, stats.metadata.passed);
    assert_eq!(stats.action.attempted, stats.existence.passed);
    assert_eq!(stats.failures.total() + stats.final_passed + stats.parse_errors, stats.input_count);
    for r in &records {
        assert!(!r.verdicts.is_empty());
        assert_eq!(r.final_pass, r.verdicts.iter().all(|v| v.passed));
    }
}

#[test]
fn order_follows_input_for_any_worker_count() {
    let clips: Vec<_> = planted_corpus(22, 70).into_iter().map(|p| p.record).collect();
    let input = to_jsonl(&clips);
    let cascade = Cascade::with_defaults();
    let mut reference = Vec::new();
    run_pipeline(&input[..], &mut reference, &cascade, 1).unwrap();
    for workers in 2..=8 {
        let mut out = Vec::new();
        run_pipeline(&input[..], &mut out, &cascade, workers).unwrap();
        assert_eq!(out, reference, "workers {workers}");
    }
    let (records, _) = run_pipeline_to_vec(&input, &cascade, 5).unwrap();
    let ids: Vec<&str> = records.iter().map(|r| r.clip_id.as_str()).collect();
    let want: Vec<&str> = clips.iter().map(|c| c.meta.clip_id.as_str()).collect();
    assert_eq!(ids, want);
}

#[test]
fn survivors_pass_again() {
    let clips: Vec<_> = planted_corpus(23, 100).into_iter().map(|p| p.record).collect();
    let cascade = Cascade::with_defaults();
    let (records, _) = run_pipeline_to_vec(&to_jsonl(&clips), &cascade, 4).unwrap();
    let kept: Vec<_> = records
        .iter()
        .zip(&clips)
        .filter(|(r, _)| r.final_pass)
        .map(|(_, c)| c)
        .collect();
    assert!(!kept.is_empty());
    let (again, stats) = run_pipeline_to_vec(&to_jsonl(kept.iter().copied()), &cascade, 4).unwrap();
    assert!(again.iter().all(|r: &DecisionRecord| r.final_pass));
    assert_eq!(stats.final_yield, 1.0);
}
