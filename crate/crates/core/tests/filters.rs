use actionsieve::filters::{human_action_filter, PairRule};
use actionsieve::motion::{build_tracklets, clip_affine_residual};
use actionsieve::synth::{
    articulated_scene, noisy_camera_scene, planted_clip, planted_corpus, rng_from_seed,
    walking_scene, PlantedLabel,
};
use actionsieve::{Cascade, FailureKind, FilterConfig, Stage, VerbLexicon};
use proptest::prelude::*;
use rand::Rng;

fn acceptance_rate(cfg: &FilterConfig, seed: u64, trials: usize, make: impl Fn(&mut rand_chacha::ChaCha8Rng) -> Vec<actionsieve::PoseFrame>) -> f64 {
    let mut rng = rng_from_seed(seed);
    let mut passed = 0;
    for _ in 0..trials {
        let frames = make(&mut rng);
        if human_action_filter(&frames, cfg).unwrap().passed {
            passed += 1;
        }
    }
    passed as f64 / trials as f64
}

#[test]
fn walking_people_pass_the_action_filter() {
    let cfg = FilterConfig::default();
    let rate = acceptance_rate(&cfg, 40, 300, |rng| {
        let persons = rng.random_range(1..=3);
        let seconds = rng.random_range(5..=20);
        walking_scene(rng, persons, seconds, 0.06, 0.05).action_frames()
    });
    assert!(rate >= 0.95, "walking acceptance {rate}");
}

#[test]
fn articulated_motion_passes_under_mean_rule() {
    let cfg = FilterConfig::default();
    let rate = acceptance_rate(&cfg, 41, 300, |rng| {
        let seconds = rng.random_range(5..=20);
        articulated_scene(rng, 1, seconds, 0.05, 0.05).action_frames()
    });
    assert!(rate >= 0.95, "articulated acceptance {rate}");
}

#[test]
fn every_pair_rule_is_stricter_than_mean() {
    let mean = FilterConfig::default();
    let every = FilterConfig {
        l1_pair_rule: PairRule::Every,
        ..FilterConfig::default()
    };
    let mut rng = rng_from_seed(42);
    for _ in 0..200 {
        let seconds = rng.random_range(5..=20);
        let frames = articulated_scene(&mut rng, 1, seconds, 0.05, 0.05).action_frames();
        let a = human_action_filter(&frames, &mean).unwrap();
        let b = human_action_filter(&frames, &every).unwrap();
        let (ma, mb) = (a.scores[&Stage::ActionMotion], b.scores[&Stage::ActionMotion]);
        assert!(mb <= ma + 1e-12, "{mb} > {ma}");
        assert!(!b.passed || a.passed);
    }
}

#[test]
fn residual_grows_with_keypoint_noise() {
    let sigmas = [0.0, 0.005, 0.01, 0.02, 0.04];
    let cfg = FilterConfig::default();
    let mut means = Vec::new();
    let mut rejections = Vec::new();
    for (i, &sigma) in sigmas.iter().enumerate() {
        let mut rng = rng_from_seed(500 + i as u64);
        let mut total = 0.0;
        let mut rejected = 0;
        for _ in 0..200 {
            let frames = noisy_camera_scene(&mut rng, 8, sigma).action_frames();
            let tracklets = build_tracklets(&frames, cfg.iou_min);
            total += clip_affine_residual(&frames, &tracklets, cfg.conf_min)
                .residual()
                .unwrap();
            let v = human_action_filter(&frames, &cfg).unwrap();
            rejected += usize::from(v.failure == Some(FailureKind::AffineResidual) || v.failure == Some(FailureKind::StaticMotion));
        }
        means.push(total / 200.0);
        rejections.push(rejected);
    }
    assert!(means.windows(2).all(|w| w[0] < w[1]), "{means:?}");
    assert!(rejections.windows(2).all(|w| w[0] >= w[1]), "{rejections:?}");
    assert_eq!(rejections[0], 200);
}

#[test]
fn cascade_passes_its_own_survivors_again() {
    let cascade = Cascade::with_defaults();
    let survivors: Vec<_> = planted_corpus(77, 90)
        .into_iter()
        .filter(|p| cascade.evaluate(&p.record).passed)
        .collect();
    assert!(!survivors.is_empty());
    for p in &survivors {
        let wire = actionsieve::canonical_serialize(&p.record);
        let back = actionsieve::parse_clip_record(&wire).unwrap();
        assert!(cascade.evaluate(&back).passed);
    }
}

fn passes(cfg: &FilterConfig, clips: &[actionsieve::synth::PlantedClip]) -> Vec<bool> {
    let cascade = Cascade::new(cfg.clone(), VerbLexicon::bundled()).unwrap();
    clips.iter().map(|p| cascade.evaluate(&p.record).passed).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn raising_a_threshold_never_admits_more(
        seed in 0u64..1000,
        key in 0usize..5,
        lo in 0.0f64..1.0,
        hi in 0.0f64..1.0,
    ) {
        let (lo, hi) = (lo.min(hi), lo.max(hi));
        let clips = planted_corpus(seed, 18);
        let set = |cfg: &mut FilterConfig, x: f64| match key {
            0 => cfg.l1_threshold = 0.2 * x,
            1 => cfg.affine_residual_threshold = 0.004 * x,
            2 => cfg.min_coverage = 0.3 * x,
            3 => cfg.min_short_side = (1200.0 * x) as u32,
            _ => cfg.min_clip_s = 10.0 * x,
        };
        let mut a = FilterConfig::default();
        let mut b = FilterConfig::default();
        set(&mut a, lo);
        set(&mut b, hi);
        let (pa, pb) = (passes(&a, &clips), passes(&b, &clips));
        for (x, y) in pa.iter().zip(&pb) {
            prop_assert!(!y || *x);
        }
    }
}

#[test]
fn planted_failures_name_their_stage() {
    let cascade = Cascade::with_defaults();
    let mut rng = rng_from_seed(3);
    for label in PlantedLabel::ALL {
        for id in 0..10 {
            let clip = planted_clip(&mut rng, label, id);
            let out = cascade.evaluate(&clip.record);
            if label.should_pass() {
                continue;
            }
            let v = out.failed_verdict().expect("planted failure is rejected");
            assert_eq!(Some(v.stage), label.expected_stage(), "{label:?}: {}", v.reason);
            assert_eq!(v.failure, label.expected_failure(), "{label:?}");
        }
    }
}
