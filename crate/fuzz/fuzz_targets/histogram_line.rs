#![no_main]

use actionsieve::pipeline::{detect_scene_boundaries, read_histograms, DEFAULT_DIFF_THRESHOLD};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(hists) = read_histograms(data) {
        if let Ok(report) = detect_scene_boundaries(&hists, DEFAULT_DIFF_THRESHOLD) {
            assert!(report.boundaries.windows(2).all(|w| w[0] < w[1]));
        }
    }
});
