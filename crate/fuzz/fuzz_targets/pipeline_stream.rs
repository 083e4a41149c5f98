#![no_main]

use actionsieve::pipeline::run_pipeline;
use actionsieve::Cascade;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let cascade = Cascade::with_defaults();
    let mut out = Vec::new();
    let stats = run_pipeline(data, &mut out, &cascade, 1).expect("in-memory streams do not fail");
    assert!(stats.is_conserved());
});
