#![no_main]

use actionsieve::{canonical_serialize, parse_clip_record};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    // Anything that parses must survive a canonical round trip unchanged.
    if let Ok(clip) = parse_clip_record(data) {
        let wire = canonical_serialize(&clip);
        let again = parse_clip_record(&wire).expect("canonical form parses");
        assert_eq!(canonical_serialize(&again), wire);
    }
});
