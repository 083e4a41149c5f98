#![no_main]

use actionsieve::metrics::{caption_stats, parse_caption_doc, validate_caption_doc};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(doc) = parse_caption_doc(data, 1) {
        let _ = validate_caption_doc(&doc);
        let _ = caption_stats(&doc);
    }
});
