#![no_main]

use actionsieve::metrics::{parse_reply, AnswerOutcome};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(reply) = std::str::from_utf8(data) {
        if let AnswerOutcome::Choice(i) = parse_reply(reply) {
            assert!(i < 4);
        }
    }
});
