#![no_main]

use actionsieve::metrics::{parse_qa_item, shuffle_options, unshuffle_options};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(item) = parse_qa_item(data, 1) {
        let seed = data.len() as u64;
        let s = shuffle_options(&item, seed);
        assert_eq!(s.correct_option(), item.correct_option());
        assert_eq!(unshuffle_options(&s, seed), item);
    }
});
