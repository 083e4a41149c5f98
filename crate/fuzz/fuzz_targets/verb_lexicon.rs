#![no_main]

use actionsieve::filters::tokenize_caption;
use actionsieve::VerbLexicon;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(lex) = VerbLexicon::from_reader(data) {
        let text = std::str::from_utf8(data).expect("lexicon read implies UTF-8");
        for token in tokenize_caption(text) {
            let _ = lex.contains(token);
        }
    }
});
