#![no_main]

use actionsieve::FilterConfig;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(cfg) = FilterConfig::from_kv_str(text) {
            let back = FilterConfig::from_kv_str(&cfg.to_kv_string()).expect("written config reads back");
            assert_eq!(back, cfg);
        }
    }
});
