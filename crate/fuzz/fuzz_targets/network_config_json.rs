#![no_main]
use libfuzzer_sys::fuzz_target;

use codedcast::model::NetworkConfig;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(cfg) = NetworkConfig::from_json_str(s) {
            assert!(cfg.n() > 0);
        }
    }
});
