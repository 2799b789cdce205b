#![no_main]
use libfuzzer_sys::fuzz_target;

use codedcast::harness::ExperimentSpec;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        let _ = ExperimentSpec::from_json_str(s);
    }
});
