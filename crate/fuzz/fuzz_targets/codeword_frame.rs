#![no_main]
use libfuzzer_sys::fuzz_target;

use codedcast::coding::{parse_frame, write_frame, Gf256, Gf65536};

fuzz_target!(|data: &[u8]| {
    // Accepted frames must re-encode to the same bytes.
    if let Ok(word) = parse_frame::<Gf256>(data) {
        assert_eq!(write_frame(&word), data);
    }
    if let Ok(word) = parse_frame::<Gf65536>(data) {
        assert_eq!(write_frame(&word), data);
    }
});
