#![no_main]
use libfuzzer_sys::fuzz_target;

use codedcast::coloring::{parse_coloring_dump, write_coloring_dump};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(coloring) = parse_coloring_dump(s) {
        let mut out = Vec::new();
        write_coloring_dump(&coloring, &mut out).unwrap();
        let again = parse_coloring_dump(std::str::from_utf8(&out).unwrap()).unwrap();
        assert_eq!(again, coloring);
    }
});
