#![no_main]
use libfuzzer_sys::fuzz_target;

use codedcast::graph::parse_dimacs;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(list) = parse_dimacs(s) {
            for &(a, b) in &list.arcs {
                assert!((a as usize) < list.vertices && (b as usize) < list.vertices);
            }
        }
    }
});
