#![no_main]

use libfuzzer_sys::fuzz_target;
use lpdo::io::{parse_operator, print_canonical};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(p) = parse_operator(s) {
        // printing is canonical, so it must read back to the same value
        let text = print_canonical(&p);
        let back = parse_operator(&text).expect("printed operator parses");
        assert_eq!(back, p, "{text}");
    }
});
