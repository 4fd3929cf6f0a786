#![no_main]

use libfuzzer_sys::fuzz_target;
use lpdo::io::{format_form, parse_binary_form};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(f) = parse_binary_form(s) {
        let text = format_form(&f);
        assert_eq!(parse_binary_form(&text).expect("printed form parses"), f, "{text}");
    }
});
