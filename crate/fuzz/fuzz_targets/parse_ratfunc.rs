#![no_main]

use libfuzzer_sys::fuzz_target;
use lpdo::io::{format_ratfunc, parse_ratfunc};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(f) = parse_ratfunc(s) {
        let text = format_ratfunc(&f);
        assert_eq!(parse_ratfunc(&text).expect("printed value parses"), f, "{text}");
    }
});
