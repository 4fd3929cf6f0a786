#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(f) = lpdo::io::parse_linear_form(s) {
            assert_eq!(f.degree(), 1);
        }
    }
});
