#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(e) = lpdo::io::parse(s) {
            let _ = lpdo::io::eval_operator(&e);
        }
    }
});
