#![no_main]

use libfuzzer_sys::fuzz_target;
use lpdo::laplace::HyperbolicOp;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(p) = lpdo::io::parse_operator(s) else {
        return;
    };
    if let Ok((q, unit)) = HyperbolicOp::from_diffop(&p) {
        // from_diffop divides by the unit in front of d_x d_y
        assert_eq!(q.to_diffop().scale_left(&unit), p);
    }
});
