#![no_main]
use libfuzzer_sys::fuzz_target;

use centra::superposition::ExpPolyVec;

fuzz_target!(|data: &[u8]| {
    let Some((&n, rest)) = data.split_first() else {
        return;
    };
    let Ok(text) = std::str::from_utf8(rest) else {
        return;
    };
    let n = usize::from(n % 4) + 1;
    if let Ok(v) = ExpPolyVec::parse_records(n, text) {
        let back = ExpPolyVec::from_records(n, &v.to_records()).expect("records round-trip");
        assert_eq!(back, v);
    }
});
