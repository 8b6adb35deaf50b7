#![no_main]
use libfuzzer_sys::fuzz_target;

use centra::exactla::{format_rational, parse_rational, parse_rational_list};

fuzz_target!(|data: &str| {
    if let Ok(r) = parse_rational(data) {
        let again = parse_rational(&format_rational(&r)).expect("formatted rational parses");
        assert_eq!(again, r);
    }
    let _ = parse_rational_list(data);
});
