#![no_main]
use libfuzzer_sys::fuzz_target;

use centra::Poly;

// First byte picks the number of variables, the rest is the expression.
fuzz_target!(|data: &[u8]| {
    let Some((&n, rest)) = data.split_first() else {
        return;
    };
    let Ok(text) = std::str::from_utf8(rest) else {
        return;
    };
    let n = usize::from(n % 5) + 1;
    if let Ok(p) = Poly::parse(n, text) {
        let again = Poly::parse(n, &p.to_string()).expect("displayed polynomial parses");
        assert_eq!(again, p);
    }
});
