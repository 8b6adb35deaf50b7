#![no_main]
use libfuzzer_sys::fuzz_target;

use centra::problem::Problem;

fuzz_target!(|data: &str| {
    if let Ok(p) = Problem::parse(data) {
        // Closure is cheap for the small dimensions that survive validation.
        let _ = p.algebra(16);
    }
});
