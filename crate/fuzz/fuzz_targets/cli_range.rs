#![no_main]

use libfuzzer_sys::fuzz_target;
use qlock_cli::range::{parse_float_list, parse_range};

fuzz_target!(|text: &str| {
    if let Ok(v) = parse_range(text) {
        assert!(!v.is_empty());
        assert!(v.windows(2).all(|w| w[0] < w[1]));
    }
    if let Ok(v) = parse_float_list(text) {
        assert!(v.iter().all(|x| x.is_finite()));
    }
});
