#![no_main]

use libfuzzer_sys::fuzz_target;
use qlock::BitString;

fuzz_target!(|text: &str| {
    if let Ok(b) = text.parse::<BitString>() {
        assert_eq!(b.to_string(), text);
    }
});
