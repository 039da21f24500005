#![no_main]

use libfuzzer_sys::fuzz_target;
use qlock::protocol::Codebook;

fuzz_target!(|text: &str| {
    if let Ok(cb) = Codebook::parse(text) {
        // the format is canonical, so accepted input prints back unchanged
        assert_eq!(cb.to_text(), text);
    }
});
