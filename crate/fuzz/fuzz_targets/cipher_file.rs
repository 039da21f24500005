#![no_main]

use libfuzzer_sys::fuzz_target;
use qlock::protocol::CipherState;

fuzz_target!(|text: &str| {
    if let Ok(c) = CipherState::parse(text) {
        let printed = c.to_text();
        assert_eq!(
            CipherState::parse(&printed)
                .expect("printed cipher parses")
                .to_text(),
            printed
        );
    }
});
