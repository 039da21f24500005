#![no_main]

use libfuzzer_sys::fuzz_target;
use qlock::stabilizer::Tableau;

fuzz_target!(|text: &str| {
    if let Ok(t) = Tableau::parse_text(text) {
        let printed = t.to_text();
        assert_eq!(
            Tableau::parse_text(&printed)
                .expect("printed tableau parses")
                .to_text(),
            printed
        );
    }
});
