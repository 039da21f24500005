#![no_main]

use libfuzzer_sys::fuzz_target;
use qlock::security::PriorDistribution;

fuzz_target!(|text: &str| {
    if let Ok(p) = PriorDistribution::parse(text) {
        assert!(p.p_max() > 0.0 && p.p_max() <= 1.0 + 1e-9);
        assert!(p.entropy().is_finite());
    }
});
