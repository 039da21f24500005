#![no_main]

use libfuzzer_sys::fuzz_target;
use qlock::stabilizer::CliffordCircuit;

fuzz_target!(|data: &[u8]| {
    let Some((&w, rest)) = data.split_first() else {
        return;
    };
    let Ok(text) = std::str::from_utf8(rest) else {
        return;
    };
    let n = usize::from(w % 16) + 1;
    if let Ok(c) = CliffordCircuit::parse(n, text) {
        let again = CliffordCircuit::parse(n, &c.to_string()).expect("printed circuit parses");
        assert_eq!(again.to_string(), c.to_string());
    }
});
