#![no_main]

use libfuzzer_sys::fuzz_target;
use relqosc::args::Suite;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(suite) = text.parse::<Suite>() {
            assert_eq!(suite.name().parse::<Suite>().unwrap(), suite);
        }
    }
});
