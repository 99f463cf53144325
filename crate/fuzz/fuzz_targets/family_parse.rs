#![no_main]

use libfuzzer_sys::fuzz_target;
use relqosc::args::parse_family;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(family) = parse_family(text) {
            assert_eq!(parse_family(family.name()).unwrap(), family);
        }
    }
});
