#![no_main]

use libfuzzer_sys::fuzz_target;
use relqosc::args::CommonArgs;
use relqosc::config::{parse_config, RunConfig};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(file) = parse_config(text) {
        if let Ok(cfg) = RunConfig::resolve(&CommonArgs::default(), &file, None) {
            let _ = cfg.spec();
        }
    }
});
