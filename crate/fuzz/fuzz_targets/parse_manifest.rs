#![no_main]

use libfuzzer_sys::fuzz_target;
use ontomvn::testkit::parse_manifest;

// The manifest reader must never panic on arbitrary text.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let _ = parse_manifest(text);
});
