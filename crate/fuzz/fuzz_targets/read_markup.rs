#![no_main]

use libfuzzer_sys::fuzz_target;
use ontomvn::markup::read_markup;

// The reader must never panic; whether the input is a document or junk
// is its call to make.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let _ = read_markup(text);
});
