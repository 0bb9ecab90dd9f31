#![no_main]

use libfuzzer_sys::fuzz_target;
use ontomvn::descriptor::{parse_descriptor, write_descriptor};

// Accepted descriptors must write back out to something that parses to
// the same coordinate.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(parsed) = parse_descriptor(text) {
        let written = write_descriptor(&parsed.descriptor);
        let again = parse_descriptor(&written).expect("written descriptor must reparse");
        assert_eq!(
            parsed.descriptor.coordinate, again.descriptor.coordinate,
            "coordinate must survive a round trip"
        );
    }
});
