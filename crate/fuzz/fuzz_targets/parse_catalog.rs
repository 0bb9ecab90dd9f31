#![no_main]

use libfuzzer_sys::fuzz_target;
use ontomvn::catalog::{parse_catalog, write_catalog};

// Accepted catalogs must write back out to something that parses to the
// same entry list.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(parsed) = parse_catalog(text) {
        let written = write_catalog(&parsed.catalog);
        let again = parse_catalog(&written).expect("written catalog must reparse");
        assert_eq!(
            parsed.catalog.entries(),
            again.catalog.entries(),
            "entries must survive a round trip"
        );
    }
});
