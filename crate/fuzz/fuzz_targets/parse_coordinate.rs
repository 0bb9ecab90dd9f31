#![no_main]

use libfuzzer_sys::fuzz_target;
use ontomvn::aspects::AspectSelector;
use ontomvn::descriptor::Coordinate;
use ontomvn::iri::Iri;

// The short-string parsers share one input. Accepted values must print
// back out to something the same parser accepts identically.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(coordinate) = Coordinate::parse(text) {
        let again = Coordinate::parse(&coordinate.to_string())
            .expect("printed coordinate must reparse");
        assert_eq!(coordinate, again, "coordinate must survive a round trip");
    }
    if let Ok(iri) = Iri::new(text) {
        Iri::new(iri.to_string()).expect("printed IRI must reparse");
    }
    let _ = AspectSelector::parse(text);
});
