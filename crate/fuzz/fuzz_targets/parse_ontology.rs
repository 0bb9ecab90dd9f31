#![no_main]

use libfuzzer_sys::fuzz_target;
use ontomvn::ofs::{parse_ontology, serialize_ontology};

// Accepted documents must survive a round trip: the serialized form has
// to reparse, and serializing that reparse must change nothing.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(parsed) = parse_ontology(text) {
        let once = serialize_ontology(&parsed.ontology);
        let again = parse_ontology(&once).expect("serialized form must reparse");
        assert_eq!(
            once,
            serialize_ontology(&again.ontology),
            "serialize must be a fixpoint"
        );
        assert_eq!(
            parsed.ontology.axiom_set(),
            again.ontology.axiom_set(),
            "axioms must survive a round trip"
        );
    }
});
