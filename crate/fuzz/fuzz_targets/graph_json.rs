#![no_main]

use libfuzzer_sys::fuzz_target;
use stratakit_core::canon::{canonical_form, decode};
use stratakit_core::formats::parse_graph;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(g) = parse_graph(text) else { return };
    // Accepted graphs serialize back to an equal graph.
    let again = parse_graph(&serde_json::to_string(&g).unwrap()).unwrap();
    assert_eq!(g, again);
    if g.half_edge_count() <= 12 {
        if let Ok(form) = canonical_form(&g) {
            let canon = decode(&form.bytes).expect("canonical bytes decode");
            assert_eq!(canonical_form(&canon).unwrap().bytes, form.bytes);
        }
    }
});
