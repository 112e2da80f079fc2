#![no_main]

use libfuzzer_sys::fuzz_target;
use stratakit_core::formats::parse_poset;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(p) = parse_poset(text) {
        for (a, b) in p.covers() {
            assert!(p.lt(a, b));
        }
        let again = parse_poset(&serde_json::to_string(&p).unwrap()).unwrap();
        assert_eq!(p, again);
    }
});
