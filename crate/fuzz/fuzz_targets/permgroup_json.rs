#![no_main]

use libfuzzer_sys::fuzz_target;
use stratakit_core::formats::parse_perm_group;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(g) = parse_perm_group(text) else { return };
    if g.degree() > 16 {
        return;
    }
    if let Ok(elements) = g.elements() {
        assert_eq!(elements.len() as u128, g.order());
        for p in g.generators() {
            assert!(g.contains(p));
        }
    }
});
