#![no_main]

use libfuzzer_sys::fuzz_target;
use stratakit_core::canon::{canonical_form, decode};

fuzz_target!(|data: &[u8]| {
    if let Ok(g) = decode(data) {
        assert!(g.validate().is_valid());
        assert_eq!(canonical_form(&g).unwrap().bytes, data);
    }
});
