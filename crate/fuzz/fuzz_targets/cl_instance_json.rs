#![no_main]

use libfuzzer_sys::fuzz_target;
use stratakit_core::category::DEFAULT_MORPHISM_BUDGET;
use stratakit_core::charney_lee::cl_category;
use stratakit_core::formats::parse_cl_instance;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(inst) = parse_cl_instance(text) {
        if inst.group_order() <= 24 && inst.poset().len() <= 8 {
            // Validated instances always define a category.
            cl_category(&inst, DEFAULT_MORPHISM_BUDGET).expect("valid instance");
        }
    }
});
