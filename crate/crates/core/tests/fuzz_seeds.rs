//! Replays the checked-in fuzz corpus through the parsers and decoder with
//! the same invariants the fuzz targets assert.

use std::fs;
use std::path::PathBuf;

use stratakit_core::canon::{canonical_form, decode};
use stratakit_core::category::DEFAULT_MORPHISM_BUDGET;
use stratakit_core::charney_lee::cl_category;
use stratakit_core::formats::{parse_cl_instance, parse_graph, parse_perm_group, parse_poset};

fn seeds(target: &str) -> Vec<(String, Vec<u8>)> {
    let dir: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fuzz", "corpus", target].iter().collect();
    let mut out: Vec<(String, Vec<u8>)> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let path = e.unwrap().path();
            (path.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&path).unwrap())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn graph_seeds() {
    let mut accepted = 0;
    for (name, data) in seeds("graph_json") {
        let Ok(g) = parse_graph(std::str::from_utf8(&data).unwrap()) else { continue };
        accepted += 1;
        assert_eq!(parse_graph(&serde_json::to_string(&g).unwrap()).unwrap(), g, "{name}");
        let form = canonical_form(&g).unwrap();
        assert_eq!(canonical_form(&decode(&form.bytes).unwrap()).unwrap().bytes, form.bytes, "{name}");
    }
    assert!(accepted >= 8);
}

#[test]
fn poset_seeds() {
    let mut rejected = 0;
    for (name, data) in seeds("poset_json") {
        match parse_poset(std::str::from_utf8(&data).unwrap()) {
            Ok(p) => {
                assert!(p.covers().into_iter().all(|(a, b)| p.lt(a, b)), "{name}");
                assert_eq!(parse_poset(&serde_json::to_string(&p).unwrap()).unwrap(), p);
            }
            Err(_) => rejected += 1,
        }
    }
    assert_eq!(rejected, 2);
}

#[test]
fn permgroup_seeds() {
    for (name, data) in seeds("permgroup_json") {
        let Ok(g) = parse_perm_group(std::str::from_utf8(&data).unwrap()) else {
            assert!(name.starts_with("not_"), "{name} rejected");
            continue;
        };
        let elements = g.elements().unwrap();
        assert_eq!(elements.len() as u128, g.order(), "{name}");
        assert!(g.generators().iter().all(|p| g.contains(p)));
    }
}

#[test]
fn cl_instance_seeds() {
    for (name, data) in seeds("cl_instance_json") {
        match parse_cl_instance(std::str::from_utf8(&data).unwrap()) {
            Ok(inst) => {
                cl_category(&inst, DEFAULT_MORPHISM_BUDGET).unwrap_or_else(|e| panic!("{name}: {e}"));
            }
            Err(e) => assert!(name.starts_with("unknown_"), "{name}: {e}"),
        }
    }
}

#[test]
fn canonical_decode_seeds() {
    let mut decoded = 0;
    for (name, data) in seeds("canonical_decode") {
        if let Ok(g) = decode(&data) {
            assert!(g.validate().is_valid(), "{name}");
            assert_eq!(canonical_form(&g).unwrap().bytes, data, "{name}");
            decoded += 1;
        }
    }
    assert!(decoded >= 13);
}
