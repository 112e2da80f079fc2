#[path = "common/mod.rs"]
mod common;

use proptest::prelude::*;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use stratakit_core::canon::{automorphisms, canonical_form, is_isomorphic};
use stratakit_core::enumerate::{build_poset, enumerate, specialisation_leq};
use stratakit_core::graph::{DualGraph, EdgeSet};
use stratakit_core::instances::random_stable_graph;

use common::{brute_isomorphic, brute_strata};

fn graph(seed: u64) -> DualGraph {
    random_stable_graph(&mut ChaCha8Rng::seed_from_u64(seed), 8)
}

/// A uniformly random relabelling of half-edges and vertices.
fn shuffle(g: &DualGraph, seed: u64) -> DualGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm = |n: usize| {
        let mut p: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            p.swap(i, rng.random_range(0..=i));
        }
        p
    };
    let h = perm(g.half_edge_count());
    let v = perm(g.vertex_count());
    g.permuted(&h, &v)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn relabelling_keeps_the_canonical_form(seed in any::<u64>(), shuffle_seed in any::<u64>()) {
        let g = graph(seed);
        let h = shuffle(&g, shuffle_seed);
        let (fg, fh) = (canonical_form(&g).unwrap(), canonical_form(&h).unwrap());
        prop_assert_eq!(&fg.bytes, &fh.bytes);
        let canon = fg.apply(&g);
        let again = canonical_form(&canon).unwrap();
        prop_assert_eq!(&again.bytes, &fg.bytes);
        prop_assert_eq!(again.apply(&canon), canon);
        prop_assert!(is_isomorphic(&g, &h).unwrap().is_some());
    }

    #[test]
    fn equal_forms_iff_isomorphic(a in any::<u64>(), b in any::<u64>()) {
        let (g, h) = (graph(a), graph(b));
        let same = canonical_form(&g).unwrap().bytes == canonical_form(&h).unwrap().bytes;
        prop_assert_eq!(same, brute_isomorphic(&g, &h));
        match is_isomorphic(&g, &h).unwrap() {
            Some(iso) => {
                prop_assert!(same);
                prop_assert_eq!(g.permuted(&iso.half_edge_map, &iso.vertex_map).legs, h.legs.clone());
            }
            None => prop_assert!(!same),
        }
    }

    #[test]
    fn automorphisms_fix_legs_and_commute_with_the_involution(seed in any::<u64>()) {
        let g = graph(seed);
        let aut = automorphisms(&g).unwrap();
        for p in aut.group.elements().unwrap() {
            for &h in g.legs.values() {
                prop_assert_eq!(p.apply(h), h);
            }
            for h in 0..g.half_edge_count() {
                prop_assert_eq!(p.apply(g.involution[h]), g.involution[p.apply(h)]);
                prop_assert_eq!(g.permuted(&p.0, &vertex_image(&g, &p.0)), g.clone());
            }
        }
    }

    #[test]
    fn contractions_compose(seed in any::<u64>(), first in any::<u32>(), second in any::<u32>()) {
        let g = graph(seed);
        let edges = g.edges();
        let pick = |mask: u32| -> Vec<usize> { (0..edges.len()).filter(|i| mask & (1 << i) != 0).map(|i| edges[i].0).collect() };
        let i = pick(first);
        let j: Vec<usize> = pick(second & !first);
        let step = g.contract(&EdgeSet::closure(&g, i.clone()).unwrap()).unwrap();
        let j_image: Vec<usize> = j.iter().map(|&h| step.half_edge_map[h].expect("edge survives")).collect();
        let twice = step.graph.contract(&EdgeSet::closure(&step.graph, j_image).unwrap()).unwrap().graph;
        let once = g.contract(&EdgeSet::closure(&g, i.into_iter().chain(j)).unwrap()).unwrap().graph;
        prop_assert!(is_isomorphic(&twice, &once).unwrap().is_some());
    }

    #[test]
    fn contraction_undoes_clutching_into_maximal_parts(seed in any::<u64>()) {
        let g = graph(seed);
        let parts: Vec<DualGraph> = g
            .incidence()
            .iter()
            .enumerate()
            .map(|(v, hs)| DualGraph::one_vertex(g.vertices[v].weight, &hs.iter().map(|h| h.to_string()).collect::<Vec<_>>()))
            .collect();
        let c = g.clutch(&parts).unwrap();
        prop_assert_eq!(c.graph.genus().unwrap(), g.genus().unwrap());
        let from_g: Vec<usize> = g.edges().iter().map(|&(a, _)| c.half_edge_origin[a]).collect();
        let collapsed = c.graph.contract(&EdgeSet::closure(&c.graph, from_g).unwrap()).unwrap().graph;
        let point = DualGraph::one_vertex(g.genus().unwrap(), &g.leg_labels());
        prop_assert!(is_isomorphic(&collapsed, &point).unwrap().is_some());
    }
}

/// Vertex permutation induced by a half-edge automorphism.
fn vertex_image(g: &DualGraph, half_edges: &[usize]) -> Vec<usize> {
    let mut v = vec![0; g.vertex_count()];
    for (h, &img) in half_edges.iter().enumerate() {
        v[g.owner(h)] = g.owner(img);
    }
    v
}

const SMALL_TYPES: [(u64, &[&str]); 8] = [
    (0, &["a", "b", "c"]),
    (0, &["a", "b", "c", "d"]),
    (0, &["a", "b", "c", "d", "e"]),
    (0, &["a", "b", "c", "d", "e", "f"]),
    (1, &["a"]),
    (1, &["a", "b"]),
    (1, &["a", "b", "c"]),
    (2, &[]),
];

#[test]
fn enumeration_matches_the_raw_search() {
    for (genus, labels) in SMALL_TYPES {
        let table = enumerate(genus, labels).unwrap();
        let oracle = brute_strata(genus, labels);
        assert_eq!(table.len(), oracle.len(), "({genus},{labels:?})");
        for g in &oracle {
            assert!(table.class_of(g).unwrap().is_some());
        }
        for c in &table.classes {
            assert!(c.edge_count <= table.max_edges());
            assert_eq!(c.graph.genus().unwrap(), genus);
            assert!(c.graph.is_stable().unwrap());
            assert_eq!(c.graph.leg_labels(), labels.iter().map(|s| s.to_string()).collect::<Vec<_>>());
        }
    }
}

#[test]
fn specialisation_poset_shape() {
    for (genus, labels) in SMALL_TYPES {
        let table = enumerate(genus, labels).unwrap();
        let p = build_poset(&table).unwrap();
        let n = p.len();
        let top = p.maximum().expect("a maximum");
        assert_eq!(table.classes[top].edge_count, 0);
        let minima: Vec<usize> = (0..n).filter(|&i| table.classes[i].edge_count == table.max_edges()).collect();
        assert_eq!(p.minimal_elements(), minima, "({genus},{labels:?})");
        for a in 0..n {
            for b in 0..n {
                let leq = specialisation_leq(&table.classes[a].graph, &table.classes[b].graph).unwrap();
                assert_eq!(leq, p.leq(a, b));
                if leq {
                    assert!(table.classes[a].edge_count >= table.classes[b].edge_count);
                    assert_eq!(table.classes[a].edge_count == table.classes[b].edge_count, a == b);
                }
            }
        }
    }
}

#[test]
fn split_types_are_distinguished() {
    let ab_cd = DualGraph::from_parts(&[0, 0], &[(0, 1)], &[("a", 0), ("b", 0), ("c", 1), ("d", 1)]);
    let ac_bd = DualGraph::from_parts(&[0, 0], &[(0, 1)], &[("a", 0), ("c", 0), ("b", 1), ("d", 1)]);
    assert!(!brute_isomorphic(&ab_cd, &ac_bd));
    assert_ne!(canonical_form(&ab_cd).unwrap().bytes, canonical_form(&ac_bd).unwrap().bytes);
}
