//! Brute-force oracles shared by the integration tests and the acceptance
//! harness. None of these use canonical labeling or the enumerator.
#![allow(dead_code)]

use std::collections::BTreeMap;

use stratakit_core::graph::{DualGraph, EdgeSet};

/// Vertex weight, sorted leg labels, and loop/edge multiplicities.
fn profile(g: &DualGraph) -> (Vec<u64>, Vec<Vec<String>>, Vec<Vec<usize>>) {
    let n = g.vertices.len();
    let mut labels = vec![Vec::new(); n];
    for (label, &h) in &g.legs {
        labels[g.half_edges[h].vertex].push(label.clone());
    }
    for l in &mut labels {
        l.sort();
    }
    let mut mult = vec![vec![0; n]; n];
    for h in 0..g.half_edges.len() {
        let k = g.involution[h];
        if k > h {
            let (u, v) = (g.half_edges[h].vertex, g.half_edges[k].vertex);
            mult[u][v] += 1;
            if u != v {
                mult[v][u] += 1;
            }
        }
    }
    (g.vertices.iter().map(|v| v.weight).collect(), labels, mult)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Isomorphism by trying every vertex bijection.
pub fn brute_isomorphic(g: &DualGraph, h: &DualGraph) -> bool {
    if g.vertices.len() != h.vertices.len() || g.half_edges.len() != h.half_edges.len() {
        return false;
    }
    let (wg, lg, mg) = profile(g);
    let (wh, lh, mh) = profile(h);
    let n = wg.len();
    permutations(n)
        .into_iter()
        .any(|p| (0..n).all(|v| wg[v] == wh[p[v]] && lg[v] == lh[p[v]]) && (0..n).all(|u| (0..n).all(|v| mg[u][v] == mh[p[u]][p[v]])))
}

/// Number of half-edge permutations commuting with the involution, fixing
/// legs, and inducing a weight-preserving vertex bijection.
pub fn brute_aut_order(g: &DualGraph) -> u128 {
    let nh = g.half_edges.len();
    let owner = |h: usize| g.half_edges[h].vertex;
    let legs: BTreeMap<usize, &String> = g.legs.iter().map(|(l, &h)| (h, l)).collect();
    let mut count = 0;
    for phi in permutations(nh) {
        if (0..nh).any(|h| phi[g.involution[h]] != g.involution[phi[h]]) {
            continue;
        }
        if legs.keys().any(|&h| phi[h] != h) {
            continue;
        }
        let mut vmap: BTreeMap<usize, usize> = BTreeMap::new();
        let ok = (0..nh).all(|h| *vmap.entry(owner(h)).or_insert(owner(phi[h])) == owner(phi[h]));
        let mut images: Vec<usize> = vmap.values().copied().collect();
        images.sort();
        images.dedup();
        if ok && images.len() == vmap.len() && vmap.iter().all(|(&u, &v)| g.vertices[u].weight == g.vertices[v].weight) {
            count += 1;
        }
    }
    count
}

/// Every connected stable graph (as labelled raw data) with at most
/// `max_half_edges` half-edges, vertex weights at most `max_weight`, and
/// legs labelled by a prefix of `a, b, c, ...`.
pub fn raw_stable_graphs(max_half_edges: usize, max_weight: u64) -> Vec<DualGraph> {
    const LABELS: [&str; 8] = ["a", "b", "c", "d", "e", "f", "g", "h"];
    let mut out = Vec::new();
    for nv in 1..=max_half_edges.max(1) {
        let pairs: Vec<(usize, usize)> = (0..nv).flat_map(|u| (u..nv).map(move |v| (u, v))).collect();
        for e in 0..=max_half_edges / 2 {
            if nv > e + 1 {
                continue;
            }
            for edges in multisets(&pairs, e) {
                for legs_n in 0..=max_half_edges - 2 * e {
                    for placement in tuples(nv, legs_n) {
                        let legs: Vec<(&str, usize)> = placement.iter().enumerate().map(|(i, &v)| (LABELS[i], v)).collect();
                        for weights in tuples(max_weight as usize + 1, nv) {
                            let w: Vec<u64> = weights.iter().map(|&x| x as u64).collect();
                            let g = DualGraph::from_parts(&w, &edges, &legs);
                            if g.validate().is_valid() && g.is_stable() == Ok(true) {
                                out.push(g);
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

fn multisets<T: Clone>(items: &[T], k: usize) -> Vec<Vec<T>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for (i, x) in items.iter().enumerate() {
        for mut rest in multisets(&items[i..], k - 1) {
            rest.insert(0, x.clone());
            out.push(rest);
        }
    }
    out
}

fn tuples(base: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out.into_iter().flat_map(|t| (0..base).map(move |i| [t.clone(), vec![i]].concat())).collect();
    }
    out
}

/// Isomorphism classes of stable graphs of genus `genus` with legs `labels`,
/// found by exhaustive generation and pairwise brute-force isomorphism.
pub fn brute_strata(genus: u64, labels: &[&str]) -> Vec<DualGraph> {
    let n = labels.len() as u64;
    let max_vertices = (2 * genus + n).saturating_sub(2).max(1) as usize;
    let max_edges = (3 * genus + n).saturating_sub(3) as usize;
    let mut reps: Vec<DualGraph> = Vec::new();
    for nv in 1..=max_vertices {
        let pairs: Vec<(usize, usize)> = (0..nv).flat_map(|u| (u..nv).map(move |v| (u, v))).collect();
        for e in nv - 1..=max_edges {
            // genus = 1 - nv + e + Σw
            let Some(weight_sum) = (genus + nv as u64).checked_sub(1 + e as u64) else { continue };
            for edges in multisets(&pairs, e) {
                for placement in tuples(nv, labels.len()) {
                    let legs: Vec<(&str, usize)> = labels.iter().copied().zip(placement).collect();
                    for weights in tuples(weight_sum as usize + 1, nv) {
                        if weights.iter().sum::<usize>() as u64 != weight_sum {
                            continue;
                        }
                        let w: Vec<u64> = weights.iter().map(|&x| x as u64).collect();
                        let g = DualGraph::from_parts(&w, &edges, &legs);
                        if g.validate().is_valid() && g.is_stable() == Ok(true) && !reps.iter().any(|r| brute_isomorphic(r, &g)) {
                            reps.push(g);
                        }
                    }
                }
            }
        }
    }
    reps
}

/// `b` is isomorphic to a contraction of `a`, by trying every edge subset.
pub fn brute_specialises(a: &DualGraph, b: &DualGraph) -> bool {
    let edges = a.edges();
    let Some(k) = edges.len().checked_sub(b.edge_count()) else { return false };
    (0u32..1 << edges.len()).filter(|m| m.count_ones() as usize == k).any(|mask| {
        let ids = (0..edges.len()).filter(|i| mask & (1 << i) != 0).flat_map(|i| [edges[i].0, edges[i].1]);
        let contracted = a.contract(&EdgeSet::new(ids)).expect("closed leg-free set").graph;
        brute_isomorphic(&contracted, b)
    })
}

/// Four genus 6 graphs with legs a, b, c, each a contraction of the previous.
pub fn genus_six_chain() -> [DualGraph; 4] {
    let g1 =
        DualGraph::from_parts(&[1, 1, 0, 0], &[(0, 1), (0, 2), (1, 3), (2, 3), (0, 0), (2, 2), (3, 3)], &[("a", 1), ("b", 2), ("c", 3)]);
    let g2 = DualGraph::from_parts(&[1, 1, 2], &[(0, 1), (1, 2), (0, 2), (0, 0)], &[("a", 1), ("b", 2), ("c", 2)]);
    let g3 = DualGraph::from_parts(&[5], &[(0, 0)], &[("a", 0), ("b", 0), ("c", 0)]);
    let g4 = DualGraph::one_vertex(6, &["a", "b", "c"]);
    [g1, g2, g3, g4]
}
