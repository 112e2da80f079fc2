//! Generation of all stable `P`-pointed genus-`g` dual graphs up to
//! isomorphism, and the specialisation order on them.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;
use thiserror::Error;

use crate::canon::{self, CanonError};
use crate::graph::{DualGraph, EdgeSet, GraphError, HalfEdge, Vertex};
use crate::poset::FinPoset;

/// Default cap on the number of canonical forms computed during generation.
pub const DEFAULT_FORM_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumError {
    #[error("no stable graphs of genus {genus} with {legs} legs (2g-2+|P| must be positive)")]
    Unstable { genus: u64, legs: usize },
    #[error("enumeration exceeded {0} canonical forms")]
    BudgetExceeded(usize),
    #[error("graphs differ in genus or leg labels")]
    TypeMismatch,
    #[error("graph is not stable")]
    NotStable,
    #[error("leg labels must be distinct")]
    DuplicateLabel,
    #[error(transparent)]
    Canon(#[from] CanonError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("covers from single-edge contractions disagree with the relation: {0}")]
    CoverMismatch(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratumClass {
    pub bytes: Vec<u8>,
    /// The canonical representative.
    pub graph: DualGraph,
    pub edge_count: usize,
}

/// The isomorphism classes of `𝒢_{g,P}`, indexed by sorted canonical bytes.
#[derive(Debug, Clone)]
pub struct StratumTable {
    pub genus: u64,
    pub labels: Vec<String>,
    pub classes: Vec<StratumClass>,
    index: HashMap<Vec<u8>, usize>,
}

impl StratumTable {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn id_of_bytes(&self, bytes: &[u8]) -> Option<usize> {
        self.index.get(bytes).copied()
    }

    /// The class of `g`, if `g` is a graph of this type.
    pub fn class_of(&self, g: &DualGraph) -> Result<Option<usize>, EnumError> {
        Ok(self.id_of_bytes(&canon::canonical_form(g)?.bytes))
    }

    /// `3g − 3 + |P|`, the largest edge count of a stable graph of this type.
    pub fn max_edges(&self) -> usize {
        max_edges(self.genus, self.labels.len())
    }
}

pub fn max_edges(genus: u64, legs: usize) -> usize {
    (3 * genus as i128 - 3 + legs as i128).max(0) as usize
}

pub fn enumerate(genus: u64, labels: &[impl AsRef<str>]) -> Result<StratumTable, EnumError> {
    enumerate_with_budget(genus, labels, DEFAULT_FORM_BUDGET)
}

pub fn enumerate_with_budget(genus: u64, labels: &[impl AsRef<str>], budget: usize) -> Result<StratumTable, EnumError> {
    let mut labels: Vec<String> = labels.iter().map(|l| l.as_ref().to_string()).collect();
    labels.sort();
    if labels.windows(2).any(|w| w[0] == w[1]) {
        return Err(EnumError::DuplicateLabel);
    }
    if 2 * genus as i128 - 2 + labels.len() as i128 <= 0 {
        return Err(EnumError::Unstable { genus, legs: labels.len() });
    }
    let root = canon::canonical_graph(&DualGraph::one_vertex(genus, &labels))?;
    let mut found: BTreeMap<Vec<u8>, DualGraph> = BTreeMap::new();
    found.insert(canon::canonical_form(&root)?.bytes, root.clone());
    let mut frontier = vec![root];
    let mut forms = 1usize;
    while !frontier.is_empty() {
        let children: Vec<DualGraph> = frontier.par_iter().flat_map_iter(|g| inverse_contractions(g)).collect();
        forms += children.len();
        if forms > budget {
            return Err(EnumError::BudgetExceeded(budget));
        }
        let canon: Vec<(Vec<u8>, DualGraph)> =
            children.par_iter().map(|c| canon::canonical_form(c).map(|f| (f.bytes.clone(), f.apply(c)))).collect::<Result<_, _>>()?;
        let mut next = BTreeMap::new();
        for (bytes, g) in canon {
            if !found.contains_key(&bytes) {
                next.entry(bytes).or_insert(g);
            }
        }
        frontier = next.values().cloned().collect();
        found.extend(next);
    }
    let classes: Vec<StratumClass> =
        found.into_iter().map(|(bytes, graph)| StratumClass { edge_count: graph.edge_count(), bytes, graph }).collect();
    let index = classes.iter().enumerate().map(|(i, c)| (c.bytes.clone(), i)).collect();
    Ok(StratumTable { genus, labels, classes, index })
}

/// Graphs with one more edge that contract onto `g` along that edge.
pub fn inverse_contractions(g: &DualGraph) -> Vec<DualGraph> {
    let mut out = Vec::new();
    let incidence = g.incidence();
    let nh = g.half_edge_count();
    for (v, owned) in incidence.iter().enumerate() {
        let w = g.vertices[v].weight;
        if w >= 1 {
            let mut child = g.clone();
            child.vertices[v].weight = w - 1;
            child.half_edges.push(HalfEdge { vertex: v });
            child.half_edges.push(HalfEdge { vertex: v });
            child.involution.push(nh + 1);
            child.involution.push(nh);
            out.push(child);
        }
        let k = owned.len();
        for mask in 0u64..(1u64 << k) {
            let moved = mask.count_ones() as i64;
            let kept = k as i64 - moved;
            for a in 0..=w {
                let b = w - a;
                // Each side gains the new edge's half-edge.
                if 2 * a as i64 - 2 + kept + 1 <= 0 || 2 * b as i64 - 2 + moved + 1 <= 0 {
                    continue;
                }
                let mut child = g.clone();
                let nv = child.vertices.len();
                child.vertices[v].weight = a;
                child.vertices.push(Vertex { weight: b });
                for (bit, &h) in owned.iter().enumerate() {
                    if mask >> bit & 1 == 1 {
                        child.half_edges[h].vertex = nv;
                    }
                }
                child.half_edges.push(HalfEdge { vertex: v });
                child.half_edges.push(HalfEdge { vertex: nv });
                child.involution.push(nh + 1);
                child.involution.push(nh);
                out.push(child);
            }
        }
    }
    out
}

fn check_type(a: &DualGraph, b: &DualGraph) -> Result<(), EnumError> {
    if a.genus()? != b.genus()? || a.leg_labels() != b.leg_labels() {
        return Err(EnumError::TypeMismatch);
    }
    if !a.is_stable()? || !b.is_stable()? {
        return Err(EnumError::NotStable);
    }
    Ok(())
}

/// Subsets of `edges` of size `k`, as ι-closed edge sets.
fn edge_subsets(g: &DualGraph, k: usize) -> Vec<EdgeSet> {
    let edges = g.edges();
    let mut out = Vec::new();
    let m = edges.len();
    if k > m {
        return out;
    }
    let mut pick: Vec<usize> = (0..k).collect();
    loop {
        out.push(EdgeSet::new(pick.iter().flat_map(|&i| [edges[i].0, edges[i].1])));
        let Some(i) = (0..k).rev().find(|&i| pick[i] != i + m - k) else { break };
        pick[i] += 1;
        for j in i + 1..k {
            pick[j] = pick[j - 1] + 1;
        }
    }
    out
}

/// `a ≤ b` in the specialisation order: `b` is isomorphic to a contraction of `a`.
pub fn specialisation_leq(a: &DualGraph, b: &DualGraph) -> Result<bool, EnumError> {
    check_type(a, b)?;
    let (ea, eb) = (a.edge_count(), b.edge_count());
    if ea < eb {
        return Ok(false);
    }
    let target = canon::canonical_form(b)?.bytes;
    for set in edge_subsets(a, ea - eb) {
        let c = a.contract(&set)?;
        if canon::canonical_form(&c.graph)?.bytes == target {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Class ids of all contractions of class `i`.
fn contraction_classes(t: &StratumTable, i: usize) -> Result<BTreeSet<usize>, EnumError> {
    let g = &t.classes[i].graph;
    let mut out = BTreeSet::new();
    for k in 0..=g.edge_count() {
        for set in edge_subsets(g, k) {
            let c = g.contract(&set)?.graph;
            let id = t.class_of(&c)?.expect("contractions of stable graphs are stable");
            out.insert(id);
        }
    }
    Ok(out)
}

/// The specialisation poset on class ids. Covers obtained by contracting one
/// edge from each `Aut`-orbit are checked against the transitive reduction.
pub fn build_poset(t: &StratumTable) -> Result<FinPoset, EnumError> {
    let n = t.len();
    let ups: Vec<BTreeSet<usize>> = (0..n).into_par_iter().map(|i| contraction_classes(t, i)).collect::<Result<_, _>>()?;
    let leq: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| ups[i].contains(&j)).collect()).collect();
    let elements = (0..n).map(|i| i.to_string()).collect();
    let poset = FinPoset::new(elements, leq).map_err(|e| EnumError::CoverMismatch(e.to_string()))?;
    let mut covers = BTreeSet::new();
    for i in 0..n {
        for j in single_edge_contractions(t, i)? {
            covers.insert((i, j));
        }
    }
    let reduced: BTreeSet<(usize, usize)> = poset.covers().into_iter().collect();
    if covers != reduced {
        let diff: Vec<_> = covers.symmetric_difference(&reduced).collect();
        return Err(EnumError::CoverMismatch(format!("{diff:?}")));
    }
    Ok(poset)
}

/// Classes reached from class `i` by contracting a single edge, one edge per
/// `Aut`-orbit of edges.
pub fn single_edge_contractions(t: &StratumTable, i: usize) -> Result<BTreeSet<usize>, EnumError> {
    let g = &t.classes[i].graph;
    let aut = canon::automorphisms(g)?;
    let mut seen = vec![false; g.half_edge_count()];
    let mut out = BTreeSet::new();
    let elems = aut.group.elements().ok();
    for (h, j) in g.edges() {
        if seen[h] {
            continue;
        }
        match &elems {
            Some(es) => {
                for p in es {
                    seen[p.apply(h)] = true;
                    seen[p.apply(j)] = true;
                }
            }
            None => {
                seen[h] = true;
                seen[j] = true;
            }
        }
        let c = g.contract(&EdgeSet::new([h, j]))?.graph;
        out.insert(t.class_of(&c)?.expect("contraction stays in the table"));
    }
    Ok(out)
}
