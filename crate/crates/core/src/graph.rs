//! Stable dual graphs: weighted multigraphs with a half-edge involution and a
//! bijective labelling of the legs.
//!
//! Half-edge indices carry all structure. A half-edge `h` is owned by the
//! vertex `half_edges[h].vertex`; `involution[h] == h` marks a leg, otherwise
//! `{h, involution[h]}` is an edge (a loop when both ends share an owner).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest vertex weight accepted by [`DualGraph::validate`] unless a
/// different bound is passed to [`DualGraph::validate_with_max_weight`].
pub const DEFAULT_MAX_WEIGHT: u64 = (1 << 31) - 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Vertex {
    pub weight: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HalfEdge {
    pub vertex: usize,
}

/// A `P`-pointed dual graph `(G, ω, m)`.
///
/// The serde representation is the interchange format:
/// `{"vertices":[{"weight":..}], "half_edges":[{"vertex":..}], "involution":[..], "legs":{"label":h}}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DualGraph {
    pub vertices: Vec<Vertex>,
    pub half_edges: Vec<HalfEdge>,
    pub involution: Vec<usize>,
    pub legs: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("invalid dual graph: {0}")]
    Invalid(ValidationReport),
    #[error("edge set contains leg {0}")]
    EdgeSetHasLeg(usize),
    #[error("edge set is not closed under the involution (half-edge {0})")]
    EdgeSetNotClosed(usize),
    #[error("half-edge {0} out of range")]
    HalfEdgeOutOfRange(usize),
    #[error("clutching expects {expected} parts, got {got}")]
    PartCount { expected: usize, got: usize },
    #[error("part for vertex {vertex} has leg labels {got:?}, expected {expected:?}")]
    LabelMismatch { vertex: usize, expected: Vec<String>, got: Vec<String> },
    #[error("part for vertex {vertex} has genus {got}, expected weight {expected}")]
    GenusMismatch { vertex: usize, expected: u64, got: u64 },
    #[error("arithmetic overflow in genus computation")]
    Overflow,
    #[error("leg labels must be distinct; {0:?} repeats")]
    DuplicateLabel(String),
}

/// One failed axiom. `kind` is a stable short tag (`"involution"`,
/// `"marking"`, `"connected"`, `"owner"`, `"weight"`, `"shape"`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: String,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, kind: &str) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }

    fn push(&mut self, kind: &str, detail: impl Into<String>) {
        self.violations.push(Violation { kind: kind.to_string(), detail: detail.into() });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        let parts: Vec<String> = self.violations.iter().map(|v| format!("{}: {}", v.kind, v.detail)).collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// An ι-closed set of non-leg half-edges.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct EdgeSet {
    pub half_edge_ids: BTreeSet<usize>,
}

impl EdgeSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new(ids: impl IntoIterator<Item = usize>) -> Self {
        EdgeSet { half_edge_ids: ids.into_iter().collect() }
    }

    /// The smallest ι-closed set containing `ids`.
    pub fn closure(g: &DualGraph, ids: impl IntoIterator<Item = usize>) -> Result<Self, GraphError> {
        let mut set = BTreeSet::new();
        for h in ids {
            if h >= g.half_edges.len() {
                return Err(GraphError::HalfEdgeOutOfRange(h));
            }
            set.insert(h);
            set.insert(g.involution[h]);
        }
        Ok(EdgeSet { half_edge_ids: set })
    }

    /// Checks the edge-set axioms against `g`.
    pub fn check(&self, g: &DualGraph) -> Result<(), GraphError> {
        for &h in &self.half_edge_ids {
            if h >= g.half_edges.len() {
                return Err(GraphError::HalfEdgeOutOfRange(h));
            }
            if g.involution[h] == h {
                return Err(GraphError::EdgeSetHasLeg(h));
            }
            if !self.half_edge_ids.contains(&g.involution[h]) {
                return Err(GraphError::EdgeSetNotClosed(h));
            }
        }
        Ok(())
    }

    pub fn union(&self, other: &EdgeSet) -> EdgeSet {
        EdgeSet { half_edge_ids: self.half_edge_ids.union(&other.half_edge_ids).copied().collect() }
    }

    pub fn len(&self) -> usize {
        self.half_edge_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.half_edge_ids.is_empty()
    }
}

/// Output of [`DualGraph::contract`]: the contracted graph and the relabeling
/// from the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Contraction {
    pub graph: DualGraph,
    /// Old vertex index to new vertex index.
    pub vertex_map: Vec<usize>,
    /// Old half-edge index to new half-edge index; `None` for contracted ones.
    pub half_edge_map: Vec<Option<usize>>,
}

/// Output of [`DualGraph::clutch`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clutching {
    pub graph: DualGraph,
    /// For each half-edge `h` of the template, the half-edge of the result
    /// that came from the leg labelled `h` in the part at `h`'s owner.
    pub half_edge_origin: Vec<usize>,
}

impl DualGraph {
    /// The one-vertex graph of type `(g, P)`: weight `g`, one leg per label.
    pub fn one_vertex(genus: u64, labels: &[impl AsRef<str>]) -> DualGraph {
        let legs = labels.iter().enumerate().map(|(i, l)| (l.as_ref().to_string(), i)).collect();
        DualGraph {
            vertices: vec![Vertex { weight: genus }],
            half_edges: vec![HalfEdge { vertex: 0 }; labels.len()],
            involution: (0..labels.len()).collect(),
            legs,
        }
    }

    /// Builds a graph from vertex weights, a list of edges (vertex pairs,
    /// equal pairs being loops) and labelled legs. Half-edges are numbered
    /// legs first (in the given order), then both ends of each edge.
    pub fn from_parts(weights: &[u64], edges: &[(usize, usize)], legs: &[(&str, usize)]) -> DualGraph {
        let mut half_edges = Vec::new();
        let mut involution = Vec::new();
        let mut leg_map = BTreeMap::new();
        for &(label, v) in legs {
            leg_map.insert(label.to_string(), half_edges.len());
            involution.push(half_edges.len());
            half_edges.push(HalfEdge { vertex: v });
        }
        for &(a, b) in edges {
            let h = half_edges.len();
            half_edges.push(HalfEdge { vertex: a });
            half_edges.push(HalfEdge { vertex: b });
            involution.push(h + 1);
            involution.push(h);
        }
        DualGraph { vertices: weights.iter().map(|&weight| Vertex { weight }).collect(), half_edges, involution, legs: leg_map }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn half_edge_count(&self) -> usize {
        self.half_edges.len()
    }

    pub fn is_leg(&self, h: usize) -> bool {
        self.involution[h] == h
    }

    pub fn owner(&self, h: usize) -> usize {
        self.half_edges[h].vertex
    }

    /// Number of 2-cycles of the involution.
    pub fn edge_count(&self) -> usize {
        (0..self.half_edges.len()).filter(|&h| self.involution[h] > h).count()
    }

    /// Edges as `(h, ι(h))` with `h < ι(h)`, in ascending order of `h`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.half_edges.len()).filter(|&h| self.involution[h] > h).map(|h| (h, self.involution[h])).collect()
    }

    pub fn leg_labels(&self) -> Vec<String> {
        self.legs.keys().cloned().collect()
    }

    /// Half-edges owned by each vertex, ascending.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.vertices.len()];
        for (h, he) in self.half_edges.iter().enumerate() {
            if he.vertex < inc.len() {
                inc[he.vertex].push(h);
            }
        }
        inc
    }

    /// `n_v`, the number of half-edges owned by each vertex (a loop counts twice).
    pub fn valences(&self) -> Vec<usize> {
        let mut val = vec![0; self.vertices.len()];
        for he in &self.half_edges {
            if he.vertex < val.len() {
                val[he.vertex] += 1;
            }
        }
        val
    }

    pub fn validate(&self) -> ValidationReport {
        self.validate_with_max_weight(DEFAULT_MAX_WEIGHT)
    }

    pub fn validate_with_max_weight(&self, max_weight: u64) -> ValidationReport {
        let mut report = ValidationReport::default();
        let n = self.half_edges.len();
        if self.involution.len() != n {
            report.push("shape", format!("involution has length {}, expected {}", self.involution.len(), n));
            return report;
        }
        for (h, he) in self.half_edges.iter().enumerate() {
            if he.vertex >= self.vertices.len() {
                report.push("owner", format!("half-edge {h} owned by missing vertex {}", he.vertex));
            }
        }
        for (v, vx) in self.vertices.iter().enumerate() {
            if vx.weight > max_weight {
                report.push("weight", format!("vertex {v} weight {} exceeds {max_weight}", vx.weight));
            }
        }
        let mut involution_ok = true;
        for h in 0..n {
            let j = self.involution[h];
            if j >= n {
                report.push("involution", format!("image of {h} is {j}, out of range"));
                involution_ok = false;
            } else if self.involution[j] != h {
                report.push("involution", format!("not self-inverse at {h}"));
                involution_ok = false;
            }
        }
        let mut seen = BTreeSet::new();
        for (label, &h) in &self.legs {
            if h >= n {
                report.push("marking", format!("label {label:?} points to missing half-edge {h}"));
                continue;
            }
            if !seen.insert(h) {
                report.push("marking", format!("half-edge {h} carries two labels"));
            }
            if involution_ok && self.involution[h] != h {
                report.push("marking", format!("label {label:?} marks non-leg half-edge {h}"));
            }
        }
        if involution_ok {
            for h in 0..n {
                if self.involution[h] == h && !seen.contains(&h) {
                    report.push("marking", format!("leg {h} is unlabelled"));
                }
            }
        }
        if self.vertices.is_empty() {
            report.push("connected", "graph has no vertices");
        } else if involution_ok && !report.has("owner") && self.components().len() > 1 {
            report.push("connected", format!("{} components", self.components().len()));
        }
        report
    }

    fn ensure_valid(&self) -> Result<(), GraphError> {
        let report = self.validate();
        if report.is_valid() {
            Ok(())
        } else {
            Err(GraphError::Invalid(report))
        }
    }

    /// Connected components of the underlying graph, each sorted, ordered by
    /// smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        self.components_of(|_| true)
    }

    /// Components of the subgraph `(V, E')` where `E'` are the half-edges
    /// accepted by `keep`.
    fn components_of(&self, keep: impl Fn(usize) -> bool) -> Vec<Vec<usize>> {
        let nv = self.vertices.len();
        let mut parent: Vec<usize> = (0..nv).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for h in 0..self.half_edges.len() {
            let j = self.involution[h];
            if j > h && keep(h) {
                let a = find(&mut parent, self.owner(h));
                let b = find(&mut parent, self.owner(j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for v in 0..nv {
            let r = find(&mut parent, v);
            groups.entry(r).or_default().push(v);
        }
        let mut comps: Vec<Vec<usize>> = groups.into_values().collect();
        comps.sort_by_key(|c| c[0]);
        comps
    }

    /// `1 − χ(G) + Σ g_v` with `χ(G) = |V| − |edges|`.
    pub fn genus(&self) -> Result<u64, GraphError> {
        self.ensure_valid()?;
        genus_of(self.vertices.len(), self.edge_count(), self.vertices.iter().map(|v| v.weight))
    }

    /// `2 g_v − 2 + n_v > 0` at every vertex.
    pub fn is_stable(&self) -> Result<bool, GraphError> {
        self.ensure_valid()?;
        Ok(self.stable_unchecked())
    }

    pub(crate) fn stable_unchecked(&self) -> bool {
        self.vertices.iter().zip(self.valences()).all(|(v, n)| 2 * (v.weight as i128) - 2 + n as i128 > 0)
    }

    /// Collapses the edges in `edges`; see [`Contraction`] for the relabeling.
    ///
    /// New vertices are the components of `(V, E')` ordered by their smallest
    /// original vertex; surviving half-edges keep their relative order.
    pub fn contract(&self, edges: &EdgeSet) -> Result<Contraction, GraphError> {
        self.ensure_valid()?;
        edges.check(self)?;
        let inside = |h: usize| edges.half_edge_ids.contains(&h);
        let comps = self.components_of(inside);
        let mut vertex_map = vec![0; self.vertices.len()];
        for (w, comp) in comps.iter().enumerate() {
            for &v in comp {
                vertex_map[v] = w;
            }
        }
        let mut inner_edges = vec![0usize; comps.len()];
        for &h in &edges.half_edge_ids {
            if self.involution[h] > h {
                inner_edges[vertex_map[self.owner(h)]] += 1;
            }
        }
        let mut vertices = Vec::with_capacity(comps.len());
        for (w, comp) in comps.iter().enumerate() {
            let weight = genus_of(comp.len(), inner_edges[w], comp.iter().map(|&v| self.vertices[v].weight))?;
            vertices.push(Vertex { weight });
        }
        let mut half_edge_map = vec![None; self.half_edges.len()];
        let mut next = 0;
        for (h, slot) in half_edge_map.iter_mut().enumerate() {
            if !inside(h) {
                *slot = Some(next);
                next += 1;
            }
        }
        let mut half_edges = Vec::with_capacity(next);
        let mut involution = Vec::with_capacity(next);
        for h in 0..self.half_edges.len() {
            if half_edge_map[h].is_some() {
                half_edges.push(HalfEdge { vertex: vertex_map[self.owner(h)] });
                involution.push(half_edge_map[self.involution[h]].expect("partner survives"));
            }
        }
        let legs = self.legs.iter().map(|(l, &h)| (l.clone(), half_edge_map[h].expect("legs survive"))).collect();
        Ok(Contraction { graph: DualGraph { vertices, half_edges, involution, legs }, vertex_map, half_edge_map })
    }

    /// Glues `parts[v]` (one per vertex of `self`) along the edges of `self`.
    ///
    /// The part at `v` must carry exactly the leg labels `"h"` for the
    /// half-edges `h` owned by `v` (decimal indices), and have genus equal to
    /// the weight of `v`. Legs of the parts matching an edge `{h, ι h}` of
    /// `self` become that edge; legs matching legs of `self` inherit their
    /// labels.
    pub fn clutch(&self, parts: &[DualGraph]) -> Result<Clutching, GraphError> {
        self.ensure_valid()?;
        if parts.len() != self.vertices.len() {
            return Err(GraphError::PartCount { expected: self.vertices.len(), got: parts.len() });
        }
        let incidence = self.incidence();
        let mut vertex_offset = Vec::with_capacity(parts.len());
        let mut edge_offset = Vec::with_capacity(parts.len());
        let (mut nv, mut nh) = (0, 0);
        for (v, part) in parts.iter().enumerate() {
            part.ensure_valid()?;
            let mut expected: Vec<String> = incidence[v].iter().map(|h| h.to_string()).collect();
            expected.sort();
            let got = part.leg_labels();
            if got != expected {
                return Err(GraphError::LabelMismatch { vertex: v, expected, got });
            }
            let pg = part.genus()?;
            if pg != self.vertices[v].weight {
                return Err(GraphError::GenusMismatch { vertex: v, expected: self.vertices[v].weight, got: pg });
            }
            vertex_offset.push(nv);
            edge_offset.push(nh);
            nv += part.vertices.len();
            nh += part.half_edges.len();
        }
        let mut vertices = Vec::with_capacity(nv);
        let mut half_edges = Vec::with_capacity(nh);
        let mut involution = Vec::with_capacity(nh);
        for (v, part) in parts.iter().enumerate() {
            vertices.extend(part.vertices.iter().copied());
            for (h, he) in part.half_edges.iter().enumerate() {
                half_edges.push(HalfEdge { vertex: he.vertex + vertex_offset[v] });
                involution.push(part.involution[h] + edge_offset[v]);
            }
        }
        let mut origin = vec![0; self.half_edges.len()];
        for (v, part) in parts.iter().enumerate() {
            for &h in &incidence[v] {
                origin[h] = part.legs[&h.to_string()] + edge_offset[v];
            }
        }
        let mut legs = BTreeMap::new();
        for h in 0..self.half_edges.len() {
            let partner = self.involution[h];
            if partner == h {
                legs.insert(self.label_of(h).expect("legs are labelled").to_string(), origin[h]);
            } else {
                involution[origin[h]] = origin[partner];
            }
        }
        Ok(Clutching { graph: DualGraph { vertices, half_edges, involution, legs }, half_edge_origin: origin })
    }

    /// The label of leg `h`, if `h` is a labelled leg.
    pub fn label_of(&self, h: usize) -> Option<&str> {
        self.legs.iter().find(|(_, &x)| x == h).map(|(l, _)| l.as_str())
    }

    /// Moves half-edge `h` to `half_edge_perm[h]` and vertex `v` to
    /// `vertex_perm[v]`. Both must be permutations.
    pub fn permuted(&self, half_edge_perm: &[usize], vertex_perm: &[usize]) -> DualGraph {
        let n = self.half_edges.len();
        let mut half_edges = vec![HalfEdge { vertex: 0 }; n];
        let mut involution = vec![0; n];
        for h in 0..n {
            half_edges[half_edge_perm[h]] = HalfEdge { vertex: vertex_perm[self.owner(h)] };
            involution[half_edge_perm[h]] = half_edge_perm[self.involution[h]];
        }
        let mut vertices = vec![Vertex { weight: 0 }; self.vertices.len()];
        for (v, vx) in self.vertices.iter().enumerate() {
            vertices[vertex_perm[v]] = *vx;
        }
        let legs = self.legs.iter().map(|(l, &h)| (l.clone(), half_edge_perm[h])).collect();
        DualGraph { vertices, half_edges, involution, legs }
    }

    /// Renames leg labels through `rename`; labels missing from the map are kept.
    pub fn relabel_legs(&self, rename: &BTreeMap<String, String>) -> Result<DualGraph, GraphError> {
        let mut legs = BTreeMap::new();
        for (l, &h) in &self.legs {
            let new = rename.get(l).cloned().unwrap_or_else(|| l.clone());
            if legs.insert(new.clone(), h).is_some() {
                return Err(GraphError::DuplicateLabel(new));
            }
        }
        Ok(DualGraph { legs, ..self.clone() })
    }
}

fn genus_of(vertices: usize, edges: usize, weights: impl Iterator<Item = u64>) -> Result<u64, GraphError> {
    let mut total: i128 = 1 - vertices as i128 + edges as i128;
    for w in weights {
        total = total.checked_add(w as i128).ok_or(GraphError::Overflow)?;
    }
    u64::try_from(total).map_err(|_| GraphError::Overflow)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dumbbell() -> DualGraph {
        DualGraph::from_parts(&[1, 1], &[(0, 1)], &[])
    }

    #[test]
    fn genus_counts_edges_and_weights() {
        assert_eq!(DualGraph::one_vertex(0, &["a", "b", "c"]).genus().unwrap(), 0);
        assert_eq!(dumbbell().genus().unwrap(), 2);
        let theta = DualGraph::from_parts(&[0, 0], &[(0, 1), (0, 1), (0, 1)], &[]);
        assert_eq!(theta.genus().unwrap(), 2);
    }

    #[test]
    fn stability_boundary() {
        assert!(DualGraph::one_vertex(0, &["a", "b", "c"]).is_stable().unwrap());
        assert!(!DualGraph::one_vertex(0, &["a", "b"]).is_stable().unwrap());
        assert!(!DualGraph::one_vertex(1, &[] as &[&str]).is_stable().unwrap());
        assert!(DualGraph::one_vertex(2, &[] as &[&str]).is_stable().unwrap());
    }

    #[test]
    fn validate_reports_each_axiom() {
        let mut g = dumbbell();
        g.involution = vec![1, 1];
        assert!(g.validate().has("involution"));

        let two = DualGraph::from_parts(&[1, 1], &[], &[("a", 0), ("b", 1)]);
        assert!(two.validate().has("connected"));

        let mut unlabelled = DualGraph::one_vertex(1, &["a"]);
        unlabelled.legs.clear();
        assert!(unlabelled.validate().has("marking"));

        let mut bad_owner = dumbbell();
        bad_owner.half_edges[0].vertex = 7;
        assert!(bad_owner.validate().has("owner"));

        let mut heavy = dumbbell();
        heavy.vertices[0].weight = DEFAULT_MAX_WEIGHT + 1;
        assert!(heavy.validate().has("weight"));

        let mut marked_edge = dumbbell();
        marked_edge.legs.insert("x".into(), 0);
        assert!(marked_edge.validate().has("marking"));

        assert!(dumbbell().validate().is_valid());
    }

    #[test]
    fn invalid_graph_is_an_error() {
        let two = DualGraph::from_parts(&[1, 1], &[], &[]);
        assert!(matches!(two.genus(), Err(GraphError::Invalid(_))));
        assert!(matches!(two.is_stable(), Err(GraphError::Invalid(_))));
    }

    #[test]
    fn contract_rejects_bad_edge_sets() {
        let g = DualGraph::from_parts(&[0, 1], &[(0, 1)], &[("a", 0), ("b", 0)]);
        assert_eq!(g.contract(&EdgeSet::new([0])).unwrap_err(), GraphError::EdgeSetHasLeg(0));
        assert_eq!(g.contract(&EdgeSet::new([2])).unwrap_err(), GraphError::EdgeSetNotClosed(2));
        assert_eq!(g.contract(&EdgeSet::new([9])).unwrap_err(), GraphError::HalfEdgeOutOfRange(9));
    }

    #[test]
    fn contract_empty_is_identity() {
        let g = DualGraph::from_parts(&[0, 1], &[(0, 1), (0, 0)], &[("a", 0)]);
        let c = g.contract(&EdgeSet::empty()).unwrap();
        assert_eq!(c.graph, g);
        assert_eq!(c.vertex_map, vec![0, 1]);
    }

    #[test]
    fn contract_loop_raises_weight() {
        let g = DualGraph::from_parts(&[5], &[(0, 0)], &[("a", 0), ("b", 0), ("c", 0)]);
        let c = g.contract(&EdgeSet::new([3, 4])).unwrap();
        assert_eq!(c.graph, DualGraph::one_vertex(6, &["a", "b", "c"]));
        assert_eq!(c.half_edge_map, vec![Some(0), Some(1), Some(2), None, None]);
    }

    #[test]
    fn clutch_single_vertex_returns_part() {
        let g = DualGraph::one_vertex(1, &["a", "b"]);
        let h = DualGraph::from_parts(&[0, 1], &[(0, 1)], &[("0", 0), ("1", 0)]);
        let c = g.clutch(&[h.clone()]).unwrap();
        let expected = h.relabel_legs(&[("0".to_string(), "a".to_string()), ("1".to_string(), "b".to_string())].into()).unwrap();
        assert_eq!(c.graph, expected);
    }

    #[test]
    fn clutch_maximal_parts_reproduces_template() {
        let g = dumbbell();
        let parts = [DualGraph::one_vertex(1, &["0"]), DualGraph::one_vertex(1, &["1"])];
        assert_eq!(g.clutch(&parts).unwrap().graph, g);
    }

    #[test]
    fn clutch_checks_labels_and_genus() {
        let g = dumbbell();
        let wrong_label = [DualGraph::one_vertex(1, &["x"]), DualGraph::one_vertex(1, &["1"])];
        assert!(matches!(g.clutch(&wrong_label), Err(GraphError::LabelMismatch { vertex: 0, .. })));
        let wrong_genus = [DualGraph::one_vertex(2, &["0"]), DualGraph::one_vertex(1, &["1"])];
        assert!(matches!(g.clutch(&wrong_genus), Err(GraphError::GenusMismatch { vertex: 0, .. })));
    }

    #[test]
    fn json_field_names() {
        let g = DualGraph::one_vertex(1, &["a"]);
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(s, r#"{"vertices":[{"weight":1}],"half_edges":[{"vertex":0}],"involution":[0],"legs":{"a":0}}"#);
        assert_eq!(serde_json::from_str::<DualGraph>(&s).unwrap(), g);
    }
}
