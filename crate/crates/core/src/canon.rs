//! Canonical labelling of dual graphs by individualisation and refinement.
//!
//! Two graphs are isomorphic (by a label-preserving isomorphism) exactly when
//! their canonical byte strings agree. The same search yields the full
//! automorphism group.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::graph::{DualGraph, GraphError, HalfEdge, Vertex};
use crate::perm::{Perm, PermGroup};

/// Version tag written as the first byte of every canonical encoding.
pub const ENCODING_VERSION: u8 = 1;
const MAX_DECODED_VERTICES: u64 = 1 << 12;
const MAX_DECODED_HALF_EDGES: u64 = 1 << 16;
const MAX_LABEL_BYTES: u64 = 1 << 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CanonError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("canonical search exceeded {0} nodes")]
    BudgetExceeded(u64),
    #[error("malformed encoding: {0}")]
    Malformed(String),
    #[error("encoding is well formed but not canonical")]
    NotCanonical,
}

/// Canonical bytes together with the relabeling that produces them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalForm {
    pub bytes: Vec<u8>,
    /// Input half-edge to canonical half-edge.
    pub half_edge_witness: Vec<usize>,
    /// Input vertex to canonical vertex.
    pub vertex_witness: Vec<usize>,
}

impl CanonicalForm {
    /// The input graph relabelled into canonical position.
    pub fn apply(&self, g: &DualGraph) -> DualGraph {
        g.permuted(&self.half_edge_witness, &self.vertex_witness)
    }
}

/// A label-preserving isomorphism between two dual graphs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Isomorphism {
    pub half_edge_map: Vec<usize>,
    pub vertex_map: Vec<usize>,
}

/// `Aut(G)` acting on half-edges.
#[derive(Debug, Clone)]
pub struct Automorphisms {
    pub group: PermGroup,
    /// Every automorphism's action on vertices, including the identity.
    pub vertex_automorphisms: Vec<Perm>,
    pub order: u128,
}

struct Structure {
    n: usize,
    weights: Vec<u64>,
    labels: Vec<Vec<String>>,
    mult: Vec<Vec<usize>>,
    neighbours: Vec<Vec<(usize, usize)>>,
}

impl Structure {
    fn of(g: &DualGraph) -> Structure {
        let n = g.vertex_count();
        let mut labels = vec![Vec::new(); n];
        for (l, &h) in &g.legs {
            labels[g.owner(h)].push(l.clone());
        }
        for ls in &mut labels {
            ls.sort();
        }
        let mut mult = vec![vec![0; n]; n];
        for (h, j) in g.edges() {
            let (a, b) = (g.owner(h), g.owner(j));
            mult[a][b] += 1;
            if a != b {
                mult[b][a] += 1;
            }
        }
        let neighbours = (0..n).map(|v| (0..n).filter(|&w| w != v && mult[v][w] > 0).map(|w| (w, mult[v][w])).collect()).collect();
        Structure { n, weights: g.vertices.iter().map(|v| v.weight).collect(), labels, mult, neighbours }
    }

    fn initial_colours(&self) -> Vec<usize> {
        let keys: Vec<_> = (0..self.n)
            .map(|v| {
                let degree: usize = self.mult[v].iter().sum::<usize>() + self.mult[v][v];
                (self.weights[v], degree, self.mult[v][v], self.labels[v].clone())
            })
            .collect();
        rank(&keys)
    }

    fn refine(&self, colours: &mut Vec<usize>) {
        let mut count = distinct(colours);
        loop {
            let sigs: Vec<(usize, Vec<(usize, usize)>)> = (0..self.n)
                .map(|v| {
                    let mut s: Vec<(usize, usize)> = self.neighbours[v].iter().map(|&(w, m)| (colours[w], m)).collect();
                    s.sort();
                    (colours[v], s)
                })
                .collect();
            *colours = rank(&sigs);
            let next = distinct(colours);
            if next == count {
                return;
            }
            count = next;
        }
    }

    /// Encoding of the graph with vertex `order[p]` placed at position `p`.
    fn encode(&self, order: &[usize]) -> Vec<u8> {
        let mut out = vec![ENCODING_VERSION];
        put(&mut out, self.n as u64);
        for &v in order {
            put(&mut out, self.weights[v]);
        }
        for &v in order {
            put(&mut out, self.labels[v].len() as u64);
            for l in &self.labels[v] {
                put(&mut out, l.len() as u64);
                out.extend_from_slice(l.as_bytes());
            }
        }
        for p in 0..self.n {
            for q in p..self.n {
                put(&mut out, self.mult[order[p]][order[q]] as u64);
            }
        }
        out
    }
}

fn put(out: &mut Vec<u8>, x: u64) {
    leb128::write::unsigned(out, x).expect("writing to a Vec cannot fail");
}

fn rank<T: Ord + Clone>(keys: &[T]) -> Vec<usize> {
    let mut sorted: Vec<T> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    keys.iter().map(|k| sorted.binary_search(k).expect("present")).collect()
}

fn distinct(colours: &[usize]) -> usize {
    colours.iter().max().map_or(0, |m| m + 1)
}

struct Search<'a> {
    s: &'a Structure,
    budget: u64,
    nodes: u64,
    best: Option<(Vec<u8>, Vec<usize>)>,
    /// Orderings achieving the best encoding.
    tied: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn run(&mut self, mut colours: Vec<usize>) -> Result<(), CanonError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(CanonError::BudgetExceeded(self.budget));
        }
        self.s.refine(&mut colours);
        let k = distinct(&colours);
        if k == self.s.n {
            let mut order = vec![0; self.s.n];
            for (v, &c) in colours.iter().enumerate() {
                order[c] = v;
            }
            let enc = self.s.encode(&order);
            match &mut self.best {
                None => {
                    self.tied = vec![order.clone()];
                    self.best = Some((enc, order));
                }
                Some((b, o)) => {
                    if enc < *b {
                        self.tied = vec![order.clone()];
                        *b = enc;
                        *o = order;
                    } else if enc == *b {
                        if order < *o {
                            *o = order.clone();
                        }
                        self.tied.push(order);
                    }
                }
            }
            return Ok(());
        }
        let mut sizes = vec![0usize; k];
        for &c in &colours {
            sizes[c] += 1;
        }
        let target = (0..k).find(|&c| sizes[c] > 1).expect("not discrete");
        let cell: Vec<usize> = (0..self.s.n).filter(|&v| colours[v] == target).collect();
        for &chosen in &cell {
            let child: Vec<usize> = (0..self.s.n).map(|v| 2 * colours[v] + usize::from(v != chosen)).collect();
            self.run(rank(&child))?;
        }
        Ok(())
    }
}

fn search(g: &DualGraph, budget: u64) -> Result<(Structure, Vec<u8>, Vec<Vec<usize>>), CanonError> {
    let report = g.validate();
    if !report.is_valid() {
        return Err(GraphError::Invalid(report).into());
    }
    let s = Structure::of(g);
    let mut search = Search { s: &s, budget, nodes: 0, best: None, tied: Vec::new() };
    search.run(s.initial_colours())?;
    let (bytes, best_order) = search.best.take().expect("at least one leaf");
    let mut tied = std::mem::take(&mut search.tied);
    tied.sort();
    debug_assert_eq!(tied[0], best_order);
    Ok((s, bytes, tied))
}

/// Half-edge layout induced by a vertex ordering: per position, legs by
/// label, then edge ends by (other position, slot).
fn layout(g: &DualGraph, order: &[usize]) -> Vec<usize> {
    let mut pos = vec![0; order.len()];
    for (p, &v) in order.iter().enumerate() {
        pos[v] = p;
    }
    let mut slots: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut slot_of = vec![0usize; g.half_edge_count()];
    // Edges are visited in ascending order of the end at the lower position.
    let mut ends: Vec<(usize, usize)> = Vec::new();
    for (h, j) in g.edges() {
        let (ph, pj) = (pos[g.owner(h)], pos[g.owner(j)]);
        let lower = if ph <= pj { h } else { j };
        ends.push((lower, g.involution[lower]));
    }
    ends.sort();
    for (lo, hi) in ends {
        let (p, q) = (pos[g.owner(lo)], pos[g.owner(hi)]);
        let r = slots.entry((p.min(q), p.max(q))).or_insert(0);
        if p == q {
            let (a, b) = (lo.min(hi), lo.max(hi));
            slot_of[a] = 2 * *r;
            slot_of[b] = 2 * *r + 1;
        } else {
            slot_of[lo] = *r;
            slot_of[hi] = *r;
        }
        *r += 1;
    }
    let mut keys: Vec<((usize, u8, &str, usize, usize), usize)> = (0..g.half_edge_count())
        .map(|h| {
            let p = pos[g.owner(h)];
            let key =
                if g.is_leg(h) { (p, 0, g.label_of(h).unwrap_or(""), 0, 0) } else { (p, 1, "", pos[g.owner(g.involution[h])], slot_of[h]) };
            (key, h)
        })
        .collect();
    keys.sort();
    let mut witness = vec![0; g.half_edge_count()];
    for (i, (_, h)) in keys.into_iter().enumerate() {
        witness[h] = i;
    }
    witness
}

fn position_map(order: &[usize]) -> Vec<usize> {
    let mut pos = vec![0; order.len()];
    for (p, &v) in order.iter().enumerate() {
        pos[v] = p;
    }
    pos
}

pub const DEFAULT_SEARCH_BUDGET: u64 = 1_000_000;

pub fn canonical_form(g: &DualGraph) -> Result<CanonicalForm, CanonError> {
    canonical_form_with_budget(g, DEFAULT_SEARCH_BUDGET)
}

pub fn canonical_form_with_budget(g: &DualGraph, budget: u64) -> Result<CanonicalForm, CanonError> {
    let (_, bytes, tied) = search(g, budget)?;
    let order = &tied[0];
    Ok(CanonicalForm { bytes, half_edge_witness: layout(g, order), vertex_witness: position_map(order) })
}

/// The canonical representative of the isomorphism class of `g`.
pub fn canonical_graph(g: &DualGraph) -> Result<DualGraph, CanonError> {
    Ok(canonical_form(g)?.apply(g))
}

/// A label-preserving isomorphism `g → h`, if one exists.
pub fn is_isomorphic(g: &DualGraph, h: &DualGraph) -> Result<Option<Isomorphism>, CanonError> {
    if g.leg_labels() != h.leg_labels() {
        return Ok(None);
    }
    let cg = canonical_form(g)?;
    let ch = canonical_form(h)?;
    if cg.bytes != ch.bytes {
        return Ok(None);
    }
    let inv_h = Perm(ch.half_edge_witness.clone()).inverse();
    let inv_v = Perm(ch.vertex_witness.clone()).inverse();
    Ok(Some(Isomorphism {
        half_edge_map: cg.half_edge_witness.iter().map(|&c| inv_h.apply(c)).collect(),
        vertex_map: cg.vertex_witness.iter().map(|&c| inv_v.apply(c)).collect(),
    }))
}

pub fn automorphisms(g: &DualGraph) -> Result<Automorphisms, CanonError> {
    automorphisms_with_budget(g, DEFAULT_SEARCH_BUDGET)
}

/// `Aut(g)` as a permutation group on half-edges.
pub fn automorphism_group(g: &DualGraph) -> Result<PermGroup, CanonError> {
    Ok(automorphisms(g)?.group)
}

pub fn automorphisms_with_budget(g: &DualGraph, budget: u64) -> Result<Automorphisms, CanonError> {
    let (_, _, tied) = search(g, budget)?;
    let nh = g.half_edge_count();
    let base = Perm(layout(g, &tied[0])).inverse();
    let base_pos = position_map(&tied[0]);
    let mut generators = Vec::new();
    let mut vertex_automorphisms = Vec::new();
    for order in &tied {
        let lifted = base.compose(&Perm(layout(g, order)));
        if !lifted.is_identity() {
            generators.push(lifted);
        }
        vertex_automorphisms.push(Perm(base_pos.iter().map(|&p| order[p]).collect()));
    }
    vertex_automorphisms.sort();
    let mut between: BTreeMap<(usize, usize), Vec<(usize, usize)>> = BTreeMap::new();
    for (h, j) in g.edges() {
        let (a, b) = (g.owner(h), g.owner(j));
        let end = if a <= b { (h, j) } else { (j, h) };
        between.entry((a.min(b), a.max(b))).or_default().push(end);
    }
    let mut kernel_order: u128 = 1;
    for (&(a, b), es) in &between {
        for w in es.windows(2) {
            let mut p: Vec<usize> = (0..nh).collect();
            p.swap(w[0].0, w[1].0);
            p.swap(w[0].1, w[1].1);
            generators.push(Perm(p));
        }
        let m = es.len() as u128;
        kernel_order *= (1..=m).product::<u128>();
        if a == b {
            kernel_order *= 1u128 << m;
            for &(h, j) in es {
                generators.push(Perm::transposition(nh, h, j));
            }
        }
    }
    let order = tied.len() as u128 * kernel_order;
    let group = PermGroup::new(nh, generators).expect("automorphisms are permutations");
    debug_assert_eq!(group.order(), order);
    Ok(Automorphisms { group, vertex_automorphisms, order })
}

/// Rebuilds the canonical graph from canonical bytes, rejecting anything
/// that is not exactly the canonical encoding of a valid dual graph.
pub fn decode(bytes: &[u8]) -> Result<DualGraph, CanonError> {
    let mut r = bytes;
    let malformed = |m: &str| CanonError::Malformed(m.to_string());
    let read = |r: &mut &[u8]| -> Result<u64, CanonError> { leb128::read::unsigned(r).map_err(|e| CanonError::Malformed(e.to_string())) };
    let (&version, rest) = r.split_first().ok_or_else(|| malformed("empty input"))?;
    if version != ENCODING_VERSION {
        return Err(CanonError::Malformed(format!("unknown version {version}")));
    }
    r = rest;
    let n = read(&mut r)?;
    if n == 0 || n > MAX_DECODED_VERTICES {
        return Err(CanonError::Malformed(format!("vertex count {n} out of range")));
    }
    let n = n as usize;
    let mut weights = Vec::with_capacity(n);
    for _ in 0..n {
        weights.push(read(&mut r)?);
    }
    let mut half_edges: u64 = 0;
    let mut labels = Vec::with_capacity(n);
    for _ in 0..n {
        let count = read(&mut r)?;
        half_edges = half_edges.saturating_add(count);
        if half_edges > MAX_DECODED_HALF_EDGES {
            return Err(malformed("too many legs"));
        }
        let mut ls = Vec::new();
        for _ in 0..count {
            let len = read(&mut r)?;
            if len > MAX_LABEL_BYTES || len as usize > r.len() {
                return Err(malformed("label length out of range"));
            }
            let (raw, rest) = r.split_at(len as usize);
            r = rest;
            ls.push(String::from_utf8(raw.to_vec()).map_err(|_| malformed("label is not UTF-8"))?);
        }
        labels.push(ls);
    }
    let mut mult = vec![vec![0usize; n]; n];
    for p in 0..n {
        for q in p..n {
            let m = read(&mut r)?;
            half_edges = half_edges.saturating_add(m.saturating_mul(2));
            if half_edges > MAX_DECODED_HALF_EDGES {
                return Err(malformed("too many edges"));
            }
            mult[p][q] = m as usize;
        }
    }
    if !r.is_empty() {
        return Err(malformed("trailing bytes"));
    }
    let g = assemble(&weights, &labels, &mult)?;
    let form = canonical_form(&g)?;
    if form.bytes != bytes {
        return Err(CanonError::NotCanonical);
    }
    Ok(g)
}

/// Graph with the given data in canonical half-edge layout.
fn assemble(weights: &[u64], labels: &[Vec<String>], mult: &[Vec<usize>]) -> Result<DualGraph, CanonError> {
    let n = weights.len();
    let mut half_edges = Vec::new();
    let mut legs = BTreeMap::new();
    // (position, other position, slot) -> half-edge
    let mut ends: BTreeMap<(usize, usize, usize), usize> = BTreeMap::new();
    for p in 0..n {
        for l in &labels[p] {
            if legs.insert(l.clone(), half_edges.len()).is_some() {
                return Err(CanonError::Malformed(format!("label {l:?} repeats")));
            }
            half_edges.push(HalfEdge { vertex: p });
        }
        for q in 0..n {
            let m = if p <= q { mult[p][q] } else { mult[q][p] };
            let slots = if p == q { 2 * m } else { m };
            for slot in 0..slots {
                ends.insert((p, q, slot), half_edges.len());
                half_edges.push(HalfEdge { vertex: p });
            }
        }
    }
    let mut involution: Vec<usize> = (0..half_edges.len()).collect();
    for (&(p, q, slot), &h) in &ends {
        involution[h] = if p == q { ends[&(p, q, slot ^ 1)] } else { ends[&(q, p, slot)] };
    }
    Ok(DualGraph { vertices: weights.iter().map(|&weight| Vertex { weight }).collect(), half_edges, involution, legs })
}
