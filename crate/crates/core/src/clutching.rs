//! The clutching map from the product of vertex-type posets of a graph `G`
//! onto the downset of `[G]`, and its factorisation through `Aut(G)`-orbits.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::canon::{self, CanonError};
use crate::enumerate::{self, EnumError, StratumTable};
use crate::graph::{DualGraph, GraphError};
use crate::perm::{FiniteGroup, GroupError};
use crate::poset::{product_indices, quotient_by_action, FinPoset, GroupAction, PosetError, Quotient};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClutchError {
    #[error("template graph is not stable")]
    NotStable,
    #[error(transparent)]
    Enum(#[from] EnumError),
    #[error(transparent)]
    Canon(#[from] CanonError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error("clutching tuple {0:?} lands outside the downset")]
    OutsideDownset(Vec<usize>),
}

#[derive(Debug, Clone)]
pub struct ClutchMap {
    /// One table per vertex, with leg labels the decimal half-edge ids.
    pub factors: Vec<StratumTable>,
    /// Product of the factor posets; element `i` is `tuples[i]`.
    pub domain: FinPoset,
    pub tuples: Vec<Vec<usize>>,
    /// The full poset of the template's type.
    pub stratum: StratumTable,
    /// Downset of the template's class, with the class id of each element.
    pub target: FinPoset,
    pub target_classes: Vec<usize>,
    /// Domain element to target element.
    pub map: Vec<usize>,
    /// Orbits of the product under `Aut(G)`.
    pub quotient: Quotient,
    /// Quotient element to target element, when the map is constant on orbits.
    pub factored: Option<Vec<usize>>,
    pub monotone: bool,
    pub surjective: bool,
    pub factored_monotone: bool,
    pub injective_on_quotient: bool,
}

pub fn clutch_poset_map(g: &DualGraph) -> Result<ClutchMap, ClutchError> {
    if !g.is_stable()? {
        return Err(ClutchError::NotStable);
    }
    let incidence = g.incidence();
    let factors: Vec<StratumTable> = incidence
        .iter()
        .enumerate()
        .map(|(v, hs)| {
            let labels: Vec<String> = hs.iter().map(|h| h.to_string()).collect();
            enumerate::enumerate(g.vertices[v].weight, &labels)
        })
        .collect::<Result<_, _>>()?;
    let factor_posets: Vec<FinPoset> = factors.iter().map(enumerate::build_poset).collect::<Result<_, _>>()?;
    let domain = FinPoset::product(&factor_posets);
    let tuples = product_indices(&factors.iter().map(|t| t.len()).collect::<Vec<_>>());

    let stratum = enumerate::enumerate(g.genus()?, &g.leg_labels())?;
    let full = enumerate::build_poset(&stratum)?;
    let top = stratum.class_of(g)?.expect("g is in its own stratum");
    let (target, target_classes) = full.downset(top)?;
    let position: BTreeMap<usize, usize> = target_classes.iter().enumerate().map(|(i, &c)| (c, i)).collect();

    let mut map = Vec::with_capacity(tuples.len());
    for t in &tuples {
        let parts: Vec<DualGraph> = t.iter().zip(&factors).map(|(&i, f)| f.classes[i].graph.clone()).collect();
        let glued = g.clutch(&parts)?.graph;
        let class = stratum.class_of(&glued)?.expect("clutching preserves type");
        map.push(*position.get(&class).ok_or_else(|| ClutchError::OutsideDownset(t.clone()))?);
    }

    let aut = canon::automorphisms(g)?;
    let group = FiniteGroup::from_perm_group(&aut.group)?;
    let mut flat_index = BTreeMap::new();
    for (i, t) in tuples.iter().enumerate() {
        flat_index.insert(t.clone(), i);
    }
    let mut table = Vec::with_capacity(group.order());
    for e in 0..group.order() {
        let phi = group.element(e);
        let rename: BTreeMap<String, String> = (0..g.half_edge_count()).map(|h| (h.to_string(), phi.apply(h).to_string())).collect();
        let mut vertex_image: Vec<usize> = (0..g.vertex_count()).collect();
        for (v, hs) in incidence.iter().enumerate() {
            if let Some(&h) = hs.first() {
                vertex_image[v] = g.owner(phi.apply(h));
            }
        }
        // image[v][c]: class in factor vertex_image[v] of factor v's class c relabelled by phi.
        let mut image: Vec<Vec<usize>> = Vec::with_capacity(factors.len());
        for (v, f) in factors.iter().enumerate() {
            let target_table = &factors[vertex_image[v]];
            let mut row = Vec::with_capacity(f.len());
            for c in &f.classes {
                let moved = c.graph.relabel_legs(&rename)?;
                row.push(target_table.class_of(&moved)?.expect("automorphisms preserve vertex types"));
            }
            image.push(row);
        }
        let row: Vec<usize> = tuples
            .iter()
            .map(|t| {
                let mut out = vec![0; t.len()];
                for (v, &c) in t.iter().enumerate() {
                    out[vertex_image[v]] = image[v][c];
                }
                flat_index[&out]
            })
            .collect();
        table.push(row);
    }
    let action = GroupAction::from_table(group, domain.clone(), table)?;
    let quotient = quotient_by_action(&action)?;

    let monotone = domain.is_monotone(&map, &target);
    let mut hit = vec![false; target.len()];
    for &m in &map {
        hit[m] = true;
    }
    let surjective = hit.iter().all(|&h| h);
    let constant_on_orbits = quotient.orbits.iter().all(|o| o.iter().all(|&x| map[x] == map[o[0]]));
    let factored: Option<Vec<usize>> = constant_on_orbits.then(|| quotient.orbits.iter().map(|o| map[o[0]]).collect());
    let (factored_monotone, injective_on_quotient) = match &factored {
        Some(f) => {
            let mut sorted = f.clone();
            sorted.sort();
            sorted.dedup();
            (quotient.poset.is_monotone(f, &target), sorted.len() == f.len())
        }
        None => (false, false),
    };
    Ok(ClutchMap {
        factors,
        domain,
        tuples,
        stratum,
        target,
        target_classes,
        map,
        quotient,
        factored,
        monotone,
        surjective,
        factored_monotone,
        injective_on_quotient,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dumbbell() {
        let g = DualGraph::from_parts(&[1, 1], &[(0, 1)], &[]);
        let m = clutch_poset_map(&g).unwrap();
        assert_eq!(m.domain.len(), 4);
        assert_eq!(m.target.len(), 3);
        assert!(m.monotone && m.surjective && m.factored_monotone);
        assert!(m.quotient.poset.is_isomorphic_to(&FinPoset::chain(3)));
        assert!(m.injective_on_quotient);
    }

    #[test]
    fn one_vertex_is_identity() {
        let g = DualGraph::one_vertex(1, &["a", "b"]);
        let m = clutch_poset_map(&g).unwrap();
        assert_eq!(m.domain.len(), m.stratum.len());
        assert!(m.monotone && m.surjective && m.injective_on_quotient);
    }
}
