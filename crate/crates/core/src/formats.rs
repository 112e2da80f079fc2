//! JSON interchange: parsing with path-qualified errors, and writers for
//! Charney–Lee instances.

use std::collections::BTreeMap;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::charney_lee::{ClError, ClInstance};
use crate::graph::{DualGraph, ValidationReport};
use crate::perm::{FiniteGroup, GroupError, Perm, PermGroup};
use crate::poset::{FinPoset, GroupAction, PosetError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    /// Malformed JSON or a shape error, with the JSON path where it occurred.
    #[error("at {path}: {message}")]
    Json { path: String, message: String },
    #[error("invalid dual graph: {0}")]
    Graph(ValidationReport),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Cl(#[from] ClError),
    #[error("delta names unknown poset element {0:?}")]
    UnknownElement(String),
    #[error("delta entry {0} is not a group element")]
    BadDeltaElement(String),
}

/// Deserializes `text`, reporting the JSON path of the first error.
pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T, FormatError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let value = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        FormatError::Json { path, message: e.into_inner().to_string() }
    })?;
    Ok(value)
}

/// A dual graph, validated.
pub fn parse_graph(text: &str) -> Result<DualGraph, FormatError> {
    let g: DualGraph = from_json(text)?;
    let report = g.validate();
    if !report.is_valid() {
        return Err(FormatError::Graph(report));
    }
    Ok(g)
}

pub fn parse_poset(text: &str) -> Result<FinPoset, FormatError> {
    from_json(text)
}

pub fn parse_perm_group(text: &str) -> Result<PermGroup, FormatError> {
    from_json(text)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DeltaEntry {
    /// Element id in the sorted element list of the group.
    Id(usize),
    Perm(Perm),
}

/// `{"group": {"degree", "generators"}, "poset": {...}, "action": [images
/// per generator], "delta": {"element": [generators of its subgroup]}}`.
/// Elements missing from `delta` get the trivial subgroup.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClInstanceSpec {
    pub group: PermGroup,
    pub poset: FinPoset,
    pub action: Vec<Vec<usize>>,
    #[serde(default)]
    pub delta: BTreeMap<String, Vec<DeltaEntry>>,
}

/// Largest group enumerated from an instance file.
pub const MAX_INSTANCE_GROUP: u128 = 5040;

impl ClInstanceSpec {
    pub fn build(&self) -> Result<ClInstance, FormatError> {
        let order = self.group.order();
        if order > MAX_INSTANCE_GROUP {
            return Err(GroupError::TooLarge(order).into());
        }
        let group = FiniteGroup::from_perm_group(&self.group)?;
        let action = GroupAction::from_generators(group, self.poset.clone(), &self.action)?;
        let mut gens = vec![Vec::new(); self.poset.len()];
        for (name, entries) in &self.delta {
            let s = self.poset.index_of(name).map_err(|_| FormatError::UnknownElement(name.clone()))?;
            for e in entries {
                let id = match e {
                    DeltaEntry::Id(i) if *i < action.group.order() => Some(*i),
                    DeltaEntry::Id(_) => None,
                    DeltaEntry::Perm(p) => action.group.id_of(p),
                };
                gens[s].push(id.ok_or_else(|| FormatError::BadDeltaElement(format!("{e:?}")))?);
            }
        }
        Ok(ClInstance::new(action, gens)?)
    }

    /// The spec of an instance, listing every element of each nontrivial
    /// subgroup as a permutation.
    pub fn of(inst: &ClInstance) -> ClInstanceSpec {
        let g = &inst.action.group;
        let generators: Vec<Perm> = g.generator_ids().iter().map(|&i| g.element(i).clone()).collect();
        let group = PermGroup::new(g.degree(), generators).expect("generators of a valid group");
        let action = g.generator_ids().iter().map(|&i| inst.action.table()[i].clone()).collect();
        let p = inst.poset();
        let delta = (0..p.len())
            .filter(|&s| inst.delta(s).len() > 1)
            .map(|s| (p.elements()[s].clone(), inst.delta(s).iter().map(|&d| DeltaEntry::Perm(g.element(d).clone())).collect()))
            .collect();
        ClInstanceSpec { group, poset: p.clone(), action, delta }
    }
}

pub fn parse_cl_instance(text: &str) -> Result<ClInstance, FormatError> {
    from_json::<ClInstanceSpec>(text)?.build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::subsets12;

    #[test]
    fn cl_round_trip() {
        let inst = subsets12();
        let text = serde_json::to_string(&ClInstanceSpec::of(&inst)).unwrap();
        let back = parse_cl_instance(&text).unwrap();
        assert_eq!(back.poset(), inst.poset());
        for s in 0..inst.poset().len() {
            assert_eq!(back.delta(s), inst.delta(s));
        }
    }

    #[test]
    fn errors_carry_paths() {
        let err = parse_graph(r#"{"vertices":[{"weight":"x"}],"half_edges":[],"involution":[],"legs":{}}"#).unwrap_err();
        assert!(matches!(&err, FormatError::Json { path, .. } if path == "vertices[0].weight"), "{err}");
        let err = parse_graph(r#"{"vertices":[],"half_edges":[],"involution":[],"legs":{}}"#).unwrap_err();
        assert!(matches!(err, FormatError::Graph(_)));
        let err = parse_cl_instance(
            r#"{"group":{"degree":2,"generators":[[1,0]]},"poset":{"elements":["x"],"leq":[[true]]},"action":[[0]],"delta":{"y":[1]}}"#,
        )
        .unwrap_err();
        assert_eq!(err, FormatError::UnknownElement("y".into()));
    }

    #[test]
    fn delta_by_id_and_permutation() {
        let base = r#"{"group":{"degree":4,"generators":[[1,2,3,0]]},"poset":{"elements":["x"],"leq":[[true]]},"action":[[0]],"delta":{"x":DELTA}}"#;
        let by_perm = parse_cl_instance(&base.replace("DELTA", "[[2,3,0,1]]")).unwrap();
        assert_eq!(by_perm.delta(0).len(), 2);
        let sq = by_perm.action.group.id_of(&Perm(vec![2, 3, 0, 1])).unwrap();
        let by_id = parse_cl_instance(&base.replace("DELTA", &format!("[{sq}]"))).unwrap();
        assert_eq!(by_id.delta(0), by_perm.delta(0));
        assert!(matches!(parse_cl_instance(&base.replace("DELTA", "[99]")), Err(FormatError::BadDeltaElement(_))));
    }
}
