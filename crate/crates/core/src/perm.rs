//! Permutations, Schreier–Sims, and small finite groups with explicit tables.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Groups with more elements than this cannot be tabulated.
pub const MAX_ENUMERATED_ORDER: u128 = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("generator {index} has length {len}, expected degree {degree}")]
    WrongDegree { index: usize, len: usize, degree: usize },
    #[error("generator {0} is not a permutation")]
    NotPermutation(usize),
    #[error("group order {0} exceeds enumeration limit {MAX_ENUMERATED_ORDER}")]
    TooLarge(u128),
    #[error("element id {0} out of range")]
    BadElement(usize),
}

/// A permutation of `0..n`, stored as its image vector.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Perm(pub Vec<usize>);

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm((0..n).collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn is_valid(&self) -> bool {
        let mut seen = vec![false; self.0.len()];
        for &x in &self.0 {
            if x >= seen.len() || seen[x] {
                return false;
            }
            seen[x] = true;
        }
        true
    }

    pub fn apply(&self, x: usize) -> usize {
        self.0[x]
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&x| self.0[x]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x] = i;
        }
        Perm(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// Transposition of `a` and `b` in degree `n`.
    pub fn transposition(n: usize, a: usize, b: usize) -> Perm {
        let mut p = Perm::identity(n);
        p.0.swap(a, b);
        p
    }
}

/// A base point with its orbit transversal, and the stabilizer chain below.
#[derive(Debug, Clone)]
struct Level {
    base: usize,
    generators: Vec<Perm>,
    /// `transversal[x] = Some(u)` with `u(base) = x`.
    transversal: Vec<Option<Perm>>,
}

impl Level {
    fn new(base: usize, degree: usize) -> Level {
        let mut transversal = vec![None; degree];
        transversal[base] = Some(Perm::identity(degree));
        Level { base, generators: Vec::new(), transversal }
    }

    fn orbit_size(&self) -> usize {
        self.transversal.iter().filter(|t| t.is_some()).count()
    }

    fn extend_orbit(&mut self) {
        let mut queue: VecDeque<usize> = (0..self.transversal.len()).filter(|&x| self.transversal[x].is_some()).collect();
        while let Some(x) = queue.pop_front() {
            for g in &self.generators {
                let y = g.apply(x);
                if self.transversal[y].is_none() {
                    let u = g.compose(self.transversal[x].as_ref().expect("in orbit"));
                    self.transversal[y] = Some(u);
                    queue.push_back(y);
                }
            }
        }
    }
}

/// A permutation group given by generators, with a stabilizer chain.
#[derive(Debug, Clone)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    chain: Vec<Level>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PermGroupJson {
    degree: usize,
    generators: Vec<Perm>,
}

impl Serialize for PermGroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PermGroupJson { degree: self.degree, generators: self.generators.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PermGroup {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = PermGroupJson::deserialize(d)?;
        PermGroup::new(raw.degree, raw.generators).map_err(serde::de::Error::custom)
    }
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Perm>) -> Result<PermGroup, GroupError> {
        for (index, g) in generators.iter().enumerate() {
            if g.degree() != degree {
                return Err(GroupError::WrongDegree { index, len: g.degree(), degree });
            }
            if !g.is_valid() {
                return Err(GroupError::NotPermutation(index));
            }
        }
        let mut group = PermGroup { degree, generators: generators.clone(), chain: Vec::new() };
        for g in generators {
            group.insert(g, 0);
        }
        Ok(group)
    }

    pub fn trivial(degree: usize) -> PermGroup {
        PermGroup { degree, generators: Vec::new(), chain: Vec::new() }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn order(&self) -> u128 {
        self.chain.iter().map(|l| l.orbit_size() as u128).product()
    }

    /// Sifts `p` through the chain from `level`; returns the residue and the
    /// level where it stopped.
    fn sift(&self, mut p: Perm, level: usize) -> (Perm, usize) {
        for (i, lvl) in self.chain.iter().enumerate().skip(level) {
            let x = p.apply(lvl.base);
            match &lvl.transversal[x] {
                Some(u) => p = u.inverse().compose(&p),
                None => return (p, i),
            }
        }
        (p, self.chain.len())
    }

    pub fn contains(&self, p: &Perm) -> bool {
        p.degree() == self.degree && p.is_valid() && self.sift(p.clone(), 0).0.is_identity()
    }

    /// Deterministic incremental Schreier–Sims.
    fn insert(&mut self, p: Perm, level: usize) {
        let (residue, stop) = self.sift(p, level);
        if residue.is_identity() {
            return;
        }
        if stop == self.chain.len() {
            let base = (0..self.degree).find(|&x| residue.apply(x) != x).expect("non-identity");
            self.chain.push(Level::new(base, self.degree));
        }
        // Add the residue at every level from `level` to `stop`; it fixes the
        // bases above `stop`.
        for i in level..=stop {
            let lvl = &mut self.chain[i];
            let old: BTreeSet<usize> = (0..self.degree).filter(|&x| lvl.transversal[x].is_some()).collect();
            lvl.generators.push(residue.clone());
            lvl.extend_orbit();
            // Schreier generators for new orbit points and for the new generator.
            let orbit: Vec<usize> = (0..self.degree).filter(|&x| self.chain[i].transversal[x].is_some()).collect();
            let gens = self.chain[i].generators.clone();
            for &x in &orbit {
                let ux = self.chain[i].transversal[x].clone().expect("in orbit");
                for (gi, g) in gens.iter().enumerate() {
                    if old.contains(&x) && gi + 1 != gens.len() {
                        continue;
                    }
                    let y = g.apply(x);
                    let uy = self.chain[i].transversal[y].clone().expect("in orbit");
                    let schreier = uy.inverse().compose(&g.compose(&ux));
                    if !schreier.is_identity() {
                        self.insert(schreier, i + 1);
                    }
                }
            }
        }
    }

    /// All elements, when the order is at most [`MAX_ENUMERATED_ORDER`].
    pub fn elements(&self) -> Result<Vec<Perm>, GroupError> {
        let order = self.order();
        if order > MAX_ENUMERATED_ORDER {
            return Err(GroupError::TooLarge(order));
        }
        let mut elems = vec![Perm::identity(self.degree)];
        for lvl in self.chain.iter().rev() {
            let reps: Vec<&Perm> = lvl.transversal.iter().flatten().collect();
            let mut next = Vec::with_capacity(elems.len() * reps.len());
            for u in reps {
                for e in &elems {
                    next.push(u.compose(e));
                }
            }
            elems = next;
        }
        elems.sort();
        Ok(elems)
    }
}

/// A tabulated finite group. Element `0` is the identity; elements are
/// sorted by their image vectors.
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    degree: usize,
    elements: Vec<Perm>,
    index: HashMap<Perm, usize>,
    mul: Vec<Vec<usize>>,
    inv: Vec<usize>,
    generator_ids: Vec<usize>,
}

impl FiniteGroup {
    pub fn from_perm_group(group: &PermGroup) -> Result<FiniteGroup, GroupError> {
        let elements = group.elements()?;
        let index: HashMap<Perm, usize> = elements.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let mul = elements.iter().map(|a| elements.iter().map(|b| index[&a.compose(b)]).collect()).collect();
        let inv = elements.iter().map(|a| index[&a.inverse()]).collect();
        let generator_ids = group.generators().iter().map(|g| index[g]).collect();
        Ok(FiniteGroup { degree: group.degree(), elements, index, mul, inv, generator_ids })
    }

    pub fn trivial() -> FiniteGroup {
        FiniteGroup::from_perm_group(&PermGroup::trivial(1)).expect("trivial group")
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn element(&self, id: usize) -> &Perm {
        &self.elements[id]
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn id_of(&self, p: &Perm) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// Product `a·b` (apply `b` first).
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn generator_ids(&self) -> &[usize] {
        &self.generator_ids
    }

    /// The subgroup generated by `gens`, as a sorted id list.
    pub fn generate(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(g, x);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        (0..self.order()).filter(|&i| seen[i]).collect()
    }

    pub fn is_subgroup(&self, ids: &[usize]) -> bool {
        let set: BTreeSet<usize> = ids.iter().copied().collect();
        set.contains(&0) && set.iter().all(|&a| set.contains(&self.inv(a)) && set.iter().all(|&b| set.contains(&self.mul(a, b))))
    }

    /// Left coset representative of `g` modulo subgroup `h` on the right:
    /// the minimal id in `g·H`.
    pub fn left_coset_rep(&self, g: usize, h: &[usize]) -> usize {
        h.iter().map(|&x| self.mul(g, x)).min().expect("subgroup is nonempty")
    }

    /// Minimal id in `H·g`.
    pub fn right_coset_rep(&self, h: &[usize], g: usize) -> usize {
        h.iter().map(|&x| self.mul(x, g)).min().expect("subgroup is nonempty")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Perm {
        Perm((0..n).map(|i| (i + 1) % n).collect())
    }

    #[test]
    fn symmetric_group_orders() {
        for n in 1..=7usize {
            let gens = if n > 1 { vec![cycle(n), Perm::transposition(n, 0, 1)] } else { vec![] };
            let g = PermGroup::new(n, gens).unwrap();
            assert_eq!(g.order(), (1..=n as u128).product::<u128>());
        }
    }

    #[test]
    fn cyclic_and_dihedral() {
        let c5 = PermGroup::new(5, vec![cycle(5)]).unwrap();
        assert_eq!(c5.order(), 5);
        let refl = Perm(vec![0, 4, 3, 2, 1]);
        let d5 = PermGroup::new(5, vec![cycle(5), refl]).unwrap();
        assert_eq!(d5.order(), 10);
        assert!(!d5.contains(&Perm::transposition(5, 0, 1)));
        assert!(d5.contains(&cycle(5).compose(&cycle(5))));
    }

    #[test]
    fn elements_match_order_and_tables_are_consistent() {
        let g = PermGroup::new(4, vec![cycle(4), Perm::transposition(4, 0, 1)]).unwrap();
        let fg = FiniteGroup::from_perm_group(&g).unwrap();
        assert_eq!(fg.order(), 24);
        assert!(fg.element(0).is_identity());
        for a in 0..24 {
            assert_eq!(fg.mul(a, fg.inv(a)), 0);
            for b in 0..24 {
                assert_eq!(fg.element(fg.mul(a, b)), &fg.element(a).compose(fg.element(b)));
            }
        }
        let c4 = fg.generate(&[fg.id_of(&cycle(4)).unwrap()]);
        assert_eq!(c4.len(), 4);
        assert!(fg.is_subgroup(&c4));
    }

    #[test]
    fn rejects_bad_generators() {
        assert!(matches!(PermGroup::new(3, vec![Perm(vec![0, 0, 1])]), Err(GroupError::NotPermutation(0))));
        assert!(matches!(PermGroup::new(3, vec![Perm(vec![0, 1])]), Err(GroupError::WrongDegree { .. })));
    }

    #[test]
    fn too_large_to_enumerate() {
        let n = 9;
        let g = PermGroup::new(n, vec![cycle(n), Perm::transposition(n, 0, 1)]).unwrap();
        assert_eq!(g.order(), 362_880);
        assert!(matches!(g.elements(), Err(GroupError::TooLarge(362_880))));
    }
}
