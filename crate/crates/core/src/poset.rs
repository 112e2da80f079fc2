//! Finite posets, products, downsets, and quotients by group actions.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm::FiniteGroup;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PosetError {
    #[error("relation matrix is not {0}x{0}")]
    Shape(usize),
    #[error("element name {0:?} repeats")]
    DuplicateElement(String),
    #[error("not reflexive at {0}")]
    NotReflexive(usize),
    #[error("not antisymmetric: {0} and {1}")]
    NotAntisymmetric(usize, usize),
    #[error("not transitive: {0} <= {1} <= {2}")]
    NotTransitive(usize, usize, usize),
    #[error("no element {0:?}")]
    NoSuchElement(String),
    #[error("element index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("action table: {0}")]
    BadAction(String),
    #[error("quotient relation fails {property} at orbits {witness:?}")]
    QuotientNotPartialOrder { property: String, witness: Vec<usize> },
}

/// A finite poset on named elements, stored as a full relation matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawPoset", into = "RawPoset")]
pub struct FinPoset {
    elements: Vec<String>,
    leq: Vec<Vec<bool>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPoset {
    elements: Vec<String>,
    leq: Vec<Vec<bool>>,
}

impl TryFrom<RawPoset> for FinPoset {
    type Error = PosetError;
    fn try_from(raw: RawPoset) -> Result<Self, PosetError> {
        FinPoset::new(raw.elements, raw.leq)
    }
}

impl From<FinPoset> for RawPoset {
    fn from(p: FinPoset) -> RawPoset {
        RawPoset { elements: p.elements, leq: p.leq }
    }
}

impl FinPoset {
    pub fn new(elements: Vec<String>, leq: Vec<Vec<bool>>) -> Result<FinPoset, PosetError> {
        let n = elements.len();
        if leq.len() != n || leq.iter().any(|row| row.len() != n) {
            return Err(PosetError::Shape(n));
        }
        let mut seen = BTreeSet::new();
        for e in &elements {
            if !seen.insert(e) {
                return Err(PosetError::DuplicateElement(e.clone()));
            }
        }
        let p = FinPoset { elements, leq };
        p.check_order()?;
        Ok(p)
    }

    /// The reflexive-transitive closure of `pairs` (as `(lower, upper)`).
    pub fn from_relation(elements: Vec<String>, pairs: &[(usize, usize)]) -> Result<FinPoset, PosetError> {
        let n = elements.len();
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(PosetError::IndexOutOfRange(a.max(b)));
            }
            leq[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        FinPoset::new(elements, leq)
    }

    /// A total order on `n` elements named `"0"..`.
    pub fn chain(n: usize) -> FinPoset {
        let leq = (0..n).map(|i| (0..n).map(|j| i <= j).collect()).collect();
        FinPoset { elements: (0..n).map(|i| i.to_string()).collect(), leq }
    }

    pub fn antichain(n: usize) -> FinPoset {
        let leq = (0..n).map(|i| (0..n).map(|j| i == j).collect()).collect();
        FinPoset { elements: (0..n).map(|i| i.to_string()).collect(), leq }
    }

    fn check_order(&self) -> Result<(), PosetError> {
        let n = self.len();
        for i in 0..n {
            if !self.leq[i][i] {
                return Err(PosetError::NotReflexive(i));
            }
            for j in 0..n {
                if i != j && self.leq[i][j] && self.leq[j][i] {
                    return Err(PosetError::NotAntisymmetric(i, j));
                }
                if self.leq[i][j] {
                    for k in 0..n {
                        if self.leq[j][k] && !self.leq[i][k] {
                            return Err(PosetError::NotTransitive(i, j, k));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn relation(&self) -> &[Vec<bool>] {
        &self.leq
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq[a][b]
    }

    pub fn index_of(&self, name: &str) -> Result<usize, PosetError> {
        self.elements.iter().position(|e| e == name).ok_or_else(|| PosetError::NoSuchElement(name.to_string()))
    }

    /// Covering pairs `(a, b)` with `a < b` and nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if self.lt(a, b) && !(0..n).any(|c| self.lt(a, c) && self.lt(c, b)) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn maximum(&self) -> Option<usize> {
        (0..self.len()).find(|&m| (0..self.len()).all(|x| self.leq[x][m]))
    }

    pub fn minimum(&self) -> Option<usize> {
        (0..self.len()).find(|&m| (0..self.len()).all(|x| self.leq[m][x]))
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&m| !(0..self.len()).any(|x| self.lt(x, m))).collect()
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&m| !(0..self.len()).any(|x| self.lt(m, x))).collect()
    }

    pub fn opposite(&self) -> FinPoset {
        let n = self.len();
        FinPoset { elements: self.elements.clone(), leq: (0..n).map(|i| (0..n).map(|j| self.leq[j][i]).collect()).collect() }
    }

    /// Induced order on `members` (in the given order).
    pub fn induced(&self, members: &[usize]) -> FinPoset {
        FinPoset {
            elements: members.iter().map(|&i| self.elements[i].clone()).collect(),
            leq: members.iter().map(|&i| members.iter().map(|&j| self.leq[i][j]).collect()).collect(),
        }
    }

    /// `{y : y ≤ x}` with the induced order, and its inclusion (ascending indices).
    pub fn downset(&self, x: usize) -> Result<(FinPoset, Vec<usize>), PosetError> {
        if x >= self.len() {
            return Err(PosetError::IndexOutOfRange(x));
        }
        let members: Vec<usize> = (0..self.len()).filter(|&y| self.leq[y][x]).collect();
        Ok((self.induced(&members), members))
    }

    pub fn upset(&self, x: usize) -> Result<(FinPoset, Vec<usize>), PosetError> {
        if x >= self.len() {
            return Err(PosetError::IndexOutOfRange(x));
        }
        let members: Vec<usize> = (0..self.len()).filter(|&y| self.leq[x][y]).collect();
        Ok((self.induced(&members), members))
    }

    /// Componentwise order on tuples; the first factor varies slowest.
    /// A single factor is returned unchanged.
    pub fn product(factors: &[FinPoset]) -> FinPoset {
        if factors.len() == 1 {
            return factors[0].clone();
        }
        let tuples = product_indices(&factors.iter().map(|f| f.len()).collect::<Vec<_>>());
        let elements = tuples
            .iter()
            .map(|t| {
                let names: Vec<&str> = t.iter().zip(factors).map(|(&i, f)| f.elements[i].as_str()).collect();
                format!("({})", names.join(","))
            })
            .collect();
        let leq = tuples.iter().map(|a| tuples.iter().map(|b| (0..factors.len()).all(|k| factors[k].leq[a[k]][b[k]])).collect()).collect();
        FinPoset { elements, leq }
    }

    /// Whether `map` (indices of `self` into `target`) is order preserving.
    pub fn is_monotone(&self, map: &[usize], target: &FinPoset) -> bool {
        (0..self.len()).all(|a| (0..self.len()).all(|b| !self.leq[a][b] || target.leq[map[a]][map[b]]))
    }

    /// Whether the two posets are isomorphic, by exhaustive search.
    pub fn is_isomorphic_to(&self, other: &FinPoset) -> bool {
        if self.len() != other.len() {
            return false;
        }
        let n = self.len();
        let profile = |p: &FinPoset, i: usize| ((0..n).filter(|&j| p.leq[j][i]).count(), (0..n).filter(|&j| p.leq[i][j]).count());
        let mut assign = vec![usize::MAX; n];
        let mut used = vec![false; n];
        fn go(
            i: usize,
            a: &FinPoset,
            b: &FinPoset,
            assign: &mut [usize],
            used: &mut [bool],
            profile: &dyn Fn(&FinPoset, usize) -> (usize, usize),
        ) -> bool {
            let n = a.len();
            if i == n {
                return true;
            }
            for j in 0..n {
                if used[j] || profile(a, i) != profile(b, j) {
                    continue;
                }
                if (0..i).all(|k| a.leq[k][i] == b.leq[assign[k]][j] && a.leq[i][k] == b.leq[j][assign[k]]) {
                    assign[i] = j;
                    used[j] = true;
                    if go(i + 1, a, b, assign, used, profile) {
                        return true;
                    }
                    used[j] = false;
                }
            }
            false
        }
        go(0, self, other, &mut assign, &mut used, &profile)
    }
}

/// All index tuples for factors of the given sizes, first coordinate slowest.
pub fn product_indices(sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &s in sizes {
        out = out.into_iter().flat_map(|t| (0..s).map(move |i| [t.clone(), vec![i]].concat())).collect();
    }
    out
}

/// A finite group acting on a poset by order automorphisms.
#[derive(Debug, Clone)]
pub struct GroupAction {
    pub group: FiniteGroup,
    pub poset: FinPoset,
    /// `table[g][x]` is `g·x`.
    table: Vec<Vec<usize>>,
}

impl GroupAction {
    /// Extends per-generator images to the whole group and validates.
    /// `images[i]` is the permutation of poset elements induced by the
    /// `i`-th generator of `group`.
    pub fn from_generators(group: FiniteGroup, poset: FinPoset, images: &[Vec<usize>]) -> Result<GroupAction, PosetError> {
        let gens = group.generator_ids().to_vec();
        if images.len() != gens.len() {
            return Err(PosetError::BadAction(format!("{} generator images for {} generators", images.len(), gens.len())));
        }
        let n = poset.len();
        for (i, img) in images.iter().enumerate() {
            if img.len() != n || !crate::perm::Perm(img.clone()).is_valid() {
                return Err(PosetError::BadAction(format!("image of generator {i} is not a permutation of the poset")));
            }
        }
        let mut table: Vec<Option<Vec<usize>>> = vec![None; group.order()];
        table[0] = Some((0..n).collect());
        let mut queue = VecDeque::from([0]);
        while let Some(x) = queue.pop_front() {
            for (gi, &g) in gens.iter().enumerate() {
                let y = group.mul(g, x);
                if table[y].is_none() {
                    let tx = table[x].as_ref().expect("visited");
                    table[y] = Some(tx.iter().map(|&p| images[gi][p]).collect());
                    queue.push_back(y);
                }
            }
        }
        let table = table.into_iter().map(|t| t.expect("generators generate")).collect();
        GroupAction::from_table(group, poset, table)
    }

    /// Validates a full action table.
    pub fn from_table(group: FiniteGroup, poset: FinPoset, table: Vec<Vec<usize>>) -> Result<GroupAction, PosetError> {
        let n = poset.len();
        if table.len() != group.order() || table.iter().any(|r| r.len() != n || !crate::perm::Perm(r.clone()).is_valid()) {
            return Err(PosetError::BadAction("table shape".into()));
        }
        if table[0].iter().enumerate().any(|(i, &x)| i != x) {
            return Err(PosetError::BadAction("identity acts nontrivially".into()));
        }
        for a in 0..group.order() {
            for b in 0..group.order() {
                let ab = group.mul(a, b);
                if (0..n).any(|x| table[ab][x] != table[a][table[b][x]]) {
                    return Err(PosetError::BadAction(format!("not compatible with product of elements {a} and {b}")));
                }
            }
            for x in 0..n {
                for y in 0..n {
                    if poset.leq(x, y) != poset.leq(table[a][x], table[a][y]) {
                        return Err(PosetError::BadAction(format!("element {a} is not an order automorphism")));
                    }
                }
            }
        }
        Ok(GroupAction { group, poset, table })
    }

    /// The trivial group acting trivially.
    pub fn trivial(poset: FinPoset) -> GroupAction {
        let n = poset.len();
        GroupAction { group: FiniteGroup::trivial(), poset, table: vec![(0..n).collect()] }
    }

    pub fn act(&self, g: usize, x: usize) -> usize {
        self.table[g][x]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn orbit(&self, x: usize) -> Vec<usize> {
        let set: BTreeSet<usize> = self.table.iter().map(|row| row[x]).collect();
        set.into_iter().collect()
    }

    /// `{γ : γ·x = x}` as sorted element ids.
    pub fn stabilizer(&self, x: usize) -> Vec<usize> {
        (0..self.group.order()).filter(|&g| self.table[g][x] == x).collect()
    }

    /// Orbits ordered by smallest member.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.poset.len()];
        let mut out = Vec::new();
        for x in 0..self.poset.len() {
            if !seen[x] {
                let o = self.orbit(x);
                for &y in &o {
                    seen[y] = true;
                }
                out.push(o);
            }
        }
        out
    }

    /// Restriction to an invariant subset of the poset (given ascending).
    pub fn restrict(&self, members: &[usize]) -> Result<GroupAction, PosetError> {
        let mut pos = vec![usize::MAX; self.poset.len()];
        for (i, &m) in members.iter().enumerate() {
            pos[m] = i;
        }
        let mut table = Vec::with_capacity(self.table.len());
        for row in &self.table {
            let mut r = Vec::with_capacity(members.len());
            for &m in members {
                let y = pos[row[m]];
                if y == usize::MAX {
                    return Err(PosetError::BadAction("subset is not invariant".into()));
                }
                r.push(y);
            }
            table.push(r);
        }
        Ok(GroupAction { group: self.group.clone(), poset: self.poset.induced(members), table })
    }
}

/// Orbit poset with its projection.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub poset: FinPoset,
    pub projection: Vec<usize>,
    pub orbits: Vec<Vec<usize>>,
}

/// `x̄ ≤ ȳ` iff `g·x ≤ y` for some `g`; partial-order axioms are checked.
pub fn quotient_by_action(action: &GroupAction) -> Result<Quotient, PosetError> {
    let orbits = action.orbits();
    let mut projection = vec![0; action.poset.len()];
    for (i, o) in orbits.iter().enumerate() {
        for &x in o {
            projection[x] = i;
        }
    }
    let k = orbits.len();
    let leq: Vec<Vec<bool>> = (0..k)
        .map(|a| {
            (0..k)
                .map(|b| {
                    let (x, y) = (orbits[a][0], orbits[b][0]);
                    action.table.iter().any(|row| action.poset.leq(row[x], y))
                })
                .collect()
        })
        .collect();
    let elements = orbits.iter().map(|o| format!("[{}]", action.poset.elements()[o[0]])).collect();
    match FinPoset::new(elements, leq) {
        Ok(poset) => Ok(Quotient { poset, projection, orbits }),
        Err(PosetError::NotAntisymmetric(a, b)) => {
            Err(PosetError::QuotientNotPartialOrder { property: "antisymmetry".into(), witness: vec![a, b] })
        }
        Err(PosetError::NotTransitive(a, b, c)) => {
            Err(PosetError::QuotientNotPartialOrder { property: "transitivity".into(), witness: vec![a, b, c] })
        }
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::{Perm, PermGroup};

    fn z2() -> FiniteGroup {
        FiniteGroup::from_perm_group(&PermGroup::new(2, vec![Perm(vec![1, 0])]).unwrap()).unwrap()
    }

    #[test]
    fn rejects_non_orders() {
        let e = || vec!["a".to_string(), "b".to_string()];
        assert_eq!(FinPoset::new(e(), vec![vec![true, true], vec![true, true]]), Err(PosetError::NotAntisymmetric(0, 1)));
        assert_eq!(FinPoset::new(e(), vec![vec![false, false], vec![false, true]]), Err(PosetError::NotReflexive(0)));
        assert!(matches!(
            FinPoset::new(vec!["a".into(); 2], vec![vec![true, false], vec![false, true]]),
            Err(PosetError::DuplicateElement(_))
        ));
    }

    #[test]
    fn product_of_chains_is_diamond() {
        let d = FinPoset::product(&[FinPoset::chain(2), FinPoset::chain(2)]);
        assert_eq!(d.len(), 4);
        assert_eq!(d.maximum(), Some(3));
        assert_eq!(d.minimum(), Some(0));
        assert_eq!(d.covers().len(), 4);
        assert_eq!(FinPoset::product(&[FinPoset::chain(3)]), FinPoset::chain(3));
    }

    #[test]
    fn downsets() {
        let d = FinPoset::product(&[FinPoset::chain(2), FinPoset::chain(2)]);
        assert_eq!(d.downset(3).unwrap().0, d);
        assert_eq!(d.downset(0).unwrap().0.len(), 1);
        assert!(d.downset(4).is_err());
    }

    #[test]
    fn swap_quotients() {
        let anti = GroupAction::from_generators(z2(), FinPoset::antichain(2), &[vec![1, 0]]).unwrap();
        assert_eq!(quotient_by_action(&anti).unwrap().poset.len(), 1);

        let diamond = FinPoset::product(&[FinPoset::chain(2), FinPoset::chain(2)]);
        let swap = GroupAction::from_generators(z2(), diamond, &[vec![0, 2, 1, 3]]).unwrap();
        let q = quotient_by_action(&swap).unwrap();
        assert!(q.poset.is_isomorphic_to(&FinPoset::chain(3)));
        assert!(swap.poset.is_monotone(&q.projection, &q.poset));

        let trivial = GroupAction::trivial(FinPoset::chain(3));
        assert_eq!(quotient_by_action(&trivial).unwrap().poset.relation(), FinPoset::chain(3).relation());
    }

    #[test]
    fn action_must_preserve_order() {
        assert!(GroupAction::from_generators(z2(), FinPoset::chain(2), &[vec![1, 0]]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let p = FinPoset::chain(2);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"elements":["0","1"],"leq":[[true,true],[false,true]]}"#);
        assert_eq!(serde_json::from_str::<FinPoset>(&s).unwrap(), p);
        assert!(serde_json::from_str::<FinPoset>(r#"{"elements":["0","1"],"leq":[[true,true],[true,true]]}"#).is_err());
    }
}
