//! Finite categories with materialised composition tables, functors, comma
//! categories, equivalence checks, and limits of set-valued functors.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::perm::FiniteGroup;
use crate::poset::FinPoset;

/// Categories with more morphisms than this are rejected by default.
pub const DEFAULT_MORPHISM_BUDGET: usize = 10_000;
/// Default cap on search nodes in [`SetValuedFunctor::limit_set`].
pub const DEFAULT_LIMIT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CategoryError {
    #[error("category has {got} morphisms, over the budget of {budget}")]
    TooLarge { got: usize, budget: usize },
    #[error("identity of object {0} is missing or malformed")]
    Identity(usize),
    #[error("composite of {f} then {g} has wrong endpoints")]
    CompositeEndpoints { f: usize, g: usize },
    #[error("identity law fails for morphism {0}")]
    IdentityLaw(usize),
    #[error("associativity fails for {f}, {g}, {h}")]
    Associativity { f: usize, g: usize, h: usize },
    #[error("morphism {0} has an endpoint out of range")]
    Endpoint(usize),
    #[error("functor is invalid: {0}")]
    Functor(String),
    #[error("set-valued functor is invalid: {0}")]
    SetFunctor(String),
    #[error("limit search exceeded {0} nodes")]
    LimitBudget(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Morphism {
    pub src: usize,
    pub tgt: usize,
    pub label: String,
}

/// A finite category. Composition is stored per composable pair:
/// `compose(f, g)` is `g ∘ f` (first `f`, then `g`).
#[derive(Debug, Clone)]
pub struct FinCategory {
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    identities: Vec<usize>,
    /// Morphisms out of each object, sorted by (target, id).
    out: Vec<Vec<usize>>,
    /// Position of each morphism within `out[src]`.
    out_pos: Vec<usize>,
    /// `comp[f][out_pos[g]] = g ∘ f` for `g` out of `tgt(f)`.
    comp: Vec<Vec<usize>>,
}

impl FinCategory {
    /// Builds and validates a category. `compose(f, g)` must return `g ∘ f`
    /// whenever `tgt(f) = src(g)`.
    pub fn new(
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        identities: Vec<usize>,
        compose: impl Fn(usize, usize) -> usize,
        budget: usize,
    ) -> Result<FinCategory, CategoryError> {
        if morphisms.len() > budget {
            return Err(CategoryError::TooLarge { got: morphisms.len(), budget });
        }
        let n = objects.len();
        for (i, m) in morphisms.iter().enumerate() {
            if m.src >= n || m.tgt >= n {
                return Err(CategoryError::Endpoint(i));
            }
        }
        if identities.len() != n {
            return Err(CategoryError::Identity(identities.len().min(n)));
        }
        for (o, &id) in identities.iter().enumerate() {
            if id >= morphisms.len() || morphisms[id].src != o || morphisms[id].tgt != o {
                return Err(CategoryError::Identity(o));
            }
        }
        let mut out = vec![Vec::new(); n];
        for (i, m) in morphisms.iter().enumerate() {
            out[m.src].push(i);
        }
        for list in &mut out {
            list.sort_by_key(|&i| (morphisms[i].tgt, i));
        }
        let mut out_pos = vec![0; morphisms.len()];
        for list in &out {
            for (k, &i) in list.iter().enumerate() {
                out_pos[i] = k;
            }
        }
        let mut comp = Vec::with_capacity(morphisms.len());
        for (f, mf) in morphisms.iter().enumerate() {
            let mut row = Vec::with_capacity(out[mf.tgt].len());
            for &g in &out[mf.tgt] {
                let h = compose(f, g);
                if h >= morphisms.len() || morphisms[h].src != mf.src || morphisms[h].tgt != morphisms[g].tgt {
                    return Err(CategoryError::CompositeEndpoints { f, g });
                }
                row.push(h);
            }
            comp.push(row);
        }
        let c = FinCategory { objects, morphisms, identities, out, out_pos, comp };
        c.check_laws()?;
        Ok(c)
    }

    fn check_laws(&self) -> Result<(), CategoryError> {
        for (f, m) in self.morphisms.iter().enumerate() {
            if self.compose(self.identities[m.src], f) != f || self.compose(f, self.identities[m.tgt]) != f {
                return Err(CategoryError::IdentityLaw(f));
            }
        }
        for f in 0..self.morphisms.len() {
            for &g in &self.out[self.morphisms[f].tgt] {
                let gf = self.compose(f, g);
                for &h in &self.out[self.morphisms[g].tgt] {
                    if self.compose(gf, h) != self.compose(f, self.compose(g, h)) {
                        return Err(CategoryError::Associativity { f, g, h });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn from_poset(p: &FinPoset) -> FinCategory {
        let n = p.len();
        let mut morphisms = Vec::new();
        let mut id_of = vec![vec![usize::MAX; n]; n];
        for a in 0..n {
            for b in 0..n {
                if p.leq(a, b) {
                    id_of[a][b] = morphisms.len();
                    morphisms.push(Morphism { src: a, tgt: b, label: format!("{}<={}", p.elements()[a], p.elements()[b]) });
                }
            }
        }
        let identities = (0..n).map(|a| id_of[a][a]).collect();
        let ms = morphisms.clone();
        FinCategory::new(p.elements().to_vec(), morphisms, identities, |f, g| id_of[ms[f].src][ms[g].tgt], usize::MAX)
            .expect("posets are categories")
    }

    /// The one-object category of a group.
    pub fn from_group(group: &FiniteGroup) -> FinCategory {
        let morphisms = (0..group.order()).map(|g| Morphism { src: 0, tgt: 0, label: format!("g{g}") }).collect();
        FinCategory::new(vec!["*".into()], morphisms, vec![0], |f, g| group.mul(g, f), usize::MAX).expect("groups are categories")
    }

    pub fn discrete(n: usize) -> FinCategory {
        let morphisms = (0..n).map(|o| Morphism { src: o, tgt: o, label: format!("id{o}") }).collect();
        FinCategory::new((0..n).map(|o| o.to_string()).collect(), morphisms, (0..n).collect(), |f, _| f, usize::MAX)
            .expect("discrete categories are categories")
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn morphism_count(&self) -> usize {
        self.morphisms.len()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.morphisms
    }

    pub fn morphism(&self, f: usize) -> &Morphism {
        &self.morphisms[f]
    }

    pub fn src(&self, f: usize) -> usize {
        self.morphisms[f].src
    }

    pub fn tgt(&self, f: usize) -> usize {
        self.morphisms[f].tgt
    }

    pub fn identity(&self, o: usize) -> usize {
        self.identities[o]
    }

    pub fn is_identity(&self, f: usize) -> bool {
        self.identities[self.morphisms[f].src] == f
    }

    /// `g ∘ f`. Panics unless `tgt(f) = src(g)`.
    pub fn compose(&self, f: usize, g: usize) -> usize {
        assert_eq!(self.morphisms[f].tgt, self.morphisms[g].src, "morphisms are not composable");
        self.comp[f][self.out_pos[g]]
    }

    pub fn out_of(&self, a: usize) -> &[usize] {
        &self.out[a]
    }

    /// `Hom(a, b)` in ascending id order.
    pub fn hom(&self, a: usize, b: usize) -> &[usize] {
        let list = &self.out[a];
        let lo = list.partition_point(|&i| self.morphisms[i].tgt < b);
        let hi = list.partition_point(|&i| self.morphisms[i].tgt <= b);
        &list[lo..hi]
    }

    pub fn inverse(&self, f: usize) -> Option<usize> {
        let m = &self.morphisms[f];
        self.hom(m.tgt, m.src)
            .iter()
            .copied()
            .find(|&g| self.compose(f, g) == self.identities[m.src] && self.compose(g, f) == self.identities[m.tgt])
    }

    pub fn is_iso(&self, f: usize) -> bool {
        self.inverse(f).is_some()
    }

    pub fn isomorphic(&self, a: usize, b: usize) -> bool {
        self.hom(a, b).iter().any(|&f| self.is_iso(f))
    }

    /// Isomorphism class id per object, classes numbered by first member.
    pub fn iso_classes(&self) -> Vec<usize> {
        let n = self.object_count();
        let mut class = vec![usize::MAX; n];
        let mut next = 0;
        for a in 0..n {
            if class[a] == usize::MAX {
                for b in a..n {
                    if class[b] == usize::MAX && self.isomorphic(a, b) {
                        class[b] = next;
                    }
                }
                next += 1;
            }
        }
        class
    }

    pub fn is_terminal(&self, t: usize) -> bool {
        (0..self.object_count()).all(|x| self.hom(x, t).len() == 1)
    }

    pub fn is_initial(&self, t: usize) -> bool {
        (0..self.object_count()).all(|x| self.hom(t, x).len() == 1)
    }

    pub fn terminal_object(&self) -> Option<usize> {
        (0..self.object_count()).find(|&t| self.is_terminal(t))
    }

    pub fn initial_object(&self) -> Option<usize> {
        (0..self.object_count()).find(|&t| self.is_initial(t))
    }

    pub fn opposite(&self) -> FinCategory {
        let morphisms: Vec<Morphism> = self.morphisms.iter().map(|m| Morphism { src: m.tgt, tgt: m.src, label: m.label.clone() }).collect();
        FinCategory::new(self.objects.clone(), morphisms, self.identities.clone(), |f, g| self.compose(g, f), usize::MAX)
            .expect("opposite of a category")
    }

    /// Full subcategory on `members` (kept in the given order) with its inclusion.
    pub fn full_subcategory(&self, members: &[usize]) -> (FinCategory, Functor) {
        let mut pos = vec![usize::MAX; self.object_count()];
        for (i, &o) in members.iter().enumerate() {
            pos[o] = i;
        }
        let mut morphisms = Vec::new();
        let mut keep = Vec::new();
        let mut new_id = vec![usize::MAX; self.morphism_count()];
        for &a in members {
            for &f in &self.out[a] {
                let m = &self.morphisms[f];
                if pos[m.tgt] != usize::MAX {
                    new_id[f] = morphisms.len();
                    keep.push(f);
                    morphisms.push(Morphism { src: pos[m.src], tgt: pos[m.tgt], label: m.label.clone() });
                }
            }
        }
        let identities = members.iter().map(|&o| new_id[self.identities[o]]).collect();
        let objects = members.iter().map(|&o| self.objects[o].clone()).collect();
        let sub = FinCategory::new(objects, morphisms, identities, |f, g| new_id[self.compose(keep[f], keep[g])], usize::MAX)
            .expect("full subcategory of a category");
        (sub, Functor { object_map: members.to_vec(), morphism_map: keep })
    }

    /// Every morphism with source in `members` has target in `members`.
    pub fn is_right_closed(&self, members: &[usize]) -> Result<(), usize> {
        let set: BTreeSet<usize> = members.iter().copied().collect();
        for &a in members {
            if let Some(&f) = self.out[a].iter().find(|&&f| !set.contains(&self.morphisms[f].tgt)) {
                return Err(f);
            }
        }
        Ok(())
    }

    /// Every morphism with target in `members` has source in `members`.
    pub fn is_left_closed(&self, members: &[usize]) -> Result<(), usize> {
        let set: BTreeSet<usize> = members.iter().copied().collect();
        match self.morphisms.iter().position(|m| set.contains(&m.tgt) && !set.contains(&m.src)) {
            Some(f) => Err(f),
            None => Ok(()),
        }
    }

    /// The category `F/x`: objects `(c, u : F c → x)`, morphisms `v : c → c'`
    /// with `u' ∘ F v = u`.
    pub fn comma_over(&self, source: &FinCategory, f: &Functor, x: usize, budget: usize) -> Result<Comma, CategoryError> {
        let mut objects = Vec::new();
        for c in 0..source.object_count() {
            for &u in self.hom(f.object_map[c], x) {
                objects.push((c, u));
            }
        }
        self.comma_from(source, objects, budget, |(_, u), (_, u2), v| self.compose(f.morphism_map[v], u2) == u)
    }

    /// The category `x/F`: objects `(c, u : x → F c)`, morphisms `v : c → c'`
    /// with `F v ∘ u = u'`.
    pub fn comma_under(&self, source: &FinCategory, f: &Functor, x: usize, budget: usize) -> Result<Comma, CategoryError> {
        let mut objects = Vec::new();
        for c in 0..source.object_count() {
            for &u in self.hom(x, f.object_map[c]) {
                objects.push((c, u));
            }
        }
        self.comma_from(source, objects, budget, |(_, u), (_, u2), v| self.compose(u, f.morphism_map[v]) == u2)
    }

    fn comma_from(
        &self,
        source: &FinCategory,
        objects: Vec<(usize, usize)>,
        budget: usize,
        admissible: impl Fn((usize, usize), (usize, usize), usize) -> bool,
    ) -> Result<Comma, CategoryError> {
        let mut morphisms = Vec::new();
        let mut underlying = Vec::new();
        let mut index = std::collections::HashMap::new();
        for (i, &a) in objects.iter().enumerate() {
            for (j, &b) in objects.iter().enumerate() {
                for &v in source.hom(a.0, b.0) {
                    if admissible(a, b, v) {
                        index.insert((i, j, v), morphisms.len());
                        underlying.push(v);
                        morphisms.push(Morphism { src: i, tgt: j, label: source.morphisms[v].label.clone() });
                        if morphisms.len() > budget {
                            return Err(CategoryError::TooLarge { got: morphisms.len(), budget });
                        }
                    }
                }
            }
        }
        let identities = (0..objects.len()).map(|i| index[&(i, i, source.identity(objects[i].0))]).collect();
        let names = objects.iter().map(|&(c, u)| format!("({}, {})", source.objects[c], self.morphisms[u].label)).collect();
        let ms = morphisms.clone();
        let category = FinCategory::new(
            names,
            morphisms,
            identities,
            |f, g| index[&(ms[f].src, ms[g].tgt, source.compose(underlying[f], underlying[g]))],
            budget,
        )?;
        Ok(Comma { category, objects, underlying: underlying.clone() })
    }
}

/// A comma category with the data it was built from.
#[derive(Debug, Clone)]
pub struct Comma {
    pub category: FinCategory,
    /// `(source object, structure morphism)` per object.
    pub objects: Vec<(usize, usize)>,
    /// The source-category morphism underlying each morphism.
    pub underlying: Vec<usize>,
}

/// A functor between finite categories, given on objects and morphisms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Functor {
    pub object_map: Vec<usize>,
    pub morphism_map: Vec<usize>,
}

impl Functor {
    pub fn identity(c: &FinCategory) -> Functor {
        Functor { object_map: (0..c.object_count()).collect(), morphism_map: (0..c.morphism_count()).collect() }
    }

    pub fn validate(&self, src: &FinCategory, tgt: &FinCategory) -> Result<(), CategoryError> {
        let err = |m: String| Err(CategoryError::Functor(m));
        if self.object_map.len() != src.object_count() || self.morphism_map.len() != src.morphism_count() {
            return err("map sizes do not match the source".into());
        }
        if self.object_map.iter().any(|&o| o >= tgt.object_count()) || self.morphism_map.iter().any(|&f| f >= tgt.morphism_count()) {
            return err("image out of range".into());
        }
        for (f, m) in src.morphisms.iter().enumerate() {
            let fm = tgt.morphism(self.morphism_map[f]);
            if fm.src != self.object_map[m.src] || fm.tgt != self.object_map[m.tgt] {
                return err(format!("morphism {f} is sent to a morphism with wrong endpoints"));
            }
        }
        for o in 0..src.object_count() {
            if self.morphism_map[src.identity(o)] != tgt.identity(self.object_map[o]) {
                return err(format!("identity of object {o} is not preserved"));
            }
        }
        for f in 0..src.morphism_count() {
            for &g in src.out_of(src.tgt(f)) {
                if self.morphism_map[src.compose(f, g)] != tgt.compose(self.morphism_map[f], self.morphism_map[g]) {
                    return err(format!("composite of {f} and {g} is not preserved"));
                }
            }
        }
        Ok(())
    }
}

/// Pass/fail outcome of a check, with a witness on failure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Report {
    pub fn pass(name: impl Into<String>) -> Report {
        Report { name: name.into(), passed: true, witness: None }
    }

    pub fn fail(name: impl Into<String>, witness: impl Into<String>) -> Report {
        Report { name: name.into(), passed: false, witness: Some(witness.into()) }
    }
}

/// Essentially surjective and fully faithful, checked exhaustively.
pub fn check_equivalence(f: &Functor, src: &FinCategory, tgt: &FinCategory) -> Report {
    const NAME: &str = "equivalence";
    if let Err(e) = f.validate(src, tgt) {
        return Report::fail(NAME, e.to_string());
    }
    for a in 0..src.object_count() {
        for b in 0..src.object_count() {
            let image: BTreeSet<usize> = src.hom(a, b).iter().map(|&m| f.morphism_map[m]).collect();
            let target_hom = tgt.hom(f.object_map[a], f.object_map[b]);
            if image.len() != src.hom(a, b).len() {
                return Report::fail(NAME, format!("not faithful on Hom({}, {})", src.objects[a], src.objects[b]));
            }
            if image.len() != target_hom.len() {
                return Report::fail(NAME, format!("not full on Hom({}, {})", src.objects[a], src.objects[b]));
            }
        }
    }
    let classes = tgt.iso_classes();
    let hit: BTreeSet<usize> = f.object_map.iter().map(|&o| classes[o]).collect();
    if let Some(d) = (0..tgt.object_count()).find(|&d| !hit.contains(&classes[d])) {
        return Report::fail(NAME, format!("object {} is not in the essential image", tgt.objects[d]));
    }
    Report::pass(NAME)
}

/// A functor to finite sets: `sizes[o]` is `|F o|` and `maps[f]` the function `F f`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetValuedFunctor {
    pub sizes: Vec<usize>,
    pub maps: Vec<Vec<usize>>,
}

impl SetValuedFunctor {
    pub fn constant(c: &FinCategory, size: usize) -> SetValuedFunctor {
        SetValuedFunctor { sizes: vec![size; c.object_count()], maps: vec![(0..size).collect(); c.morphism_count()] }
    }

    pub fn validate(&self, c: &FinCategory) -> Result<(), CategoryError> {
        let err = |m: String| Err(CategoryError::SetFunctor(m));
        if self.sizes.len() != c.object_count() || self.maps.len() != c.morphism_count() {
            return err("sizes do not match the category".into());
        }
        for (f, m) in c.morphisms().iter().enumerate() {
            let map = &self.maps[f];
            if map.len() != self.sizes[m.src] || map.iter().any(|&y| y >= self.sizes[m.tgt]) {
                return err(format!("morphism {f} is not a function between the right sets"));
            }
        }
        for o in 0..c.object_count() {
            if self.maps[c.identity(o)].iter().enumerate().any(|(i, &y)| i != y) {
                return err(format!("identity of object {o} is not the identity function"));
            }
        }
        for f in 0..c.morphism_count() {
            for &g in c.out_of(c.tgt(f)) {
                let gf = &self.maps[c.compose(f, g)];
                if (0..self.sizes[c.src(f)]).any(|x| gf[x] != self.maps[g][self.maps[f][x]]) {
                    return err(format!("composite of {f} and {g} is not preserved"));
                }
            }
        }
        Ok(())
    }

    /// Restriction along a functor `g : d → c`.
    pub fn pull_back(&self, g: &Functor) -> SetValuedFunctor {
        SetValuedFunctor {
            sizes: g.object_map.iter().map(|&o| self.sizes[o]).collect(),
            maps: g.morphism_map.iter().map(|&f| self.maps[f].clone()).collect(),
        }
    }

    /// All compatible families `(x_o)` with `F f (x_src) = x_tgt`, sorted.
    pub fn limit_set(&self, c: &FinCategory, budget: u64) -> Result<Vec<Vec<usize>>, CategoryError> {
        let n = c.object_count();
        let mut assignment: Vec<Option<usize>> = vec![None; n];
        let mut out = Vec::new();
        let mut nodes = 0u64;
        if self.sizes.contains(&0) {
            return Ok(out);
        }
        self.search(c, 0, &mut assignment, &mut out, &mut nodes, budget)?;
        out.sort();
        Ok(out)
    }

    fn search(
        &self,
        c: &FinCategory,
        from: usize,
        assignment: &mut Vec<Option<usize>>,
        out: &mut Vec<Vec<usize>>,
        nodes: &mut u64,
        budget: u64,
    ) -> Result<(), CategoryError> {
        let Some(next) = (from..c.object_count()).find(|&o| assignment[o].is_none()) else {
            out.push(assignment.iter().map(|x| x.expect("complete")).collect());
            return Ok(());
        };
        for value in 0..self.sizes[next] {
            *nodes += 1;
            if *nodes > budget {
                return Err(CategoryError::LimitBudget(budget));
            }
            let mut trail = Vec::new();
            if self.propagate(c, next, value, assignment, &mut trail) {
                self.search(c, next + 1, assignment, out, nodes, budget)?;
            }
            for o in trail {
                assignment[o] = None;
            }
        }
        Ok(())
    }

    /// Assigns `x_o = value` and forces values along outgoing morphisms.
    fn propagate(&self, c: &FinCategory, o: usize, value: usize, assignment: &mut [Option<usize>], trail: &mut Vec<usize>) -> bool {
        assignment[o] = Some(value);
        trail.push(o);
        let mut stack = vec![o];
        while let Some(a) = stack.pop() {
            let x = assignment[a].expect("assigned");
            for &f in c.out_of(a) {
                let b = c.tgt(f);
                let y = self.maps[f][x];
                match assignment[b] {
                    Some(z) if z != y => return false,
                    Some(_) => {}
                    None => {
                        assignment[b] = Some(y);
                        trail.push(b);
                        stack.push(b);
                    }
                }
            }
        }
        true
    }

    /// Exhaustive product search; for cross-checking only.
    pub fn limit_set_brute_force(&self, c: &FinCategory) -> Vec<Vec<usize>> {
        let tuples = crate::poset::product_indices(&self.sizes);
        tuples.into_iter().filter(|t| c.morphisms().iter().enumerate().all(|(f, m)| self.maps[f][t[m.src]] == t[m.tgt])).collect()
    }
}
