//! Action categories and Charney–Lee categories of a finite group acting on
//! a poset, with hom-sets taken modulo a family of subgroups `Δ_σ`.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::category::{check_equivalence, CategoryError, FinCategory, Functor, Morphism, Report};
use crate::poset::{FinPoset, GroupAction};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClError {
    #[error("delta family has {got} entries for {expected} poset elements")]
    Shape { expected: usize, got: usize },
    #[error("delta element id {0} out of range")]
    BadElement(usize),
    #[error("delta subgroup at {0} does not fix that element")]
    NotStabilizing(usize),
    #[error("condition (i) fails: {lower} <= {upper} but the subgroup at {upper} is not contained in the one at {lower}")]
    ConditionI { lower: usize, upper: usize },
    #[error(
        "condition (ii) fails: conjugating the subgroup at {element} by group element {gamma} does not give the subgroup at its image"
    )]
    ConditionII { gamma: usize, element: usize },
    #[error("composition is not independent of representatives for morphisms {f} and {g}")]
    NotWellDefined { f: usize, g: usize },
    #[error(transparent)]
    Category(#[from] CategoryError),
}

/// A group acting on a poset together with a compatible subgroup family.
#[derive(Debug, Clone)]
pub struct ClInstance {
    pub action: GroupAction,
    /// Sorted element ids of `Δ_σ` per poset element.
    delta: Vec<Vec<usize>>,
}

impl ClInstance {
    /// `generators[σ]` generates `Δ_σ`; the family is validated.
    pub fn new(action: GroupAction, generators: Vec<Vec<usize>>) -> Result<ClInstance, ClError> {
        let n = action.poset.len();
        if generators.len() != n {
            return Err(ClError::Shape { expected: n, got: generators.len() });
        }
        let order = action.group.order();
        let mut delta = Vec::with_capacity(n);
        for gens in &generators {
            if let Some(&bad) = gens.iter().find(|&&g| g >= order) {
                return Err(ClError::BadElement(bad));
            }
            delta.push(action.group.generate(gens));
        }
        let inst = ClInstance { action, delta };
        inst.validate()?;
        Ok(inst)
    }

    pub fn trivial_delta(action: GroupAction) -> ClInstance {
        let n = action.poset.len();
        ClInstance { action, delta: vec![vec![0]; n] }
    }

    fn validate(&self) -> Result<(), ClError> {
        let g = &self.action.group;
        let p = &self.action.poset;
        for s in 0..p.len() {
            if self.delta[s].iter().any(|&d| self.action.act(d, s) != s) {
                return Err(ClError::NotStabilizing(s));
            }
        }
        for lower in 0..p.len() {
            for upper in 0..p.len() {
                if p.leq(lower, upper) && !is_subset(&self.delta[upper], &self.delta[lower]) {
                    return Err(ClError::ConditionI { lower, upper });
                }
            }
        }
        for gamma in 0..g.order() {
            let inv = g.inv(gamma);
            for s in 0..p.len() {
                let mut conj: Vec<usize> = self.delta[s].iter().map(|&d| g.mul(g.mul(gamma, d), inv)).collect();
                conj.sort();
                if conj != self.delta[self.action.act(gamma, s)] {
                    return Err(ClError::ConditionII { gamma, element: s });
                }
            }
        }
        Ok(())
    }

    pub fn poset(&self) -> &FinPoset {
        &self.action.poset
    }

    pub fn delta(&self, s: usize) -> &[usize] {
        &self.delta[s]
    }

    pub fn group_order(&self) -> usize {
        self.action.group.order()
    }

    /// `γ·σ`.
    pub fn act(&self, gamma: usize, s: usize) -> usize {
        self.action.act(gamma, s)
    }

    /// Minimal element of `γ Δ_σ`.
    pub fn left_rep(&self, gamma: usize, s: usize) -> usize {
        self.action.group.left_coset_rep(gamma, &self.delta[s])
    }

    /// Minimal element of `Δ_σ γ`.
    pub fn right_rep(&self, s: usize, gamma: usize) -> usize {
        self.action.group.right_coset_rep(&self.delta[s], gamma)
    }
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.binary_search(x).is_ok())
}

/// A category whose morphisms are classes of group elements, with the
/// chosen representative of each morphism.
#[derive(Debug, Clone)]
pub struct CosetCategory {
    pub category: FinCategory,
    /// Representative group element of each morphism.
    pub reps: Vec<usize>,
    index: BTreeMap<(usize, usize, usize), usize>,
}

impl CosetCategory {
    /// The morphism `a → b` represented by `rep` (already normalised).
    pub fn morphism(&self, a: usize, b: usize, rep: usize) -> Option<usize> {
        self.index.get(&(a, b, rep)).copied()
    }
}

/// Data describing a category of coset classes.
pub(crate) struct CosetSpec<'a> {
    pub objects: Vec<String>,
    pub group_order: usize,
    /// Whether `g` lies in the (unquotiented) hom-set `a → b`.
    pub member: &'a (dyn Fn(usize, usize, usize) -> bool + Sync),
    /// The representative of the class of `g` in `a → b`.
    pub rep: &'a (dyn Fn(usize, usize, usize) -> usize + Sync),
    /// Group element of the composite of `f : a → b` then `g : b → c`, in
    /// terms of representatives `(f_rep, g_rep)`.
    pub product: &'a (dyn Fn(usize, usize) -> usize + Sync),
}

pub(crate) fn coset_category(spec: CosetSpec<'_>, budget: usize) -> Result<CosetCategory, ClError> {
    let n = spec.objects.len();
    let mut morphisms = Vec::new();
    let mut reps = Vec::new();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut index = BTreeMap::new();
    for a in 0..n {
        for b in 0..n {
            let mut by_rep: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
            for g in 0..spec.group_order {
                if (spec.member)(a, b, g) {
                    by_rep.entry((spec.rep)(a, b, g)).or_default().push(g);
                }
            }
            for (rep, members) in by_rep {
                index.insert((a, b, rep), morphisms.len());
                morphisms.push(Morphism { src: a, tgt: b, label: format!("[g{rep}]") });
                reps.push(rep);
                classes.push(members);
                if morphisms.len() > budget {
                    return Err(CategoryError::TooLarge { got: morphisms.len(), budget }.into());
                }
            }
        }
    }
    let identities: Vec<usize> =
        (0..n).map(|a| index.get(&(a, a, (spec.rep)(a, a, 0))).copied().ok_or(CategoryError::Identity(a))).collect::<Result<_, _>>()?;
    // Exhaustive independence of representatives.
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, m) in morphisms.iter().enumerate() {
        out[m.src].push(i);
    }
    for f in 0..morphisms.len() {
        let (a, b) = (morphisms[f].src, morphisms[f].tgt);
        for &g in &out[b] {
            let c = morphisms[g].tgt;
            let expected = (spec.rep)(a, c, (spec.product)(reps[f], reps[g]));
            for &x in &classes[f] {
                for &y in &classes[g] {
                    let h = (spec.product)(x, y);
                    if !(spec.member)(a, c, h) || (spec.rep)(a, c, h) != expected {
                        return Err(ClError::NotWellDefined { f, g });
                    }
                }
            }
        }
    }
    let ms = morphisms.clone();
    let category = FinCategory::new(
        spec.objects,
        morphisms,
        identities,
        |f, g| {
            let (a, c) = (ms[f].src, ms[g].tgt);
            index[&(a, c, (spec.rep)(a, c, (spec.product)(reps[f], reps[g])))]
        },
        budget,
    )?;
    Ok(CosetCategory { category, reps, index })
}

/// `Hom(σ, τ) = {γ : γ·σ ≤ τ}`, composition by multiplication.
pub fn action_category(action: &GroupAction, budget: usize) -> Result<CosetCategory, ClError> {
    let g = &action.group;
    let p = &action.poset;
    coset_category(
        CosetSpec {
            objects: p.elements().to_vec(),
            group_order: g.order(),
            member: &|a, b, x| p.leq(action.act(x, a), b),
            rep: &|_, _, x| x,
            product: &|x, y| g.mul(y, x),
        },
        budget,
    )
}

/// `Hom(σ, τ) = {γ : γ·σ ≤ τ}/Δ_σ`, classes represented by their minimal element.
pub fn cl_category(inst: &ClInstance, budget: usize) -> Result<CosetCategory, ClError> {
    let g = &inst.action.group;
    let p = inst.poset();
    coset_category(
        CosetSpec {
            objects: p.elements().to_vec(),
            group_order: g.order(),
            member: &|a, b, x| p.leq(inst.act(x, a), b),
            rep: &|a, _, x| inst.left_rep(x, a),
            product: &|x, y| g.mul(y, x),
        },
        budget,
    )
}

/// Compares `Hom_CL(σ, τ)` with the orbit-category hom-set
/// `Hom_Γ(Γ/Δ_τ, Γ/Δ_σ)`, both as sets and under composition.
///
/// The comparison sends `[γ]` to the equivariant map `xΔ_τ ↦ xγΔ_σ`.
pub fn orbit_embedding_check(inst: &ClInstance, cl: &CosetCategory) -> Report {
    const NAME: &str = "orbit embedding";
    let g = &inst.action.group;
    let n = inst.poset().len();
    // Left cosets of each Δ_σ, as sorted lists of minimal representatives.
    let cosets: Vec<Vec<usize>> = (0..n)
        .map(|s| {
            let set: BTreeSet<usize> = (0..g.order()).map(|x| inst.left_rep(x, s)).collect();
            set.into_iter().collect()
        })
        .collect();
    // The map Γ/Δ_τ → Γ/Δ_σ of γ, if well defined.
    let gmap = |s: usize, t: usize, gamma: usize| -> Option<Vec<usize>> {
        let mut images = BTreeMap::new();
        for x in 0..g.order() {
            let img = inst.left_rep(g.mul(x, gamma), s);
            if *images.entry(inst.left_rep(x, t)).or_insert(img) != img {
                return None;
            }
        }
        Some(cosets[t].iter().map(|c| images[c]).collect())
    };
    for s in 0..n {
        for t in 0..n {
            let orbit_homs: BTreeSet<Vec<usize>> = (0..g.order()).filter_map(|gamma| gmap(s, t, gamma)).collect();
            let cl_homs: BTreeSet<Vec<usize>> =
                cl.category.hom(s, t).iter().map(|&f| gmap(s, t, cl.reps[f]).expect("CL morphisms give equivariant maps")).collect();
            if cl_homs.len() != cl.category.hom(s, t).len() {
                return Report::fail(NAME, format!("not injective on Hom({}, {})", inst.poset().elements()[s], inst.poset().elements()[t]));
            }
            if cl_homs != orbit_homs {
                let extra = orbit_homs.difference(&cl_homs).next().expect("strict subset");
                let gamma = (0..g.order()).find(|&x| gmap(s, t, x).as_ref() == Some(extra)).expect("realised");
                return Report::fail(
                    NAME,
                    format!(
                        "Hom({}, {}) misses the equivariant map of group element {gamma}: its conjugate of the subgroup at the target lies in the subgroup at the source, but it does not send source below target",
                        inst.poset().elements()[s],
                        inst.poset().elements()[t]
                    ),
                );
            }
        }
    }
    let c = &cl.category;
    for f in 0..c.morphism_count() {
        for &h in c.out_of(c.tgt(f)) {
            let (s, t, r) = (c.src(f), c.tgt(f), c.tgt(h));
            let mf = gmap(s, t, cl.reps[f]).expect("well defined");
            let mh = gmap(t, r, cl.reps[h]).expect("well defined");
            let composite = gmap(s, r, cl.reps[c.compose(f, h)]).expect("well defined");
            // Contravariant: Γ/Δ_r → Γ/Δ_t → Γ/Δ_s.
            let pos_t = |rep: usize| cosets[t].binary_search(&rep).expect("coset");
            let chained: Vec<usize> = mh.iter().map(|&y| mf[pos_t(y)]).collect();
            if chained != composite {
                return Report::fail(NAME, format!("composition of morphisms {f} and {h} is not preserved"));
            }
        }
    }
    Report::pass(NAME)
}

/// Endomorphisms of `σ` compared with the stabiliser modulo `Δ_σ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutomorphismReport {
    pub endomorphisms: usize,
    pub all_invertible: bool,
    pub stabilizer_order: usize,
    pub delta_order: usize,
    pub report: Report,
}

pub fn object_automorphisms(inst: &ClInstance, cl: &CosetCategory, s: usize) -> AutomorphismReport {
    let c = &cl.category;
    let endos = c.hom(s, s);
    let all_invertible = endos.iter().all(|&f| c.is_iso(f));
    let stabilizer_order = inst.action.stabilizer(s).len();
    let delta_order = inst.delta(s).len();
    let report = if !all_invertible {
        let f = endos.iter().find(|&&f| !c.is_iso(f)).expect("exists");
        Report::fail("object automorphisms", format!("endomorphism {f} is not invertible"))
    } else if endos.len() * delta_order != stabilizer_order {
        Report::fail(
            "object automorphisms",
            format!("|Aut| = {} but stabiliser order {stabilizer_order} / subgroup order {delta_order}", endos.len()),
        )
    } else {
        Report::pass("object automorphisms")
    };
    AutomorphismReport { endomorphisms: endos.len(), all_invertible, stabilizer_order, delta_order, report }
}

/// The functor from the poset downset of `σ` to the comma category of CL
/// over `σ`, sending `τ ≤ σ` to `τ → σ` given by the identity class.
pub fn comma_equivalence_check(inst: &ClInstance, cl: &CosetCategory, s: usize, budget: usize) -> Report {
    const NAME: &str = "comma equivalence";
    let c = &cl.category;
    let comma = match c.comma_over(c, &Functor::identity(c), s, budget) {
        Ok(x) => x,
        Err(e) => return Report::fail(NAME, e.to_string()),
    };
    let (down, members) = inst.poset().downset(s).expect("element exists");
    let pc = FinCategory::from_poset(&down);
    let id_morph = |a: usize, b: usize| cl.morphism(a, b, inst.left_rep(0, a)).expect("identity class");
    let object_of: BTreeMap<(usize, usize), usize> = comma.objects.iter().enumerate().map(|(i, &(o, u))| ((o, u), i)).collect();
    let object_map: Vec<usize> = members.iter().map(|&t| object_of[&(t, id_morph(t, s))]).collect();
    let mut morphism_map = Vec::with_capacity(pc.morphism_count());
    for m in pc.morphisms() {
        let (a, b) = (object_map[m.src], object_map[m.tgt]);
        let under = id_morph(members[m.src], members[m.tgt]);
        let found = comma.category.hom(a, b).iter().copied().find(|&x| comma.underlying[x] == under);
        match found {
            Some(x) => morphism_map.push(x),
            None => return Report::fail(NAME, format!("no comma morphism over the identity for {}", m.label)),
        }
    }
    let f = Functor { object_map, morphism_map };
    let r = check_equivalence(&f, &pc, &comma.category);
    Report { name: NAME.into(), ..r }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::DEFAULT_MORPHISM_BUDGET as B;
    use crate::perm::{FiniteGroup, Perm, PermGroup};

    fn cyclic(n: usize) -> FiniteGroup {
        let gen = Perm((0..n).map(|i| (i + 1) % n).collect());
        FiniteGroup::from_perm_group(&PermGroup::new(n, vec![gen]).unwrap()).unwrap()
    }

    #[test]
    fn action_category_examples() {
        let trivial = GroupAction::trivial(FinPoset::chain(3));
        assert_eq!(action_category(&trivial, B).unwrap().category.morphism_count(), 6);

        let z2_point = GroupAction::from_generators(cyclic(2), FinPoset::chain(1), &[vec![0]]).unwrap();
        let c = action_category(&z2_point, B).unwrap().category;
        assert_eq!((c.object_count(), c.morphism_count()), (1, 2));

        let swap = GroupAction::from_generators(cyclic(2), FinPoset::antichain(2), &[vec![1, 0]]).unwrap();
        let c = action_category(&swap, B).unwrap().category;
        assert_eq!(c.hom(0, 1).len(), 1);
        assert_eq!(c.hom(0, 0).len(), 1);
    }

    #[test]
    fn trivial_delta_gives_action_category() {
        let swap = GroupAction::from_generators(cyclic(2), FinPoset::antichain(2), &[vec![1, 0]]).unwrap();
        let a = action_category(&swap, B).unwrap();
        let cl = cl_category(&ClInstance::trivial_delta(swap), B).unwrap();
        assert_eq!(a.category.morphisms(), cl.category.morphisms());
        assert_eq!(a.reps, cl.reps);
    }

    #[test]
    fn z4_mod_index_two() {
        let z4 = cyclic(4);
        let sq = z4.id_of(&Perm(vec![2, 3, 0, 1])).unwrap();
        let action = GroupAction::from_generators(z4, FinPoset::chain(1), &[vec![0]]).unwrap();
        let inst = ClInstance::new(action, vec![vec![sq]]).unwrap();
        let cl = cl_category(&inst, B).unwrap();
        assert_eq!(cl.category.morphism_count(), 2);
        assert!(orbit_embedding_check(&inst, &cl).passed);
        let aut = object_automorphisms(&inst, &cl, 0);
        assert_eq!(aut.endomorphisms, 2);
        assert!(aut.report.passed);
    }

    #[test]
    fn condition_ii_violation() {
        // Z/2 swapping two incomparable points, with Δ nontrivial at one only.
        let z2 = cyclic(2);
        let action = GroupAction::from_generators(z2, FinPoset::antichain(2), &[vec![1, 0]]).unwrap();
        let err = ClInstance::new(action, vec![vec![1], vec![]]).unwrap_err();
        assert!(matches!(err, ClError::NotStabilizing(0)) || err.to_string().contains("condition (ii)"));
    }

    #[test]
    fn condition_ii_message() {
        // Z/2 × Z/2 on a point; Δ generated by an element is normal, so use S3.
        let s3 = FiniteGroup::from_perm_group(&PermGroup::new(3, vec![Perm(vec![1, 2, 0]), Perm(vec![1, 0, 2])]).unwrap()).unwrap();
        let t = s3.id_of(&Perm(vec![1, 0, 2])).unwrap();
        let action = GroupAction::from_generators(s3, FinPoset::chain(1), &[vec![0], vec![0]]).unwrap();
        let err = ClInstance::new(action, vec![vec![t]]).unwrap_err();
        assert!(err.to_string().contains("condition (ii)"), "{err}");
    }

    #[test]
    fn condition_i_violation() {
        let action = GroupAction::from_generators(cyclic(2), FinPoset::chain(2), &[vec![0, 1]]).unwrap();
        assert!(matches!(ClInstance::new(action, vec![vec![], vec![1]]), Err(ClError::ConditionI { lower: 0, upper: 1 })));
    }

    #[test]
    fn orbit_embedding_needs_order_reflecting_family() {
        let action = GroupAction::trivial(FinPoset::antichain(2));
        let inst = ClInstance::trivial_delta(action);
        let cl = cl_category(&inst, B).unwrap();
        let r = orbit_embedding_check(&inst, &cl);
        assert!(!r.passed);
        assert!(r.witness.unwrap().contains("misses"));
    }

    #[test]
    fn comma_equivalence_on_swap() {
        let swap = GroupAction::from_generators(cyclic(2), FinPoset::antichain(2), &[vec![1, 0]]).unwrap();
        let inst = ClInstance::trivial_delta(swap);
        let cl = cl_category(&inst, B).unwrap();
        for s in 0..2 {
            assert!(comma_equivalence_check(&inst, &cl, s, B).passed);
        }
    }
}
