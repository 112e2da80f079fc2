//! Twisted arrow categories, their alternative description over a
//! Charney–Lee instance, the filtrations by orbit classes, and the checks
//! that decompose limits over them.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use crate::category::{check_equivalence, CategoryError, FinCategory, Functor, Morphism, Report};
use crate::charney_lee::{coset_category, ClError, ClInstance, CosetCategory, CosetSpec};
use crate::homology::HomologyError;
use crate::poset::FinPoset;

mod certificate;
mod limits;

pub use certificate::{fibre_certificate, Certificate, CertificateOutcome, Failure, HeuristicEvidence, MAX_COVER};
pub use limits::{limit_decomposition_check, seeded_functors, LimitReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TwError {
    #[error(transparent)]
    Cl(#[from] ClError),
    #[error(transparent)]
    Category(#[from] CategoryError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error("invalid filter: {0}")]
    Filter(String),
    #[error("cover has {0} nonempty members, more than the supported {MAX_COVER}")]
    CoverTooLarge(usize),
}

/// `Tw(C)` for an explicit category: objects are the morphisms of `C`, and a
/// morphism `f → f'` is a pair `(a, b)` with `f' = b ∘ f ∘ a`.
#[derive(Debug, Clone)]
pub struct StandardTw {
    pub category: FinCategory,
    /// The morphism of `C` behind each object.
    pub arrows: Vec<usize>,
    /// `(a, b)` behind each morphism.
    pub pairs: Vec<(usize, usize)>,
    index: HashMap<(usize, usize, usize, usize), usize>,
}

impl StandardTw {
    pub fn morphism(&self, f: usize, f2: usize, a: usize, b: usize) -> Option<usize> {
        self.index.get(&(f, f2, a, b)).copied()
    }
}

pub fn tw_standard(c: &FinCategory, budget: usize) -> Result<StandardTw, TwError> {
    let m = c.morphism_count();
    let objects: Vec<String> =
        (0..m).map(|f| format!("{}:{}->{}", c.morphism(f).label, c.objects()[c.src(f)], c.objects()[c.tgt(f)])).collect();
    let mut morphisms = Vec::new();
    let mut pairs = Vec::new();
    let mut index = HashMap::new();
    for f in 0..m {
        for f2 in 0..m {
            for &a in c.hom(c.src(f2), c.src(f)) {
                let fa = c.compose(a, f);
                for &b in c.hom(c.tgt(f), c.tgt(f2)) {
                    if c.compose(fa, b) == f2 {
                        index.insert((f, f2, a, b), morphisms.len());
                        morphisms.push(Morphism { src: f, tgt: f2, label: format!("({},{})", c.morphism(a).label, c.morphism(b).label) });
                        pairs.push((a, b));
                        if morphisms.len() > budget {
                            return Err(CategoryError::TooLarge { got: morphisms.len(), budget }.into());
                        }
                    }
                }
            }
        }
    }
    let identities = (0..m).map(|f| index[&(f, f, c.identity(c.src(f)), c.identity(c.tgt(f)))]).collect();
    let ms = morphisms.clone();
    let category = FinCategory::new(
        objects,
        morphisms,
        identities,
        |x, y| {
            let ((a, b), (a2, b2)) = (pairs[x], pairs[y]);
            index[&(ms[x].src, ms[y].tgt, c.compose(a2, a), c.compose(b, b2))]
        },
        budget,
    )?;
    Ok(StandardTw { category, arrows: (0..m).collect(), pairs, index })
}

/// The twisted arrow category of a Charney–Lee category in its alternative
/// description: objects `σ ≤ τ`, and morphisms `(σ ≤ τ) → (σ' ≤ τ')` the
/// classes `Δ_τ γ` with `γ·σ' ≤ σ` and `γ·τ' ≥ τ`.
#[derive(Debug, Clone)]
pub struct TwCategory {
    pub coset: CosetCategory,
    /// `(σ, τ)` per object.
    pub objects: Vec<(usize, usize)>,
    index: BTreeMap<(usize, usize), usize>,
}

impl TwCategory {
    pub fn category(&self) -> &FinCategory {
        &self.coset.category
    }

    pub fn object_of(&self, lower: usize, upper: usize) -> Option<usize> {
        self.index.get(&(lower, upper)).copied()
    }

    /// Representative group element of a morphism.
    pub fn rep(&self, f: usize) -> usize {
        self.coset.reps[f]
    }
}

pub fn tw_alternative(inst: &ClInstance, budget: usize) -> Result<TwCategory, TwError> {
    let p = inst.poset();
    let g = &inst.action.group;
    let objects: Vec<(usize, usize)> = (0..p.len()).flat_map(|s| (0..p.len()).filter(move |&t| p.leq(s, t)).map(move |t| (s, t))).collect();
    let names = objects.iter().map(|&(s, t)| format!("({}<={})", p.elements()[s], p.elements()[t])).collect();
    let coset = coset_category(
        CosetSpec {
            objects: names,
            group_order: g.order(),
            member: &|a, b, x| {
                let ((s, t), (s2, t2)) = (objects[a], objects[b]);
                p.leq(inst.act(x, s2), s) && p.leq(t, inst.act(x, t2))
            },
            rep: &|a, _, x| inst.right_rep(objects[a].1, x),
            product: &|x, y| g.mul(x, y),
        },
        budget,
    )?;
    let index = objects.iter().enumerate().map(|(i, &o)| (o, i)).collect();
    Ok(TwCategory { coset, objects, index })
}

/// The functor `(σ ≤ τ) ↦ (σ → τ)` given by the identity class, sending
/// `[γ]` to the pair `([γ] : σ' → σ, [γ⁻¹] : τ → τ')`.
pub fn comparison_functor(inst: &ClInstance, cl: &CosetCategory, alt: &TwCategory, std: &StandardTw) -> Result<Functor, TwError> {
    let g = &inst.action.group;
    let missing = |what: String| TwError::Category(CategoryError::Functor(what));
    let arrow = |s: usize, t: usize| cl.morphism(s, t, inst.left_rep(0, s)).ok_or_else(|| missing(format!("no identity class {s}->{t}")));
    let object_map: Vec<usize> = alt.objects.iter().map(|&(s, t)| arrow(s, t)).collect::<Result<_, _>>()?;
    let c = alt.category();
    let mut morphism_map = Vec::with_capacity(c.morphism_count());
    for f in 0..c.morphism_count() {
        let ((s, t), (s2, t2)) = (alt.objects[c.src(f)], alt.objects[c.tgt(f)]);
        let gamma = alt.rep(f);
        let a = cl.morphism(s2, s, inst.left_rep(gamma, s2)).ok_or_else(|| missing(format!("morphism {f}: no lower component")))?;
        let b = cl.morphism(t, t2, inst.left_rep(g.inv(gamma), t)).ok_or_else(|| missing(format!("morphism {f}: no upper component")))?;
        let image = std
            .morphism(object_map[c.src(f)], object_map[c.tgt(f)], a, b)
            .ok_or_else(|| missing(format!("morphism {f}: pair is not a factorisation")))?;
        morphism_map.push(image);
    }
    Ok(Functor { object_map, morphism_map })
}

/// Runs `check_equivalence` on the comparison functor.
pub fn comparison_check(inst: &ClInstance, cl: &CosetCategory, alt: &TwCategory, std: &StandardTw) -> Report {
    const NAME: &str = "alternative description";
    match comparison_functor(inst, cl, alt, std) {
        Ok(f) => Report { name: NAME.into(), ..check_equivalence(&f, alt.category(), &std.category) },
        Err(e) => Report::fail(NAME, e.to_string()),
    }
}

/// Full subcategories of the alternative twisted arrow category.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwFilter {
    /// `τ ≤ θ`.
    Theta(usize),
    /// `τ ≤ θ` and `σ ≤ ν'` for some `ν'` in the orbit of `ν`.
    LeqClass { theta: usize, nu: usize },
    /// `τ ≤ θ` and `τ ≤ ν'` for some `ν'` in the orbit of `ν`.
    EqClass { theta: usize, nu: usize },
    /// `(σ ≤ θ)`: the opposite of the action category below `θ`.
    ActionCat(usize),
    /// The single object `(θ ≤ θ)`.
    BGamma(usize),
}

/// Sorted orbit of `x`.
pub fn orbit(inst: &ClInstance, x: usize) -> Vec<usize> {
    inst.action.orbit(x)
}

/// Orbit representative: the smallest element id in the orbit.
pub fn orbit_rep(inst: &ClInstance, x: usize) -> usize {
    orbit(inst, x)[0]
}

/// `[a] ≤ [b]` in the orbit poset.
pub fn class_leq(inst: &ClInstance, a: usize, b: usize) -> bool {
    orbit(inst, a).iter().any(|&y| inst.poset().leq(y, b))
}

/// Orbit representatives `ν` with `[ν] ≤ [θ]`, in increasing order.
pub fn classes_below(inst: &ClInstance, theta: usize) -> Vec<usize> {
    let reps: BTreeSet<usize> = (0..inst.poset().len()).map(|x| orbit_rep(inst, x)).collect();
    reps.into_iter().filter(|&r| class_leq(inst, r, theta)).collect()
}

pub fn members(inst: &ClInstance, tw: &TwCategory, filter: TwFilter) -> Result<Vec<usize>, TwError> {
    let p = inst.poset();
    let check = |x: usize| if x < p.len() { Ok(()) } else { Err(TwError::Filter(format!("element {x} out of range"))) };
    let keep: Box<dyn Fn(usize, usize) -> bool> = match filter {
        TwFilter::Theta(th) => {
            check(th)?;
            Box::new(move |_, t| p.leq(t, th))
        }
        TwFilter::LeqClass { theta, nu } | TwFilter::EqClass { theta, nu } => {
            check(theta)?;
            check(nu)?;
            let points = orbit(inst, nu);
            let on_upper = matches!(filter, TwFilter::EqClass { .. });
            Box::new(move |s, t| {
                let probe = if on_upper { t } else { s };
                p.leq(t, theta) && points.iter().any(|&q| p.leq(probe, q))
            })
        }
        TwFilter::ActionCat(th) => {
            check(th)?;
            Box::new(move |_, t| t == th)
        }
        TwFilter::BGamma(th) => {
            check(th)?;
            Box::new(move |s, t| s == th && t == th)
        }
    };
    Ok((0..tw.objects.len()).filter(|&i| keep(tw.objects[i].0, tw.objects[i].1)).collect())
}

pub fn subcategory(inst: &ClInstance, tw: &TwCategory, filter: TwFilter) -> Result<(FinCategory, Functor), TwError> {
    Ok(tw.category().full_subcategory(&members(inst, tw, filter)?))
}

/// Pass/fail per check of the decomposition of `Tw^θ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionReport {
    pub theta: usize,
    pub checks: Vec<Report>,
}

impl DecompositionReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|r| r.passed)
    }
}

fn positions(subset: &[usize], of: &[usize]) -> Vec<usize> {
    subset.iter().map(|x| of.binary_search(x).expect("subset")).collect()
}

pub fn decomposition_report(inst: &ClInstance, tw: &TwCategory, theta: usize, budget: usize) -> Result<DecompositionReport, TwError> {
    let p = inst.poset();
    let name = |x: usize| p.elements()[x].clone();
    let c = tw.category();
    let all = members(inst, tw, TwFilter::Theta(theta))?;
    let (tw_theta, _) = c.full_subcategory(&all);
    let classes = classes_below(inst, theta);
    let mut checks = Vec::new();

    // Right closedness of the orbit-class closures and of the action category.
    let mut witness = None;
    for &nu in &classes {
        let local = positions(&members(inst, tw, TwFilter::LeqClass { theta, nu })?, &all);
        if let Err(f) = tw_theta.is_right_closed(&local) {
            witness.get_or_insert_with(|| format!("morphism {} leaves the closure of [{}]", describe(&tw_theta, f), name(nu)));
        }
    }
    let action = members(inst, tw, TwFilter::ActionCat(theta))?;
    if let Err(f) = tw_theta.is_right_closed(&positions(&action, &all)) {
        witness.get_or_insert_with(|| format!("morphism {} leaves the action category", describe(&tw_theta, f)));
    }
    checks.push(report("right closed", witness));

    // Union of closures over strictly smaller classes.
    let theta_class = orbit_rep(inst, theta);
    let mut union = BTreeSet::new();
    for &nu in classes.iter().filter(|&&nu| nu != theta_class) {
        union.extend(members(inst, tw, TwFilter::LeqClass { theta, nu })?);
    }
    let b = members(inst, tw, TwFilter::BGamma(theta))?;
    let complement: BTreeSet<usize> = all.iter().copied().filter(|x| !b.contains(x)).collect();
    let witness = union.symmetric_difference(&complement).next().map(|&x| format!("object {} is in exactly one side", c.objects()[x]));
    checks.push(report("union of closures", witness));

    // Right adjoint of the inclusion of the classifying object.
    let (acat, _) = c.full_subcategory(&action);
    let b_local = positions(&b, &action);
    let (bcat, incl) = acat.full_subcategory(&b_local);
    let mut witness = None;
    for a in 0..acat.object_count() {
        let comma = acat.comma_over(&bcat, &incl, a, budget)?;
        if comma.category.terminal_object().is_none() {
            witness = Some(format!("comma category over {} has no terminal object", acat.objects()[a]));
            break;
        }
    }
    checks.push(report("right adjoint", witness));

    // Tw^ν ↪ Tw^θ_[ν] for ν ≤ θ.
    let mut witness = None;
    for nu in (0..p.len()).filter(|&nu| p.leq(nu, theta)) {
        let eq = members(inst, tw, TwFilter::EqClass { theta, nu })?;
        let small = members(inst, tw, TwFilter::Theta(nu))?;
        let (eq_cat, _) = c.full_subcategory(&eq);
        let (small_cat, incl) = eq_cat.full_subcategory(&positions(&small, &eq));
        let r = check_equivalence(&incl, &small_cat, &eq_cat);
        if !r.passed {
            witness = Some(format!("at {}: {}", name(nu), r.witness.unwrap_or_default()));
            break;
        }
    }
    checks.push(report("orbit-class equivalence", witness));
    Ok(DecompositionReport { theta, checks })
}

fn describe(c: &FinCategory, f: usize) -> String {
    format!("{} : {} -> {}", c.morphism(f).label, c.objects()[c.src(f)], c.objects()[c.tgt(f)])
}

fn report(name: &str, witness: Option<String>) -> Report {
    match witness {
        None => Report::pass(name),
        Some(w) => Report::fail(name, w),
    }
}

/// The orbit poset restricted to classes `[ν] < [θ]`, on representatives.
pub(crate) fn strict_classes_poset(inst: &ClInstance, theta: usize) -> (FinPoset, Vec<usize>) {
    let theta_class = orbit_rep(inst, theta);
    let reps: Vec<usize> = classes_below(inst, theta).into_iter().filter(|&r| r != theta_class).collect();
    let names = reps.iter().map(|&r| format!("[{}]", inst.poset().elements()[r])).collect();
    let leq = reps.iter().map(|&a| reps.iter().map(|&b| class_leq(inst, a, b)).collect()).collect();
    (FinPoset::new(names, leq).expect("orbit poset"), reps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::DEFAULT_MORPHISM_BUDGET as B;
    use crate::charney_lee::cl_category;
    use crate::perm::{FiniteGroup, Perm, PermGroup};
    use crate::poset::GroupAction;

    fn z2() -> FiniteGroup {
        FiniteGroup::from_perm_group(&PermGroup::new(2, vec![Perm(vec![1, 0])]).unwrap()).unwrap()
    }

    #[test]
    fn standard_examples() {
        let chain = FinCategory::from_poset(&FinPoset::chain(2));
        let tw = tw_standard(&chain, B).unwrap();
        assert_eq!((tw.category.object_count(), tw.category.morphism_count()), (3, 5));

        let disc = tw_standard(&FinCategory::discrete(3), B).unwrap();
        assert_eq!((disc.category.object_count(), disc.category.morphism_count()), (3, 3));

        let bz2 = tw_standard(&FinCategory::from_group(&z2()), B).unwrap().category;
        assert_eq!(bz2.object_count(), 2);
        assert!(bz2.isomorphic(0, 1));
        for o in 0..2 {
            assert_eq!(bz2.hom(o, o).len(), 2);
        }
        assert!((0..bz2.morphism_count()).all(|f| bz2.is_iso(f)));
    }

    #[test]
    fn alternative_examples() {
        let chain = ClInstance::trivial_delta(GroupAction::trivial(FinPoset::chain(2)));
        let tw = tw_alternative(&chain, B).unwrap();
        assert_eq!((tw.category().object_count(), tw.category().morphism_count()), (3, 5));

        let point = ClInstance::trivial_delta(GroupAction::from_generators(z2(), FinPoset::chain(1), &[vec![0]]).unwrap());
        let tw = tw_alternative(&point, B).unwrap();
        assert_eq!((tw.category().object_count(), tw.category().morphism_count()), (1, 2));

        for inst in [chain, point] {
            let cl = cl_category(&inst, B).unwrap();
            let std = tw_standard(&cl.category, B).unwrap();
            let alt = tw_alternative(&inst, B).unwrap();
            assert!(comparison_check(&inst, &cl, &alt, &std).passed);
        }
    }

    #[test]
    fn filters() {
        let inst = ClInstance::trivial_delta(GroupAction::trivial(FinPoset::chain(3)));
        let tw = tw_alternative(&inst, B).unwrap();
        assert_eq!(members(&inst, &tw, TwFilter::Theta(2)).unwrap().len(), tw.objects.len());
        assert_eq!(members(&inst, &tw, TwFilter::Theta(1)).unwrap().len(), 3);
        assert_eq!(members(&inst, &tw, TwFilter::ActionCat(1)).unwrap().len(), 2);
        assert_eq!(members(&inst, &tw, TwFilter::BGamma(1)).unwrap().len(), 1);
        let eq = members(&inst, &tw, TwFilter::EqClass { theta: 2, nu: 2 }).unwrap();
        assert_eq!(eq.len(), 6);
        assert!(matches!(members(&inst, &tw, TwFilter::Theta(9)), Err(TwError::Filter(_))));

        let point = ClInstance::trivial_delta(GroupAction::from_generators(z2(), FinPoset::chain(1), &[vec![0]]).unwrap());
        let tw = tw_alternative(&point, B).unwrap();
        let (b, _) = subcategory(&point, &tw, TwFilter::BGamma(0)).unwrap();
        assert_eq!(b.hom(0, 0).len(), 2);
    }

    #[test]
    fn decomposition_on_chain_and_point() {
        let inst = ClInstance::trivial_delta(GroupAction::trivial(FinPoset::chain(3)));
        let tw = tw_alternative(&inst, B).unwrap();
        for theta in 0..3 {
            let r = decomposition_report(&inst, &tw, theta, B).unwrap();
            assert!(r.passed(), "{r:?}");
        }
        let point = ClInstance::trivial_delta(GroupAction::trivial(FinPoset::chain(1)));
        let tw = tw_alternative(&point, B).unwrap();
        assert!(decomposition_report(&point, &tw, 0, B).unwrap().passed());
    }
}
