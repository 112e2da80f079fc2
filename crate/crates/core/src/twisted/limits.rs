//! Limits of finite-set-valued functors on `Tw^θ` and their decomposition
//! along the action category and the orbit-class closures.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::category::{FinCategory, Report, SetValuedFunctor};
use crate::charney_lee::ClInstance;

use super::{class_leq, members, orbit_rep, positions, strict_classes_poset, TwCategory, TwError, TwFilter};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LimitReport {
    pub checks: Vec<Report>,
    /// Limit cardinalities by restriction name.
    pub cardinalities: BTreeMap<String, usize>,
}

impl LimitReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|r| r.passed)
    }
}

struct Ctx<'a> {
    tw_theta: &'a FinCategory,
    f: &'a SetValuedFunctor,
    budget: u64,
}

impl Ctx<'_> {
    /// Limit over the full subcategory on `local` (ascending ids in `Tw^θ`).
    fn limit(&self, local: &[usize]) -> Result<Vec<Vec<usize>>, TwError> {
        let (sub, incl) = self.tw_theta.full_subcategory(local);
        Ok(self.f.pull_back(&incl).limit_set(&sub, self.budget)?)
    }
}

fn restrict(family: &[usize], pos: &[usize]) -> Vec<usize> {
    pos.iter().map(|&i| family[i]).collect()
}

fn bijection_report(name: &str, source: &[Vec<usize>], target: &[Vec<usize>], map: impl Fn(&[usize]) -> Vec<usize>) -> Report {
    let images: BTreeSet<Vec<usize>> = source.iter().map(|x| map(x)).collect();
    let target: BTreeSet<Vec<usize>> = target.iter().cloned().collect();
    if images.len() != source.len() {
        Report::fail(name, format!("not injective: {} families map to {} images", source.len(), images.len()))
    } else if images != target {
        Report::fail(name, format!("image has {} of {} target families", images.intersection(&target).count(), target.len()))
    } else {
        Report::pass(name)
    }
}

/// Verifies that `lim F` over `Tw^θ` is the pullback of its restrictions to
/// the complement of `(θ ≤ θ)` and to the action category, that the latter
/// agrees with the limit over `(θ ≤ θ)`, and that the limit over the
/// complement is the inverse limit over strictly smaller orbit classes of
/// limits over their closures, each of which agrees with the limit over
/// the corresponding `Tw^ν`.
///
/// `f` is a functor on the full subcategory `Tw^θ`.
pub fn limit_decomposition_check(
    inst: &ClInstance,
    tw: &TwCategory,
    theta: usize,
    f: &SetValuedFunctor,
    budget: u64,
) -> Result<LimitReport, TwError> {
    let all = members(inst, tw, TwFilter::Theta(theta))?;
    let (tw_theta, _) = tw.category().full_subcategory(&all);
    f.validate(&tw_theta)?;
    let ctx = Ctx { tw_theta: &tw_theta, f, budget };
    let local = |filter: TwFilter| -> Result<Vec<usize>, TwError> { Ok(positions(&members(inst, tw, filter)?, &all)) };
    let mut cardinalities = BTreeMap::new();
    let mut checks = Vec::new();

    let whole: Vec<usize> = (0..all.len()).collect();
    let b = local(TwFilter::BGamma(theta))?;
    let rest: Vec<usize> = whole.iter().copied().filter(|x| !b.contains(x)).collect();
    let action = local(TwFilter::ActionCat(theta))?;
    let action_rest: Vec<usize> = action.iter().copied().filter(|x| !b.contains(x)).collect();

    let lim = ctx.limit(&whole)?;
    let lim_rest = ctx.limit(&rest)?;
    let lim_action = ctx.limit(&action)?;
    let lim_action_rest = ctx.limit(&action_rest)?;
    let lim_b = ctx.limit(&b)?;
    for (k, v) in [
        ("whole", &lim),
        ("complement", &lim_rest),
        ("action", &lim_action),
        ("action complement", &lim_action_rest),
        ("classifying", &lim_b),
    ] {
        cardinalities.insert(k.to_string(), v.len());
    }

    let pos_rest = positions(&rest, &whole);
    let pos_action = positions(&action, &whole);
    let from_rest = positions(&action_rest, &rest);
    let from_action = positions(&action_rest, &action);
    let mut by_overlap: HashMap<Vec<usize>, Vec<&Vec<usize>>> = HashMap::new();
    for y in &lim_action {
        by_overlap.entry(restrict(y, &from_action)).or_default().push(y);
    }
    let mut pullback = Vec::new();
    for x in &lim_rest {
        for y in by_overlap.get(&restrict(x, &from_rest)).into_iter().flatten() {
            pullback.push([x.as_slice(), y.as_slice()].concat());
        }
    }
    cardinalities.insert("pullback".into(), pullback.len());
    checks
        .push(bijection_report("pullback decomposition", &lim, &pullback, |x| [restrict(x, &pos_rest), restrict(x, &pos_action)].concat()));
    let b_in_action = positions(&b, &action);
    checks.push(bijection_report("action category restriction", &lim_action, &lim_b, |x| restrict(x, &b_in_action)));

    // Inverse limit over strictly smaller classes.
    let (classes, reps) = strict_classes_poset(inst, theta);
    let closures: Vec<Vec<usize>> = reps.iter().map(|&nu| local(TwFilter::LeqClass { theta, nu })).collect::<Result<_, _>>()?;
    let class_limits: Vec<Vec<Vec<usize>>> = closures.iter().map(|c| ctx.limit(c)).collect::<Result<_, _>>()?;
    let index: Vec<HashMap<&Vec<usize>, usize>> =
        class_limits.iter().map(|l| l.iter().enumerate().map(|(i, x)| (x, i)).collect()).collect();
    let diagram = FinCategory::from_poset(&classes.opposite());
    let maps = diagram
        .morphisms()
        .iter()
        .map(|m| {
            let pos = positions(&closures[m.tgt], &closures[m.src]);
            class_limits[m.src].iter().map(|x| index[m.tgt][&restrict(x, &pos)]).collect()
        })
        .collect();
    let functor = SetValuedFunctor { sizes: class_limits.iter().map(|l| l.len()).collect(), maps };
    functor.validate(&diagram)?;
    let inverse = functor.limit_set(&diagram, budget)?;
    cardinalities.insert("inverse limit".into(), inverse.len());
    let pos_closures: Vec<Vec<usize>> = closures.iter().map(|c| positions(c, &rest)).collect();
    checks.push(bijection_report("inverse limit over classes", &lim_rest, &inverse, |x| {
        pos_closures.iter().zip(&index).map(|(pos, idx)| idx[&restrict(x, pos)]).collect()
    }));

    let p = inst.poset();
    let mut witness = None;
    for nu in (0..p.len()).filter(|&nu| p.leq(nu, theta)) {
        let closure = local(TwFilter::LeqClass { theta, nu })?;
        let small = local(TwFilter::Theta(nu))?;
        let pos = positions(&small, &closure);
        let r = bijection_report("class closure", &ctx.limit(&closure)?, &ctx.limit(&small)?, |x| restrict(x, &pos));
        if !r.passed {
            witness = Some(format!("at {}: {}", p.elements()[nu], r.witness.unwrap_or_default()));
            break;
        }
    }
    checks.push(match witness {
        None => Report::pass("class closure restriction"),
        Some(w) => Report::fail("class closure restriction", w),
    });
    Ok(LimitReport { checks, cardinalities })
}

/// Seeded functors on `Tw^θ` with all sets of size at most 4: a constant
/// functor, the empty functor, then a mix of up-set indicator functors and
/// truncation functors pulled back from the orbit-class poset, and small
/// representable functors.
pub fn seeded_functors(
    inst: &ClInstance,
    tw: &TwCategory,
    theta: usize,
    seed: u64,
    count: usize,
) -> Result<Vec<SetValuedFunctor>, TwError> {
    let all = members(inst, tw, TwFilter::Theta(theta))?;
    let (c, _) = tw.category().full_subcategory(&all);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = inst.poset();
    let reps: Vec<usize> = (0..p.len()).map(|x| orbit_rep(inst, x)).collect();
    // (σ ≤ τ) ↦ ([σ], [τ]); a morphism raises the point in [σ]-reversed, [τ]-forward order.
    let point: Vec<(usize, usize)> = all.iter().map(|&o| (reps[tw.objects[o].0], reps[tw.objects[o].1])).collect();
    let points: Vec<(usize, usize)> = point.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    let below = |a: (usize, usize), b: (usize, usize)| class_leq(inst, b.0, a.0) && class_leq(inst, a.1, b.1);
    let representable: Vec<usize> = (0..c.object_count()).filter(|&x| (0..c.object_count()).all(|y| c.hom(x, y).len() <= 4)).collect();

    let random_upset = |rng: &mut ChaCha8Rng| -> Vec<bool> {
        let gens: Vec<(usize, usize)> = points.iter().copied().filter(|_| rng.random_bool(0.3)).collect();
        point.iter().map(|&q| gens.iter().any(|&g| below(g, q))).collect()
    };
    let mut out = vec![SetValuedFunctor::constant(&c, rng.random_range(1..=4)), SetValuedFunctor::constant(&c, 0)];
    while out.len() < count {
        let kind = rng.random_range(0..3);
        let f = match kind {
            0 => {
                let k = rng.random_range(1..=4);
                let sets: Vec<Vec<usize>> = {
                    let ups: Vec<Vec<bool>> = (0..k).map(|_| random_upset(&mut rng)).collect();
                    (0..c.object_count()).map(|o| (0..k).filter(|&i| ups[i][o]).collect()).collect()
                };
                let maps = c
                    .morphisms()
                    .iter()
                    .map(|m| sets[m.src].iter().map(|i| sets[m.tgt].binary_search(i).expect("up-sets are closed upward")).collect())
                    .collect();
                SetValuedFunctor { sizes: sets.iter().map(|s| s.len()).collect(), maps }
            }
            1 => {
                let levels = rng.random_range(1..=3);
                let ups: Vec<Vec<bool>> = (0..levels).map(|_| random_upset(&mut rng)).collect();
                let top: Vec<usize> = (0..c.object_count()).map(|o| levels - ups.iter().filter(|u| u[o]).count()).collect();
                let maps = c.morphisms().iter().map(|m| (0..=top[m.src]).map(|x| x.min(top[m.tgt])).collect()).collect();
                SetValuedFunctor { sizes: top.iter().map(|t| t + 1).collect(), maps }
            }
            _ if !representable.is_empty() => {
                let x = representable[rng.random_range(0..representable.len())];
                let maps = c
                    .morphisms()
                    .iter()
                    .enumerate()
                    .map(|(mi, m)| {
                        c.hom(x, m.src)
                            .iter()
                            .map(|&u| {
                                let v = c.compose(u, mi);
                                c.hom(x, m.tgt).binary_search(&v).expect("composite lies in the hom-set")
                            })
                            .collect()
                    })
                    .collect();
                SetValuedFunctor { sizes: (0..c.object_count()).map(|y| c.hom(x, y).len()).collect(), maps }
            }
            _ => continue,
        };
        debug_assert_eq!(f.validate(&c), Ok(()));
        out.push(f);
    }
    out.truncate(count);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::{DEFAULT_LIMIT_BUDGET, DEFAULT_MORPHISM_BUDGET as B};
    use crate::poset::{FinPoset, GroupAction};
    use crate::twisted::tw_alternative;

    #[test]
    fn chain_functors_decompose() {
        let inst = ClInstance::trivial_delta(GroupAction::trivial(FinPoset::chain(3)));
        let tw = tw_alternative(&inst, B).unwrap();
        for theta in 0..3 {
            let fs = seeded_functors(&inst, &tw, theta, 7, 12).unwrap();
            assert_eq!(fs.len(), 12);
            for f in &fs {
                let r = limit_decomposition_check(&inst, &tw, theta, f, DEFAULT_LIMIT_BUDGET).unwrap();
                assert!(r.passed(), "{r:?}");
            }
        }
    }

    #[test]
    fn empty_functor_propagates() {
        let inst = ClInstance::trivial_delta(GroupAction::trivial(FinPoset::chain(2)));
        let tw = tw_alternative(&inst, B).unwrap();
        let (c, _) = crate::twisted::subcategory(&inst, &tw, TwFilter::Theta(1)).unwrap();
        let r = limit_decomposition_check(&inst, &tw, 1, &SetValuedFunctor::constant(&c, 0), DEFAULT_LIMIT_BUDGET).unwrap();
        assert!(r.passed());
        assert_eq!(r.cardinalities["whole"], 0);
    }
}
