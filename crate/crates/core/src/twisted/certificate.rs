//! Contractibility certificates for left fibres of `Tw^θ_[ν] ↪ Tw^θ_{≤[ν]}`
//! by covers with terminal intersections.

use std::collections::BTreeMap;

use crate::category::{check_equivalence, FinCategory};
use crate::charney_lee::ClInstance;
use crate::homology::{order_complex_homology, HomologyResult};
use crate::poset::FinPoset;

use super::{members, orbit, positions, TwCategory, TwError, TwFilter};

/// Largest number of nonempty cover members handled (subsets are enumerated).
pub const MAX_COVER: usize = 16;

/// A left-closed cover of the identity-map fibre whose nonempty intersections
/// have terminal objects and whose intersection poset has an initial element.
#[derive(Debug, Clone)]
pub struct Certificate {
    pub fibre: FinCategory,
    /// The twisted-arrow object underlying each fibre object.
    pub fibre_objects: Vec<usize>,
    /// The orbit point of `ν` indexing each cover member.
    pub cover_points: Vec<usize>,
    /// Fibre objects of each cover member, ascending.
    pub cover: Vec<Vec<usize>>,
    /// Nonempty intersection (ascending member indices) to its terminal object.
    pub intersection_terminals: BTreeMap<Vec<usize>, usize>,
    /// The intersection contained in all others.
    pub intersection_poset_initial: Vec<usize>,
}

/// Homology of the isomorphism-class poset of the fibre. Trivial homology is
/// evidence of contractibility, not a proof.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeuristicEvidence {
    pub label: &'static str,
    pub classes: usize,
    pub homology: HomologyResult,
}

#[derive(Debug, Clone)]
pub struct Failure {
    pub obstruction: String,
    pub heuristic: Option<HeuristicEvidence>,
}

#[derive(Debug, Clone)]
pub enum CertificateOutcome {
    Certified(Certificate),
    Failed(Failure),
}

impl CertificateOutcome {
    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            CertificateOutcome::Certified(c) => Some(c),
            CertificateOutcome::Failed(_) => None,
        }
    }
}

fn intersection(cover: &[Vec<usize>], subset: &[usize], n: usize) -> Vec<usize> {
    (0..n).filter(|x| subset.iter().all(|&i| cover[i].binary_search(x).is_ok())).collect()
}

fn subsets(k: usize) -> impl Iterator<Item = Vec<usize>> {
    (1u32..(1 << k)).map(move |mask| (0..k).filter(|&i| mask & (1 << i) != 0).collect())
}

impl Certificate {
    /// Re-checks every claim from the certificate data alone.
    pub fn validate(&self) -> Result<(), String> {
        let c = &self.fibre;
        let n = c.object_count();
        if self.cover.len() != self.cover_points.len() || self.cover.len() > MAX_COVER {
            return Err("cover shape".into());
        }
        for (i, member) in self.cover.iter().enumerate() {
            if member.is_empty() || member.windows(2).any(|w| w[0] >= w[1]) || member.iter().any(|&x| x >= n) {
                return Err(format!("cover member {i} is not a nonempty ascending object set"));
            }
            if let Err(f) = c.is_left_closed(member) {
                return Err(format!("cover member {i} is not left closed (morphism {f})"));
            }
        }
        if let Some(x) = (0..n).find(|x| !self.cover.iter().any(|m| m.binary_search(x).is_ok())) {
            return Err(format!("object {} is not covered", c.objects()[x]));
        }
        let mut nonempty = Vec::new();
        for subset in subsets(self.cover.len()) {
            let meet = intersection(&self.cover, &subset, n);
            match (meet.is_empty(), self.intersection_terminals.get(&subset)) {
                (true, None) => {}
                (true, Some(_)) => return Err(format!("intersection {subset:?} is recorded but empty")),
                (false, None) => return Err(format!("intersection {subset:?} is nonempty but unrecorded")),
                (false, Some(&t)) => {
                    let Ok(pos) = meet.binary_search(&t) else {
                        return Err(format!("terminal object of {subset:?} is not in the intersection"));
                    };
                    if !c.full_subcategory(&meet).0.is_terminal(pos) {
                        return Err(format!("recorded object of {subset:?} is not terminal"));
                    }
                    nonempty.push(meet);
                }
            }
        }
        let initial = intersection(&self.cover, &self.intersection_poset_initial, n);
        if !self.intersection_terminals.contains_key(&self.intersection_poset_initial)
            || !nonempty.iter().all(|m| initial.iter().all(|x| m.binary_search(x).is_ok()))
        {
            return Err("recorded initial intersection is not contained in every intersection".into());
        }
        Ok(())
    }
}

/// Certificate for the left fibre over the object `x` (a twisted-arrow
/// object in the closure of `[ν]` inside `Tw^θ`).
pub fn fibre_certificate(
    inst: &ClInstance,
    tw: &TwCategory,
    theta: usize,
    nu: usize,
    x: usize,
    budget: usize,
) -> Result<CertificateOutcome, TwError> {
    let p = inst.poset();
    let name = |e: usize| p.elements()[e].clone();
    let leq = members(inst, tw, TwFilter::LeqClass { theta, nu })?;
    let eq = members(inst, tw, TwFilter::EqClass { theta, nu })?;
    let Ok(x_local) = leq.binary_search(&x) else {
        return Err(TwError::Filter(format!("object {x} is not in the closure of the class of {}", name(nu))));
    };
    let (leq_cat, leq_incl) = tw.category().full_subcategory(&leq);
    let (eq_cat, eq_incl) = leq_cat.full_subcategory(&positions(&eq, &leq));
    let fibre = leq_cat.comma_over(&eq_cat, &eq_incl, x_local, budget)?;

    let identity_objects: Vec<usize> =
        (0..fibre.objects.len()).filter(|&i| tw.rep(leq_incl.morphism_map[fibre.objects[i].1]) == 0).collect();
    let (fid, fid_incl) = fibre.category.full_subcategory(&identity_objects);
    let fibre_objects: Vec<usize> = identity_objects.iter().map(|&i| eq[fibre.objects[i].0]).collect();
    let fail = |obstruction: String| -> Result<CertificateOutcome, TwError> {
        Ok(CertificateOutcome::Failed(Failure { obstruction, heuristic: Some(heuristic(&fibre.category)?) }))
    };
    let reduction = check_equivalence(&fid_incl, &fid, &fibre.category);
    if !reduction.passed {
        return fail(format!("identity-map fibre is not equivalent to the fibre: {}", reduction.witness.unwrap_or_default()));
    }

    let (sigma, tau) = tw.objects[x];
    let mut cover_points = Vec::new();
    let mut cover = Vec::new();
    for q in orbit(inst, nu) {
        let member: Vec<usize> = (0..fid.object_count()).filter(|&i| p.leq(tw.objects[fibre_objects[i]].1, q)).collect();
        if !member.is_empty() {
            cover_points.push(q);
            cover.push(member);
        }
    }
    if cover.len() > MAX_COVER {
        return Err(TwError::CoverTooLarge(cover.len()));
    }
    for (i, member) in cover.iter().enumerate() {
        if fid.is_left_closed(member).is_err() {
            return fail(format!("cover member at {} is not left closed", name(cover_points[i])));
        }
    }
    if let Some(o) = (0..fid.object_count()).find(|o| !cover.iter().any(|m| m.binary_search(o).is_ok())) {
        return fail(format!("object {} lies in no cover member", fid.objects()[o]));
    }
    let n = fid.object_count();
    let mut intersection_terminals = BTreeMap::new();
    let mut smallest: Option<(Vec<usize>, Vec<usize>)> = None;
    for subset in subsets(cover.len()) {
        let meet = intersection(&cover, &subset, n);
        if meet.is_empty() {
            continue;
        }
        let Some(t) = fid.full_subcategory(&meet).0.terminal_object() else {
            let points: Vec<usize> = subset.iter().map(|&i| cover_points[i]).collect();
            return fail(missing_join(p, sigma, tau, &points));
        };
        intersection_terminals.insert(subset.clone(), meet[t]);
        if smallest.as_ref().is_none_or(|(_, m)| meet.len() < m.len()) {
            smallest = Some((subset, meet));
        }
    }
    let (initial, initial_meet) = smallest.expect("the fibre is nonempty since it contains the identity of x");
    let all_meets = intersection_terminals.keys().map(|s| intersection(&cover, s, n));
    if !all_meets.into_iter().all(|m| initial_meet.iter().all(|x| m.binary_search(x).is_ok())) {
        return fail("the poset of nonempty intersections has no initial element".into());
    }
    let cert = Certificate { fibre: fid, fibre_objects, cover_points, cover, intersection_terminals, intersection_poset_initial: initial };
    debug_assert_eq!(cert.validate(), Ok(()));
    Ok(CertificateOutcome::Certified(cert))
}

/// Explains a missing terminal object via the greatest common lower bound of
/// `τ` and the orbit points that lies above `σ`.
fn missing_join(p: &FinPoset, sigma: usize, tau: usize, points: &[usize]) -> String {
    let names = |xs: &[usize]| xs.iter().map(|&x| p.elements()[x].clone()).collect::<Vec<_>>().join(", ");
    let bounds: Vec<usize> = (0..p.len()).filter(|&m| p.leq(sigma, m) && p.leq(m, tau) && points.iter().all(|&q| p.leq(m, q))).collect();
    let maximal: Vec<usize> = bounds.iter().copied().filter(|&m| !bounds.iter().any(|&b| p.lt(m, b))).collect();
    if maximal.len() == 1 {
        format!(
            "intersection at {} has no terminal object although {} is the greatest common lower bound",
            names(points),
            p.elements()[maximal[0]]
        )
    } else {
        format!(
            "missing join: {} and {} have no greatest common lower bound above {}; maximal candidates: [{}]",
            p.elements()[tau],
            names(points),
            p.elements()[sigma],
            names(&maximal)
        )
    }
}

/// Order-complex homology of the poset of isomorphism classes of `c`.
fn heuristic(c: &FinCategory) -> Result<HeuristicEvidence, TwError> {
    let n = c.object_count();
    let reach = |a: usize, b: usize| !c.hom(a, b).is_empty();
    let mut class = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for a in 0..n {
        if class[a] == usize::MAX {
            for b in a..n {
                if class[b] == usize::MAX && reach(a, b) && reach(b, a) {
                    class[b] = reps.len();
                }
            }
            reps.push(a);
        }
    }
    let names = reps.iter().map(|&a| c.objects()[a].clone()).collect();
    let leq = reps.iter().map(|&a| reps.iter().map(|&b| reach(a, b)).collect()).collect();
    let poset = FinPoset::new(names, leq).expect("reachability between classes is a partial order");
    let homology = order_complex_homology(&poset, poset.len().saturating_sub(1).min(6))?;
    Ok(HeuristicEvidence { label: "heuristic", classes: reps.len(), homology })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::DEFAULT_MORPHISM_BUDGET as B;
    use crate::poset::GroupAction;
    use crate::twisted::tw_alternative;

    #[test]
    fn fibre_with_terminal_object() {
        let inst = ClInstance::trivial_delta(GroupAction::trivial(FinPoset::chain(2)));
        let tw = tw_alternative(&inst, B).unwrap();
        let x = tw.object_of(0, 0).unwrap();
        let out = fibre_certificate(&inst, &tw, 1, 0, x, B).unwrap();
        let cert = out.certificate().expect("certified");
        assert_eq!(cert.cover.len(), 1);
        assert_eq!(cert.validate(), Ok(()));
    }

    #[test]
    fn tampered_certificate_is_rejected() {
        let inst = ClInstance::trivial_delta(GroupAction::trivial(FinPoset::chain(3)));
        let tw = tw_alternative(&inst, B).unwrap();
        let x = tw.object_of(0, 1).unwrap();
        let mut cert = fibre_certificate(&inst, &tw, 2, 1, x, B).unwrap().certificate().unwrap().clone();
        assert_eq!(cert.validate(), Ok(()));
        let key = cert.intersection_terminals.keys().next().unwrap().clone();
        let members = cert.cover[key[0]].clone();
        if members.len() > 1 {
            let t = cert.intersection_terminals[&key];
            let other = *members.iter().find(|&&m| m != t).unwrap();
            cert.intersection_terminals.insert(key, other);
            assert!(cert.validate().is_err());
        }
        cert.cover[0].clear();
        assert!(cert.validate().is_err());
    }
}
