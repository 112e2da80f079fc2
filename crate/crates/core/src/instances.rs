//! Ready-made and seeded inputs: Charney–Lee instances modelled on curve
//! systems, group actions on subset families, and random stable graphs.

use std::collections::BTreeSet;

use rand::{Rng, RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::category::CategoryError;
use crate::charney_lee::{cl_category, ClError, ClInstance};
use crate::graph::DualGraph;
use crate::perm::{FiniteGroup, GroupError, Perm, PermGroup};
use crate::poset::{FinPoset, GroupAction, PosetError};
use crate::twisted::{tw_alternative, tw_standard, TwError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Cl(#[from] ClError),
    #[error("block subset {0:#b} is outside the blocks or not invariant")]
    Family(u32),
}

/// `blocks` blocks of `twist_order` points each. The group is generated by
/// the rotations of each block (when `twist_order > 1`) and the block
/// permutations in `block_group`; it acts on `family`, a set of block
/// subsets ordered by reverse inclusion, and `Δ_σ` is generated by the
/// rotations of the blocks in `σ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WreathSpec {
    pub blocks: usize,
    pub twist_order: usize,
    pub block_group: Vec<Perm>,
    pub family: Vec<u32>,
}

fn mask_name(mask: u32) -> String {
    let parts: Vec<String> = (0..32).filter(|i| mask & (1 << i) != 0).map(|i| i.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

fn move_mask(pi: &Perm, mask: u32) -> u32 {
    (0..pi.degree()).filter(|&i| mask & (1 << i) != 0).map(|i| 1u32 << pi.apply(i)).sum()
}

/// Reverse-inclusion poset on a family of block subsets, sorted ascending.
pub fn subset_poset(family: &[u32]) -> FinPoset {
    let names = family.iter().map(|&m| mask_name(m)).collect();
    let leq = family.iter().map(|&a| family.iter().map(|&b| a & b == b).collect()).collect();
    FinPoset::new(names, leq).expect("reverse inclusion is a partial order")
}

pub fn wreath_instance(spec: &WreathSpec) -> Result<ClInstance, InstanceError> {
    let (k, m) = (spec.blocks, spec.twist_order);
    let degree = (k * m).max(1);
    let mut family = spec.family.clone();
    family.sort();
    family.dedup();
    if let Some(&bad) = family.iter().find(|&&s| k < 32 && s >> k != 0) {
        return Err(InstanceError::Family(bad));
    }
    let rotation = |i: usize| Perm((0..degree).map(|x| if x / m == i { i * m + (x % m + 1) % m } else { x }).collect());
    let lift = |pi: &Perm| Perm((0..degree).map(|x| pi.apply(x / m) * m + x % m).collect());
    let mut gens = Vec::new();
    let mut images = Vec::new();
    if m > 1 {
        for i in 0..k {
            gens.push(rotation(i));
            images.push((0..family.len()).collect::<Vec<_>>());
        }
    }
    for pi in &spec.block_group {
        if pi.degree() != k || !pi.is_valid() {
            return Err(GroupError::NotPermutation(0).into());
        }
        gens.push(lift(pi));
        let image = family
            .iter()
            .map(|&s| family.binary_search(&move_mask(pi, s)).map_err(|_| InstanceError::Family(s)))
            .collect::<Result<Vec<_>, _>>()?;
        images.push(image);
    }
    let group = FiniteGroup::from_perm_group(&PermGroup::new(degree, gens.clone())?)?;
    let action = GroupAction::from_generators(group, subset_poset(&family), &images)?;
    let delta = family
        .iter()
        .map(|&s| {
            if m == 1 {
                return Vec::new();
            }
            (0..k).filter(|&i| s & (1 << i) != 0).map(|i| action.group.id_of(&rotation(i)).expect("generator")).collect()
        })
        .collect();
    Ok(ClInstance::new(action, delta)?)
}

/// Two blocks of two points, both block orders, all four block subsets.
pub fn subsets12() -> ClInstance {
    wreath_instance(&WreathSpec { blocks: 2, twist_order: 2, block_group: vec![Perm(vec![1, 0])], family: vec![0b00, 0b01, 0b10, 0b11] })
        .expect("valid instance")
}

/// A trivial-group instance lacking a join: `{0}` and `{1}` have the two
/// incomparable common lower bounds `{0,1,2}` and `{0,1,3}`.
#[derive(Debug, Clone)]
pub struct JoinFree {
    pub instance: ClInstance,
    pub theta: usize,
    pub nu: usize,
    /// `(σ, τ)` of the object whose fibre has no certificate.
    pub object: (usize, usize),
}

pub fn join_free() -> JoinFree {
    let family = vec![0b0000, 0b0001, 0b0010, 0b0111, 0b1011, 0b1111];
    let instance =
        wreath_instance(&WreathSpec { blocks: 4, twist_order: 1, block_group: vec![], family: family.clone() }).expect("valid instance");
    let at = |m: u32| family.binary_search(&m).expect("member");
    JoinFree { instance, theta: at(0), nu: at(0b0010), object: (at(0b1111), at(0b0001)) }
}

fn closed_family(k: usize, seeds: &[u32], block_group: &[Perm]) -> Vec<u32> {
    let mut family: BTreeSet<u32> = BTreeSet::from([0]);
    let mut stack: Vec<u32> = seeds.to_vec();
    while let Some(s) = stack.pop() {
        if !family.insert(s) {
            continue;
        }
        for i in 0..k {
            if s & (1 << i) != 0 {
                stack.push(s & !(1 << i));
            }
        }
        for pi in block_group {
            stack.push(move_mask(pi, s));
        }
    }
    family.into_iter().collect()
}

fn random_block_group(rng: &mut impl Rng, k: usize) -> Vec<Perm> {
    let mut gens = Vec::new();
    for _ in 0..rng.random_range(0..=2usize) {
        if k < 2 {
            break;
        }
        let mut images: Vec<usize> = (0..k).collect();
        let (a, b) = (rng.random_range(0..k), rng.random_range(0..k));
        images.swap(a, b);
        if rng.random_bool(0.5) {
            images.rotate_left(1);
        }
        let p = Perm(images);
        if !p.is_identity() {
            gens.push(p);
        }
    }
    gens
}

/// A wreath instance drawn from `seed` with group order at most 24, at most
/// 8 family members closed under subsets, and twisted arrow categories
/// (alternative and standard) within `tw_budget` morphisms.
pub fn seeded_instance(seed: u64, tw_budget: usize) -> (WreathSpec, ClInstance) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let k = [1, 2, 2, 3, 3, 3, 4][rng.random_range(0..7)];
        let m = if k >= 3 { 2 } else { rng.random_range(2..=3usize) };
        let block_group = random_block_group(&mut rng, k);
        let s_order = PermGroup::new(k, block_group.clone()).expect("valid").order();
        if (m as u128).pow(k as u32) * s_order > 24 {
            continue;
        }
        let seeds: Vec<u32> = (0..rng.random_range(1..=3)).map(|_| rng.random_range(0..(1u32 << k))).collect();
        let family = closed_family(k, &seeds, &block_group);
        if family.len() > 8 {
            continue;
        }
        let spec = WreathSpec { blocks: k, twist_order: m, block_group, family };
        let inst = wreath_instance(&spec).expect("seeded specs are valid");
        let built = cl_category(&inst, tw_budget).map_err(TwError::from).and_then(|cl| {
            tw_alternative(&inst, tw_budget)?;
            tw_standard(&cl.category, tw_budget)?;
            Ok(())
        });
        match built {
            Ok(()) => return (spec, inst),
            Err(TwError::Category(CategoryError::TooLarge { .. }) | TwError::Cl(ClError::Category(CategoryError::TooLarge { .. }))) => {}
            Err(e) => panic!("seeded instance failed to build: {e}"),
        }
    }
}

/// A permutation group of order at most 24 acting on an invariant family of
/// subsets of at most 4 points (ordered by inclusion, at most 10 members).
pub fn seeded_action(seed: u64) -> GroupAction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let n = rng.random_range(1..=4usize);
        let gens = random_block_group(&mut rng, n);
        let group = PermGroup::new(n, gens.clone()).expect("valid");
        if group.order() > 24 {
            continue;
        }
        let seeds: Vec<u32> = (0..rng.random_range(1..=3)).map(|_| rng.random_range(0..(1u32 << n))).collect();
        let mut family: BTreeSet<u32> = BTreeSet::new();
        let mut stack = seeds;
        while let Some(s) = stack.pop() {
            if family.insert(s) {
                stack.extend(gens.iter().map(|pi| move_mask(pi, s)));
                if rng.random_bool(0.3) && s != 0 {
                    stack.push(s & (s - 1));
                }
            }
        }
        if family.len() > 10 {
            continue;
        }
        let family: Vec<u32> = family.into_iter().collect();
        let images: Vec<Vec<usize>> =
            gens.iter().map(|pi| family.iter().map(|&s| family.binary_search(&move_mask(pi, s)).expect("invariant")).collect()).collect();
        let fg = FiniteGroup::from_perm_group(&group).expect("small");
        return GroupAction::from_generators(fg, subset_poset(&family).opposite(), &images).expect("valid action");
    }
}

/// A random connected stable graph with at most `max_half_edges` half-edges
/// and legs drawn from `a, b, c, d`.
pub fn random_stable_graph(rng: &mut impl Rng, max_half_edges: usize) -> DualGraph {
    const LABELS: [&str; 4] = ["a", "b", "c", "d"];
    loop {
        let vertices = rng.random_range(1..=3usize);
        let weights: Vec<u64> = (0..vertices).map(|_| rng.random_range(0..=2)).collect();
        let legs_n = rng.random_range(0..=max_half_edges.min(4));
        let legs: Vec<(&str, usize)> = (0..legs_n).map(|i| (LABELS[i], rng.random_range(0..vertices))).collect();
        let edge_n = rng.random_range(0..=(max_half_edges - legs_n) / 2);
        let edges: Vec<(usize, usize)> = (0..edge_n).map(|_| (rng.random_range(0..vertices), rng.random_range(0..vertices))).collect();
        let g = DualGraph::from_parts(&weights, &edges, &legs);
        if g.validate().is_valid() && g.is_stable() == Ok(true) {
            return g;
        }
    }
}
