//! Deterministic random corpora for tests and acceptance runs.
//!
//! Actions are generated constructively so that every sample is valid: the
//! space is a layered disjoint union of coset orbits of randomly chosen
//! subgroups, and the order relation is the saturated transitive closure of
//! random cross-layer relations. Cross-layer relations only point from
//! lower layers to higher ones, so antisymmetry is automatic, and the
//! relation set is action-invariant by construction.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::group::{FiniteGroup, Homomorphism};
use crate::groupoid::{
    build_induction_equivalence, build_quotient_equivalence, group_catalogue,
    EssentialEquivalence, TranslationGroupoid,
};
use crate::gspace::GSpace;
use crate::poset::Poset;

/// A group drawn from the catalogue of groups of order at most `max_order`.
pub fn random_group<R: Rng>(rng: &mut R, max_order: usize) -> FiniteGroup {
    let catalogue = group_catalogue(max_order);
    catalogue.choose(rng).unwrap().clone()
}

/// The coset space `G/H` as a `G`-set: points are cosets `gH`, the action
/// is left multiplication. Returns (number of cosets, coset of each g).
fn coset_action(group: &FiniteGroup, sub: &crate::group::Subgroup) -> (usize, Vec<usize>) {
    let mut coset_of = vec![usize::MAX; group.order()];
    let mut count = 0;
    for g in group.elements() {
        if coset_of[g] == usize::MAX {
            for &h in sub.elements() {
                coset_of[group.mul(g, h)] = count;
            }
            count += 1;
        }
    }
    (count, coset_of)
}

/// A random G-space with at most `max_points` points: layered coset
/// orbits with saturated random relations between layers.
pub fn random_gspace<R: Rng>(rng: &mut R, group: &FiniteGroup, max_points: usize) -> GSpace {
    let subgroups = group.subgroups();
    let mut layers: Vec<(usize, Vec<usize>, Vec<usize>)> = Vec::new(); // (size, coset_of, reps)
    let mut total = 0;
    let blocks = rng.gen_range(1..=3);
    for _ in 0..blocks {
        let sub = subgroups[rng.gen_range(0..subgroups.len())].clone();
        let (size, coset_of) = coset_action(group, &sub);
        if total + size > max_points {
            continue;
        }
        let mut reps = vec![usize::MAX; size];
        for g in (0..group.order()).rev() {
            reps[coset_of[g]] = g;
        }
        layers.push((size, coset_of, reps));
        total += size;
    }
    if layers.is_empty() {
        // fall back to a single fixed point
        let sub = subgroups.last().unwrap().clone();
        let (size, coset_of) = coset_action(group, &sub);
        let mut reps = vec![usize::MAX; size];
        for g in (0..group.order()).rev() {
            reps[coset_of[g]] = g;
        }
        layers.push((size, coset_of, reps));
        total = size;
    }
    // point numbering: layer offsets
    let mut offset = Vec::with_capacity(layers.len());
    let mut acc = 0;
    for (size, _, _) in &layers {
        offset.push(acc);
        acc += size;
    }
    let n = total;
    // saturated random relations from lower to higher layers
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    if layers.len() > 1 {
        let relations = rng.gen_range(0..=2 * (layers.len() - 1));
        for _ in 0..relations {
            let i = rng.gen_range(0..layers.len() - 1);
            let j = rng.gen_range(i + 1..layers.len());
            let a = rng.gen_range(0..layers[i].0);
            let b = rng.gen_range(0..layers[j].0);
            for g in group.elements() {
                let ga = layers[i].1[group.mul(g, layers[i].2[a])];
                let gb = layers[j].1[group.mul(g, layers[j].2[b])];
                pairs.push((offset[i] + ga, offset[j] + gb));
            }
        }
    }
    let poset = Poset::from_relations(n, &pairs).expect("layered relations are acyclic");
    let mut action = vec![0usize; group.order() * n];
    for g in group.elements() {
        for (li, (size, coset_of, reps)) in layers.iter().enumerate() {
            for c in 0..*size {
                action[g * n + offset[li] + c] = offset[li] + coset_of[group.mul(g, reps[c])];
            }
        }
    }
    GSpace::new(group.clone(), poset, action).expect("constructed action is valid")
}

/// A random action with `|G| <= max_group` and `|X| <= max_points`.
pub fn random_action<R: Rng>(rng: &mut R, max_group: usize, max_points: usize) -> GSpace {
    let group = random_group(rng, max_group);
    random_gspace(rng, &group, max_points)
}

/// A random quotient move out of `gpd`, when any free normal subgroup
/// exists (the trivial subgroup always does).
pub fn random_quotient_move<R: Rng>(
    rng: &mut R,
    gpd: &TranslationGroupoid,
) -> EssentialEquivalence {
    let candidates: Vec<_> = gpd
        .group()
        .subgroups()
        .into_iter()
        .filter(|l| gpd.group().is_normal(l).is_ok() && gpd.space.acts_freely(l).is_ok())
        .collect();
    let l = candidates.choose(rng).expect("the trivial subgroup is always free");
    build_quotient_equivalence(gpd, l).expect("free normal subgroups quotient")
}

/// A random induction move out of `gpd` into a catalogue supergroup, kept
/// within `max_points` induced points; `None` when no embedding fits.
pub fn random_induction_move<R: Rng>(
    rng: &mut R,
    gpd: &TranslationGroupoid,
    max_group: usize,
    max_points: usize,
) -> Option<EssentialEquivalence> {
    let mut options: Vec<(FiniteGroup, Homomorphism)> = Vec::new();
    for big in group_catalogue(max_group) {
        if big.order() < gpd.group().order()
            || gpd.points() * big.order() / gpd.group().order() > max_points
        {
            continue;
        }
        for emb in gpd.group().embeddings(&big) {
            options.push((big.clone(), emb));
        }
    }
    let (big, emb) = options.choose(rng)?.clone();
    Some(build_induction_equivalence(gpd, &big, &emb).expect("embedding induces"))
}

/// A random certified essential equivalence out of `gpd`: one or two
/// quotient/induction moves composed (possibly the identity-like quotient
/// by the trivial subgroup).
pub fn random_essential_equivalence<R: Rng>(
    rng: &mut R,
    gpd: &TranslationGroupoid,
    max_group: usize,
    max_points: usize,
) -> EssentialEquivalence {
    let mut current = random_move(rng, gpd, max_group, max_points);
    if rng.gen_bool(0.5) {
        let next = random_move(rng, current.map().dst(), max_group, max_points);
        current = current.then(&next).expect("moves compose");
    }
    current
}

fn random_move<R: Rng>(
    rng: &mut R,
    gpd: &TranslationGroupoid,
    max_group: usize,
    max_points: usize,
) -> EssentialEquivalence {
    if rng.gen_bool(0.5) {
        if let Some(ind) = random_induction_move(rng, gpd, max_group, max_points) {
            return ind;
        }
    }
    random_quotient_move(rng, gpd)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_actions_are_valid_and_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let space = random_action(&mut rng, 8, 12);
            assert!(space.group().order() <= 8);
            assert!(space.len() <= 12);
            assert!(space.len() >= 1);
            // the constructor validated the action; orbit space must exist
            space.orbit_space().unwrap();
        }
    }

    #[test]
    fn random_moves_are_certified() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let space = random_action(&mut rng, 6, 8);
            let gpd = TranslationGroupoid::new(space);
            let eq = random_essential_equivalence(&mut rng, &gpd, 8, 24);
            assert_eq!(eq.map().src(), &gpd);
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let a = random_action(&mut ChaCha8Rng::seed_from_u64(11), 6, 10);
        let b = random_action(&mut ChaCha8Rng::seed_from_u64(11), 6, 10);
        assert_eq!(a, b);
    }
}
