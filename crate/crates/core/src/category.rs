//! Equivariant, groupoid and orbifold Lusternik-Schnirelmann category.
//!
//! G-homotopy of maps is fence connectivity in the pointwise-ordered set of
//! all G-maps. An invariant open `U` is G-categorical when its inclusion is
//! connected by such a fence to a G-map with image inside a single orbit;
//! `cat_G` is the minimal number of G-categorical invariant opens covering
//! the space, found by exact branch-and-bound set cover. `cat_grd` reduces
//! the presentation along free normal subgroups first (the finite-group
//! reduction backing the groupoid invariant) and `cat_orb` is its alias
//! for presentations of orbifolds.

use crate::error::CategoryError;
use crate::groupoid::{build_quotient_equivalence, EssentialEquivalence, TranslationGroupoid};
use crate::gspace::GSpace;

/// An invariant open set: a down-set closed under the action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantOpen {
    pub points: Vec<usize>,
}

/// The enumeration of invariant opens, with an exactness flag: when the
/// down-sets of the orbit space exceed the budget, only the generated
/// family of orbit hulls is returned and `exact` is lowered.
#[derive(Debug, Clone)]
pub struct InvariantOpens {
    pub sets: Vec<InvariantOpen>,
    pub exact: bool,
}

/// All invariant opens of `space` (the preimages of down-sets of the orbit
/// space), or a generator family when the enumeration exceeds `budget`.
pub fn invariant_opens(space: &GSpace, budget: usize) -> Result<InvariantOpens, CategoryError> {
    let os = space.orbit_space().expect("valid G-space has an orbit space");
    match os.poset.all_down_sets(budget) {
        Some(down_sets) => {
            let sets = down_sets
                .into_iter()
                .map(|classes| {
                    let mut points: Vec<usize> = classes
                        .iter()
                        .flat_map(|&c| os.classes[c].iter().copied())
                        .collect();
                    points.sort_unstable();
                    InvariantOpen { points }
                })
                .collect();
            Ok(InvariantOpens { sets, exact: true })
        }
        None => {
            // fallback family: invariant open hulls of single orbits, plus
            // the whole space
            let mut sets: Vec<InvariantOpen> = os
                .classes
                .iter()
                .map(|orbit| InvariantOpen {
                    points: space.poset().down_closure(orbit),
                })
                .collect();
            sets.push(InvariantOpen {
                points: (0..space.len()).collect(),
            });
            sets.sort_by(|a, b| a.points.cmp(&b.points));
            sets.dedup();
            Ok(InvariantOpens { sets, exact: false })
        }
    }
}

/// All G-maps from the invariant subspace on `domain` into the whole
/// space, as image vectors indexed by position in `domain`. Enumerated by
/// backtracking over orbit representatives with isotropy and order pruning;
/// sorted lexicographically.
pub fn all_g_maps(space: &GSpace, domain: &[usize]) -> Vec<Vec<usize>> {
    let nu = domain.len();
    if nu == 0 {
        return vec![Vec::new()];
    }
    let pos_of: std::collections::BTreeMap<usize, usize> =
        domain.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    // orbit representatives within the domain, in induced linear-extension order
    let induced = space.poset().induced(domain);
    let ext = induced.linear_extension();
    let mut rep_order: Vec<usize> = Vec::new(); // positions in `domain`
    let mut seen = vec![false; nu];
    for &i in &ext {
        if !seen[i] {
            rep_order.push(i);
            for g in space.group().elements() {
                let j = pos_of[&space.act(g, domain[i])];
                seen[j] = true;
            }
        }
    }
    // fixed-point sets per isotropy subgroup are the candidate images
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut image = vec![usize::MAX; nu];
    dfs_g_maps(
        space, domain, &pos_of, &induced, &rep_order, 0, &mut image, &mut out,
    );
    out.sort();
    out
}

#[allow(clippy::too_many_arguments)]
fn dfs_g_maps(
    space: &GSpace,
    domain: &[usize],
    pos_of: &std::collections::BTreeMap<usize, usize>,
    induced: &crate::poset::Poset,
    rep_order: &[usize],
    at: usize,
    image: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if at == rep_order.len() {
        out.push(image.clone());
        return;
    }
    let rep = rep_order[at];
    let rep_point = domain[rep];
    'cand: for x in 0..space.len() {
        // isotropy of the representative must fix the image
        for h in space.group().elements() {
            if space.act(h, rep_point) == rep_point && space.act(h, x) != x {
                continue 'cand;
            }
        }
        // propagate over the orbit and check order constraints
        let mut assignments: Vec<(usize, usize)> = Vec::new();
        for g in space.group().elements() {
            let from = pos_of[&space.act(g, rep_point)];
            let to = space.act(g, x);
            match assignments.iter().find(|&&(f, _)| f == from) {
                Some(&(_, prev)) => {
                    if prev != to {
                        continue 'cand;
                    }
                }
                None => assignments.push((from, to)),
            }
        }
        for &(f, t) in &assignments {
            for u in 0..image.len() {
                if image[u] != usize::MAX {
                    if induced.le(u, f) && !space.poset().le(image[u], t) {
                        continue 'cand;
                    }
                    if induced.le(f, u) && !space.poset().le(t, image[u]) {
                        continue 'cand;
                    }
                }
            }
            // order constraints among the new assignments themselves
            for &(f2, t2) in &assignments {
                if induced.le(f, f2) && !space.poset().le(t, t2) {
                    continue 'cand;
                }
            }
        }
        for &(f, t) in &assignments {
            image[f] = t;
        }
        dfs_g_maps(space, domain, pos_of, induced, rep_order, at + 1, image, out);
        for &(f, _) in &assignments {
            image[f] = usize::MAX;
        }
    }
}

/// A fence of G-maps from `f` to `g` in the pointwise order, or `None`
/// when breadth-first search exhausts the component of `f` without meeting
/// `g`. The returned chain starts at `f` and ends at `g`.
pub fn are_g_homotopic(
    space: &GSpace,
    domain: &[usize],
    f: &[usize],
    g: &[usize],
) -> Option<Vec<Vec<usize>>> {
    let maps = all_g_maps(space, domain);
    let find = |m: &[usize]| maps.iter().position(|x| x == m);
    let (fi, gi) = (find(f)?, find(g)?);
    let chain_indices = bfs_chain(space, &maps, fi, gi)?;
    Some(chain_indices.into_iter().map(|i| maps[i].clone()).collect())
}

fn pointwise_comparable(space: &GSpace, a: &[usize], b: &[usize]) -> bool {
    a.iter().zip(b).all(|(&x, &y)| space.poset().le(x, y))
        || a.iter().zip(b).all(|(&x, &y)| space.poset().le(y, x))
}

fn bfs_chain(
    space: &GSpace,
    maps: &[Vec<usize>],
    from: usize,
    to: usize,
) -> Option<Vec<usize>> {
    let mut pred = vec![usize::MAX; maps.len()];
    let mut queue = std::collections::VecDeque::new();
    pred[from] = from;
    queue.push_back(from);
    while let Some(i) = queue.pop_front() {
        if i == to {
            let mut chain = vec![to];
            let mut cur = to;
            while cur != from {
                cur = pred[cur];
                chain.push(cur);
            }
            chain.reverse();
            return Some(chain);
        }
        for j in 0..maps.len() {
            if pred[j] == usize::MAX && j != i && pointwise_comparable(space, &maps[i], &maps[j]) {
                pred[j] = i;
                queue.push_back(j);
            }
        }
    }
    None
}

/// A certified compression: a fence of G-maps from the inclusion to a map
/// with image inside a single orbit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompressionWitness {
    /// The target orbit (sorted points).
    pub orbit: Vec<usize>,
    /// The chain of G-maps (image vectors over the open's points), first
    /// the inclusion, last the compression.
    pub chain: Vec<Vec<usize>>,
}

/// Decides whether an invariant open is G-categorical: searches, orbit by
/// orbit in canonical order, for a G-map into that orbit fence-connected to
/// the inclusion. Absence is certified (the component of the inclusion is
/// exhausted).
pub fn is_g_categorical(space: &GSpace, open: &InvariantOpen) -> Option<CompressionWitness> {
    let domain = &open.points;
    if domain.is_empty() {
        return None;
    }
    let maps = all_g_maps(space, domain);
    let inclusion: Vec<usize> = domain.clone();
    let incl_idx = maps
        .iter()
        .position(|m| *m == inclusion)
        .expect("inclusion of an invariant open is a G-map");
    // component of the inclusion
    let mut pred = vec![usize::MAX; maps.len()];
    let mut queue = std::collections::VecDeque::new();
    pred[incl_idx] = incl_idx;
    queue.push_back(incl_idx);
    while let Some(i) = queue.pop_front() {
        for j in 0..maps.len() {
            if pred[j] == usize::MAX && j != i && pointwise_comparable(space, &maps[i], &maps[j]) {
                pred[j] = i;
                queue.push_back(j);
            }
        }
    }
    let os = space.orbit_space().expect("valid G-space");
    for orbit in &os.classes {
        // first reachable map with image inside this orbit, in map order
        let target = (0..maps.len()).find(|&i| {
            pred[i] != usize::MAX && maps[i].iter().all(|&x| orbit.contains(&x))
        });
        if let Some(ti) = target {
            let mut chain = vec![ti];
            let mut cur = ti;
            while cur != incl_idx {
                cur = pred[cur];
                chain.push(cur);
            }
            chain.reverse();
            return Some(CompressionWitness {
                orbit: orbit.clone(),
                chain: chain.into_iter().map(|i| maps[i].clone()).collect(),
            });
        }
    }
    None
}

/// The value of a category computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CategoryValue {
    Finite(usize),
    Infinite,
}

impl std::fmt::Display for CategoryValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CategoryValue::Finite(k) => write!(f, "{}", k),
            CategoryValue::Infinite => write!(f, "infinite"),
        }
    }
}

/// How a category value was computed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CategoryMethod {
    Direct,
    /// Reduced along free normal subgroups before the direct computation;
    /// the recorded moves lead from the input presentation to the reduced
    /// one on which the cover lives.
    MoritaReduced,
}

/// The result of a category computation.
#[derive(Debug, Clone)]
pub struct CategoryResult {
    pub value: CategoryValue,
    /// A minimal certified cover (on the presentation the computation ran
    /// on; for the reduced methods that is the reduced presentation).
    pub cover: Vec<(InvariantOpen, CompressionWitness)>,
    pub method: CategoryMethod,
    /// Whether the search was exhaustive (both the enumeration of
    /// invariant opens and the cover minimization).
    pub exact: bool,
    /// For `Infinite`: a point lying in no categorical invariant open.
    pub uncovered: Option<usize>,
    /// For the reduced methods: the chain of quotient moves applied.
    pub reduction: Vec<EssentialEquivalence>,
}

/// Default budget for enumerating invariant opens.
pub const DEFAULT_OPENS_BUDGET: usize = 1 << 16;

/// Fadell's equivariant category: the exact minimum number of
/// G-categorical invariant opens covering the space.
pub fn cat_g(space: &GSpace, budget: usize) -> Result<CategoryResult, CategoryError> {
    let opens = invariant_opens(space, budget)?;
    let n = space.len();
    if n == 0 {
        return Ok(CategoryResult {
            value: CategoryValue::Finite(0),
            cover: Vec::new(),
            method: CategoryMethod::Direct,
            exact: opens.exact,
            uncovered: None,
            reduction: Vec::new(),
        });
    }
    let mut categorical: Vec<(InvariantOpen, CompressionWitness)> = Vec::new();
    for open in &opens.sets {
        if open.points.is_empty() {
            continue;
        }
        if let Some(witness) = is_g_categorical(space, open) {
            categorical.push((open.clone(), witness));
        }
    }
    // a point covered by no categorical open makes the category infinite
    if let Some(uncovered) =
        (0..n).find(|&x| !categorical.iter().any(|(o, _)| o.points.contains(&x)))
    {
        return Ok(CategoryResult {
            value: CategoryValue::Infinite,
            cover: Vec::new(),
            method: CategoryMethod::Direct,
            exact: opens.exact,
            uncovered: Some(uncovered),
            reduction: Vec::new(),
        });
    }
    let cover_idx = min_set_cover(n, &categorical);
    let cover: Vec<(InvariantOpen, CompressionWitness)> = cover_idx
        .iter()
        .map(|&i| categorical[i].clone())
        .collect();
    Ok(CategoryResult {
        value: CategoryValue::Finite(cover.len()),
        cover,
        method: CategoryMethod::Direct,
        exact: opens.exact,
        uncovered: None,
        reduction: Vec::new(),
    })
}

/// Exact minimum set cover by branch and bound. Candidate sets are tried
/// largest-first with lexicographic tie break, always branching on the
/// lowest-index uncovered point, so the reported cover is canonical.
fn min_set_cover(n: usize, sets: &[(InvariantOpen, CompressionWitness)]) -> Vec<usize> {
    assert!(n <= 128, "set cover uses a 128-bit universe");
    let full: u128 = if n == 128 { !0 } else { (1u128 << n) - 1 };
    let masks: Vec<u128> = sets
        .iter()
        .map(|(o, _)| {
            o.points
                .iter()
                .fold(0u128, |acc, &x| acc | (1u128 << x))
        })
        .collect();
    // canonical candidate order: larger sets first, then lexicographic
    let mut order: Vec<usize> = (0..sets.len()).collect();
    order.sort_by(|&a, &b| {
        sets[b].0.points.len()
            .cmp(&sets[a].0.points.len())
            .then(sets[a].0.points.cmp(&sets[b].0.points))
    });
    let max_size = sets.iter().map(|(o, _)| o.points.len()).max().unwrap_or(1);
    let mut best: Option<Vec<usize>> = None;
    let mut chosen: Vec<usize> = Vec::new();

    fn bnb(
        covered: u128,
        full: u128,
        masks: &[u128],
        order: &[usize],
        max_size: usize,
        chosen: &mut Vec<usize>,
        best: &mut Option<Vec<usize>>,
    ) {
        if covered == full {
            if best.is_none() || chosen.len() < best.as_ref().unwrap().len() {
                *best = Some(chosen.clone());
            }
            return;
        }
        let remaining = (full & !covered).count_ones() as usize;
        let lower = chosen.len() + remaining.div_ceil(max_size);
        if let Some(b) = best {
            if lower >= b.len() {
                return;
            }
        }
        // branch on the lowest uncovered point
        let point = (full & !covered).trailing_zeros() as usize;
        for &i in order {
            if masks[i] & (1u128 << point) != 0 {
                chosen.push(i);
                bnb(covered | masks[i], full, masks, order, max_size, chosen, best);
                chosen.pop();
            }
        }
    }
    bnb(0, full, &masks, &order, max_size, &mut chosen, &mut best);
    best.expect("every point was coverable")
}

/// Finds the largest free normal subgroup (ties broken canonically), if
/// any nontrivial one exists.
fn maximal_free_normal_subgroup(space: &GSpace) -> Option<crate::group::Subgroup> {
    let mut best: Option<crate::group::Subgroup> = None;
    for sub in space.group().subgroups() {
        if sub.len() > 1
            && space.group().is_normal(&sub).is_ok()
            && space.acts_freely(&sub).is_ok()
        {
            let better = match &best {
                None => true,
                Some(b) => sub.len() > b.len(),
            };
            if better {
                best = Some(sub);
            }
        }
    }
    best
}

/// The groupoid category of `G x| X`, computed on the Morita-reduced
/// presentation: quotient moves along maximal free normal subgroups are
/// applied until none remains, then the equivariant category of the
/// reduced presentation is taken. For finite groups this computes the
/// groupoid invariant backing the orbifold category.
pub fn cat_grd(gpd: &TranslationGroupoid, budget: usize) -> Result<CategoryResult, CategoryError> {
    let mut current = gpd.clone();
    let mut reduction: Vec<EssentialEquivalence> = Vec::new();
    while let Some(l) = maximal_free_normal_subgroup(&current.space) {
        let step = build_quotient_equivalence(&current, &l)
            .expect("free normal subgroups give quotient moves");
        current = step.map().dst().clone();
        reduction.push(step);
    }
    let mut result = cat_g(&current.space, budget)?;
    if !reduction.is_empty() {
        result.method = CategoryMethod::MoritaReduced;
        result.reduction = reduction;
    }
    Ok(result)
}

/// The orbifold category of the orbifold presented by `G x| X`: an alias
/// of [`cat_grd`], well defined on the Morita class.
pub fn cat_orb(gpd: &TranslationGroupoid, budget: usize) -> Result<CategoryResult, CategoryError> {
    cat_grd(gpd, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;
    use crate::models;
    use crate::poset::Poset;

    fn opens_of(space: &GSpace) -> Vec<Vec<usize>> {
        invariant_opens(space, DEFAULT_OPENS_BUDGET)
            .unwrap()
            .sets
            .into_iter()
            .map(|o| o.points)
            .collect()
    }

    #[test]
    fn invariant_opens_of_chain() {
        let x = GSpace::trivial_action(FiniteGroup::trivial(), Poset::chain(2));
        assert_eq!(opens_of(&x), vec![vec![], vec![0], vec![0, 1]]);
    }

    #[test]
    fn invariant_opens_of_rotation_circle() {
        // preimages of the 3 down-sets of the two-point quotient
        let x = models::rotation_circle(4);
        assert_eq!(
            opens_of(&x),
            vec![vec![], vec![0, 1, 2, 3], (0..8).collect::<Vec<_>>()]
        );
    }

    #[test]
    fn invariant_opens_of_swap() {
        let x = models::swap_two_points();
        assert_eq!(opens_of(&x), vec![vec![], vec![0, 1]]);
    }

    #[test]
    fn cone_identity_homotopic_to_apex_constant() {
        for p in [2, 3] {
            let x = models::rotation_cone(p);
            let domain: Vec<usize> = (0..x.len()).collect();
            let id = domain.clone();
            let apex = x.len() - 1;
            let constant = vec![apex; x.len()];
            let chain = are_g_homotopic(&x, &domain, &id, &constant).unwrap();
            assert!(chain.len() >= 2);
            assert_eq!(chain[0], id);
            assert_eq!(*chain.last().unwrap(), constant);
        }
    }

    #[test]
    fn identity_on_circle_not_homotopic_to_constant() {
        // the 4-point circle is not contractible; BFS exhausts the component
        let x = GSpace::trivial_action(FiniteGroup::trivial(), models::circle_poset(2));
        let domain: Vec<usize> = (0..4).collect();
        let id = domain.clone();
        for c in 0..4 {
            let constant = vec![c; 4];
            assert!(are_g_homotopic(&x, &domain, &id, &constant).is_none());
        }
    }

    #[test]
    fn self_homotopy_is_trivial_chain() {
        let x = models::swap_two_points();
        let domain = vec![0, 1];
        let id = vec![0, 1];
        let chain = are_g_homotopic(&x, &domain, &id, &id).unwrap();
        assert_eq!(chain, vec![id]);
    }

    #[test]
    fn cat_of_cones_is_one() {
        for p in [2, 3, 5] {
            let x = models::rotation_cone(p);
            let r = cat_g(&x, DEFAULT_OPENS_BUDGET).unwrap();
            assert_eq!(r.value, CategoryValue::Finite(1), "cat of D({})", p);
            assert!(r.exact);
        }
    }

    #[test]
    fn cat_of_circles_is_two() {
        for n in [2, 3, 4] {
            let x = GSpace::trivial_action(FiniteGroup::trivial(), models::circle_poset(n));
            let r = cat_g(&x, DEFAULT_OPENS_BUDGET).unwrap();
            assert_eq!(r.value, CategoryValue::Finite(2), "cat of C({})", n);
        }
    }

    #[test]
    fn cat_of_swap_is_one() {
        let x = models::swap_two_points();
        let r = cat_g(&x, DEFAULT_OPENS_BUDGET).unwrap();
        assert_eq!(r.value, CategoryValue::Finite(1));
        // the whole space compresses into the single orbit via the identity
        assert_eq!(r.cover[0].1.chain.len(), 1);
    }

    #[test]
    fn compression_witnesses_revalidate() {
        let x = models::rotation_cone(3);
        let r = cat_g(&x, DEFAULT_OPENS_BUDGET).unwrap();
        for (open, witness) in &r.cover {
            assert_eq!(witness.chain[0], open.points, "first map is the inclusion");
            let last = witness.chain.last().unwrap();
            assert!(last.iter().all(|x| witness.orbit.contains(x)));
            for w in witness.chain.windows(2) {
                assert!(pointwise_comparable(&x, &w[0], &w[1]));
            }
        }
    }

    #[test]
    fn cat_grd_reduces_rotation_circle() {
        let gpd = TranslationGroupoid::new(models::rotation_circle(4));
        let r = cat_grd(&gpd, DEFAULT_OPENS_BUDGET).unwrap();
        // full reduction kills the whole free cyclic action and leaves the
        // contractible quotient interval
        assert_eq!(r.method, CategoryMethod::MoritaReduced);
        assert_eq!(r.value, CategoryValue::Finite(1));
    }

    #[test]
    fn cat_grd_trivial_reduction_equals_cat_g() {
        let x = GSpace::trivial_action(FiniteGroup::trivial(), models::circle_poset(3));
        let gpd = TranslationGroupoid::new(x.clone());
        let grd = cat_grd(&gpd, DEFAULT_OPENS_BUDGET).unwrap();
        let g = cat_g(&x, DEFAULT_OPENS_BUDGET).unwrap();
        assert_eq!(grd.method, CategoryMethod::Direct);
        assert_eq!(grd.value, g.value);
    }

    #[test]
    fn cat_grd_of_swap_is_one() {
        let gpd = TranslationGroupoid::new(models::swap_two_points());
        let r = cat_grd(&gpd, DEFAULT_OPENS_BUDGET).unwrap();
        assert_eq!(r.value, CategoryValue::Finite(1));
        assert_eq!(r.method, CategoryMethod::MoritaReduced);
        assert_eq!(r.reduction.len(), 1);
    }

    #[test]
    fn cat_orb_is_cat_grd() {
        let gpd = TranslationGroupoid::new(models::rotation_circle(4));
        let a = cat_grd(&gpd, DEFAULT_OPENS_BUDGET).unwrap();
        let b = cat_orb(&gpd, DEFAULT_OPENS_BUDGET).unwrap();
        assert_eq!(a.value, b.value);
    }

    #[test]
    fn disjoint_fixed_point_increases_cat_by_one() {
        let base = models::rotation_cone(2);
        let extra = GSpace::trivial_action(base.group().clone(), Poset::discrete(1));
        let x = base.disjoint_union(&extra);
        let r = cat_g(&x, DEFAULT_OPENS_BUDGET).unwrap();
        assert_eq!(r.value, CategoryValue::Finite(2));
    }

    #[test]
    fn cat_one_iff_whole_space_categorical() {
        for space in [
            models::rotation_cone(2),
            models::swap_two_points(),
            GSpace::trivial_action(FiniteGroup::trivial(), models::circle_poset(2)),
        ] {
            let r = cat_g(&space, DEFAULT_OPENS_BUDGET).unwrap();
            let whole = InvariantOpen {
                points: (0..space.len()).collect(),
            };
            let whole_categorical = is_g_categorical(&space, &whole).is_some();
            assert_eq!(r.value == CategoryValue::Finite(1), whole_categorical);
        }
    }
}
