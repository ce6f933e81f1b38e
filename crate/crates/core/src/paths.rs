//! Generalized paths, the two connectedness notions, and fence lifting.
//!
//! In a finite space the paths are fences: sequences of consecutive
//! comparable points. A generalized path in `G x| X` is a sequence of
//! fences joined by group-element jumps, with `k_i` carrying the end of one
//! fence to the start of the next. G-connectedness asks every fixed point
//! space to be nonempty and connected; groupoid connectedness asks for a
//! generalized path between any two points, and equals connectedness of the
//! orbit space.

use crate::error::PathError;
use crate::gspace::GSpace;
use crate::poset::Poset;

/// A fence: a nonempty sequence of consecutively comparable points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fence {
    pub points: Vec<usize>,
}

impl Fence {
    pub fn check(poset: &Poset, points: Vec<usize>) -> Result<Self, PathError> {
        if points.is_empty() {
            return Err(PathError::EmptySegment { segment: 0 });
        }
        for (i, w) in points.windows(2).enumerate() {
            if !poset.comparable(w[0], w[1]) {
                return Err(PathError::BrokenFence {
                    segment: 0,
                    at: i,
                    next: i + 1,
                });
            }
        }
        Ok(Fence { points })
    }
}

/// A generalized path: fences `alpha_1, ..., alpha_n` and jumps
/// `k_1, ..., k_{n-1}` with `k_i . (last of alpha_i) = first of alpha_{i+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralizedPath {
    pub segments: Vec<Vec<usize>>,
    pub jumps: Vec<usize>,
}

impl GeneralizedPath {
    pub fn constant(x: usize) -> Self {
        GeneralizedPath {
            segments: vec![vec![x]],
            jumps: Vec::new(),
        }
    }

    pub fn start(&self) -> usize {
        self.segments[0][0]
    }

    pub fn end(&self) -> usize {
        *self.segments.last().unwrap().last().unwrap()
    }

    /// Total number of points over all segments.
    pub fn len(&self) -> usize {
        self.segments.iter().map(|s| s.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Validates all fence and jump conditions; reports endpoints.
pub fn validate_generalized_path(
    path: &GeneralizedPath,
    space: &GSpace,
) -> Result<(usize, usize), PathError> {
    if path.segments.is_empty() {
        return Err(PathError::EmptySegment { segment: 0 });
    }
    if path.jumps.len() + 1 != path.segments.len() {
        return Err(PathError::ShapeMismatch);
    }
    for (i, seg) in path.segments.iter().enumerate() {
        if seg.is_empty() {
            return Err(PathError::EmptySegment { segment: i });
        }
        for &x in seg {
            if x >= space.len() {
                return Err(PathError::PointOutOfRange {
                    segment: i,
                    point: x,
                });
            }
        }
        for (j, w) in seg.windows(2).enumerate() {
            if !space.poset().comparable(w[0], w[1]) {
                return Err(PathError::BrokenFence {
                    segment: i,
                    at: j,
                    next: j + 1,
                });
            }
        }
    }
    for (i, &k) in path.jumps.iter().enumerate() {
        let last = *path.segments[i].last().unwrap();
        let first = path.segments[i + 1][0];
        if space.act(k, last) != first {
            return Err(PathError::BrokenJump { jump: i + 1 });
        }
    }
    Ok((path.start(), path.end()))
}

/// A witness that two generalized paths are equivalent: translations `g_i`
/// with `beta_i = g_i . alpha_i` pointwise and `k'_i = g_{i+1} k_i g_i^-1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathEquivalenceWitness {
    pub translations: Vec<usize>,
}

/// Pads both paths (repeating last points, the canonical subdivision
/// refinement) so their shapes match. Only meaningful when segment counts
/// agree.
pub fn pad_to_match(p: &GeneralizedPath, q: &GeneralizedPath) -> (GeneralizedPath, GeneralizedPath) {
    let mut p2 = p.clone();
    let mut q2 = q.clone();
    if p2.segments.len() == q2.segments.len() {
        for i in 0..p2.segments.len() {
            let target = p2.segments[i].len().max(q2.segments[i].len());
            for seg in [&mut p2.segments[i], &mut q2.segments[i]] {
                while seg.len() < target {
                    let last = *seg.last().unwrap();
                    seg.push(last);
                }
            }
        }
    }
    (p2, q2)
}

/// Searches for translations relating two shape-matched paths; exhaustive
/// over the group with segmentwise pruning, so absence is certified.
pub fn paths_equivalent(
    p: &GeneralizedPath,
    q: &GeneralizedPath,
    space: &GSpace,
) -> Result<Option<PathEquivalenceWitness>, PathError> {
    if p.segments.len() != q.segments.len() {
        return Err(PathError::ShapeMismatch);
    }
    for i in 0..p.segments.len() {
        if p.segments[i].len() != q.segments[i].len() {
            return Err(PathError::ShapeMismatch);
        }
    }
    let group = space.group();
    // candidate translations per segment
    let mut candidates: Vec<Vec<usize>> = Vec::with_capacity(p.segments.len());
    for i in 0..p.segments.len() {
        let c: Vec<usize> = group
            .elements()
            .filter(|&g| {
                p.segments[i]
                    .iter()
                    .zip(&q.segments[i])
                    .all(|(&a, &b)| space.act(g, a) == b)
            })
            .collect();
        if c.is_empty() {
            return Ok(None);
        }
        candidates.push(c);
    }
    let n = p.segments.len();
    let mut chosen = vec![0usize; n];
    fn dfs(
        at: usize,
        n: usize,
        candidates: &[Vec<usize>],
        p: &GeneralizedPath,
        q: &GeneralizedPath,
        space: &GSpace,
        chosen: &mut Vec<usize>,
    ) -> bool {
        if at == n {
            return true;
        }
        for &g in &candidates[at] {
            if at > 0 {
                let group = space.group();
                let expected = group.mul(g, group.mul(p.jumps[at - 1], group.inv(chosen[at - 1])));
                if q.jumps[at - 1] != expected {
                    continue;
                }
            }
            chosen[at] = g;
            if dfs(at + 1, n, candidates, p, q, space, chosen) {
                return true;
            }
        }
        false
    }
    if dfs(0, n, &candidates, p, q, space, &mut chosen) {
        Ok(Some(PathEquivalenceWitness {
            translations: chosen,
        }))
    } else {
        Ok(None)
    }
}

/// Concatenation; inserts an identity jump at the junction.
pub fn concatenate(
    p: &GeneralizedPath,
    q: &GeneralizedPath,
    space: &GSpace,
) -> Result<GeneralizedPath, PathError> {
    if p.end() != q.start() {
        return Err(PathError::EndpointMismatch);
    }
    let mut segments = p.segments.clone();
    let mut jumps = p.jumps.clone();
    jumps.push(space.group().identity());
    segments.extend(q.segments.iter().cloned());
    jumps.extend(q.jumps.iter().copied());
    Ok(GeneralizedPath { segments, jumps })
}

/// The G-connectedness verdict with the offending subgroup on failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GConnectedness {
    pub connected: bool,
    /// On failure: the subgroup elements, and whether the fixed set was
    /// empty (as opposed to disconnected).
    pub failure: Option<(Vec<usize>, FixedSetFailure)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixedSetFailure {
    Empty,
    Disconnected,
}

/// A space is G-connected when every H-fixed subspace is nonempty and
/// connected, over all subgroups H.
pub fn is_g_connected(space: &GSpace) -> GConnectedness {
    for sub in space.group().subgroups() {
        let fixed = space.fixed_points(&sub);
        if fixed.is_empty() {
            return GConnectedness {
                connected: false,
                failure: Some((sub.elements().to_vec(), FixedSetFailure::Empty)),
            };
        }
        if !fixed.is_connected() {
            return GConnectedness {
                connected: false,
                failure: Some((sub.elements().to_vec(), FixedSetFailure::Disconnected)),
            };
        }
    }
    GConnectedness {
        connected: true,
        failure: None,
    }
}

/// Method selector for [`is_groupoid_connected`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConnectednessMethod {
    /// Breadth-first search for generalized paths between all point pairs.
    PathSearch,
    /// Fence connectivity of the orbit space.
    Quotient,
}

/// Groupoid connectedness by either method. The two always agree; the
/// property tests and the acceptance suite check this.
pub fn is_groupoid_connected(space: &GSpace, method: ConnectednessMethod) -> bool {
    match method {
        ConnectednessMethod::Quotient => space
            .orbit_space()
            .map(|os| os.poset.is_connected())
            .unwrap_or(false),
        ConnectednessMethod::PathSearch => {
            if space.is_empty() {
                return false;
            }
            (1..space.len()).all(|x| groupoid_path(space, 0, x).is_some())
        }
    }
}

/// Breadth-first search for a generalized path from `from` to `to`: moves
/// are comparability steps within a fence and group jumps. Returns a
/// validated path.
pub fn groupoid_path(space: &GSpace, from: usize, to: usize) -> Option<GeneralizedPath> {
    #[derive(Clone, Copy)]
    enum Step {
        Root,
        Fence,
        Jump(usize),
    }
    let n = space.len();
    if from >= n || to >= n {
        return None;
    }
    let mut pred: Vec<Option<(usize, Step)>> = vec![None; n];
    let mut queue = std::collections::VecDeque::new();
    pred[from] = Some((from, Step::Root));
    queue.push_back(from);
    while let Some(x) = queue.pop_front() {
        if x == to {
            break;
        }
        for y in 0..n {
            if pred[y].is_none() && y != x && space.poset().comparable(x, y) {
                pred[y] = Some((x, Step::Fence));
                queue.push_back(y);
            }
        }
        for g in space.group().elements() {
            let y = space.act(g, x);
            if pred[y].is_none() {
                pred[y] = Some((x, Step::Jump(g)));
                queue.push_back(y);
            }
        }
    }
    pred[to]?;
    // reconstruct the move list from `from` to `to`
    let mut moves: Vec<(usize, Step)> = Vec::new();
    let mut cur = to;
    while cur != from {
        let (prev, step) = pred[cur].unwrap();
        moves.push((cur, step));
        cur = prev;
    }
    moves.reverse();
    let mut segments: Vec<Vec<usize>> = vec![vec![from]];
    let mut jumps: Vec<usize> = Vec::new();
    for (point, step) in moves {
        match step {
            Step::Root => {}
            Step::Fence => segments.last_mut().unwrap().push(point),
            Step::Jump(g) => {
                jumps.push(g);
                segments.push(vec![point]);
            }
        }
    }
    let path = GeneralizedPath { segments, jumps };
    debug_assert!(validate_generalized_path(&path, space).is_ok());
    Some(path)
}

/// Lifts a fence in the orbit space to a generalized path starting at
/// `start`, stepwise: each comparability in the quotient is realized by a
/// jump to a suitable orbit representative followed by a fence step.
pub fn lift_quotient_fence(
    space: &GSpace,
    quotient_fence: &[usize],
    start: usize,
) -> Result<GeneralizedPath, PathError> {
    let os = space.orbit_space().map_err(|_| PathError::ShapeMismatch)?;
    if quotient_fence.is_empty() {
        return Err(PathError::EmptySegment { segment: 0 });
    }
    for &c in quotient_fence {
        if c >= os.len() {
            return Err(PathError::PointOutOfRange {
                segment: 0,
                point: c,
            });
        }
    }
    assert_eq!(
        os.class_of[start], quotient_fence[0],
        "start must lie over the first class of the fence"
    );
    let mut segments: Vec<Vec<usize>> = vec![vec![start]];
    let mut jumps: Vec<usize> = Vec::new();
    let mut current = start;
    for w in quotient_fence.windows(2) {
        let (c_from, c_to) = (w[0], w[1]);
        debug_assert_eq!(os.class_of[current], c_from);
        // find a pair u in c_from, v in c_to with u, v comparable, and a
        // group element carrying current to u
        let mut found = None;
        'outer: for &u in &os.classes[c_from] {
            for &v in &os.classes[c_to] {
                if space.poset().comparable(u, v) {
                    for g in space.group().elements() {
                        if space.act(g, current) == u {
                            found = Some((g, u, v));
                            break 'outer;
                        }
                    }
                }
            }
        }
        let (g, u, v) = found.expect("comparable classes lift: guaranteed for valid input");
        if g == space.group().identity() && u == current {
            segments.last_mut().unwrap().push(v);
        } else {
            jumps.push(g);
            segments.push(vec![u, v]);
        }
        current = v;
    }
    let path = GeneralizedPath { segments, jumps };
    validate_generalized_path(&path, space)?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;
    use crate::models;
    use crate::poset::Poset;

    #[test]
    fn constant_path_is_valid() {
        let x = models::swap_two_points();
        let p = GeneralizedPath::constant(0);
        let (a, b) = validate_generalized_path(&p, &x).unwrap();
        assert_eq!((a, b), (0, 0));
    }

    #[test]
    fn swap_jump_path() {
        // a -> b via the swap: alpha_1 = (a), k_1 = sigma, alpha_2 = (b)
        let x = models::swap_two_points();
        let p = GeneralizedPath {
            segments: vec![vec![0], vec![1]],
            jumps: vec![1],
        };
        assert_eq!(validate_generalized_path(&p, &x).unwrap(), (0, 1));
        // identity jump breaks
        let bad = GeneralizedPath {
            segments: vec![vec![0], vec![1]],
            jumps: vec![0],
        };
        assert_eq!(
            validate_generalized_path(&bad, &x).unwrap_err(),
            PathError::BrokenJump { jump: 1 }
        );
    }

    #[test]
    fn path_equivalent_to_itself_and_translates() {
        let x = models::rotation_circle(4);
        let p = groupoid_path(&x, 0, 6).unwrap();
        let w = paths_equivalent(&p, &p, &x).unwrap().unwrap();
        assert!(w.translations.iter().all(|&g| g == 0));

        // translate pointwise by g = 1 and conjugate the jumps
        let g = 1usize;
        let q = GeneralizedPath {
            segments: p
                .segments
                .iter()
                .map(|seg| seg.iter().map(|&z| x.act(g, z)).collect())
                .collect(),
            jumps: p
                .jumps
                .iter()
                .map(|&k| x.group().mul(g, x.group().mul(k, x.group().inv(g))))
                .collect(),
        };
        validate_generalized_path(&q, &x).unwrap();
        let w = paths_equivalent(&p, &q, &x).unwrap().unwrap();
        assert!(w.translations.iter().all(|&t| t == g));
    }

    #[test]
    fn paths_with_different_orbit_itineraries_are_inequivalent() {
        let x = models::rotation_circle(4);
        let p = GeneralizedPath::constant(0); // a vertex
        let q = GeneralizedPath::constant(4); // an edge
        assert!(paths_equivalent(&p, &q, &x).unwrap().is_none());
    }

    #[test]
    fn concatenation_inserts_identity_jump() {
        let x = models::rotation_circle(4);
        let p = groupoid_path(&x, 0, 4).unwrap();
        let q = groupoid_path(&x, 4, 2).unwrap();
        let pq = concatenate(&p, &q, &x).unwrap();
        assert_eq!((pq.start(), pq.end()), (0, 2));
        validate_generalized_path(&pq, &x).unwrap();
        let r = groupoid_path(&x, 1, 3).unwrap();
        assert_eq!(
            concatenate(&p, &r, &x).unwrap_err(),
            PathError::EndpointMismatch
        );
    }

    #[test]
    fn cone_is_g_connected() {
        for p in [2, 3, 5] {
            assert!(is_g_connected(&models::rotation_cone(p)).connected);
        }
    }

    #[test]
    fn swap_is_not_g_connected_but_groupoid_connected() {
        let x = models::swap_two_points();
        let g = is_g_connected(&x);
        assert!(!g.connected);
        // the first failure in canonical subgroup order is the trivial
        // subgroup (fixed set = X, disconnected); the full group has an
        // empty fixed set
        let (sub, why) = g.failure.unwrap();
        assert_eq!(sub, vec![0]);
        assert_eq!(why, FixedSetFailure::Disconnected);
        let z2 = x.group().subgroup(&[0, 1]).unwrap();
        assert!(x.fixed_points(&z2).is_empty());
        assert!(is_groupoid_connected(&x, ConnectednessMethod::PathSearch));
        assert!(is_groupoid_connected(&x, ConnectednessMethod::Quotient));
    }

    #[test]
    fn trivial_group_on_connected_space_is_g_connected() {
        let x = crate::gspace::GSpace::trivial_action(
            FiniteGroup::trivial(),
            models::circle_poset(4),
        );
        assert!(is_g_connected(&x).connected);
    }

    #[test]
    fn discrete_pair_with_trivial_action_is_disconnected() {
        let x = crate::gspace::GSpace::trivial_action(FiniteGroup::trivial(), Poset::discrete(2));
        assert!(!is_groupoid_connected(&x, ConnectednessMethod::PathSearch));
        assert!(!is_groupoid_connected(&x, ConnectednessMethod::Quotient));
    }

    #[test]
    fn rotation_circle_connected_with_witnesses() {
        let x = models::rotation_circle(4);
        assert!(is_groupoid_connected(&x, ConnectednessMethod::PathSearch));
        for a in 0..x.len() {
            for b in 0..x.len() {
                let p = groupoid_path(&x, a, b).unwrap();
                assert_eq!(validate_generalized_path(&p, &x).unwrap(), (a, b));
            }
        }
    }

    #[test]
    fn g_connected_implies_groupoid_connected() {
        for space in [
            models::rotation_cone(3),
            models::rotation_circle(4),
            models::swap_two_points(),
            models::reflection_circle(2),
        ] {
            if is_g_connected(&space).connected {
                assert!(is_groupoid_connected(&space, ConnectednessMethod::Quotient));
            }
        }
    }

    #[test]
    fn lift_constant_fence() {
        let x = models::rotation_circle(4);
        let p = lift_quotient_fence(&x, &[0], 2).unwrap();
        assert_eq!(p.start(), 2);
        assert_eq!(p.end(), 2);
    }

    #[test]
    fn lift_two_class_fence() {
        // C(4)/Z4 is vertex class 0 below edge class 1
        let x = models::rotation_circle(4);
        let os = x.orbit_space().unwrap();
        assert!(os.poset.le(0, 1));
        let p = lift_quotient_fence(&x, &[0, 1, 0], 3).unwrap();
        assert_eq!(p.start(), 3);
        assert_eq!(os.class_of[p.end()], 0);
    }

    #[test]
    fn lift_in_single_class_quotient() {
        let x = models::swap_two_points();
        let p = lift_quotient_fence(&x, &[0], 1).unwrap();
        assert_eq!(p.start(), 1);
    }
}
