//! Finite G-spaces: posets with an action by order automorphisms.

use crate::error::SpaceError;
use crate::group::{FiniteGroup, Subgroup};
use crate::poset::Poset;

/// A finite poset with a validated action of a finite group by order
/// automorphisms.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GSpace {
    group: FiniteGroup,
    poset: Poset,
    /// `action[g * points + x] = g . x`
    action: Vec<usize>,
}

impl std::fmt::Debug for GSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "GSpace(|G| = {}, |X| = {})",
            self.group.order(),
            self.poset.len()
        )
    }
}

impl GSpace {
    /// Validates the action axioms and the automorphism property.
    pub fn new(group: FiniteGroup, poset: Poset, action: Vec<usize>) -> Result<Self, SpaceError> {
        let n = poset.len();
        assert_eq!(action.len(), group.order() * n, "action table has wrong size");
        for g in group.elements() {
            for x in 0..n {
                if action[g * n + x] >= n {
                    return Err(SpaceError::ActionOutOfRange { g, point: x });
                }
            }
        }
        let e = group.identity();
        for x in 0..n {
            if action[e * n + x] != x {
                return Err(SpaceError::IdentityActs { point: x });
            }
        }
        for g in group.elements() {
            for h in group.elements() {
                let gh = group.mul(g, h);
                for x in 0..n {
                    if action[g * n + action[h * n + x]] != action[gh * n + x] {
                        return Err(SpaceError::NotAnAction { g, h, point: x });
                    }
                }
            }
        }
        for g in group.elements() {
            for a in 0..n {
                for b in 0..n {
                    if poset.le(a, b) != poset.le(action[g * n + a], action[g * n + b]) {
                        return Err(SpaceError::NotOrderAutomorphism { g, a, b });
                    }
                }
            }
        }
        Ok(GSpace {
            group,
            poset,
            action,
        })
    }

    /// The one-point space with the trivial group.
    pub fn point() -> Self {
        GSpace::trivial_action(FiniteGroup::trivial(), Poset::discrete(1))
    }

    /// Any poset with the trivial action of `group`.
    pub fn trivial_action(group: FiniteGroup, poset: Poset) -> Self {
        let n = poset.len();
        let action: Vec<usize> = group.elements().flat_map(|_| 0..n).collect();
        GSpace::new(group, poset, action).unwrap()
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poset.is_empty()
    }

    #[inline]
    pub fn act(&self, g: usize, x: usize) -> usize {
        self.action[g * self.poset.len() + x]
    }

    /// The orbit `{g.x}`, sorted.
    pub fn orbit(&self, x: usize) -> Vec<usize> {
        let mut orbit: Vec<usize> = self.group.elements().map(|g| self.act(g, x)).collect();
        orbit.sort_unstable();
        orbit.dedup();
        orbit
    }

    /// The isotropy subgroup `{h : h.x = x}`.
    pub fn isotropy(&self, x: usize) -> Subgroup {
        let elements: Vec<usize> = self
            .group
            .elements()
            .filter(|&h| self.act(h, x) == x)
            .collect();
        self.group.subgroup(&elements).expect("isotropy is closed")
    }

    /// The full subposet of points fixed by every element of `sub`.
    pub fn fixed_points(&self, sub: &Subgroup) -> SubPoset {
        let points: Vec<usize> = (0..self.poset.len())
            .filter(|&x| sub.elements().iter().all(|&h| self.act(h, x) == x))
            .collect();
        let poset = self.poset.induced(&points);
        SubPoset { points, poset }
    }

    /// The orbit space with its induced order, projection and openness data.
    ///
    /// The induced relation `[x] <= [y] iff exists g with g.x <= y` is a
    /// partial order for automorphism actions; antisymmetry is re-checked and
    /// a violation reported as an error rather than a panic.
    pub fn orbit_space(&self) -> Result<OrbitSpace, SpaceError> {
        let n = self.poset.len();
        let mut class_of = vec![usize::MAX; n];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for x in 0..n {
            if class_of[x] == usize::MAX {
                let orbit = self.orbit(x);
                for &y in &orbit {
                    class_of[y] = classes.len();
                }
                classes.push(orbit);
            }
        }
        let k = classes.len();
        let mut leq = vec![false; k * k];
        for a in 0..k {
            for b in 0..k {
                let xa = classes[a][0];
                let rel = self
                    .group
                    .elements()
                    .any(|g| classes[b].iter().any(|&y| self.poset.le(self.act(g, xa), y)));
                leq[a * k + b] = rel;
            }
        }
        for a in 0..k {
            for b in 0..k {
                if a != b && leq[a * k + b] && leq[b * k + a] {
                    return Err(SpaceError::AntisymmetryViolation {
                        a: classes[a][0],
                        b: classes[b][0],
                    });
                }
            }
        }
        let poset = Poset::from_leq(k, leq)?;
        Ok(OrbitSpace {
            poset,
            class_of,
            classes,
        })
    }

    /// Restricts the action to a subgroup (the poset is unchanged).
    pub fn restrict_group(&self, sub: &Subgroup) -> GSpace {
        let n = self.poset.len();
        let sub_group = subgroup_as_group(&self.group, sub);
        let mut action = Vec::with_capacity(sub.len() * n);
        for &g in sub.elements() {
            for x in 0..n {
                action.push(self.act(g, x));
            }
        }
        GSpace::new(sub_group, self.poset.clone(), action).expect("restriction stays valid")
    }

    /// Whether every element of `sub` acts without fixed points (except the
    /// identity). Returns the first violation `(l, z)`.
    pub fn acts_freely(&self, sub: &Subgroup) -> Result<(), (usize, usize)> {
        for &l in sub.elements() {
            if l == self.group.identity() {
                continue;
            }
            for z in 0..self.poset.len() {
                if self.act(l, z) == z {
                    return Err((l, z));
                }
            }
        }
        Ok(())
    }

    /// Disjoint union of two spaces over the same group.
    pub fn disjoint_union(&self, other: &GSpace) -> GSpace {
        assert_eq!(self.group, other.group);
        let n1 = self.len();
        let n2 = other.len();
        let n = n1 + n2;
        let mut pairs = Vec::new();
        for (a, b) in self.poset.strict_pairs() {
            pairs.push((a, b));
        }
        for (a, b) in other.poset.strict_pairs() {
            pairs.push((a + n1, b + n1));
        }
        let poset = Poset::from_relations(n, &pairs).unwrap();
        let mut action = Vec::with_capacity(self.group.order() * n);
        for g in self.group.elements() {
            for x in 0..n1 {
                action.push(self.act(g, x));
            }
            for x in 0..n2 {
                action.push(other.act(g, x) + n1);
            }
        }
        GSpace::new(self.group.clone(), poset, action).unwrap()
    }
}

/// A subgroup packaged as a group in its own right, with elements renumbered
/// `0..sub.len()` in the subgroup's sorted order.
pub fn subgroup_as_group(group: &FiniteGroup, sub: &Subgroup) -> FiniteGroup {
    let elems = sub.elements();
    let index_of = |g: usize| elems.binary_search(&g).unwrap();
    let table: Vec<Vec<usize>> = elems
        .iter()
        .map(|&a| elems.iter().map(|&b| index_of(group.mul(a, b))).collect())
        .collect();
    crate::group::validate_group(&table).expect("subgroup closure gives a group")
}

/// A full subposet remembered together with its original point labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubPoset {
    /// Original point indices, sorted.
    pub points: Vec<usize>,
    /// The induced order; point `i` is `points[i]`.
    pub poset: Poset,
}

impl SubPoset {
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_connected(&self) -> bool {
        self.poset.is_connected()
    }
}

/// The orbit space of a G-space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitSpace {
    /// Induced order on orbit classes.
    pub poset: Poset,
    /// Class index of each point.
    pub class_of: Vec<usize>,
    /// Sorted members of each class; classes ordered by minimal point.
    pub classes: Vec<Vec<usize>>,
}

impl OrbitSpace {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Openness of the projection on principal down-sets: the image of every
    /// minimal open set is open. Returns the first violation.
    pub fn projection_open_violation(&self, space: &GSpace) -> Option<(usize, usize)> {
        let n = space.len();
        for x in 0..n {
            let down: Vec<usize> = (0..n).filter(|&y| space.poset().le(y, x)).collect();
            let image: Vec<usize> = {
                let mut v: Vec<usize> = down.iter().map(|&y| self.class_of[y]).collect();
                v.sort_unstable();
                v.dedup();
                v
            };
            if !self.poset.is_down_set(&image) {
                let bad = (0..self.len())
                    .find(|&c| {
                        !image.contains(&c)
                            && image.iter().any(|&d| self.poset.le(c, d))
                    })
                    .unwrap();
                return Some((x, bad));
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;

    #[test]
    fn orbit_of_trivial_group_is_singleton() {
        let x = GSpace::trivial_action(FiniteGroup::trivial(), Poset::chain(3));
        assert_eq!(x.orbit(1), vec![1]);
    }

    #[test]
    fn orbit_of_vertex_under_rotation() {
        // Z4 rotating C(4): the orbit of v0 is all four vertices.
        let x = models::rotation_circle(4);
        assert_eq!(x.orbit(0), vec![0, 1, 2, 3]);
    }

    #[test]
    fn swap_orbit_is_both_points() {
        let x = models::swap_two_points();
        assert_eq!(x.orbit(0), vec![0, 1]);
    }

    #[test]
    fn isotropy_of_cone_apex_is_whole_group() {
        for p in [2, 3, 5] {
            let x = models::rotation_cone(p);
            let apex = x.len() - 1;
            assert_eq!(x.isotropy(apex).len(), p);
            // no nonidentity rotation fixes a vertex
            assert_eq!(x.isotropy(0).len(), 1);
        }
    }

    #[test]
    fn isotropy_of_trivial_action_is_whole_group() {
        let x = GSpace::trivial_action(FiniteGroup::cyclic(3), Poset::discrete(2));
        assert_eq!(x.isotropy(0).len(), 3);
    }

    #[test]
    fn fixed_points_cases() {
        let cone = models::rotation_cone(3);
        let whole = cone.group().subgroup(&[0, 1, 2]).unwrap();
        let fix = cone.fixed_points(&whole);
        assert_eq!(fix.points, vec![cone.len() - 1]); // only the apex

        let swap = models::swap_two_points();
        let z2 = swap.group().subgroup(&[0, 1]).unwrap();
        assert!(swap.fixed_points(&z2).is_empty());

        let e = swap.group().subgroup(&[0]).unwrap();
        assert_eq!(swap.fixed_points(&e).points, vec![0, 1]);
    }

    #[test]
    fn orbit_stabilizer_holds_everywhere() {
        for space in [
            models::rotation_circle(4),
            models::rotation_cone(3),
            models::swap_two_points(),
            models::reflection_circle(2),
        ] {
            for x in 0..space.len() {
                assert_eq!(
                    space.orbit(x).len() * space.isotropy(x).len(),
                    space.group().order()
                );
            }
        }
    }

    #[test]
    fn orbit_space_of_rotation_circle() {
        // C(4)/Z4 is a two point poset: vertex class below edge class.
        let x = models::rotation_circle(4);
        let os = x.orbit_space().unwrap();
        assert_eq!(os.len(), 2);
        assert_eq!(os.classes[0], vec![0, 1, 2, 3]);
        assert!(os.poset.le(0, 1));
        assert!(!os.poset.le(1, 0));
        assert_eq!(os.projection_open_violation(&x), None);
    }

    #[test]
    fn orbit_space_degenerate_cases() {
        let x = GSpace::trivial_action(FiniteGroup::trivial(), Poset::chain(2));
        assert_eq!(x.orbit_space().unwrap().len(), 2);
        let swap = models::swap_two_points();
        assert_eq!(swap.orbit_space().unwrap().len(), 1);
    }

    #[test]
    fn empty_space_is_legal() {
        let x = GSpace::trivial_action(FiniteGroup::cyclic(2), Poset::discrete(0));
        assert!(x.orbit_space().unwrap().is_empty());
    }

    #[test]
    fn quotient_components_never_exceed_space_components() {
        for space in [
            models::rotation_circle(4),
            models::swap_two_points(),
            models::reflection_circle(3),
            models::rotation_cone(2),
        ] {
            let os = space.orbit_space().unwrap();
            assert!(os.poset.components().len() <= space.poset().components().len());
        }
    }

    #[test]
    fn fixed_points_antitone() {
        let x = models::reflection_circle(2);
        let subs = x.group().subgroups();
        for a in &subs {
            for b in &subs {
                if a.elements().iter().all(|g| b.contains(*g)) {
                    let fa = x.fixed_points(a);
                    let fb = x.fixed_points(b);
                    assert!(fb.points.iter().all(|p| fa.points.contains(p)));
                }
            }
        }
    }
}
