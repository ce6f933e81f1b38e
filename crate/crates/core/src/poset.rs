//! Finite posets as finite topological spaces.
//!
//! A finite T0 space is the same thing as a finite poset. We fix the
//! convention that the open sets are the down-sets, so the minimal open
//! neighborhood of `x` is the principal down-set of `x`, and continuous maps
//! are exactly the order-preserving maps. Connectivity is fence
//! connectivity: the equivalence relation generated by comparability.

use crate::error::SpaceError;

/// A finite poset on points `0..len()`, stored as a dense `leq` matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poset {
    n: usize,
    leq: Vec<bool>,
}

impl std::fmt::Debug for Poset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Poset({} points; {:?})", self.n, self.cover_pairs())
    }
}

impl Poset {
    /// Validates a dense relation matrix as a partial order.
    pub fn from_leq(n: usize, leq: Vec<bool>) -> Result<Self, SpaceError> {
        assert_eq!(leq.len(), n * n, "leq matrix must be n*n");
        let p = Poset { n, leq };
        p.validate()?;
        Ok(p)
    }

    /// Builds the reflexive-transitive closure of the given `(lo, hi)` pairs
    /// and validates antisymmetry.
    pub fn from_relations(n: usize, pairs: &[(usize, usize)]) -> Result<Self, SpaceError> {
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for &(a, b) in pairs {
            for &x in [a, b].iter() {
                if x >= n {
                    return Err(SpaceError::PointOutOfRange {
                        index: x,
                        points: n,
                    });
                }
            }
            leq[a * n + b] = true;
        }
        // Floyd-Warshall style closure.
        for k in 0..n {
            for a in 0..n {
                if leq[a * n + k] {
                    for b in 0..n {
                        if leq[k * n + b] {
                            leq[a * n + b] = true;
                        }
                    }
                }
            }
        }
        let p = Poset { n, leq };
        p.validate()?;
        Ok(p)
    }

    /// The antichain on `n` points (discrete space).
    pub fn discrete(n: usize) -> Self {
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        Poset { n, leq }
    }

    /// The chain `0 < 1 < ... < n-1`.
    pub fn chain(n: usize) -> Self {
        let mut leq = vec![false; n * n];
        for a in 0..n {
            for b in a..n {
                leq[a * n + b] = true;
            }
        }
        Poset { n, leq }
    }

    fn validate(&self) -> Result<(), SpaceError> {
        let n = self.n;
        for a in 0..n {
            if !self.le(a, a) {
                return Err(SpaceError::NotReflexive { point: a });
            }
        }
        for a in 0..n {
            for b in 0..n {
                if a != b && self.le(a, b) && self.le(b, a) {
                    return Err(SpaceError::AntisymmetryViolation { a, b });
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                if self.le(a, b) {
                    for c in 0..n {
                        if self.le(b, c) && !self.le(a, c) {
                            return Err(SpaceError::NotTransitive { a, b, c });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn le(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.n + b]
    }

    #[inline]
    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.le(a, b) || self.le(b, a)
    }

    pub fn points(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    /// The covering pairs `(a, b)` with `a < b` and nothing strictly between.
    pub fn cover_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in 0..self.n {
                if a != b && self.le(a, b) {
                    let covered = (0..self.n)
                        .any(|c| c != a && c != b && self.le(a, c) && self.le(c, b));
                    if !covered {
                        out.push((a, b));
                    }
                }
            }
        }
        out
    }

    /// All strict relations `(a, b)` with `a <= b`, `a != b`, sorted.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in 0..self.n {
                if a != b && self.le(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Down-closure of a set of points, sorted.
    pub fn down_closure(&self, set: &[usize]) -> Vec<usize> {
        let mut mem = vec![false; self.n];
        for &x in set {
            for y in 0..self.n {
                if self.le(y, x) {
                    mem[y] = true;
                }
            }
        }
        (0..self.n).filter(|&y| mem[y]).collect()
    }

    /// Whether `set` (given as a sorted point list) is a down-set, i.e. open.
    pub fn is_down_set(&self, set: &[usize]) -> bool {
        let mut mem = vec![false; self.n];
        for &x in set {
            mem[x] = true;
        }
        for &x in set {
            for y in 0..self.n {
                if self.le(y, x) && !mem[y] {
                    return false;
                }
            }
        }
        true
    }

    /// Fence components, each sorted, ordered by minimal point.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(parent: &mut Vec<usize>, x: usize) -> usize {
            if parent[x] != x {
                let root = find(parent, parent[x]);
                parent[x] = root;
            }
            parent[x]
        }
        for a in 0..self.n {
            for b in (a + 1)..self.n {
                if self.comparable(a, b) {
                    let ra = find(&mut parent, a);
                    let rb = find(&mut parent, b);
                    if ra != rb {
                        parent[ra.max(rb)] = ra.min(rb);
                    }
                }
            }
        }
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut index_of_root = vec![usize::MAX; self.n];
        for x in 0..self.n {
            let r = find(&mut parent, x);
            if index_of_root[r] == usize::MAX {
                index_of_root[r] = classes.len();
                classes.push(Vec::new());
            }
            classes[index_of_root[r]].push(x);
        }
        classes
    }

    /// Component index of each point, numbered by minimal point.
    pub fn component_of(&self) -> Vec<usize> {
        let comps = self.components();
        let mut out = vec![0; self.n];
        for (i, c) in comps.iter().enumerate() {
            for &x in c {
                out[x] = i;
            }
        }
        out
    }

    /// A space is connected when it has exactly one fence component; the
    /// empty space is not connected.
    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// The full subposet on `points` (which need not be sorted); point `i`
    /// of the result is `points[i]`.
    pub fn induced(&self, points: &[usize]) -> Poset {
        let m = points.len();
        let mut leq = vec![false; m * m];
        for (i, &a) in points.iter().enumerate() {
            for (j, &b) in points.iter().enumerate() {
                leq[i * m + j] = self.le(a, b);
            }
        }
        Poset { n: m, leq }
    }

    /// First pair on which `map` into `target` fails to be order-preserving.
    pub fn order_preserving_violation(
        &self,
        target: &Poset,
        map: &[usize],
    ) -> Option<(usize, usize)> {
        for a in 0..self.n {
            for b in 0..self.n {
                if self.le(a, b) && !target.le(map[a], map[b]) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    /// A linear extension: points sorted so that `a <= b` implies `a` comes
    /// first; ties broken by index.
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut below = vec![0usize; self.n];
        for a in 0..self.n {
            below[a] = (0..self.n).filter(|&b| b != a && self.le(b, a)).count();
        }
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by_key(|&x| (below[x], x));
        // counting strictly-below points is enough for a linear extension:
        // a < b implies strictly fewer points below a
        order
    }

    /// All down-sets (as sorted point lists) if there are at most `cap` of
    /// them, in lexicographic order of their membership masks.
    pub fn all_down_sets(&self, cap: usize) -> Option<Vec<Vec<usize>>> {
        let mut out: Vec<Vec<usize>> = Vec::new();
        // Grow down-sets point by point in linear-extension order; a down-set
        // is a union of principal down-sets, so DFS over "add a point and its
        // down-closure" enumerates them all.
        let mut stack: Vec<(Vec<bool>, usize)> = vec![(vec![false; self.n], 0)];
        let mut seen: std::collections::BTreeSet<Vec<bool>> = std::collections::BTreeSet::new();
        while let Some((mem, next)) = stack.pop() {
            if seen.insert(mem.clone()) {
                if seen.len() > cap {
                    return None;
                }
                for x in next..self.n {
                    if !mem[x] {
                        let mut grown = mem.clone();
                        for y in 0..self.n {
                            if self.le(y, x) {
                                grown[y] = true;
                            }
                        }
                        stack.push((grown, x + 1));
                    }
                }
            }
        }
        let mut sets: Vec<Vec<usize>> = seen
            .into_iter()
            .map(|mem| (0..self.n).filter(|&x| mem[x]).collect())
            .collect();
        sets.sort();
        out.extend(sets);
        Some(out)
    }

    /// Order-isomorphisms onto `other`, as image vectors, found by
    /// backtracking with degree invariants; `None` when none exists.
    pub fn isomorphism(&self, other: &Poset) -> Option<Vec<usize>> {
        if self.n != other.n {
            return None;
        }
        let sig = |p: &Poset, x: usize| -> (usize, usize, usize) {
            let below = (0..p.n).filter(|&y| y != x && p.le(y, x)).count();
            let above = (0..p.n).filter(|&y| y != x && p.le(x, y)).count();
            let comp = (0..p.n).filter(|&y| y != x && p.comparable(x, y)).count();
            (below, above, comp)
        };
        let mine: Vec<_> = (0..self.n).map(|x| sig(self, x)).collect();
        let theirs: Vec<_> = (0..other.n).map(|x| sig(other, x)).collect();
        {
            let mut a = mine.clone();
            let mut b = theirs.clone();
            a.sort();
            b.sort();
            if a != b {
                return None;
            }
        }
        let mut image = vec![usize::MAX; self.n];
        let mut used = vec![false; self.n];
        fn dfs(
            p: &Poset,
            q: &Poset,
            mine: &[(usize, usize, usize)],
            theirs: &[(usize, usize, usize)],
            image: &mut Vec<usize>,
            used: &mut Vec<bool>,
            at: usize,
        ) -> bool {
            if at == p.n {
                return true;
            }
            for cand in 0..q.n {
                if used[cand] || mine[at] != theirs[cand] {
                    continue;
                }
                let ok = (0..at).all(|prev| {
                    p.le(prev, at) == q.le(image[prev], cand)
                        && p.le(at, prev) == q.le(cand, image[prev])
                });
                if ok {
                    image[at] = cand;
                    used[cand] = true;
                    if dfs(p, q, mine, theirs, image, used, at + 1) {
                        return true;
                    }
                    used[cand] = false;
                    image[at] = usize::MAX;
                }
            }
            false
        }
        if dfs(self, other, &mine, &theirs, &mut image, &mut used, 0) {
            Some(image)
        } else {
            None
        }
    }
}

/// Fence components of an arbitrary poset; kept as a free function because
/// callers often hold only the order data.
pub fn connected_components(poset: &Poset) -> Vec<Vec<usize>> {
    poset.components()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;

    #[test]
    fn chain_and_discrete() {
        let c = Poset::chain(3);
        assert!(c.le(0, 2));
        assert!(!c.le(2, 0));
        let d = Poset::discrete(2);
        assert!(!d.comparable(0, 1));
        assert_eq!(d.components().len(), 2);
    }

    #[test]
    fn closure_catches_cycles() {
        let err = Poset::from_relations(2, &[(0, 1), (1, 0)]).unwrap_err();
        assert!(matches!(err, SpaceError::AntisymmetryViolation { .. }));
    }

    #[test]
    fn circle_components() {
        // C(4) is one fence component, the discrete pair is two, empty is zero.
        let c4 = models::circle_poset(4);
        assert_eq!(c4.components().len(), 1);
        assert_eq!(Poset::discrete(2).components().len(), 2);
        assert_eq!(Poset::discrete(0).components().len(), 0);
    }

    #[test]
    fn down_sets_of_chain() {
        let c = Poset::chain(2);
        let ds = c.all_down_sets(100).unwrap();
        assert_eq!(ds, vec![vec![], vec![0], vec![0, 1]]);
    }

    #[test]
    fn down_closure_in_circle() {
        let c4 = models::circle_poset(4);
        // the minimal open set of edge e_0 (index 4) is {v_0, v_1, e_0}
        assert_eq!(c4.down_closure(&[4]), vec![0, 1, 4]);
        assert!(c4.is_down_set(&[0, 1, 4]));
        assert!(!c4.is_down_set(&[4]));
    }

    #[test]
    fn circle_self_isomorphism() {
        let c4 = models::circle_poset(4);
        let iso = c4.isomorphism(&c4).unwrap();
        assert_eq!(c4.order_preserving_violation(&c4, &iso), None);
        let c3 = models::circle_poset(3);
        assert!(c3.isomorphism(&c4).is_none());
    }
}
