//! Finite groups as Cayley tables, subgroups and homomorphisms.

use crate::error::GroupError;

/// A finite group on elements `0..order`, with `table[a][b] = a * b`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
}

impl std::fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FiniteGroup(order {})", self.order)
    }
}

/// Validates a Cayley table, reporting the first violated axiom.
///
/// Checks run in the order: index range, identity, associativity, inverses.
pub fn validate_group(table: &[Vec<usize>]) -> Result<FiniteGroup, GroupError> {
    let order = table.len();
    for (row, r) in table.iter().enumerate() {
        if r.len() != order {
            return Err(GroupError::NotSquare {
                row,
                len: r.len(),
                order,
            });
        }
        for (col, &value) in r.iter().enumerate() {
            if value >= order {
                return Err(GroupError::IndexOutOfRange {
                    row,
                    col,
                    value,
                    order,
                });
            }
        }
    }
    let identity = (0..order)
        .find(|&e| (0..order).all(|a| table[e][a] == a && table[a][e] == a))
        .ok_or(GroupError::NoIdentity)?;
    for a in 0..order {
        for b in 0..order {
            for c in 0..order {
                if table[table[a][b]][c] != table[a][table[b][c]] {
                    return Err(GroupError::NonAssociative { a, b, c });
                }
            }
        }
    }
    let mut inverse = vec![usize::MAX; order];
    for a in 0..order {
        match (0..order).find(|&b| table[a][b] == identity && table[b][a] == identity) {
            Some(b) => inverse[a] = b,
            None => return Err(GroupError::NoInverse { element: a }),
        }
    }
    let flat: Vec<usize> = table.iter().flatten().copied().collect();
    Ok(FiniteGroup {
        order,
        table: flat,
        identity,
        inverse,
    })
}

impl FiniteGroup {
    pub fn trivial() -> Self {
        validate_group(&[vec![0]]).unwrap()
    }

    /// The cyclic group of order `n`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0);
        let table: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        validate_group(&table).unwrap()
    }

    /// Direct product; element `(a, b)` is indexed `a * other.order() + b`.
    pub fn product(&self, other: &FiniteGroup) -> Self {
        let m = other.order;
        let n = self.order * m;
        let table: Vec<Vec<usize>> = (0..n)
            .map(|x| {
                (0..n)
                    .map(|y| self.mul(x / m, y / m) * m + other.mul(x % m, y % m))
                    .collect()
            })
            .collect();
        validate_group(&table).unwrap()
    }

    /// The group generated by a set of permutations of `0..degree`.
    /// Elements are the generated permutations sorted lexicographically,
    /// which puts the identity first.
    pub fn from_permutations(degree: usize, generators: &[Vec<usize>]) -> (Self, Vec<Vec<usize>>) {
        use std::collections::BTreeSet;
        let id: Vec<usize> = (0..degree).collect();
        let mut elems: BTreeSet<Vec<usize>> = BTreeSet::new();
        elems.insert(id);
        loop {
            let mut grew = false;
            let snapshot: Vec<Vec<usize>> = elems.iter().cloned().collect();
            for p in &snapshot {
                for g in generators {
                    let composed: Vec<usize> = (0..degree).map(|i| g[p[i]]).collect();
                    grew |= elems.insert(composed);
                }
            }
            if !grew {
                break;
            }
        }
        let perms: Vec<Vec<usize>> = elems.into_iter().collect();
        let index_of = |p: &Vec<usize>| perms.binary_search(p).unwrap();
        let table: Vec<Vec<usize>> = perms
            .iter()
            .map(|a| {
                perms
                    .iter()
                    .map(|b| {
                        // (a * b)(i) = a(b(i)): apply b first, then a
                        let composed: Vec<usize> = (0..degree).map(|i| a[b[i]]).collect();
                        index_of(&composed)
                    })
                    .collect()
            })
            .collect();
        (validate_group(&table).unwrap(), perms)
    }

    /// The dihedral group of order `2n`, acting on `n` letters.
    pub fn dihedral(n: usize) -> Self {
        assert!(n >= 1);
        let rot: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        let refl: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
        Self::from_permutations(n, &[rot, refl]).0
    }

    /// The symmetric group on `n` letters.
    pub fn symmetric(n: usize) -> Self {
        assert!(n >= 1);
        let mut gens = Vec::new();
        if n >= 2 {
            gens.push((0..n).map(|i| (i + 1) % n).collect::<Vec<_>>());
            let mut swap: Vec<usize> = (0..n).collect();
            swap.swap(0, 1);
            gens.push(swap);
        }
        Self::from_permutations(n, &gens).0
    }

    /// The quaternion group of order 8 from its Cayley table
    /// (elements 1, -1, i, -i, j, -j, k, -k).
    pub fn quaternion() -> Self {
        let t = [
            [0, 1, 2, 3, 4, 5, 6, 7],
            [1, 0, 3, 2, 5, 4, 7, 6],
            [2, 3, 1, 0, 6, 7, 5, 4],
            [3, 2, 0, 1, 7, 6, 4, 5],
            [4, 5, 7, 6, 1, 0, 2, 3],
            [5, 4, 6, 7, 0, 1, 3, 2],
            [6, 7, 4, 5, 3, 2, 1, 0],
            [7, 6, 5, 4, 2, 3, 0, 1],
        ];
        let table: Vec<Vec<usize>> = t.iter().map(|r| r.to_vec()).collect();
        validate_group(&table).unwrap()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut n = 1;
        while x != self.identity {
            x = self.mul(x, a);
            n += 1;
        }
        n
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Closure of a set of elements under product and inverse, sorted.
    pub fn closure(&self, elements: &[usize]) -> Vec<usize> {
        let mut mem = vec![false; self.order];
        mem[self.identity] = true;
        let mut stack: Vec<usize> = vec![self.identity];
        for &x in elements {
            if !mem[x] {
                mem[x] = true;
                stack.push(x);
            }
        }
        let mut members: Vec<usize> = stack.clone();
        while let Some(x) = stack.pop() {
            let push = |y: usize, mem: &mut Vec<bool>, stack: &mut Vec<usize>| {
                if !mem[y] {
                    mem[y] = true;
                    stack.push(y);
                }
            };
            push(self.inv(x), &mut mem, &mut stack);
            let snapshot = members.clone();
            for &y in &snapshot {
                push(self.mul(x, y), &mut mem, &mut stack);
                push(self.mul(y, x), &mut mem, &mut stack);
            }
            members = (0..self.order).filter(|&z| mem[z]).collect();
        }
        members
    }

    /// All subgroups, deduplicated, sorted by size then lexicographically by
    /// element set.
    pub fn subgroups(&self) -> Vec<Subgroup> {
        use std::collections::BTreeSet;
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
        found.insert(vec![self.identity]);
        loop {
            let mut grew = false;
            let snapshot: Vec<Vec<usize>> = found.iter().cloned().collect();
            for h in &snapshot {
                for g in 0..self.order {
                    if !h.contains(&g) {
                        let mut gens = h.clone();
                        gens.push(g);
                        grew |= found.insert(self.closure(&gens));
                    }
                }
            }
            if !grew {
                break;
            }
        }
        let mut subs: Vec<Vec<usize>> = found.into_iter().collect();
        subs.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        subs.into_iter()
            .map(|elements| Subgroup { elements })
            .collect()
    }

    /// Validates `elements` as a subgroup of `self`.
    pub fn subgroup(&self, elements: &[usize]) -> Result<Subgroup, GroupError> {
        let mut sorted: Vec<usize> = elements.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        for &x in &sorted {
            if x >= self.order {
                return Err(GroupError::NotSubgroup { witness: x });
            }
        }
        if !sorted.contains(&self.identity) {
            return Err(GroupError::NotSubgroup {
                witness: self.identity,
            });
        }
        for &a in &sorted {
            if sorted.binary_search(&self.inv(a)).is_err() {
                return Err(GroupError::NotSubgroup { witness: a });
            }
            for &b in &sorted {
                if sorted.binary_search(&self.mul(a, b)).is_err() {
                    return Err(GroupError::NotSubgroup {
                        witness: self.mul(a, b),
                    });
                }
            }
        }
        Ok(Subgroup { elements: sorted })
    }

    pub fn is_normal(&self, sub: &Subgroup) -> Result<(), (usize, usize)> {
        for g in 0..self.order {
            for &l in &sub.elements {
                let conj = self.mul(self.mul(g, l), self.inv(g));
                if sub.elements.binary_search(&conj).is_err() {
                    return Err((l, g));
                }
            }
        }
        Ok(())
    }

    /// Quotient by a normal subgroup. Returns the quotient group, the coset
    /// index of each element, and a canonical (minimal) representative per
    /// coset. Cosets are sorted by their minimal element.
    pub fn quotient(&self, normal: &Subgroup) -> (FiniteGroup, Vec<usize>, Vec<usize>) {
        let mut coset_of = vec![usize::MAX; self.order];
        let mut reps: Vec<usize> = Vec::new();
        for g in 0..self.order {
            if coset_of[g] == usize::MAX {
                let idx = reps.len();
                reps.push(g);
                for &l in &normal.elements {
                    coset_of[self.mul(g, l)] = idx;
                }
            }
        }
        let k = reps.len();
        let table: Vec<Vec<usize>> = (0..k)
            .map(|a| (0..k).map(|b| coset_of[self.mul(reps[a], reps[b])]).collect())
            .collect();
        (validate_group(&table).unwrap(), coset_of, reps)
    }

    /// All isomorphisms onto `other` would be wasteful; the first one in
    /// lexicographic image order is enough for canonical purposes.
    pub fn isomorphism(&self, other: &FiniteGroup) -> Option<Vec<usize>> {
        if self.order != other.order {
            return None;
        }
        let mine: Vec<usize> = (0..self.order).map(|a| self.element_order(a)).collect();
        let theirs: Vec<usize> = (0..other.order).map(|a| other.element_order(a)).collect();
        {
            let mut a = mine.clone();
            let mut b = theirs.clone();
            a.sort_unstable();
            b.sort_unstable();
            if a != b {
                return None;
            }
        }
        let mut image = vec![usize::MAX; self.order];
        let mut used = vec![false; self.order];
        image[self.identity] = other.identity;
        used[other.identity] = true;
        let todo: Vec<usize> = (0..self.order).filter(|&a| a != self.identity).collect();
        fn dfs(
            g: &FiniteGroup,
            h: &FiniteGroup,
            mine: &[usize],
            theirs: &[usize],
            todo: &[usize],
            at: usize,
            image: &mut Vec<usize>,
            used: &mut Vec<bool>,
        ) -> bool {
            if at == todo.len() {
                return true;
            }
            let a = todo[at];
            for cand in 0..h.order() {
                if used[cand] || mine[a] != theirs[cand] {
                    continue;
                }
                let ok = (0..g.order()).all(|b| {
                    image[b] == usize::MAX || {
                        let ab = g.mul(a, b);
                        let ba = g.mul(b, a);
                        (image[ab] == usize::MAX || image[ab] == h.mul(cand, image[b]))
                            && (image[ba] == usize::MAX || image[ba] == h.mul(image[b], cand))
                    }
                });
                if !ok {
                    continue;
                }
                image[a] = cand;
                used[cand] = true;
                // propagate nothing eagerly; the full table check below is
                // cheap at these orders
                let consistent = (0..g.order()).all(|x| {
                    (0..g.order()).all(|y| {
                        image[x] == usize::MAX
                            || image[y] == usize::MAX
                            || image[g.mul(x, y)] == usize::MAX
                            || image[g.mul(x, y)] == h.mul(image[x], image[y])
                    })
                });
                if consistent && dfs(g, h, mine, theirs, todo, at + 1, image, used) {
                    return true;
                }
                used[cand] = false;
                image[a] = usize::MAX;
            }
            false
        }
        if dfs(
            self, other, &mine, &theirs, &todo, 0, &mut image, &mut used,
        ) {
            Some(image)
        } else {
            None
        }
    }

    /// All injective homomorphisms of `self` into `other`, sorted.
    pub fn embeddings(&self, other: &FiniteGroup) -> Vec<Homomorphism> {
        self.homomorphisms(other)
            .into_iter()
            .filter(|h| h.is_injective())
            .collect()
    }

    /// All homomorphisms of `self` into `other`, sorted by image vector.
    pub fn homomorphisms(&self, other: &FiniteGroup) -> Vec<Homomorphism> {
        let mut out = Vec::new();
        let mut image = vec![usize::MAX; self.order];
        image[self.identity] = other.identity;
        let todo: Vec<usize> = (0..self.order).filter(|&a| a != self.identity).collect();
        fn dfs(
            g: &FiniteGroup,
            h: &FiniteGroup,
            todo: &[usize],
            at: usize,
            image: &mut Vec<usize>,
            out: &mut Vec<Homomorphism>,
        ) {
            if at == todo.len() {
                if let Ok(hom) = Homomorphism::check(g, h, image.clone()) {
                    out.push(hom);
                }
                return;
            }
            let a = todo[at];
            for cand in 0..h.order() {
                if g.element_order(a) % h.element_order(cand) != 0 {
                    continue;
                }
                image[a] = cand;
                let consistent = (0..g.order()).all(|x| {
                    (0..g.order()).all(|y| {
                        image[x] == usize::MAX
                            || image[y] == usize::MAX
                            || image[g.mul(x, y)] == usize::MAX
                            || image[g.mul(x, y)] == h.mul(image[x], image[y])
                    })
                });
                if consistent {
                    dfs(g, h, todo, at + 1, image, out);
                }
                image[a] = usize::MAX;
            }
        }
        dfs(self, other, &todo, 0, &mut image, &mut out);
        out.sort_by(|a, b| a.map.cmp(&b.map));
        out.dedup_by(|a, b| a.map == b.map);
        out
    }
}

/// A subgroup, stored as its sorted element list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subgroup {
    elements: Vec<usize>,
}

impl Subgroup {
    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.elements.binary_search(&g).is_ok()
    }

    pub fn is_trivial(&self, group: &FiniteGroup) -> bool {
        self.elements == [group.identity()]
    }
}

/// A homomorphism between two fixed finite groups, stored by images.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Homomorphism {
    map: Vec<usize>,
}

impl Homomorphism {
    /// Validates `map` as a homomorphism `source -> target`.
    pub fn check(
        source: &FiniteGroup,
        target: &FiniteGroup,
        map: Vec<usize>,
    ) -> Result<Self, GroupError> {
        assert_eq!(map.len(), source.order());
        for a in 0..source.order() {
            for b in 0..source.order() {
                if map[source.mul(a, b)] != target.mul(map[a], map[b]) {
                    return Err(GroupError::NotHomomorphism { a, b });
                }
            }
        }
        Ok(Homomorphism { map })
    }

    pub fn identity(group: &FiniteGroup) -> Self {
        Homomorphism {
            map: group.elements().collect(),
        }
    }

    pub fn trivial(source: &FiniteGroup, target: &FiniteGroup) -> Self {
        Homomorphism {
            map: vec![target.identity(); source.order()],
        }
    }

    #[inline]
    pub fn apply(&self, a: usize) -> usize {
        self.map[a]
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    /// The composite `other . self` (apply `self` first).
    pub fn then(&self, other: &Homomorphism) -> Homomorphism {
        Homomorphism {
            map: self.map.iter().map(|&a| other.map[a]).collect(),
        }
    }

    pub fn kernel(&self, source: &FiniteGroup, target: &FiniteGroup) -> Subgroup {
        let elements: Vec<usize> = source
            .elements()
            .filter(|&a| self.map[a] == target.identity())
            .collect();
        Subgroup { elements }
    }

    pub fn is_injective(&self) -> bool {
        let distinct: std::collections::BTreeSet<usize> = self.map.iter().copied().collect();
        distinct.len() == self.map.len()
    }

    /// The conjugate homomorphism `a -> g . self(a) . g^-1`.
    pub fn conjugate(&self, target: &FiniteGroup, g: usize) -> Homomorphism {
        Homomorphism {
            map: self
                .map
                .iter()
                .map(|&a| target.mul(target.mul(g, a), target.inv(g)))
                .collect(),
        }
    }
}
