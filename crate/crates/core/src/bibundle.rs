//! Principal bibundles and the Hilsum-Skandalis calculus.
//!
//! A bibundle from `H x| Y` to `G x| X` is a finite space `E` with anchors
//! `w: E -> Y` and `p: E -> X`, a left `G`-action and a right `H`-action
//! that commute and act along each other's fibers. Principality means `w`
//! is an open surjection and the left action is simply transitive on
//! `w`-fibers with order-continuous transport. Equivariant maps and
//! inverses of essential equivalences produce bibundles; composition is a
//! fiber product followed by a quotient; sections of `w` and natural
//! conjugacy of homomorphisms decide when a generalized map strictifies to
//! a G-map.

use crate::error::{BibundleError, GroupoidError};
use crate::group::{FiniteGroup, Homomorphism};
use crate::groupoid::{
    pronk_factorize, EquivariantMap, EssentialEquivalence, GeneralizedMap,
    NaturalTransformation, TranslationGroupoid,
};
use crate::gspace::GSpace;
use crate::poset::Poset;

/// A validated bibundle from `right` (`H x| Y`, anchor `w`) to `left`
/// (`G x| X`, anchor `p`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bibundle {
    left: TranslationGroupoid,
    right: TranslationGroupoid,
    total: Poset,
    p: Vec<usize>,
    w: Vec<usize>,
    /// `left_action[g * |E| + e] = g . e`
    left_action: Vec<usize>,
    /// `right_action[e * |H| + h] = e . h`
    right_action: Vec<usize>,
}

impl Bibundle {
    /// Validates all bibundle axioms: anchors continuous, both actions by
    /// order automorphisms, anchors compatible with the actions, actions
    /// along fibers, and commutation.
    #[allow(clippy::too_many_arguments)]
    pub fn check(
        left: TranslationGroupoid,
        right: TranslationGroupoid,
        total: Poset,
        p: Vec<usize>,
        w: Vec<usize>,
        left_action: Vec<usize>,
        right_action: Vec<usize>,
    ) -> Result<Self, BibundleError> {
        let ne = total.len();
        let g_ord = left.group().order();
        let h_ord = right.group().order();
        assert_eq!(p.len(), ne);
        assert_eq!(w.len(), ne);
        assert_eq!(left_action.len(), g_ord * ne);
        assert_eq!(right_action.len(), ne * h_ord);
        if let Some((a, b)) = total.order_preserving_violation(left.space.poset(), &p) {
            return Err(BibundleError::AnchorNotOrderPreserving { anchor: 'p', a, b });
        }
        if let Some((a, b)) = total.order_preserving_violation(right.space.poset(), &w) {
            return Err(BibundleError::AnchorNotOrderPreserving { anchor: 'w', a, b });
        }
        // both actions validate as group actions by order automorphisms
        GSpace::new(left.group().clone(), total.clone(), left_action.clone())?;
        let h_as_left: Vec<usize> = {
            // convert the right action to a left action via e * h^-1
            let mut v = vec![0; h_ord * ne];
            for h in right.group().elements() {
                let hinv = right.group().inv(h);
                for e in 0..ne {
                    v[h * ne + e] = right_action[e * h_ord + hinv];
                }
            }
            v
        };
        GSpace::new(right.group().clone(), total.clone(), h_as_left)?;
        for g in left.group().elements() {
            for e in 0..ne {
                let ge = left_action[g * ne + e];
                if p[ge] != left.space.act(g, p[e]) {
                    return Err(BibundleError::AnchorActionMismatch { anchor: 'p', g, e });
                }
                if w[ge] != w[e] {
                    return Err(BibundleError::AnchorActionMismatch { anchor: 'w', g, e });
                }
            }
        }
        for h in right.group().elements() {
            for e in 0..ne {
                let eh = right_action[e * h_ord + h];
                if w[eh] != right.space.act(right.group().inv(h), w[e]) {
                    return Err(BibundleError::AnchorActionMismatch { anchor: 'w', g: h, e });
                }
                if p[eh] != p[e] {
                    return Err(BibundleError::AnchorActionMismatch { anchor: 'p', g: h, e });
                }
            }
        }
        for g in left.group().elements() {
            for h in right.group().elements() {
                for e in 0..ne {
                    let ge_h = right_action[left_action[g * ne + e] * h_ord + h];
                    let g_eh = left_action[g * ne + right_action[e * h_ord + h]];
                    if ge_h != g_eh {
                        return Err(BibundleError::ActionsDoNotCommute { g, e, h });
                    }
                }
            }
        }
        Ok(Bibundle {
            left,
            right,
            total,
            p,
            w,
            left_action,
            right_action,
        })
    }

    pub fn left_groupoid(&self) -> &TranslationGroupoid {
        &self.left
    }

    pub fn right_groupoid(&self) -> &TranslationGroupoid {
        &self.right
    }

    pub fn total(&self) -> &Poset {
        &self.total
    }

    pub fn anchor_p(&self) -> &[usize] {
        &self.p
    }

    pub fn anchor_w(&self) -> &[usize] {
        &self.w
    }

    #[inline]
    pub fn act_left(&self, g: usize, e: usize) -> usize {
        self.left_action[g * self.total.len() + e]
    }

    #[inline]
    pub fn act_right(&self, e: usize, h: usize) -> usize {
        self.right_action[e * self.right.group().order() + h]
    }

    /// The identity bibundle of a groupoid.
    pub fn identity(gpd: &TranslationGroupoid) -> Self {
        hs_from_equivariant(&EquivariantMap::identity(gpd))
    }
}

/// A certificate that the right anchor is principal: a preimage assignment
/// for every base point, and the fiber transport of the left action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrincipalityCertificate {
    /// For each `y`, the canonical chosen preimage with `w(e) = y`.
    pub section_data: Vec<usize>,
    /// For each fiber pair `(e1, e2)` (same `w`), the unique `g` with
    /// `g . e2 = e1`, stored at `e1 * |E| + e2`.
    pub transport: Vec<Option<usize>>,
}

/// Verifies principality of the right anchor `w`: surjective, open, the
/// left action simply transitive on fibers, and the transport
/// order-continuous (the pullback map is a homeomorphism, not just a
/// bijection).
pub fn principality(bib: &Bibundle) -> Result<PrincipalityCertificate, BibundleError> {
    let ne = bib.total.len();
    let y_space = &bib.right.space;
    let mut section_data = Vec::with_capacity(y_space.len());
    for y in 0..y_space.len() {
        match (0..ne).find(|&e| bib.w[e] == y) {
            Some(e) => section_data.push(e),
            None => {
                return Err(BibundleError::NotPrincipal {
                    reason: format!("w misses base point {}", y),
                })
            }
        }
    }
    for e in 0..ne {
        for y in 0..y_space.len() {
            if y_space.poset().le(y, bib.w[e]) {
                let lifted = (0..ne).any(|e2| bib.total.le(e2, e) && bib.w[e2] == y);
                if !lifted {
                    return Err(BibundleError::NotPrincipal {
                        reason: format!(
                            "w is not open: {} below w({}) has no preimage below it",
                            y, e
                        ),
                    });
                }
            }
        }
    }
    let g_ord = bib.left.group().order();
    let mut transport = vec![None; ne * ne];
    for e1 in 0..ne {
        for e2 in 0..ne {
            if bib.w[e1] == bib.w[e2] {
                let carriers: Vec<usize> = (0..g_ord)
                    .filter(|&g| bib.act_left(g, e2) == e1)
                    .collect();
                if carriers.len() != 1 {
                    return Err(BibundleError::NotPrincipal {
                        reason: format!(
                            "left action is not simply transitive on the fiber pair ({}, {}): {} carriers",
                            e1, e2, carriers.len()
                        ),
                    });
                }
                transport[e1 * ne + e2] = Some(carriers[0]);
            }
        }
    }
    // homeomorphism (not just bijection): comparable fiber pairs must carry
    // equal transport, i.e. g.e <= g'.e' with e <= e' forces g = g'
    for e in 0..ne {
        for e2 in 0..ne {
            if bib.total.le(e, e2) {
                for g in 0..g_ord {
                    for g2 in 0..g_ord {
                        if g != g2 && bib.total.le(bib.act_left(g, e), bib.act_left(g2, e2)) {
                            return Err(BibundleError::NotPrincipal {
                                reason: format!(
                                    "transport is not continuous at ({}, {})",
                                    e, e2
                                ),
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(PrincipalityCertificate {
        section_data,
        transport,
    })
}

/// The bibundle of an equivariant map `f x| phi: K x| Z -> G x| X`:
/// total space `G x Z` with `w(g, z) = z`, `p(g, z) = g.phi(z)`,
/// `g'.(g, z) = (g'g, z)` and `(g, z).k = (g f(k), k^-1 z)`.
pub fn hs_from_equivariant(f: &EquivariantMap) -> Bibundle {
    let src = f.src().clone();
    let dst = f.dst().clone();
    let g_group = dst.group().clone();
    let k_group = src.group().clone();
    let nz = src.points();
    let ng = g_group.order();
    let total = crate::groupoid::discrete_times_poset(ng, src.space.poset());
    let ne = ng * nz;
    let idx = |g: usize, z: usize| g * nz + z;
    let mut w = vec![0; ne];
    let mut p = vec![0; ne];
    for g in 0..ng {
        for z in 0..nz {
            w[idx(g, z)] = z;
            p[idx(g, z)] = dst.space.act(g, f.apply(z));
        }
    }
    let mut left_action = vec![0; ng * ne];
    for g2 in 0..ng {
        for g in 0..ng {
            for z in 0..nz {
                left_action[g2 * ne + idx(g, z)] = idx(g_group.mul(g2, g), z);
            }
        }
    }
    let nk = k_group.order();
    let mut right_action = vec![0; ne * nk];
    for g in 0..ng {
        for z in 0..nz {
            for k in 0..nk {
                right_action[idx(g, z) * nk + k] = idx(
                    g_group.mul(g, f.hom().apply(k)),
                    src.space.act(k_group.inv(k), z),
                );
            }
        }
    }
    Bibundle::check(dst, src, total, p, w, left_action, right_action)
        .expect("the bibundle of an equivariant map satisfies the axioms")
}

/// The inverse bibundle of an essential equivalence
/// `sigma x| eps: K x| Z -> H x| Y`: total space `H x Z` with
/// `w(h, z) = h.eps(z)`, `p(h, z) = z`, `k.(h, z) = (h sigma(k^-1), k z)`
/// and `(h, z).h' = (h'^-1 h, z)`.
pub fn hs_inverse_of_equivalence(eq: &EssentialEquivalence) -> Bibundle {
    let f = eq.map();
    let src = f.src().clone(); // K x| Z
    let dst = f.dst().clone(); // H x| Y
    let h_group = dst.group().clone();
    let k_group = src.group().clone();
    let nz = src.points();
    let nh = h_group.order();
    let total = crate::groupoid::discrete_times_poset(nh, src.space.poset());
    let ne = nh * nz;
    let idx = |h: usize, z: usize| h * nz + z;
    let mut w = vec![0; ne];
    let mut p = vec![0; ne];
    for h in 0..nh {
        for z in 0..nz {
            w[idx(h, z)] = dst.space.act(h, f.apply(z));
            p[idx(h, z)] = z;
        }
    }
    let nk = k_group.order();
    let mut left_action = vec![0; nk * ne];
    for k in 0..nk {
        for h in 0..nh {
            for z in 0..nz {
                left_action[k * ne + idx(h, z)] = idx(
                    h_group.mul(h, f.hom().apply(k_group.inv(k))),
                    src.space.act(k, z),
                );
            }
        }
    }
    let mut right_action = vec![0; ne * nh];
    for h in 0..nh {
        for z in 0..nz {
            for h2 in 0..nh {
                right_action[idx(h, z) * nh + h2] = idx(h_group.mul(h_group.inv(h2), h), z);
            }
        }
    }
    Bibundle::check(src, dst, total, p, w, left_action, right_action)
        .expect("the inverse bibundle of an essential equivalence satisfies the axioms")
}

/// Composition of Hilsum-Skandalis maps: for `inner` from `K x| A` to
/// `H x| B` and `outer` from `H x| B` to `G x| C`, the composite total
/// space is the orbit space of the `H`-action
/// `h . (e, e') = (e h^-1, h e')` on the fiber product
/// `{(e, e') : w_outer(e) = p_inner(e')}`.
pub fn hs_compose(inner: &Bibundle, outer: &Bibundle) -> Result<Bibundle, BibundleError> {
    if inner.left != outer.right {
        return Err(BibundleError::MiddleMismatch);
    }
    let h_group = inner.left.group().clone();
    let n_out = outer.total.len();
    let n_in = inner.total.len();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for e in 0..n_out {
        for e2 in 0..n_in {
            if outer.w[e] == inner.p[e2] {
                pairs.push((e, e2));
            }
        }
    }
    let index_of = |t: &(usize, usize)| pairs.binary_search(t).unwrap();
    let n = pairs.len();
    let mut rel = Vec::new();
    for (i, &(a, b)) in pairs.iter().enumerate() {
        for (j, &(a2, b2)) in pairs.iter().enumerate() {
            if i != j && outer.total.le(a, a2) && inner.total.le(b, b2) {
                rel.push((i, j));
            }
        }
    }
    let product = Poset::from_relations(n, &rel).map_err(BibundleError::Space)?;
    let mut aux_action = Vec::with_capacity(h_group.order() * n);
    for h in h_group.elements() {
        let hinv = h_group.inv(h);
        for &(e, e2) in &pairs {
            let t = (outer.act_right(e, hinv), inner.act_left(h, e2));
            aux_action.push(index_of(&t));
        }
    }
    let aux = GSpace::new(h_group.clone(), product, aux_action).map_err(BibundleError::Space)?;
    let orbit_space = aux.orbit_space().map_err(BibundleError::Space)?;
    let classes = &orbit_space.classes;
    let class_of = &orbit_space.class_of;
    let m = classes.len();
    let mut w_star = vec![0; m];
    let mut p_star = vec![0; m];
    for (c, members) in classes.iter().enumerate() {
        let (e, e2) = pairs[members[0]];
        w_star[c] = inner.w[e2];
        p_star[c] = outer.p[e];
    }
    let g_group = outer.left.group().clone();
    let mut left_action = vec![0; g_group.order() * m];
    for g in g_group.elements() {
        for (c, members) in classes.iter().enumerate() {
            let (e, e2) = pairs[members[0]];
            left_action[g * m + c] = class_of[index_of(&(outer.act_left(g, e), e2))];
        }
    }
    let k_group = inner.right.group().clone();
    let mut right_action = vec![0; m * k_group.order()];
    for (c, members) in classes.iter().enumerate() {
        let (e, e2) = pairs[members[0]];
        for k in k_group.elements() {
            right_action[c * k_group.order() + k] = class_of[index_of(&(e, inner.act_right(e2, k)))];
        }
    }
    let composite = Bibundle::check(
        outer.left.clone(),
        inner.right.clone(),
        orbit_space.poset.clone(),
        p_star,
        w_star,
        left_action,
        right_action,
    )?;
    principality(&composite).map_err(|e| BibundleError::PrincipalityLost {
        reason: e.to_string(),
    })?;
    Ok(composite)
}

/// The bibundle of a generalized map, built directly as the orbit space of
/// the apex action on `G x H x Z` with classes
/// `(g, h, z) ~ (g n(k), h m(k), k^-1 z)`, anchors `w[g, h, z] = h.eps(z)`
/// and `p[g, h, z] = g.phi(z)`.
pub fn hs_from_generalized(span: &GeneralizedMap) -> Result<Bibundle, BibundleError> {
    let left = span.left().map(); // m x| eps : K x| Z -> H x| Y
    let right = span.right(); // n x| phi : K x| Z -> G x| X
    let k_group = span.apex().group().clone();
    let h_group = left.dst().group().clone();
    let g_group = right.dst().group().clone();
    let z_space = &span.apex().space;
    let nz = z_space.len();
    let nh = h_group.order();
    let ng = g_group.order();
    let idx = |g: usize, h: usize, z: usize| (g * nh + h) * nz + z;
    let product = crate::groupoid::discrete_times_poset(ng * nh, z_space.poset());
    let n = ng * nh * nz;
    let mut aux_action = Vec::with_capacity(k_group.order() * n);
    for k in k_group.elements() {
        let kinv = k_group.inv(k);
        for g in 0..ng {
            for h in 0..nh {
                for z in 0..nz {
                    let t = idx(
                        g_group.mul(g, right.hom().apply(kinv)),
                        h_group.mul(h, left.hom().apply(kinv)),
                        z_space.act(k, z),
                    );
                    aux_action.push(t);
                }
            }
        }
    }
    let aux = GSpace::new(k_group, product, aux_action).map_err(BibundleError::Space)?;
    let orbit_space = aux.orbit_space().map_err(BibundleError::Space)?;
    let classes = &orbit_space.classes;
    let class_of = &orbit_space.class_of;
    let m = classes.len();
    let decode = |point: usize| -> (usize, usize, usize) {
        let z = point % nz;
        let gh = point / nz;
        (gh / nh, gh % nh, z)
    };
    let mut w = vec![0; m];
    let mut p = vec![0; m];
    for (c, members) in classes.iter().enumerate() {
        let (g, h, z) = decode(members[0]);
        w[c] = left.dst().space.act(h, left.apply(z));
        p[c] = right.dst().space.act(g, right.apply(z));
    }
    let mut left_action = vec![0; ng * m];
    for g2 in 0..ng {
        for (c, members) in classes.iter().enumerate() {
            let (g, h, z) = decode(members[0]);
            left_action[g2 * m + c] = class_of[idx(g_group.mul(g2, g), h, z)];
        }
    }
    let mut right_action = vec![0; m * nh];
    for (c, members) in classes.iter().enumerate() {
        let (g, h, z) = decode(members[0]);
        for h2 in 0..nh {
            right_action[c * nh + h2] = class_of[idx(g, h_group.mul(h_group.inv(h2), h), z)];
        }
    }
    let bib = Bibundle::check(
        right.dst().clone(),
        left.dst().clone(),
        orbit_space.poset.clone(),
        p,
        w,
        left_action,
        right_action,
    )?;
    principality(&bib).map_err(|e| BibundleError::PrincipalityLost {
        reason: e.to_string(),
    })?;
    Ok(bib)
}

/// The generalized map of a principal bibundle: the span through the double
/// translation groupoid, realized as `G x H` acting on `E` by
/// `(g, h).e = g.e.h^-1`, with legs `e -> w(e)` over `(g, h) -> h` and
/// `e -> p(e)` over `(g, h) -> g`. The left leg is certified essential.
pub fn generalized_from_hs(bib: &Bibundle) -> Result<GeneralizedMap, BibundleError> {
    principality(bib)?;
    let g_group = bib.left.group().clone();
    let h_group = bib.right.group().clone();
    let ne = bib.total.len();
    let product = g_group.product(&h_group);
    let nh = h_group.order();
    let mut action = Vec::with_capacity(product.order() * ne);
    for gh in product.elements() {
        let g = gh / nh;
        let h = gh % nh;
        let hinv = h_group.inv(h);
        for e in 0..ne {
            action.push(bib.act_left(g, bib.act_right(e, hinv)));
        }
    }
    let space = GSpace::new(product.clone(), bib.total.clone(), action)
        .map_err(BibundleError::Space)?;
    let apex = TranslationGroupoid::new(space);
    let hom_w: Vec<usize> = product.elements().map(|gh| gh % nh).collect();
    let hom_p: Vec<usize> = product.elements().map(|gh| gh / nh).collect();
    let w_leg = EquivariantMap::check(
        apex.clone(),
        bib.right.clone(),
        hom_w,
        bib.w.clone(),
    )
    .map_err(BibundleError::Groupoid)?;
    let p_leg = EquivariantMap::check(apex, bib.left.clone(), hom_p, bib.p.clone())
        .map_err(BibundleError::Groupoid)?;
    GeneralizedMap::check(w_leg, p_leg).map_err(BibundleError::Groupoid)
}

/// Exhaustive backtracking search for an order-preserving global section of
/// the right anchor `w`. Absence is certified by exhaustion.
pub fn find_global_section(bib: &Bibundle) -> Option<Vec<usize>> {
    let y_poset = bib.right.space.poset();
    let ny = y_poset.len();
    let ne = bib.total.len();
    let order = y_poset.linear_extension();
    let mut tau = vec![usize::MAX; ny];
    fn dfs(
        bib: &Bibundle,
        y_poset: &Poset,
        order: &[usize],
        at: usize,
        ne: usize,
        tau: &mut Vec<usize>,
    ) -> bool {
        if at == order.len() {
            return true;
        }
        let y = order[at];
        for e in 0..ne {
            if bib.w[e] != y {
                continue;
            }
            let ok = order[..at].iter().all(|&y2| {
                let t2 = tau[y2];
                (!y_poset.le(y2, y) || bib.total.le(t2, e))
                    && (!y_poset.le(y, y2) || bib.total.le(e, t2))
            });
            if ok {
                tau[y] = e;
                if dfs(bib, y_poset, order, at + 1, ne, tau) {
                    return true;
                }
                tau[y] = usize::MAX;
            }
        }
        false
    }
    if dfs(bib, y_poset, &order, 0, ne, &mut tau) {
        debug_assert!((0..ny).all(|y| bib.w[tau[y]] == y));
        Some(tau)
    } else {
        None
    }
}

/// Searches for a continuous `lambda: Z -> G` with
/// `n(k) = lambda(k z) m(k) lambda(z)^-1` for all `k, z`. Continuity makes
/// `lambda` constant on fence components, so the search assigns one group
/// element per component, in canonical component order; absence is
/// certified by exhaustion.
pub fn find_natural_conjugacy(
    z_space: &GSpace,
    m: &Homomorphism,
    n: &Homomorphism,
    target: &FiniteGroup,
) -> Option<Vec<usize>> {
    let comps = z_space.poset().components();
    let comp_of = z_space.poset().component_of();
    let r = comps.len();
    if r == 0 {
        return Some(Vec::new());
    }
    // each constraint ties the component of z to the component of k.z
    let mut constraints: Vec<(usize, usize, usize)> = Vec::new(); // (k, c_from, c_to)
    for k in z_space.group().elements() {
        for (c, members) in comps.iter().enumerate() {
            let c_to = comp_of[z_space.act(k, members[0])];
            constraints.push((k, c, c_to));
        }
    }
    constraints.sort_unstable();
    constraints.dedup();
    let mut lambda = vec![usize::MAX; r];
    fn dfs(
        target: &FiniteGroup,
        m: &Homomorphism,
        n: &Homomorphism,
        constraints: &[(usize, usize, usize)],
        at: usize,
        r: usize,
        lambda: &mut Vec<usize>,
    ) -> bool {
        if at == r {
            return true;
        }
        'cand: for gamma in target.elements() {
            lambda[at] = gamma;
            for &(k, c_from, c_to) in constraints {
                if lambda[c_from] != usize::MAX && lambda[c_to] != usize::MAX {
                    let rhs = target.mul(
                        target.mul(lambda[c_to], m.apply(k)),
                        target.inv(lambda[c_from]),
                    );
                    if n.apply(k) != rhs {
                        lambda[at] = usize::MAX;
                        continue 'cand;
                    }
                }
            }
            if dfs(target, m, n, constraints, at + 1, r, lambda) {
                return true;
            }
            lambda[at] = usize::MAX;
        }
        false
    }
    if dfs(target, m, n, &constraints, 0, r, &mut lambda) {
        Some((0..z_space.len()).map(|z| lambda[comp_of[z]]).collect())
    } else {
        None
    }
}

/// The result of strictifying a generalized map to a G-map.
#[derive(Debug, Clone)]
pub struct GMapResult {
    /// The G-map (identity homomorphism) `Y -> X`.
    pub map: EquivariantMap,
    /// `lambda` certifying the 2-isomorphism with the input span.
    pub witness: NaturalTransformation,
}

/// Strictifies a generalized map between groupoids over the same group `G`
/// into a G-map, when the two homomorphisms are naturally conjugate.
///
/// The span is first normalized through the quotient/induction
/// factorization of its left leg (the theorem's proof path; this also
/// re-validates the leg), then a conjugacy `lambda` is searched; on
/// success the G-map is `phi'(y) = g lambda(z)^-1 phi(z)` for any choice
/// `g.eps(z) = y`, checked to be independent of the choice.
pub fn strictify(span: &GeneralizedMap) -> Result<Option<GMapResult>, BibundleError> {
    let left = span.left().map();
    let right = span.right();
    if left.dst().group() != right.dst().group() {
        return Err(BibundleError::Groupoid(GroupoidError::Mismatch(
            "strictify requires both target groupoids over the same group".into(),
        )));
    }
    pronk_factorize(span.left()).map_err(BibundleError::Groupoid)?;
    let g_group = left.dst().group().clone();
    let z_space = &span.apex().space;
    let lambda = match find_natural_conjugacy(z_space, left.hom(), right.hom(), &g_group) {
        None => return Ok(None),
        Some(l) => l,
    };
    let y_space = &left.dst().space;
    let x_space = &right.dst().space;
    let mut phi_prime = vec![usize::MAX; y_space.len()];
    for y in 0..y_space.len() {
        for g in g_group.elements() {
            for z in 0..z_space.len() {
                if y_space.act(g, left.apply(z)) == y {
                    let value = x_space.act(
                        g_group.mul(g, g_group.inv(lambda[z])),
                        right.apply(z),
                    );
                    if phi_prime[y] == usize::MAX {
                        phi_prime[y] = value;
                    } else if phi_prime[y] != value {
                        return Err(BibundleError::InconsistentChoices { y });
                    }
                }
            }
        }
        if phi_prime[y] == usize::MAX {
            // unreachable for a certified essential left leg
            return Err(BibundleError::InconsistentChoices { y });
        }
    }
    let identity_hom: Vec<usize> = g_group.elements().collect();
    let gmap = EquivariantMap::check(
        left.dst().clone(),
        right.dst().clone(),
        identity_hom,
        phi_prime,
    )
    .map_err(BibundleError::Groupoid)?;
    let composite = left.then(&gmap).map_err(BibundleError::Groupoid)?;
    let witness = NaturalTransformation::check(&composite, right, lambda)
        .map_err(BibundleError::Groupoid)?;
    Ok(Some(GMapResult {
        map: gmap,
        witness,
    }))
}

/// Exhaustive search (with fiber-profile pruning and orbit propagation) for
/// an isomorphism of bibundles: an order-isomorphism of totals commuting
/// with both anchors and both actions. Requires equal left/right
/// groupoids; absence is certified by exhaustion.
pub fn bibundle_isomorphic(a: &Bibundle, b: &Bibundle) -> Option<Vec<usize>> {
    if a.left != b.left || a.right != b.right || a.total.len() != b.total.len() {
        return None;
    }
    let ne = a.total.len();
    // fiber profiles must agree
    for y in 0..a.right.points() {
        let fa = (0..ne).filter(|&e| a.w[e] == y).count();
        let fb = (0..ne).filter(|&e| b.w[e] == y).count();
        if fa != fb {
            return None;
        }
    }
    for x in 0..a.left.points() {
        let fa = (0..ne).filter(|&e| a.p[e] == x).count();
        let fb = (0..ne).filter(|&e| b.p[e] == x).count();
        if fa != fb {
            return None;
        }
    }
    let degree = |bib: &Bibundle, e: usize| -> (usize, usize) {
        let below = (0..ne).filter(|&e2| e2 != e && bib.total.le(e2, e)).count();
        let above = (0..ne).filter(|&e2| e2 != e && bib.total.le(e, e2)).count();
        (below, above)
    };
    let sig_a: Vec<_> = (0..ne).map(|e| (a.w[e], a.p[e], degree(a, e))).collect();
    let sig_b: Vec<_> = (0..ne).map(|e| (b.w[e], b.p[e], degree(b, e))).collect();
    let g_ord = a.left.group().order();
    let h_ord = a.right.group().order();
    let mut image = vec![usize::MAX; ne];
    let mut used = vec![false; ne];

    fn dfs(
        a: &Bibundle,
        b: &Bibundle,
        sig_a: &[(usize, usize, (usize, usize))],
        sig_b: &[(usize, usize, (usize, usize))],
        g_ord: usize,
        h_ord: usize,
        image: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        let ne = image.len();
        let e = match image.iter().position(|&v| v == usize::MAX) {
            None => return true,
            Some(e) => e,
        };
        'cand: for cand in 0..ne {
            if used[cand] || sig_a[e] != sig_b[cand] {
                continue;
            }
            // propagate over the (G, H)-orbit of e
            let mut assignments: Vec<(usize, usize)> = Vec::new();
            for g in 0..g_ord {
                for h in 0..h_ord {
                    let from = a.act_right(a.act_left(g, e), h);
                    let to = b.act_right(b.act_left(g, cand), h);
                    if image[from] != usize::MAX {
                        if image[from] != to {
                            continue 'cand;
                        }
                        continue;
                    }
                    match assignments.iter().find(|&&(f, _)| f == from) {
                        Some(&(_, prev)) => {
                            if prev != to {
                                continue 'cand;
                            }
                        }
                        None => {
                            if used[to] || assignments.iter().any(|&(_, t)| t == to) {
                                continue 'cand;
                            }
                            assignments.push((from, to));
                        }
                    }
                }
            }
            if assignments.iter().any(|&(f, t)| sig_a[f] != sig_b[t]) {
                continue 'cand;
            }
            for &(f, t) in &assignments {
                image[f] = t;
                used[t] = true;
            }
            let consistent = (0..ne).all(|x| {
                (0..ne).all(|y| {
                    image[x] == usize::MAX
                        || image[y] == usize::MAX
                        || a.total.le(x, y) == b.total.le(image[x], image[y])
                })
            });
            if consistent && dfs(a, b, sig_a, sig_b, g_ord, h_ord, image, used) {
                return true;
            }
            for &(f, t) in &assignments {
                image[f] = usize::MAX;
                used[t] = false;
            }
        }
        false
    }

    if dfs(
        a, b, &sig_a, &sig_b, g_ord, h_ord, &mut image, &mut used,
    ) {
        Some(image)
    } else {
        None
    }
}
