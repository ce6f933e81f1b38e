//! Translation groupoids, equivariant maps, essential equivalences and
//! Morita equivalence.
//!
//! A translation groupoid `G x| X` has the points of `X` as objects and an
//! arrow `(g, x): x -> g.x` for every group element. Equivariant maps are
//! pairs of a group homomorphism and a compatible order-preserving point
//! map. Essential equivalences are the equivariant maps that are
//! essentially surjective (they reach every orbit, openly) and fully
//! faithful (they induce bijections of arrow sets); Morita equivalence is
//! the relation spanned by them.

use std::collections::VecDeque;

use crate::error::GroupoidError;
use crate::group::{FiniteGroup, Homomorphism, Subgroup};
use crate::gspace::GSpace;
use crate::poset::Poset;

/// A group action packaged as a groupoid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranslationGroupoid {
    pub space: GSpace,
}

impl TranslationGroupoid {
    pub fn new(space: GSpace) -> Self {
        TranslationGroupoid { space }
    }

    pub fn group(&self) -> &FiniteGroup {
        self.space.group()
    }

    pub fn points(&self) -> usize {
        self.space.len()
    }

    /// Combined size used by search budgets.
    pub fn size(&self) -> usize {
        self.space.len() + self.group().order()
    }
}

/// A validated equivariant map of translation groupoids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivariantMap {
    src: TranslationGroupoid,
    dst: TranslationGroupoid,
    hom: Homomorphism,
    map: Vec<usize>,
}

impl EquivariantMap {
    /// Validates (homomorphism, point map) as an equivariant map, reporting
    /// the first violated condition with a witness.
    pub fn check(
        src: TranslationGroupoid,
        dst: TranslationGroupoid,
        hom_map: Vec<usize>,
        point_map: Vec<usize>,
    ) -> Result<Self, GroupoidError> {
        if hom_map.len() != src.group().order() || point_map.len() != src.points() {
            return Err(GroupoidError::Mismatch(format!(
                "map data sized {}/{} for a groupoid with {} group elements and {} points",
                hom_map.len(),
                point_map.len(),
                src.group().order(),
                src.points()
            )));
        }
        for &g in &hom_map {
            if g >= dst.group().order() {
                return Err(GroupoidError::Mismatch(format!(
                    "homomorphism image {} out of range",
                    g
                )));
            }
        }
        for &x in &point_map {
            if x >= dst.points() {
                return Err(GroupoidError::Mismatch(format!(
                    "point image {} out of range",
                    x
                )));
            }
        }
        let hom = Homomorphism::check(src.group(), dst.group(), hom_map)?;
        if let Some((a, b)) = src
            .space
            .poset()
            .order_preserving_violation(dst.space.poset(), &point_map)
        {
            return Err(GroupoidError::NotOrderPreserving { a, b });
        }
        for k in src.group().elements() {
            for z in 0..src.points() {
                if point_map[src.space.act(k, z)] != dst.space.act(hom.apply(k), point_map[z]) {
                    return Err(GroupoidError::NotEquivariant { k, z });
                }
            }
        }
        Ok(EquivariantMap {
            src,
            dst,
            hom,
            map: point_map,
        })
    }

    pub fn identity(gpd: &TranslationGroupoid) -> Self {
        EquivariantMap {
            src: gpd.clone(),
            dst: gpd.clone(),
            hom: Homomorphism::identity(gpd.group()),
            map: (0..gpd.points()).collect(),
        }
    }

    pub fn src(&self) -> &TranslationGroupoid {
        &self.src
    }

    pub fn dst(&self) -> &TranslationGroupoid {
        &self.dst
    }

    pub fn hom(&self) -> &Homomorphism {
        &self.hom
    }

    pub fn point_map(&self) -> &[usize] {
        &self.map
    }

    #[inline]
    pub fn apply(&self, z: usize) -> usize {
        self.map[z]
    }

    /// The composite `other . self` (apply `self` first).
    pub fn then(&self, other: &EquivariantMap) -> Result<EquivariantMap, GroupoidError> {
        if self.dst != other.src {
            return Err(GroupoidError::Mismatch(
                "composition target/source mismatch".into(),
            ));
        }
        Ok(EquivariantMap {
            src: self.src.clone(),
            dst: other.dst.clone(),
            hom: self.hom.then(&other.hom),
            map: self.map.iter().map(|&z| other.map[z]).collect(),
        })
    }

    /// Whether this map is an isomorphism of groupoids: the homomorphism is
    /// bijective and the point map is an order-isomorphism.
    pub fn is_isomorphism(&self) -> bool {
        if self.src.points() != self.dst.points()
            || self.src.group().order() != self.dst.group().order()
        {
            return false;
        }
        if !self.hom.is_injective() {
            return false;
        }
        let mut seen = vec![false; self.dst.points()];
        for &x in &self.map {
            if seen[x] {
                return false;
            }
            seen[x] = true;
        }
        // inverse order-preservation
        for a in 0..self.src.points() {
            for b in 0..self.src.points() {
                if self.dst.space.poset().le(self.map[a], self.map[b])
                    && !self.src.space.poset().le(a, b)
                {
                    return false;
                }
            }
        }
        true
    }

    /// The inverse of an isomorphism.
    pub fn inverse_isomorphism(&self) -> Option<EquivariantMap> {
        if !self.is_isomorphism() {
            return None;
        }
        let mut hom_inv = vec![0; self.dst.group().order()];
        for a in self.src.group().elements() {
            hom_inv[self.hom.apply(a)] = a;
        }
        let mut map_inv = vec![0; self.dst.points()];
        for z in 0..self.src.points() {
            map_inv[self.map[z]] = z;
        }
        EquivariantMap::check(self.dst.clone(), self.src.clone(), hom_inv, map_inv).ok()
    }
}

/// A validated natural transformation between parallel equivariant maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NaturalTransformation {
    lambda: Vec<usize>,
}

impl NaturalTransformation {
    /// Validates `lambda: Z -> G` as a natural transformation from `phi` to
    /// `psi`, checking the arrow condition, naturality, and continuity
    /// (local constancy on fence components).
    pub fn check(
        phi: &EquivariantMap,
        psi: &EquivariantMap,
        lambda: Vec<usize>,
    ) -> Result<Self, GroupoidError> {
        if phi.src != psi.src || phi.dst != psi.dst {
            return Err(GroupoidError::Mismatch(
                "natural transformation requires parallel maps".into(),
            ));
        }
        let z_space = &phi.src.space;
        let target = &phi.dst.space;
        if lambda.len() != z_space.len() {
            return Err(GroupoidError::Mismatch(
                "lambda must assign one group element per point".into(),
            ));
        }
        for z in 0..z_space.len() {
            if target.act(lambda[z], phi.apply(z)) != psi.apply(z) {
                return Err(GroupoidError::ArrowMismatch { z });
            }
        }
        let g = target.group();
        for k in z_space.group().elements() {
            for z in 0..z_space.len() {
                let lhs = g.mul(psi.hom.apply(k), lambda[z]);
                let rhs = g.mul(lambda[z_space.act(k, z)], phi.hom.apply(k));
                if lhs != rhs {
                    return Err(GroupoidError::NaturalityFailure { k, z });
                }
            }
        }
        for a in 0..z_space.len() {
            for b in 0..z_space.len() {
                if a != b && z_space.poset().comparable(a, b) && lambda[a] != lambda[b] {
                    return Err(GroupoidError::NotLocallyConstant { a, b });
                }
            }
        }
        Ok(NaturalTransformation { lambda })
    }

    pub fn lambda(&self) -> &[usize] {
        &self.lambda
    }
}

/// A certified essential equivalence: the map together with, for every
/// target point `y`, a witness `(z, h)` with `eps(z) = h.y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EssentialEquivalence {
    map: EquivariantMap,
    witnesses: Vec<(usize, usize)>,
}

impl EssentialEquivalence {
    pub fn map(&self) -> &EquivariantMap {
        &self.map
    }

    pub fn witnesses(&self) -> &[(usize, usize)] {
        &self.witnesses
    }

    pub fn identity(gpd: &TranslationGroupoid) -> Self {
        check_essential_equivalence(&EquivariantMap::identity(gpd)).expect("identity is essential")
    }

    /// Certified composition of essential equivalences.
    pub fn then(&self, other: &EssentialEquivalence) -> Result<EssentialEquivalence, GroupoidError> {
        check_essential_equivalence(&self.map.then(&other.map)?)
    }
}

/// Verifies the two essential-equivalence conditions for a validated
/// equivariant map and returns the certificate.
///
/// Essentially surjective is checked as: every target orbit is reached, and
/// the point map sends minimal open sets onto open sets (openness of the
/// composite `(z, h) -> h.eps(z)`). Fully faithful is checked as the arrow
/// set bijection `{k : z' = k.z} = {h : eps(z') = h.eps(z)}` through the
/// homomorphism, for every pair `(z, z')`.
pub fn check_essential_equivalence(
    f: &EquivariantMap,
) -> Result<EssentialEquivalence, GroupoidError> {
    let src = &f.src.space;
    let dst = &f.dst.space;
    let mut witnesses = Vec::with_capacity(dst.len());
    for y in 0..dst.len() {
        let mut found = None;
        'search: for z in 0..src.len() {
            for h in dst.group().elements() {
                if f.apply(z) == dst.act(h, y) {
                    found = Some((z, h));
                    break 'search;
                }
            }
        }
        match found {
            Some(w) => witnesses.push(w),
            None => return Err(GroupoidError::NotEssentiallySurjective { y }),
        }
    }
    for z in 0..src.len() {
        for y in 0..dst.len() {
            if dst.poset().le(y, f.apply(z)) {
                let lifted = (0..src.len()).any(|z2| src.poset().le(z2, z) && f.apply(z2) == y);
                if !lifted {
                    return Err(GroupoidError::NotOpen { z, y });
                }
            }
        }
    }
    for z in 0..src.len() {
        for z2 in 0..src.len() {
            let source_arrows: Vec<usize> = src
                .group()
                .elements()
                .filter(|&k| src.act(k, z) == z2)
                .collect();
            let target_arrows: Vec<usize> = dst
                .group()
                .elements()
                .filter(|&h| dst.act(h, f.apply(z)) == f.apply(z2))
                .collect();
            let mut images: Vec<usize> = source_arrows.iter().map(|&k| f.hom.apply(k)).collect();
            images.sort_unstable();
            images.dedup();
            let injective = images.len() == source_arrows.len();
            let onto = images.len() == target_arrows.len()
                && images.iter().all(|g| target_arrows.contains(g));
            if !injective || !onto {
                return Err(GroupoidError::NotFullyFaithful {
                    z,
                    z2,
                    arrows_source: source_arrows.len(),
                    arrows_target: target_arrows.len(),
                });
            }
        }
    }
    Ok(EssentialEquivalence {
        map: f.clone(),
        witnesses,
    })
}

/// The product poset of a discrete group factor with a poset: point
/// `(g, z)` has index `g * z_len + z`, and `(g, z) <= (g', z')` iff
/// `g = g'` and `z <= z'`.
pub(crate) fn discrete_times_poset(g_order: usize, z: &Poset) -> Poset {
    let nz = z.len();
    let n = g_order * nz;
    let mut pairs = Vec::new();
    for g in 0..g_order {
        for (a, b) in z.strict_pairs() {
            pairs.push((g * nz + a, g * nz + b));
        }
    }
    Poset::from_relations(n, &pairs).unwrap()
}

/// Quotient move: `K x| Z  ->  K/L x| Z/L` for a normal subgroup `L`
/// acting freely. The result is certified.
pub fn build_quotient_equivalence(
    src: &TranslationGroupoid,
    l: &Subgroup,
) -> Result<EssentialEquivalence, GroupoidError> {
    let k = src.group();
    let z = &src.space;
    if let Err((l_el, g)) = k.is_normal(l) {
        return Err(GroupoidError::NotNormal { l: l_el, g });
    }
    if let Err((l_el, z_pt)) = z.acts_freely(l) {
        return Err(GroupoidError::NotFree { l: l_el, z: z_pt });
    }
    let (quotient_group, coset_of, _reps) = k.quotient(l);
    // Z/L as the orbit space of the restricted action.
    let restricted = z.restrict_group(l);
    let orbit_space = restricted.orbit_space()?;
    let classes = orbit_space.classes.clone();
    let class_of = orbit_space.class_of.clone();
    let m = classes.len();
    let mut action = vec![0usize; quotient_group.order() * m];
    for kk in k.elements() {
        let kbar = coset_of[kk];
        for (c, members) in classes.iter().enumerate() {
            action[kbar * m + c] = class_of[z.act(kk, members[0])];
        }
    }
    let quotient_space = GSpace::new(quotient_group, orbit_space.poset.clone(), action)?;
    let dst = TranslationGroupoid::new(quotient_space);
    let map = EquivariantMap::check(src.clone(), dst, coset_of.clone(), class_of)?;
    check_essential_equivalence(&map)
}

/// The balanced product `G x_K Z` along an arbitrary homomorphism
/// `j: K -> G`: classes of `(g, z)` under `(g j(k)^-1, k z) ~ (g, z)`,
/// with the representative-wise order
/// `[g, z] <= [g', z']  iff  exists k: g' = g k^-1 and k.z <= z'`,
/// realized as the orbit space of the auxiliary K-action on `G x Z`.
/// Returns the induced groupoid and the point map `z -> [e, z]`.
pub fn induced_groupoid(
    src: &TranslationGroupoid,
    big: &FiniteGroup,
    j: &Homomorphism,
) -> Result<(TranslationGroupoid, Vec<usize>), GroupoidError> {
    Homomorphism::check(src.group(), big, j.map().to_vec())?;
    let k = src.group();
    let z = &src.space;
    let nz = z.len();
    let product = discrete_times_poset(big.order(), z.poset());
    let mut aux_action = Vec::with_capacity(k.order() * product.len());
    for kk in k.elements() {
        for g in big.elements() {
            for zz in 0..nz {
                let g2 = big.mul(g, big.inv(j.apply(kk)));
                let z2 = z.act(kk, zz);
                aux_action.push(g2 * nz + z2);
            }
        }
    }
    let aux = GSpace::new(k.clone(), product, aux_action)?;
    let orbit_space = aux.orbit_space()?;
    let classes = orbit_space.classes.clone();
    let class_of = orbit_space.class_of.clone();
    let m = classes.len();
    let mut action = vec![0usize; big.order() * m];
    for g0 in big.elements() {
        for (c, members) in classes.iter().enumerate() {
            let (g, zz) = (members[0] / nz, members[0] % nz);
            action[g0 * m + c] = class_of[big.mul(g0, g) * nz + zz];
        }
    }
    let induced_space = GSpace::new(big.clone(), orbit_space.poset.clone(), action)?;
    let dst = TranslationGroupoid::new(induced_space);
    let e = big.identity();
    let point_map: Vec<usize> = (0..nz).map(|zz| class_of[e * nz + zz]).collect();
    Ok((dst, point_map))
}

/// Induction move: `K x| Z  ->  G x| (G x_K Z)` along an injective
/// homomorphism. The result is certified.
pub fn build_induction_equivalence(
    src: &TranslationGroupoid,
    big: &FiniteGroup,
    embedding: &Homomorphism,
) -> Result<EssentialEquivalence, GroupoidError> {
    if !embedding.is_injective() {
        let map = embedding.map();
        let mut witness = (0, 0);
        'outer: for a in 0..map.len() {
            for b in (a + 1)..map.len() {
                if map[a] == map[b] {
                    witness = (a, b);
                    break 'outer;
                }
            }
        }
        return Err(GroupoidError::Group(crate::error::GroupError::NotInjective {
            a: witness.0,
            b: witness.1,
        }));
    }
    let (dst, point_map) = induced_groupoid(src, big, embedding)?;
    let map = EquivariantMap::check(src.clone(), dst, embedding.map().to_vec(), point_map)?;
    check_essential_equivalence(&map)
}

/// The Pronk-Scull factorization of an essential equivalence into a
/// quotient move, an induction move, and an isomorphism onto the target.
#[derive(Debug, Clone)]
pub struct PronkFactorization {
    /// The kernel of the homomorphism; it acts freely for certified input.
    pub kernel: Subgroup,
    /// `K x| Z -> K/L x| Z/L`
    pub quotient: EssentialEquivalence,
    /// `K/L x| Z/L -> H x| (H x_{K/L} Z/L)`
    pub induction: EssentialEquivalence,
    /// The equivariant order-isomorphism onto the original target.
    pub iso: EquivariantMap,
    /// Certifies that the composite of the three equals the input.
    pub witness: NaturalTransformation,
}

/// Factorizes a certified essential equivalence as
/// `K x| Z -> K/L x| Z/L -> H x| (H x_{K/L} Z/L) ~= H x| Y`
/// with `L` the kernel of the homomorphism.
pub fn pronk_factorize(f: &EssentialEquivalence) -> Result<PronkFactorization, GroupoidError> {
    let map = &f.map;
    let k = map.src.group();
    let h = map.dst.group();
    let kernel = map.hom.kernel(k, h);
    if map.src.space.acts_freely(&kernel).is_err() {
        return Err(GroupoidError::KernelNotFree);
    }
    let quotient = build_quotient_equivalence(&map.src, &kernel)?;
    let quotient_gpd = quotient.map().dst().clone();
    // the induced injective homomorphism K/L -> H
    let (_, coset_of, reps) = k.quotient(&kernel);
    debug_assert_eq!(coset_of.len(), k.order());
    let embedding_map: Vec<usize> = reps.iter().map(|&r| map.hom.apply(r)).collect();
    let embedding = Homomorphism::check(quotient_gpd.group(), h, embedding_map)?;
    let induction = build_induction_equivalence(&quotient_gpd, h, &embedding)?;
    let induced_gpd = induction.map().dst().clone();

    // the isomorphism [g, [z]] -> g . eps(z) onto the original target
    let zl_members: Vec<Vec<usize>> = {
        // recover the L-classes of Z from the quotient move's point map
        let m = quotient_gpd.points();
        let mut members = vec![Vec::new(); m];
        for (z, &c) in quotient.map().point_map().iter().enumerate() {
            members[c].push(z);
        }
        members
    };
    let mut iso_map = vec![usize::MAX; induced_gpd.points()];
    for c in 0..induced_gpd.points() {
        // decode each member of the induced class as (g, [z]) and evaluate
        let mut value = usize::MAX;
        let members = induced_members(&induction, c);
        for (g, zl) in members {
            let z0 = zl_members[zl][0];
            let v = map.dst.space.act(g, map.apply(z0));
            if value == usize::MAX {
                value = v;
            } else if value != v {
                return Err(GroupoidError::NoIsomorphismFound);
            }
        }
        iso_map[c] = value;
    }
    let identity_hom: Vec<usize> = h.elements().collect();
    let iso = EquivariantMap::check(
        induced_gpd.clone(),
        map.dst.clone(),
        identity_hom,
        iso_map,
    )?;
    if !iso.is_isomorphism() {
        return Err(GroupoidError::NoIsomorphismFound);
    }
    let composite = quotient.map().then(induction.map())?.then(&iso)?;
    if composite.hom != map.hom || composite.map != map.map {
        return Err(GroupoidError::NoIsomorphismFound);
    }
    let identity_lambda = vec![h.identity(); map.src.points()];
    let witness = NaturalTransformation::check(&composite, map, identity_lambda)?;
    Ok(PronkFactorization {
        kernel,
        quotient,
        induction,
        iso,
        witness,
    })
}

/// Decodes the members of an induced-space class as `(g, base_point)`
/// pairs: every class is `[g, z] = g . eps(z)` for the inclusion `eps`.
fn induced_members(induction: &EssentialEquivalence, class: usize) -> Vec<(usize, usize)> {
    let dst = induction.map().dst();
    let big = dst.group();
    let eps = induction.map().point_map();
    let mut out = Vec::new();
    for g in big.elements() {
        for (z, &ez) in eps.iter().enumerate() {
            if dst.space.act(g, ez) == class {
                out.push((g, z));
            }
        }
    }
    debug_assert!(!out.is_empty());
    out
}

/// A generalized map: a span whose left leg is a certified essential
/// equivalence and whose right leg is an equivariant map out of the same
/// apex.
#[derive(Debug, Clone)]
pub struct GeneralizedMap {
    left: EssentialEquivalence,
    right: EquivariantMap,
}

impl GeneralizedMap {
    pub fn check(left: EquivariantMap, right: EquivariantMap) -> Result<Self, GroupoidError> {
        if left.src != right.src {
            return Err(GroupoidError::Mismatch(
                "span legs must share their apex groupoid".into(),
            ));
        }
        let left = check_essential_equivalence(&left)
            .map_err(|e| GroupoidError::LeftLegFails(Box::new(e)))?;
        Ok(GeneralizedMap { left, right })
    }

    pub fn left(&self) -> &EssentialEquivalence {
        &self.left
    }

    pub fn right(&self) -> &EquivariantMap {
        &self.right
    }

    pub fn apex(&self) -> &TranslationGroupoid {
        self.right.src()
    }

    /// The identity span on a groupoid.
    pub fn identity(gpd: &TranslationGroupoid) -> Self {
        GeneralizedMap {
            left: EssentialEquivalence::identity(gpd),
            right: EquivariantMap::identity(gpd),
        }
    }
}

/// A Morita span: both legs certified essential equivalences.
#[derive(Debug, Clone)]
pub struct MoritaSpan {
    left: EssentialEquivalence,
    right: EssentialEquivalence,
}

impl MoritaSpan {
    /// Certifies both legs of a span.
    pub fn check(left: EquivariantMap, right: EquivariantMap) -> Result<Self, GroupoidError> {
        if left.src != right.src {
            return Err(GroupoidError::Mismatch(
                "span legs must share their apex groupoid".into(),
            ));
        }
        let left = check_essential_equivalence(&left)
            .map_err(|e| GroupoidError::LeftLegFails(Box::new(e)))?;
        let right = check_essential_equivalence(&right)
            .map_err(|e| GroupoidError::RightLegFails(Box::new(e)))?;
        Ok(MoritaSpan { left, right })
    }

    pub fn left(&self) -> &EssentialEquivalence {
        &self.left
    }

    pub fn right(&self) -> &EssentialEquivalence {
        &self.right
    }

    pub fn apex(&self) -> &TranslationGroupoid {
        self.left.map().src()
    }
}

/// An isomorphism of groupoids: a compatible pair of a group isomorphism
/// and an order-isomorphism, found by backtracking. `None` when none exists.
pub fn groupoid_isomorphism(
    a: &TranslationGroupoid,
    b: &TranslationGroupoid,
) -> Option<EquivariantMap> {
    if a.points() != b.points() || a.group().order() != b.group().order() {
        return None;
    }
    // enumerate group isomorphisms via backtracking on element images
    let ga = a.group().clone();
    let gb = b.group().clone();
    let orders_a: Vec<usize> = ga.elements().map(|x| ga.element_order(x)).collect();
    let orders_b: Vec<usize> = gb.elements().map(|x| gb.element_order(x)).collect();
    {
        let mut oa = orders_a.clone();
        let mut ob = orders_b.clone();
        oa.sort_unstable();
        ob.sort_unstable();
        if oa != ob {
            return None;
        }
    }
    let mut image = vec![usize::MAX; ga.order()];
    let mut used = vec![false; gb.order()];
    image[ga.identity()] = gb.identity();
    used[gb.identity()] = true;
    let todo: Vec<usize> = ga.elements().filter(|&x| x != ga.identity()).collect();
    let mut result = None;
    group_iso_dfs(
        a, b, &ga, &gb, &orders_a, &orders_b, &todo, 0, &mut image, &mut used, &mut result,
    );
    result
}

#[allow(clippy::too_many_arguments)]
fn group_iso_dfs(
    a: &TranslationGroupoid,
    b: &TranslationGroupoid,
    ga: &FiniteGroup,
    gb: &FiniteGroup,
    orders_a: &[usize],
    orders_b: &[usize],
    todo: &[usize],
    at: usize,
    image: &mut Vec<usize>,
    used: &mut Vec<bool>,
    result: &mut Option<EquivariantMap>,
) {
    if result.is_some() {
        return;
    }
    if at == todo.len() {
        if let Some(point_map) = equivariant_point_iso(a, b, image) {
            if let Ok(map) =
                EquivariantMap::check(a.clone(), b.clone(), image.clone(), point_map)
            {
                if map.is_isomorphism() {
                    *result = Some(map);
                }
            }
        }
        return;
    }
    let x = todo[at];
    for cand in gb.elements() {
        if used[cand] || orders_a[x] != orders_b[cand] {
            continue;
        }
        image[x] = cand;
        used[cand] = true;
        let consistent = ga.elements().all(|p| {
            ga.elements().all(|q| {
                image[p] == usize::MAX
                    || image[q] == usize::MAX
                    || image[ga.mul(p, q)] == usize::MAX
                    || image[ga.mul(p, q)] == gb.mul(image[p], image[q])
            })
        });
        if consistent {
            group_iso_dfs(
                a, b, ga, gb, orders_a, orders_b, todo, at + 1, image, used, result,
            );
        }
        used[cand] = false;
        image[x] = usize::MAX;
    }
}

/// Order-isomorphism of point sets compatible with the actions through a
/// fixed group isomorphism.
fn equivariant_point_iso(
    a: &TranslationGroupoid,
    b: &TranslationGroupoid,
    group_iso: &[usize],
) -> Option<Vec<usize>> {
    let n = a.points();
    let pa = a.space.poset();
    let pb = b.space.poset();
    let sig = |gpd: &TranslationGroupoid, x: usize| -> (usize, usize, usize) {
        let p = gpd.space.poset();
        let below = (0..gpd.points()).filter(|&y| y != x && p.le(y, x)).count();
        let above = (0..gpd.points()).filter(|&y| y != x && p.le(x, y)).count();
        (below, above, gpd.space.isotropy(x).len())
    };
    let sig_a: Vec<_> = (0..n).map(|x| sig(a, x)).collect();
    let sig_b: Vec<_> = (0..n).map(|x| sig(b, x)).collect();
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];

    fn dfs(
        a: &TranslationGroupoid,
        b: &TranslationGroupoid,
        pa: &Poset,
        pb: &Poset,
        group_iso: &[usize],
        sig_a: &[(usize, usize, usize)],
        sig_b: &[(usize, usize, usize)],
        image: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        let x = match image.iter().position(|&v| v == usize::MAX) {
            None => return true,
            Some(x) => x,
        };
        for cand in 0..b.points() {
            if used[cand] || sig_a[x] != sig_b[cand] {
                continue;
            }
            let mut assignments: Vec<(usize, usize)> = Vec::new();
            let mut ok = true;
            // assigning x forces the whole orbit through equivariance
            for g in a.group().elements() {
                let from = a.space.act(g, x);
                let to = b.space.act(group_iso[g], cand);
                if image[from] != usize::MAX {
                    if image[from] != to {
                        ok = false;
                        break;
                    }
                    continue;
                }
                match assignments.iter().find(|&&(f, _)| f == from) {
                    Some(&(_, prev)) => {
                        if prev != to {
                            ok = false;
                            break;
                        }
                    }
                    None => {
                        if used[to] || assignments.iter().any(|&(_, t)| t == to) {
                            ok = false;
                            break;
                        }
                        assignments.push((from, to));
                    }
                }
            }
            if ok {
                for &(f, t) in &assignments {
                    image[f] = t;
                    used[t] = true;
                }
                let consistent = (0..a.points()).all(|p| {
                    (0..a.points()).all(|q| {
                        image[p] == usize::MAX
                            || image[q] == usize::MAX
                            || pa.le(p, q) == pb.le(image[p], image[q])
                    })
                });
                if consistent && dfs(a, b, pa, pb, group_iso, sig_a, sig_b, image, used) {
                    return true;
                }
                for &(f, t) in &assignments {
                    image[f] = usize::MAX;
                    used[t] = false;
                }
            }
        }
        false
    }

    if dfs(
        a, b, pa, pb, group_iso, &sig_a, &sig_b, &mut image, &mut used,
    ) {
        Some(image)
    } else {
        None
    }
}

/// The weak pullback of a cospan of equivariant maps `u: A -> M <- B: v`:
/// the translation groupoid of `K_A x K_B` acting on the comma space
/// `{(a, h, b) : h . u(a) = v(b)}`, with its two projections.
pub fn weak_pullback(
    u: &EquivariantMap,
    v: &EquivariantMap,
) -> Result<(TranslationGroupoid, EquivariantMap, EquivariantMap), GroupoidError> {
    if u.dst != v.dst {
        return Err(GroupoidError::Mismatch(
            "weak pullback requires a shared target".into(),
        ));
    }
    let m = &u.dst;
    let ka = u.src.group().clone();
    let kb = v.src.group().clone();
    let na = u.src.points();
    let nb = v.src.points();
    let mut triples: Vec<(usize, usize, usize)> = Vec::new();
    for a_pt in 0..na {
        for h in m.group().elements() {
            for b_pt in 0..nb {
                if m.space.act(h, u.apply(a_pt)) == v.apply(b_pt) {
                    triples.push((a_pt, h, b_pt));
                }
            }
        }
    }
    let index_of = |t: &(usize, usize, usize)| triples.binary_search(t).unwrap();
    let n = triples.len();
    let mut pairs = Vec::new();
    for (i, &(a1, h1, b1)) in triples.iter().enumerate() {
        for (j, &(a2, h2, b2)) in triples.iter().enumerate() {
            if i != j
                && h1 == h2
                && u.src.space.poset().le(a1, a2)
                && v.src.space.poset().le(b1, b2)
            {
                pairs.push((i, j));
            }
        }
    }
    let poset = Poset::from_relations(n, &pairs)?;
    let group = ka.product(&kb);
    let mut action = Vec::with_capacity(group.order() * n);
    for kab in group.elements() {
        let k_a = kab / kb.order();
        let k_b = kab % kb.order();
        for &(a_pt, h, b_pt) in &triples {
            let h2 = m.group().mul(
                m.group().mul(v.hom.apply(k_b), h),
                m.group().inv(u.hom.apply(k_a)),
            );
            let t = (u.src.space.act(k_a, a_pt), h2, v.src.space.act(k_b, b_pt));
            action.push(index_of(&t));
        }
    }
    let space = GSpace::new(group.clone(), poset, action)?;
    let apex = TranslationGroupoid::new(space);
    let hom_a: Vec<usize> = group.elements().map(|kab| kab / kb.order()).collect();
    let hom_b: Vec<usize> = group.elements().map(|kab| kab % kb.order()).collect();
    let map_a: Vec<usize> = triples.iter().map(|&(a_pt, _, _)| a_pt).collect();
    let map_b: Vec<usize> = triples.iter().map(|&(_, _, b_pt)| b_pt).collect();
    let proj_a = EquivariantMap::check(apex.clone(), u.src.clone(), hom_a, map_a)?;
    let proj_b = EquivariantMap::check(apex.clone(), v.src.clone(), hom_b, map_b)?;
    Ok((apex, proj_a, proj_b))
}

/// Morita-invariant data used to prune the search: the orbit space poset
/// together with the isotropy order of each orbit.
fn orbit_signature(gpd: &TranslationGroupoid) -> Option<(Poset, Vec<usize>)> {
    let os = gpd.space.orbit_space().ok()?;
    let labels: Vec<usize> = os
        .classes
        .iter()
        .map(|c| gpd.space.isotropy(c[0]).len())
        .collect();
    Some((os.poset, labels))
}

/// Label-preserving isomorphism of orbit signatures.
fn signatures_match(a: &(Poset, Vec<usize>), b: &(Poset, Vec<usize>)) -> bool {
    if a.0.len() != b.0.len() {
        return false;
    }
    {
        let mut la = a.1.clone();
        let mut lb = b.1.clone();
        la.sort_unstable();
        lb.sort_unstable();
        if la != lb {
            return false;
        }
    }
    // search for an order-isomorphism preserving the isotropy labels
    labeled_poset_iso(&a.0, &a.1, &b.0, &b.1)
}

fn labeled_poset_iso(pa: &Poset, la: &[usize], pb: &Poset, lb: &[usize]) -> bool {
    let n = pa.len();
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn dfs(
        pa: &Poset,
        la: &[usize],
        pb: &Poset,
        lb: &[usize],
        at: usize,
        image: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if at == pa.len() {
            return true;
        }
        for cand in 0..pb.len() {
            if used[cand] || la[at] != lb[cand] {
                continue;
            }
            let ok = (0..at).all(|prev| {
                pa.le(prev, at) == pb.le(image[prev], cand)
                    && pa.le(at, prev) == pb.le(cand, image[prev])
            });
            if ok {
                image[at] = cand;
                used[cand] = true;
                if dfs(pa, la, pb, lb, at + 1, image, used) {
                    return true;
                }
                used[cand] = false;
                image[at] = usize::MAX;
            }
        }
        false
    }
    dfs(pa, la, pb, lb, 0, &mut image, &mut used)
}

/// The catalogue of groups of order up to 8, used as induction targets.
pub fn group_catalogue(max_order: usize) -> Vec<FiniteGroup> {
    let c = FiniteGroup::cyclic;
    let mut out = vec![c(1)];
    if max_order >= 2 {
        out.push(c(2));
    }
    if max_order >= 3 {
        out.push(c(3));
    }
    if max_order >= 4 {
        out.push(c(4));
        out.push(c(2).product(&c(2)));
    }
    if max_order >= 5 {
        out.push(c(5));
    }
    if max_order >= 6 {
        out.push(c(6));
        out.push(FiniteGroup::symmetric(3));
    }
    if max_order >= 7 {
        out.push(c(7));
    }
    if max_order >= 8 {
        out.push(c(8));
        out.push(c(4).product(&c(2)));
        out.push(c(2).product(&c(2)).product(&c(2)));
        out.push(FiniteGroup::dihedral(4));
        out.push(FiniteGroup::quaternion());
    }
    out
}

struct SearchState {
    gpd: TranslationGroupoid,
    chain: Vec<EssentialEquivalence>,
    from_a: bool,
}

/// Bounded search for a Morita span between two groupoids.
///
/// Explores quotient moves (by free normal subgroups) and induction moves
/// (into catalogue groups of order at most 8) breadth-first from both
/// sides, matching states up to equivariant order-isomorphism. A `None`
/// result is returned only when a Morita invariant (the orbit space with
/// its isotropy orders) rules equivalence out; an exhausted or truncated
/// search reports `BudgetExceeded` instead, since absence of a span is not
/// a proof of inequivalence.
pub fn search_morita(
    a: &TranslationGroupoid,
    b: &TranslationGroupoid,
    budget: usize,
) -> Result<Option<MoritaSpan>, GroupoidError> {
    if budget < a.size().max(b.size()) {
        return Err(GroupoidError::BudgetExceeded { budget });
    }
    let sig_a = orbit_signature(a);
    let sig_b = orbit_signature(b);
    if let (Some(sa), Some(sb)) = (&sig_a, &sig_b) {
        if !signatures_match(sa, sb) {
            return Ok(None);
        }
    }
    let max_states = 64usize;
    let mut states: Vec<SearchState> = Vec::new();
    let mut queue: VecDeque<usize> = VecDeque::new();
    states.push(SearchState {
        gpd: a.clone(),
        chain: Vec::new(),
        from_a: true,
    });
    states.push(SearchState {
        gpd: b.clone(),
        chain: Vec::new(),
        from_a: false,
    });
    queue.push_back(0);
    queue.push_back(1);

    // check the two roots against each other first
    if let Some(span) = try_meet(&states[0], &states[1])? {
        return Ok(Some(span));
    }

    let mut head = 0;
    while head < queue.len() {
        let idx = queue[head];
        head += 1;
        let (gpd, from_a, chain_len) = {
            let s = &states[idx];
            (s.gpd.clone(), s.from_a, s.chain.len())
        };
        if chain_len >= 3 {
            continue;
        }
        let mut moves: Vec<EssentialEquivalence> = Vec::new();
        for l in gpd.group().subgroups() {
            if l.len() == 1 {
                continue;
            }
            if gpd.group().is_normal(&l).is_ok() && gpd.space.acts_freely(&l).is_ok() {
                moves.push(build_quotient_equivalence(&gpd, &l)?);
            }
        }
        for big in group_catalogue(8) {
            if big.order() <= gpd.group().order() {
                continue;
            }
            let induced_points = gpd.points() * big.order() / gpd.group().order();
            if induced_points + big.order() > budget {
                continue;
            }
            let mut seen_images: Vec<Vec<usize>> = Vec::new();
            for emb in gpd.group().embeddings(&big) {
                let mut img: Vec<usize> = emb.map().to_vec();
                img.sort_unstable();
                if seen_images.contains(&img) {
                    continue;
                }
                seen_images.push(img);
                moves.push(build_induction_equivalence(&gpd, &big, &emb)?);
            }
        }
        for mv in moves {
            let new_gpd = mv.map().dst().clone();
            if new_gpd.size() > budget {
                continue;
            }
            let mut chain = states[idx].chain.clone();
            chain.push(mv);
            // dedup against same-side states
            let duplicate = states.iter().any(|s| {
                s.from_a == from_a && groupoid_isomorphism(&s.gpd, &new_gpd).is_some()
            });
            if duplicate {
                continue;
            }
            let new_state = SearchState {
                gpd: new_gpd,
                chain,
                from_a,
            };
            for other in states.iter().filter(|s| s.from_a != from_a) {
                if let Some(span) = try_meet_pair(&new_state, other)? {
                    return Ok(Some(span));
                }
            }
            states.push(new_state);
            if states.len() > max_states {
                break;
            }
            queue.push_back(states.len() - 1);
        }
        if states.len() > max_states {
            break;
        }
    }
    Err(GroupoidError::BudgetExceeded { budget })
}

fn compose_chain(
    origin: &TranslationGroupoid,
    chain: &[EssentialEquivalence],
) -> Result<EquivariantMap, GroupoidError> {
    let mut map = EquivariantMap::identity(origin);
    for step in chain {
        map = map.then(step.map())?;
    }
    Ok(map)
}

fn try_meet(sa: &SearchState, sb: &SearchState) -> Result<Option<MoritaSpan>, GroupoidError> {
    try_meet_pair(sa, sb)
}

fn try_meet_pair(
    s1: &SearchState,
    s2: &SearchState,
) -> Result<Option<MoritaSpan>, GroupoidError> {
    let (sa, sb) = if s1.from_a { (s1, s2) } else { (s2, s1) };
    let iso = match groupoid_isomorphism(&sa.gpd, &sb.gpd) {
        None => return Ok(None),
        Some(iso) => iso,
    };
    let origin_a = if sa.chain.is_empty() {
        sa.gpd.clone()
    } else {
        sa.chain[0].map().src().clone()
    };
    let origin_b = if sb.chain.is_empty() {
        sb.gpd.clone()
    } else {
        sb.chain[0].map().src().clone()
    };
    let u = compose_chain(&origin_a, &sa.chain)?.then(&iso)?;
    let v = compose_chain(&origin_b, &sb.chain)?;
    let (_, proj_a, proj_b) = weak_pullback(&u, &v)?;
    Ok(Some(MoritaSpan::check(proj_a, proj_b)?))
}
