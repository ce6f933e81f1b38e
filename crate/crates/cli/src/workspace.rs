//! Named definitions resolved and validated on load.

use std::collections::BTreeMap;

use orbicat::bibundle::Bibundle;
use orbicat::group::{validate_group, FiniteGroup};
use orbicat::groupoid::{EquivariantMap, GeneralizedMap, TranslationGroupoid};
use orbicat::gspace::GSpace;
use orbicat::poset::Poset;

use crate::format::{parse_blocks, Block, FormatError};

/// A validated definition, remembering the names it was built from.
#[derive(Debug, Clone)]
pub enum Def {
    Group(FiniteGroup),
    Space(Poset),
    Action {
        space: GSpace,
        group_name: String,
        space_name: String,
    },
    Map {
        map: EquivariantMap,
        from_name: String,
        to_name: String,
    },
    Span {
        span: GeneralizedMap,
        left_name: String,
        right_name: String,
    },
    Bibundle {
        bibundle: Bibundle,
        left_name: String,
        right_name: String,
    },
}

impl Def {
    pub fn kind(&self) -> &'static str {
        match self {
            Def::Group(_) => "group",
            Def::Space(_) => "space",
            Def::Action { .. } => "action",
            Def::Map { .. } => "map",
            Def::Span { .. } => "span",
            Def::Bibundle { .. } => "bibundle",
        }
    }
}

/// A workspace: validated definitions in declaration order.
#[derive(Debug, Clone, Default)]
pub struct Workspace {
    names: Vec<String>,
    defs: BTreeMap<String, Def>,
}

impl Workspace {
    pub fn parse(text: &str) -> Result<Workspace, FormatError> {
        let blocks = parse_blocks(text)?;
        let mut ws = Workspace::default();
        for block in &blocks {
            let def = ws.build(block)?;
            if ws.defs.contains_key(&block.name) {
                return Err(FormatError::DuplicateName {
                    line: block.line,
                    name: block.name.clone(),
                });
            }
            ws.names.push(block.name.clone());
            ws.defs.insert(block.name.clone(), def);
        }
        Ok(ws)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<&Def> {
        self.defs.get(name)
    }

    fn lookup(&self, block: &Block, name: &str) -> Result<&Def, FormatError> {
        self.defs.get(name).ok_or_else(|| FormatError::UnknownReference {
            line: block.line,
            name: name.to_string(),
        })
    }

    fn group_ref(&self, block: &Block, key: &str) -> Result<(String, FiniteGroup), FormatError> {
        let name = block.name_field(key).ok_or_else(|| syntax(block, key))?;
        match self.lookup(block, name)? {
            Def::Group(g) => Ok((name.to_string(), g.clone())),
            other => Err(validation(
                block,
                format!("`{}` is a {}, expected a group", name, other.kind()),
            )),
        }
    }

    fn space_ref(&self, block: &Block, key: &str) -> Result<(String, Poset), FormatError> {
        let name = block.name_field(key).ok_or_else(|| syntax(block, key))?;
        match self.lookup(block, name)? {
            Def::Space(p) => Ok((name.to_string(), p.clone())),
            other => Err(validation(
                block,
                format!("`{}` is a {}, expected a space", name, other.kind()),
            )),
        }
    }

    fn action_ref(
        &self,
        block: &Block,
        key: &str,
    ) -> Result<(String, TranslationGroupoid), FormatError> {
        let name = block.name_field(key).ok_or_else(|| syntax(block, key))?;
        match self.lookup(block, name)? {
            Def::Action { space, .. } => {
                Ok((name.to_string(), TranslationGroupoid::new(space.clone())))
            }
            other => Err(validation(
                block,
                format!("`{}` is a {}, expected an action", name, other.kind()),
            )),
        }
    }

    fn map_ref(&self, block: &Block, key: &str) -> Result<(String, EquivariantMap), FormatError> {
        let name = block.name_field(key).ok_or_else(|| syntax(block, key))?;
        match self.lookup(block, name)? {
            Def::Map { map, .. } => Ok((name.to_string(), map.clone())),
            other => Err(validation(
                block,
                format!("`{}` is a {}, expected a map", name, other.kind()),
            )),
        }
    }

    fn build(&self, block: &Block) -> Result<Def, FormatError> {
        match block.kind.as_str() {
            "group" => {
                if let Some(v) = block.value("table") {
                    let table = v.as_table().ok_or_else(|| syntax(block, "table"))?;
                    let group =
                        validate_group(&table).map_err(|e| validation(block, e.to_string()))?;
                    Ok(Def::Group(group))
                } else if let Some(v) = block.value("perm-generators") {
                    let gens = v.as_table().ok_or_else(|| syntax(block, "perm-generators"))?;
                    let degree = gens.first().map(|g| g.len()).unwrap_or(1);
                    for g in &gens {
                        if g.len() != degree || {
                            let mut sorted = g.clone();
                            sorted.sort_unstable();
                            sorted != (0..degree).collect::<Vec<_>>()
                        } {
                            return Err(validation(
                                block,
                                "perm-generators must be permutations of equal degree".into(),
                            ));
                        }
                    }
                    let (group, _) = FiniteGroup::from_permutations(degree, &gens);
                    Ok(Def::Group(group))
                } else {
                    Err(syntax(block, "table or perm-generators"))
                }
            }
            "space" => {
                let points = block
                    .value("points")
                    .and_then(|v| v.as_int())
                    .ok_or_else(|| syntax(block, "points"))?;
                let relations = block
                    .value("relations")
                    .and_then(|v| v.as_pairs())
                    .ok_or_else(|| syntax(block, "relations"))?;
                let poset = Poset::from_relations(points, &relations)
                    .map_err(|e| validation(block, e.to_string()))?;
                Ok(Def::Space(poset))
            }
            "action" => {
                let (group_name, group) = self.group_ref(block, "group")?;
                let (space_name, poset) = self.space_ref(block, "space")?;
                let images = block
                    .value("images")
                    .and_then(|v| v.as_dict().map(|d| d.to_vec()))
                    .ok_or_else(|| syntax(block, "images"))?;
                let action = derive_action(&group, &poset, &images)
                    .map_err(|m| validation(block, m))?;
                let space = GSpace::new(group, poset, action)
                    .map_err(|e| validation(block, e.to_string()))?;
                Ok(Def::Action {
                    space,
                    group_name,
                    space_name,
                })
            }
            "map" => {
                let (from_name, src) = self.action_ref(block, "from")?;
                let (to_name, dst) = self.action_ref(block, "to")?;
                let hom = block
                    .value("hom")
                    .and_then(|v| v.as_int_list())
                    .ok_or_else(|| syntax(block, "hom"))?;
                let points = block
                    .value("points")
                    .and_then(|v| v.as_int_list())
                    .ok_or_else(|| syntax(block, "points"))?;
                let map = EquivariantMap::check(src, dst, hom, points)
                    .map_err(|e| validation(block, e.to_string()))?;
                Ok(Def::Map {
                    map,
                    from_name,
                    to_name,
                })
            }
            "span" => {
                let (left_name, left) = self.map_ref(block, "left")?;
                let (right_name, right) = self.map_ref(block, "right")?;
                let span = GeneralizedMap::check(left, right)
                    .map_err(|e| validation(block, e.to_string()))?;
                Ok(Def::Span {
                    span,
                    left_name,
                    right_name,
                })
            }
            "bibundle" => {
                let (left_name, left) = self.action_ref(block, "left")?;
                let (right_name, right) = self.action_ref(block, "right")?;
                let points = block
                    .value("points")
                    .and_then(|v| v.as_int())
                    .ok_or_else(|| syntax(block, "points"))?;
                let relations = block
                    .value("relations")
                    .and_then(|v| v.as_pairs())
                    .ok_or_else(|| syntax(block, "relations"))?;
                let total = Poset::from_relations(points, &relations)
                    .map_err(|e| validation(block, e.to_string()))?;
                let p = block
                    .value("p")
                    .and_then(|v| v.as_int_list())
                    .ok_or_else(|| syntax(block, "p"))?;
                let w = block
                    .value("w")
                    .and_then(|v| v.as_int_list())
                    .ok_or_else(|| syntax(block, "w"))?;
                let left_images = block
                    .value("left-action")
                    .and_then(|v| v.as_dict().map(|d| d.to_vec()))
                    .ok_or_else(|| syntax(block, "left-action"))?;
                let right_images = block
                    .value("right-action")
                    .and_then(|v| v.as_dict().map(|d| d.to_vec()))
                    .ok_or_else(|| syntax(block, "right-action"))?;
                let left_action = derive_action(left.group(), &total, &left_images)
                    .map_err(|m| validation(block, m))?;
                // the right action is stored as e.h; derive it as a left
                // action of the opposite composition then transpose
                let right_as_left = derive_action(right.group(), &total, &right_images)
                    .map_err(|m| validation(block, m))?;
                let ne = total.len();
                let nh = right.group().order();
                let mut right_action = vec![0; ne * nh];
                for h in 0..nh {
                    for e in 0..ne {
                        right_action[e * nh + h] = right_as_left[h * ne + e];
                    }
                }
                let bibundle = Bibundle::check(
                    left,
                    right,
                    total,
                    p,
                    w,
                    left_action,
                    right_action,
                )
                .map_err(|e| validation(block, e.to_string()))?;
                Ok(Def::Bibundle {
                    bibundle,
                    left_name,
                    right_name,
                })
            }
            other => Err(validation(block, format!("unknown block kind `{}`", other))),
        }
    }

    /// Canonical serialization; reparsing yields an identical workspace.
    pub fn serialize(&self) -> String {
        let mut out = String::from("convention open=downsets\n");
        for name in &self.names {
            let def = &self.defs[name];
            match def {
                Def::Group(g) => {
                    let rows: Vec<String> = g
                        .elements()
                        .map(|a| {
                            let row: Vec<String> =
                                g.elements().map(|b| g.mul(a, b).to_string()).collect();
                            format!("[{}]", row.join(","))
                        })
                        .collect();
                    out.push_str(&format!("group {} table = [{}]\n", name, rows.join(",")));
                }
                Def::Space(p) => {
                    let rels: Vec<String> = p
                        .strict_pairs()
                        .iter()
                        .map(|(a, b)| format!("({},{})", a, b))
                        .collect();
                    out.push_str(&format!(
                        "space {} points = {} relations = [{}]\n",
                        name,
                        p.len(),
                        rels.join(",")
                    ));
                }
                Def::Action {
                    space,
                    group_name,
                    space_name,
                } => {
                    let images: Vec<String> = space
                        .group()
                        .elements()
                        .filter(|&g| g != space.group().identity())
                        .map(|g| {
                            let perm: Vec<String> = (0..space.len())
                                .map(|x| space.act(g, x).to_string())
                                .collect();
                            format!("{}: [{}]", g, perm.join(","))
                        })
                        .collect();
                    out.push_str(&format!(
                        "action {} group = {} space = {} images = {{{}}}\n",
                        name,
                        group_name,
                        space_name,
                        images.join(", ")
                    ));
                }
                Def::Map {
                    map,
                    from_name,
                    to_name,
                } => {
                    let hom: Vec<String> =
                        map.hom().map().iter().map(|g| g.to_string()).collect();
                    let pts: Vec<String> =
                        map.point_map().iter().map(|x| x.to_string()).collect();
                    out.push_str(&format!(
                        "map {} from = {} to = {} hom = [{}] points = [{}]\n",
                        name,
                        from_name,
                        to_name,
                        hom.join(","),
                        pts.join(",")
                    ));
                }
                Def::Span {
                    left_name,
                    right_name,
                    ..
                } => {
                    out.push_str(&format!(
                        "span {} left = {} right = {}\n",
                        name, left_name, right_name
                    ));
                }
                Def::Bibundle {
                    bibundle,
                    left_name,
                    right_name,
                } => {
                    let rels: Vec<String> = bibundle
                        .total()
                        .strict_pairs()
                        .iter()
                        .map(|(a, b)| format!("({},{})", a, b))
                        .collect();
                    let p: Vec<String> =
                        bibundle.anchor_p().iter().map(|x| x.to_string()).collect();
                    let w: Vec<String> =
                        bibundle.anchor_w().iter().map(|x| x.to_string()).collect();
                    let ne = bibundle.total().len();
                    let left_images: Vec<String> = bibundle
                        .left_groupoid()
                        .group()
                        .elements()
                        .filter(|&g| g != bibundle.left_groupoid().group().identity())
                        .map(|g| {
                            let perm: Vec<String> =
                                (0..ne).map(|e| bibundle.act_left(g, e).to_string()).collect();
                            format!("{}: [{}]", g, perm.join(","))
                        })
                        .collect();
                    let right_images: Vec<String> = bibundle
                        .right_groupoid()
                        .group()
                        .elements()
                        .filter(|&h| h != bibundle.right_groupoid().group().identity())
                        .map(|h| {
                            let perm: Vec<String> =
                                (0..ne).map(|e| bibundle.act_right(e, h).to_string()).collect();
                            format!("{}: [{}]", h, perm.join(","))
                        })
                        .collect();
                    out.push_str(&format!(
                        "bibundle {} left = {} right = {} points = {} relations = [{}] p = [{}] w = [{}] left-action = {{{}}} right-action = {{{}}}\n",
                        name,
                        left_name,
                        right_name,
                        ne,
                        rels.join(","),
                        p.join(","),
                        w.join(","),
                        left_images.join(", "),
                        right_images.join(", ")
                    ));
                }
            }
        }
        out
    }
}

fn syntax(block: &Block, key: &str) -> FormatError {
    FormatError::Syntax {
        line: block.line,
        col: 1,
        message: format!("block `{}` needs field `{}`", block.name, key),
    }
}

fn validation(block: &Block, message: String) -> FormatError {
    FormatError::Validation {
        line: block.line,
        name: block.name.clone(),
        message,
    }
}

/// Extends the listed generator images multiplicatively to the whole group.
/// Fails when the keys do not generate or the images are inconsistent.
fn derive_action(
    group: &FiniteGroup,
    poset: &Poset,
    images: &[(usize, Vec<usize>)],
) -> Result<Vec<usize>, String> {
    let n = poset.len();
    let mut action: Vec<Option<Vec<usize>>> = vec![None; group.order()];
    action[group.identity()] = Some((0..n).collect());
    for (g, perm) in images {
        if *g >= group.order() {
            return Err(format!("image key {} out of range", g));
        }
        if perm.len() != n || perm.iter().any(|&x| x >= n) {
            return Err(format!("image of element {} is not a point map", g));
        }
        if let Some(existing) = &action[*g] {
            if existing != perm {
                return Err(format!("conflicting images for element {}", g));
            }
        }
        action[*g] = Some(perm.clone());
    }
    loop {
        let mut progressed = false;
        for a in group.elements() {
            for b in group.elements() {
                if let (Some(pa), Some(pb)) = (action[a].clone(), action[b].clone()) {
                    let ab = group.mul(a, b);
                    let composed: Vec<usize> = (0..n).map(|x| pa[pb[x]]).collect();
                    match &action[ab] {
                        Some(existing) => {
                            if *existing != composed {
                                return Err(format!(
                                    "images are inconsistent at product {} * {}",
                                    a, b
                                ));
                            }
                        }
                        None => {
                            action[ab] = Some(composed);
                            progressed = true;
                        }
                    }
                }
            }
        }
        if !progressed {
            break;
        }
    }
    let mut flat = Vec::with_capacity(group.order() * n);
    for g in group.elements() {
        match &action[g] {
            Some(perm) => flat.extend(perm.iter().copied()),
            None => {
                return Err(format!(
                    "images do not generate the group (element {} unreachable)",
                    g
                ))
            }
        }
    }
    Ok(flat)
}
