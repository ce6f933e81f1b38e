//! Command dispatch: every toolkit operation behind one entry point.

use serde_json::{json, Value};
use thiserror::Error;

use orbicat::bibundle::{
    bibundle_isomorphic, find_global_section, find_natural_conjugacy, hs_compose,
    hs_from_equivariant, hs_from_generalized, hs_inverse_of_equivalence, principality, strictify,
    Bibundle,
};
use orbicat::category::{cat_g, cat_grd, cat_orb, CategoryMethod, CategoryResult, CategoryValue};
use orbicat::error::{BibundleError, GroupoidError};
use orbicat::groupoid::{
    check_essential_equivalence, pronk_factorize, search_morita, EquivariantMap, GeneralizedMap,
    TranslationGroupoid,
};
use orbicat::gspace::GSpace;
use orbicat::paths::{
    groupoid_path, is_g_connected, is_groupoid_connected, ConnectednessMethod,
};

use crate::report::Report;
use crate::workspace::{Def, Workspace};

#[derive(Debug, Clone, Error)]
pub enum CommandError {
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("{0}")]
    Input(String),
    #[error("internal invariant violation: {0}")]
    Internal(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConnectedMode {
    GSpace,
    Quotient,
    Paths,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CatKind {
    CatG,
    CatGrd,
    CatOrb,
}

#[derive(Debug, Clone)]
pub enum Command {
    Validate,
    Orbits {
        action: String,
        point: Option<usize>,
    },
    Fixed {
        action: String,
        subgroup: Option<Vec<usize>>,
    },
    Connected {
        mode: ConnectedMode,
        action: String,
    },
    MoritaCheck {
        span: String,
    },
    MoritaFactor {
        map: String,
    },
    MoritaSearch {
        a: String,
        b: String,
        budget: usize,
    },
    HsFromMap {
        map: String,
    },
    HsInvert {
        map: String,
    },
    HsCompose {
        inner: String,
        outer: String,
    },
    HsSection {
        name: String,
    },
    HsConjugacy {
        span: String,
    },
    HsStrictify {
        span: String,
    },
    HsIso {
        a: String,
        b: String,
    },
    Cat {
        kind: CatKind,
        action: String,
        budget: usize,
    },
    Report,
}

fn action_of<'w>(ws: &'w Workspace, name: &str) -> Result<&'w GSpace, CommandError> {
    match ws.get(name) {
        Some(Def::Action { space, .. }) => Ok(space),
        Some(other) => Err(CommandError::Input(format!(
            "`{}` is a {}, expected an action",
            name,
            other.kind()
        ))),
        None => Err(CommandError::UnknownObject(name.to_string())),
    }
}

fn map_of<'w>(ws: &'w Workspace, name: &str) -> Result<&'w EquivariantMap, CommandError> {
    match ws.get(name) {
        Some(Def::Map { map, .. }) => Ok(map),
        Some(other) => Err(CommandError::Input(format!(
            "`{}` is a {}, expected a map",
            name,
            other.kind()
        ))),
        None => Err(CommandError::UnknownObject(name.to_string())),
    }
}

fn span_of<'w>(ws: &'w Workspace, name: &str) -> Result<&'w GeneralizedMap, CommandError> {
    match ws.get(name) {
        Some(Def::Span { span, .. }) => Ok(span),
        Some(other) => Err(CommandError::Input(format!(
            "`{}` is a {}, expected a span",
            name,
            other.kind()
        ))),
        None => Err(CommandError::UnknownObject(name.to_string())),
    }
}

/// Resolves a name as a bibundle: either a declared bibundle or a map
/// (converted through `hs_from_equivariant`).
fn bibundle_of(ws: &Workspace, name: &str) -> Result<Bibundle, CommandError> {
    match ws.get(name) {
        Some(Def::Bibundle { bibundle, .. }) => Ok(bibundle.clone()),
        Some(Def::Map { map, .. }) => Ok(hs_from_equivariant(map)),
        Some(other) => Err(CommandError::Input(format!(
            "`{}` is a {}, expected a bibundle or map",
            name,
            other.kind()
        ))),
        None => Err(CommandError::UnknownObject(name.to_string())),
    }
}

fn groupoid_error(e: GroupoidError) -> CommandError {
    CommandError::Input(e.to_string())
}

fn bibundle_error(e: BibundleError) -> CommandError {
    match e {
        BibundleError::InconsistentChoices { .. } => CommandError::Internal(e.to_string()),
        other => CommandError::Input(other.to_string()),
    }
}

fn category_json(result: &CategoryResult) -> Vec<(String, Value)> {
    let mut items = vec![
        (
            "value".to_string(),
            match result.value {
                CategoryValue::Finite(k) => json!(k),
                CategoryValue::Infinite => json!("infinite"),
            },
        ),
        (
            "method".to_string(),
            json!(match result.method {
                CategoryMethod::Direct => "direct",
                CategoryMethod::MoritaReduced => "morita-reduced",
            }),
        ),
        ("exact".to_string(), json!(result.exact)),
    ];
    if !result.reduction.is_empty() {
        let steps: Vec<Value> = result
            .reduction
            .iter()
            .map(|s| {
                json!({
                    "group": s.map().dst().group().order(),
                    "points": s.map().dst().points(),
                })
            })
            .collect();
        items.push(("reduction".to_string(), Value::Array(steps)));
    }
    if let Some(pt) = result.uncovered {
        items.push(("uncovered-point".to_string(), json!(pt)));
    }
    for (i, (open, witness)) in result.cover.iter().enumerate() {
        items.push((
            format!("cover[{}]", i),
            json!({
                "open": open.points,
                "orbit": witness.orbit,
                "chain": witness.chain,
            }),
        ));
    }
    items
}

/// Dispatches a command against a workspace and serializes the verdicts and
/// witnesses canonically.
pub fn run_command(ws: &Workspace, command: &Command) -> Result<Report, CommandError> {
    match command {
        Command::Validate => {
            let mut report = Report::new("validate");
            report.push("definitions", json!(ws.len()));
            for name in ws.names() {
                let def = ws.get(name).unwrap();
                let detail = match def {
                    Def::Group(g) => json!({ "kind": "group", "order": g.order() }),
                    Def::Space(p) => json!({
                        "kind": "space",
                        "points": p.len(),
                        "relations": p.strict_pairs().len(),
                        "components": p.components().len(),
                    }),
                    Def::Action { space, .. } => json!({
                        "kind": "action",
                        "group": space.group().order(),
                        "points": space.len(),
                        "orbits": space.orbit_space().map(|o| o.len()).unwrap_or(0),
                    }),
                    Def::Map { map, .. } => json!({
                        "kind": "map",
                        "from-points": map.src().points(),
                        "to-points": map.dst().points(),
                    }),
                    Def::Span { span, .. } => json!({
                        "kind": "span",
                        "apex-points": span.apex().points(),
                    }),
                    Def::Bibundle { bibundle, .. } => json!({
                        "kind": "bibundle",
                        "total": bibundle.total().len(),
                        "principal": principality(bibundle).is_ok(),
                    }),
                };
                report.push(name.clone(), detail);
            }
            Ok(report)
        }
        Command::Orbits { action, point } => {
            let space = action_of(ws, action)?;
            let mut report = Report::new(format!("orbits {}", action));
            match point {
                Some(x) => {
                    if *x >= space.len() {
                        return Err(CommandError::Input(format!(
                            "point {} out of range for {} points",
                            x,
                            space.len()
                        )));
                    }
                    report.push(format!("orbit[{}]", x), json!(space.orbit(*x)));
                    report.push(
                        format!("isotropy[{}]", x),
                        json!(space.isotropy(*x).elements()),
                    );
                }
                None => {
                    let os = space
                        .orbit_space()
                        .map_err(|e| CommandError::Internal(e.to_string()))?;
                    report.push("orbit-count", json!(os.len()));
                    for (i, class) in os.classes.iter().enumerate() {
                        report.push(
                            format!("orbit[{}]", i),
                            json!({
                                "points": class,
                                "isotropy-order": space.isotropy(class[0]).len(),
                            }),
                        );
                    }
                    report.push(
                        "quotient-relations",
                        json!(os.poset.strict_pairs()),
                    );
                    report.push(
                        "projection-open",
                        json!(os.projection_open_violation(space).is_none()),
                    );
                }
            }
            Ok(report)
        }
        Command::Fixed { action, subgroup } => {
            let space = action_of(ws, action)?;
            let mut report = Report::new(format!("fixed {}", action));
            let subs = match subgroup {
                Some(elements) => {
                    for &e in elements {
                        if e >= space.group().order() {
                            return Err(CommandError::Input(format!(
                                "group element {} out of range",
                                e
                            )));
                        }
                    }
                    let closed = space.group().closure(elements);
                    vec![space
                        .group()
                        .subgroup(&closed)
                        .map_err(|e| CommandError::Internal(e.to_string()))?]
                }
                None => space.group().subgroups(),
            };
            for sub in subs {
                let fixed = space.fixed_points(&sub);
                report.push(
                    format!("fixed{:?}", sub.elements()),
                    json!({
                        "points": fixed.points,
                        "nonempty": !fixed.is_empty(),
                        "connected": fixed.is_connected(),
                    }),
                );
            }
            Ok(report)
        }
        Command::Connected { mode, action } => {
            let space = action_of(ws, action)?;
            let mut report = Report::new(format!("connected {}", action));
            match mode {
                ConnectedMode::GSpace => {
                    let verdict = is_g_connected(space);
                    report.push("g-connected", json!(verdict.connected));
                    if let Some((sub, why)) = verdict.failure {
                        report.push("failing-subgroup", json!(sub));
                        report.push(
                            "failure",
                            json!(match why {
                                orbicat::paths::FixedSetFailure::Empty => "empty fixed set",
                                orbicat::paths::FixedSetFailure::Disconnected =>
                                    "disconnected fixed set",
                            }),
                        );
                    }
                }
                ConnectedMode::Quotient => {
                    let os = space
                        .orbit_space()
                        .map_err(|e| CommandError::Internal(e.to_string()))?;
                    let components = os.poset.components().len();
                    report.push("groupoid-connected", json!(components == 1));
                    report.push("quotient-components", json!(components));
                }
                ConnectedMode::Paths => {
                    let connected = is_groupoid_connected(space, ConnectednessMethod::PathSearch);
                    report.push("groupoid-connected", json!(connected));
                    if connected && space.len() > 1 {
                        let witness = groupoid_path(space, 0, space.len() - 1)
                            .expect("connected space has witness paths");
                        report.push(
                            format!("path[0 -> {}]", space.len() - 1),
                            json!({
                                "segments": witness.segments,
                                "jumps": witness.jumps,
                            }),
                        );
                    }
                }
            }
            Ok(report)
        }
        Command::MoritaCheck { span } => {
            let gm = span_of(ws, span)?;
            let mut report = Report::new(format!("morita check {}", span));
            report.push("left-essential", json!(true)); // certified on load
            let right = check_essential_equivalence(gm.right());
            report.push("right-essential", json!(right.is_ok()));
            match right {
                Ok(cert) => {
                    report.push("right-witnesses", json!(cert.witnesses()));
                    report.push("morita-span", json!(true));
                }
                Err(e) => {
                    report.push("right-failure", json!(e.to_string()));
                    report.push("morita-span", json!(false));
                }
            }
            Ok(report)
        }
        Command::MoritaFactor { map } => {
            let f = map_of(ws, map)?;
            let cert = check_essential_equivalence(f).map_err(groupoid_error)?;
            let fact = pronk_factorize(&cert).map_err(|e| CommandError::Internal(e.to_string()))?;
            let mut report = Report::new(format!("morita factor {}", map));
            report.push("kernel", json!(fact.kernel.elements()));
            report.push(
                "quotient",
                json!({
                    "group": fact.quotient.map().dst().group().order(),
                    "points": fact.quotient.map().dst().points(),
                }),
            );
            report.push(
                "induction",
                json!({
                    "group": fact.induction.map().dst().group().order(),
                    "points": fact.induction.map().dst().points(),
                }),
            );
            report.push("isomorphism", json!(fact.iso.point_map()));
            report.push("witness", json!(fact.witness.lambda()));
            Ok(report)
        }
        Command::MoritaSearch { a, b, budget } => {
            let ga = TranslationGroupoid::new(action_of(ws, a)?.clone());
            let gb = TranslationGroupoid::new(action_of(ws, b)?.clone());
            let mut report = Report::new(format!("morita search {} {}", a, b));
            report.push("budget", json!(budget));
            match search_morita(&ga, &gb, *budget) {
                Ok(Some(span)) => {
                    report.push("verdict", json!("equivalent"));
                    report.push(
                        "span",
                        json!({
                            "apex-group": span.apex().group().order(),
                            "apex-points": span.apex().points(),
                        }),
                    );
                }
                Ok(None) => {
                    report.push("verdict", json!("obstructed"));
                    report.push(
                        "note",
                        json!("orbit space or isotropy invariants differ; not Morita equivalent"),
                    );
                }
                Err(GroupoidError::BudgetExceeded { .. }) => {
                    report.push("verdict", json!("inconclusive"));
                    report.push(
                        "note",
                        json!("search exhausted the budget; absence of a span is not a proof"),
                    );
                }
                Err(e) => return Err(CommandError::Internal(e.to_string())),
            }
            Ok(report)
        }
        Command::HsFromMap { map } => {
            let f = map_of(ws, map)?;
            let bib = hs_from_equivariant(f);
            let mut report = Report::new(format!("hs from-map {}", map));
            report.push("total", json!(bib.total().len()));
            report.push("principal", json!(principality(&bib).is_ok()));
            Ok(report)
        }
        Command::HsInvert { map } => {
            let f = map_of(ws, map)?;
            let cert = check_essential_equivalence(f).map_err(|e| {
                CommandError::Input(
                    BibundleError::NotEssentialEquivalence(Box::new(e)).to_string(),
                )
            })?;
            let bib = hs_inverse_of_equivalence(&cert);
            let mut report = Report::new(format!("hs invert {}", map));
            report.push("total", json!(bib.total().len()));
            report.push("principal", json!(principality(&bib).is_ok()));
            Ok(report)
        }
        Command::HsCompose { inner, outer } => {
            let bi = bibundle_of(ws, inner)?;
            let bo = bibundle_of(ws, outer)?;
            let composite = hs_compose(&bi, &bo).map_err(bibundle_error)?;
            let mut report = Report::new(format!("hs compose {} {}", inner, outer));
            report.push("total", json!(composite.total().len()));
            report.push("principal", json!(true));
            Ok(report)
        }
        Command::HsSection { name } => {
            let bib = match ws.get(name) {
                Some(Def::Span { span, .. }) => hs_from_generalized(span).map_err(bibundle_error)?,
                _ => bibundle_of(ws, name)?,
            };
            let mut report = Report::new(format!("hs section {}", name));
            let fibers: Vec<usize> = (0..bib.right_groupoid().points())
                .map(|y| bib.anchor_w().iter().filter(|&&v| v == y).count())
                .collect();
            report.push("total", json!(bib.total().len()));
            report.push("fiber-sizes", json!(fibers));
            report.push(
                "search-space",
                json!(fibers.iter().product::<usize>()),
            );
            match find_global_section(&bib) {
                Some(tau) => {
                    report.push("section", json!("present"));
                    report.push("tau", json!(tau));
                }
                None => {
                    report.push("section", json!("absent"));
                }
            }
            Ok(report)
        }
        Command::HsConjugacy { span } => {
            let gm = span_of(ws, span)?;
            let target = gm.right().dst().group();
            if gm.left().map().dst().group() != target {
                return Err(CommandError::Input(
                    "conjugacy needs both legs over the same group".into(),
                ));
            }
            let mut report = Report::new(format!("hs conjugacy {}", span));
            let components = gm.apex().space.poset().components().len();
            report.push("components", json!(components));
            report.push(
                "search-space",
                json!(target.order().pow(components as u32)),
            );
            match find_natural_conjugacy(
                &gm.apex().space,
                gm.left().map().hom(),
                gm.right().hom(),
                target,
            ) {
                Some(lambda) => {
                    report.push("conjugacy", json!("present"));
                    report.push("lambda", json!(lambda));
                }
                None => report.push("conjugacy", json!("absent")),
            }
            Ok(report)
        }
        Command::HsStrictify { span } => {
            let gm = span_of(ws, span)?;
            let mut report = Report::new(format!("hs strictify {}", span));
            match strictify(gm).map_err(bibundle_error)? {
                Some(result) => {
                    report.push("strictification", json!("present"));
                    report.push("g-map", json!(result.map.point_map()));
                    report.push("witness", json!(result.witness.lambda()));
                }
                None => {
                    report.push("strictification", json!("absent"));
                    // section cross-check with its search statistics
                    let bib = hs_from_generalized(gm).map_err(bibundle_error)?;
                    let fibers: Vec<usize> = (0..bib.right_groupoid().points())
                        .map(|y| bib.anchor_w().iter().filter(|&&v| v == y).count())
                        .collect();
                    report.push("section-search-space", json!(fibers.iter().product::<usize>()));
                    report.push(
                        "section",
                        json!(if find_global_section(&bib).is_some() {
                            "present"
                        } else {
                            "absent"
                        }),
                    );
                }
            }
            Ok(report)
        }
        Command::HsIso { a, b } => {
            let ba = bibundle_of(ws, a)?;
            let bb = bibundle_of(ws, b)?;
            let mut report = Report::new(format!("hs iso {} {}", a, b));
            match bibundle_isomorphic(&ba, &bb) {
                Some(iso) => {
                    report.push("isomorphic", json!(true));
                    report.push("isomorphism", json!(iso));
                }
                None => report.push("isomorphic", json!(false)),
            }
            Ok(report)
        }
        Command::Cat {
            kind,
            action,
            budget,
        } => {
            let space = action_of(ws, action)?;
            let (label, result) = match kind {
                CatKind::CatG => (
                    "catG",
                    cat_g(space, *budget).map_err(|e| CommandError::Input(e.to_string()))?,
                ),
                CatKind::CatGrd => (
                    "catGrd",
                    cat_grd(&TranslationGroupoid::new(space.clone()), *budget)
                        .map_err(|e| CommandError::Input(e.to_string()))?,
                ),
                CatKind::CatOrb => (
                    "catOrb",
                    cat_orb(&TranslationGroupoid::new(space.clone()), *budget)
                        .map_err(|e| CommandError::Input(e.to_string()))?,
                ),
            };
            let mut report = Report::new(format!("cat {} {}", label, action));
            for (k, v) in category_json(&result) {
                report.push(k, v);
            }
            Ok(report)
        }
        Command::Report => {
            let mut report = Report::new("report");
            report.push("definitions", json!(ws.len()));
            for name in ws.names() {
                let def = ws.get(name).unwrap();
                if let Def::Action { space, .. } = def {
                    let g = is_g_connected(space);
                    report.push(
                        name.clone(),
                        json!({
                            "kind": "action",
                            "group": space.group().order(),
                            "points": space.len(),
                            "orbits": space.orbit_space().map(|o| o.len()).unwrap_or(0),
                            "g-connected": g.connected,
                            "groupoid-connected":
                                is_groupoid_connected(space, ConnectednessMethod::Quotient),
                        }),
                    );
                } else {
                    report.push(name.clone(), json!({ "kind": def.kind() }));
                }
            }
            Ok(report)
        }
    }
}
