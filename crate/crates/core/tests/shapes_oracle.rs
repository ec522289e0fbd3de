//! Shape and path evaluation against a set-based transcription of the
//! semantics, plus syntax round trips.

mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use shacq_core::{
    desugar, eval_path, eval_shape, is_supported_model, parse_shape_expr, parse_shapes_doc, validates, Assignment,
    Atom, DataGraph, Node, PathExpr, ShapeAtom, ShapeExpr, Symbol,
};

type Pairs = BTreeSet<(Node, Node)>;

fn path(e: &PathExpr, g: &DataGraph, v: &BTreeSet<Node>) -> Pairs {
    match e {
        PathExpr::Prop(p) => g
            .iter()
            .filter_map(|a| match a {
                Atom::Prop { prop, subject, object } if prop == p => Some((subject.clone(), object.clone())),
                _ => None,
            })
            .collect(),
        PathExpr::Inverse(p) => path(&PathExpr::Prop(p.clone()), g, v)
            .into_iter()
            .map(|(a, b)| (b, a))
            .collect(),
        PathExpr::Seq(a, b) => {
            let (l, r) = (path(a, g, v), path(b, g, v));
            l.iter()
                .flat_map(|(x, y)| {
                    r.iter()
                        .filter(move |(y2, _)| y2 == y)
                        .map(move |(_, z)| (x.clone(), z.clone()))
                })
                .collect()
        }
        PathExpr::Alt(a, b) => path(a, g, v).union(&path(b, g, v)).cloned().collect(),
        PathExpr::Star(a) => {
            let step = path(a, g, v);
            let mut r: Pairs = v.iter().map(|n| (n.clone(), n.clone())).collect();
            loop {
                let next: Pairs = r
                    .iter()
                    .flat_map(|(x, y)| {
                        step.iter()
                            .filter(move |(y2, _)| y2 == y)
                            .map(move |(_, z)| (x.clone(), z.clone()))
                    })
                    .collect();
                let before = r.len();
                r.extend(next);
                if r.len() == before {
                    return r;
                }
            }
        }
    }
}

fn shape(e: &ShapeExpr, g: &DataGraph, labels: &BTreeSet<ShapeAtom>, v: &BTreeSet<Node>) -> BTreeSet<Node> {
    let successors = |c: &Node, p: &PathExpr| -> BTreeSet<Node> {
        path(p, g, v)
            .into_iter()
            .filter(|(x, _)| x == c)
            .map(|(_, d)| d)
            .collect()
    };
    let count = |n: u32, p: &PathExpr, f: &ShapeExpr, cmp: fn(usize, usize) -> bool| -> BTreeSet<Node> {
        let fill = shape(f, g, labels, v);
        v.iter()
            .filter(|c| cmp(successors(c, p).intersection(&fill).count(), n as usize))
            .cloned()
            .collect()
    };
    match e {
        ShapeExpr::Top => v.clone(),
        ShapeExpr::Const(c) => [c.clone()].into(),
        ShapeExpr::ClassRef(b) => g
            .iter()
            .filter_map(|a| match a {
                Atom::Class { class, node } if class == b => Some(node.clone()),
                _ => None,
            })
            .collect(),
        ShapeExpr::ShapeRef(s) => labels
            .iter()
            .filter(|l| &l.shape == s)
            .map(|l| l.node.clone())
            .collect(),
        ShapeExpr::And(a, b) => shape(a, g, labels, v)
            .intersection(&shape(b, g, labels, v))
            .cloned()
            .collect(),
        ShapeExpr::Or(a, b) => {
            let both: BTreeSet<Node> = shape(a, g, labels, v).union(&shape(b, g, labels, v)).cloned().collect();
            both.intersection(v).cloned().collect()
        }
        ShapeExpr::Not(a) => v.difference(&shape(a, g, labels, v)).cloned().collect(),
        ShapeExpr::AtLeast { n, path, filler } => count(*n, path, filler, |k, n| k >= n),
        ShapeExpr::AtMost { n, path, filler } => count(*n, path, filler, |k, n| k <= n),
        ShapeExpr::Exactly { n, path, filler } => count(*n, path, filler, |k, n| k == n),
        ShapeExpr::Exists(p, f) => count(1, p, f, |k, n| k >= n),
        ShapeExpr::Forall(p, f) => {
            let fill = shape(f, g, labels, v);
            v.iter()
                .filter(|c| successors(c, p).is_subset(&fill))
                .cloned()
                .collect()
        }
        ShapeExpr::PathEq(p, q) => {
            let (l, r) = (path(p, g, v), path(q, g, v));
            v.iter()
                .filter(|c| {
                    let a: BTreeSet<_> = l.iter().filter(|(x, _)| x == *c).collect();
                    let b: BTreeSet<_> = r.iter().filter(|(x, _)| x == *c).collect();
                    a == b
                })
                .cloned()
                .collect()
        }
    }
}

fn names() -> Vec<String> {
    (0..3).map(common::shape_name).collect()
}

fn consts() -> Vec<String> {
    common::NODES.iter().map(|s| s.to_string()).collect()
}

/// A graph with labels on its own nodes.
fn assignment() -> BoxedStrategy<Assignment> {
    (
        common::graph(8),
        prop::collection::vec((0..3usize, any::<prop::sample::Index>()), 0..6),
    )
        .prop_map(|(g, picks)| {
            let nodes: Vec<Node> = g.nodes().into_iter().collect();
            let labels = if nodes.is_empty() {
                BTreeSet::new()
            } else {
                picks
                    .into_iter()
                    .map(|(s, i)| ShapeAtom::new(common::shape_name(s).as_str(), i.get(&nodes).clone()))
                    .collect()
            };
            Assignment::new(g, labels).unwrap()
        })
        .boxed()
}

/// Or is sugar for a complement, so constants outside the graph drop out.
fn expected(e: &ShapeExpr, i: &Assignment) -> BTreeSet<Node> {
    shape(&desugar(e), i.graph(), i.labels(), &i.graph().nodes())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn paths_match_definition(p in common::path(), i in assignment()) {
        prop_assert_eq!(eval_path(&p, &i), path(&p, i.graph(), &i.graph().nodes()));
    }

    #[test]
    fn shapes_match_definition(e in common::expr(names(), consts()), i in assignment()) {
        prop_assert_eq!(eval_shape(&e, &i), expected(&e, &i), "{}", e);
    }

    #[test]
    fn sugar_agrees_on_graph_nodes(e in common::expr(names(), consts()), i in assignment()) {
        // Sugared forms read directly agree with their expansion inside V(I).
        let v = i.graph().nodes();
        let direct: BTreeSet<Node> = shape(&e, i.graph(), i.labels(), &v).intersection(&v).cloned().collect();
        let core: BTreeSet<Node> = expected(&e, &i).intersection(&v).cloned().collect();
        prop_assert_eq!(direct, core, "{}", e);
    }

    #[test]
    fn desugar_is_idempotent_and_keeps_symbols(e in common::expr(names(), consts())) {
        let d = desugar(&e);
        prop_assert!(d.is_core());
        prop_assert_eq!(desugar(&d), d.clone());
        prop_assert_eq!(d.symbols(), e.symbols());
    }

    #[test]
    fn expressions_print_and_parse(e in common::expr(names(), consts())) {
        let shapes: BTreeSet<Symbol> = names().iter().map(|s| Symbol::new(s)).collect();
        prop_assert_eq!(parse_shape_expr(&e.to_string(), &shapes).unwrap(), e);
    }

    #[test]
    fn documents_print_and_parse(doc in common::shapes_doc()) {
        prop_assert_eq!(parse_shapes_doc(&doc.to_string()).unwrap(), doc);
    }

    #[test]
    fn supported_models_match_definition(doc in common::shapes_doc(), i in assignment()) {
        let defined = doc.names();
        let labels = i.labels().iter().filter(|l| defined.contains(&l.shape)).cloned().collect();
        let i = Assignment::new(i.graph().clone(), labels).unwrap();
        let v = i.graph().nodes();
        let direct = doc.constraints().iter().all(|c| {
            let ext: BTreeSet<Node> = i.labels().iter().filter(|l| l.shape == c.name).map(|l| l.node.clone()).collect();
            shape(&desugar(&c.body), i.graph(), i.labels(), &v) == ext
        });
        prop_assert_eq!(is_supported_model(&i, doc.constraints()).unwrap(), direct);
    }

    #[test]
    fn validation_matches_model_enumeration(doc in common::shapes_doc(), g in common::graph(6)) {
        let nodes = g.nodes();
        let universe: Vec<ShapeAtom> = doc
            .names()
            .into_iter()
            .flat_map(|s| nodes.iter().map(move |n| ShapeAtom::new(s.clone(), n.clone())))
            .collect();
        prop_assume!(universe.len() <= 12);
        let targets_possible = doc.targets().iter().all(|t| nodes.contains(&t.node));
        let exists = targets_possible
            && (0u32..1 << universe.len()).any(|mask| {
                let labels: BTreeSet<ShapeAtom> = universe
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| mask >> k & 1 == 1)
                    .map(|(_, l)| l.clone())
                    .collect();
                doc.targets().is_subset(&labels)
                    && is_supported_model(&Assignment::new(g.clone(), labels).unwrap(), doc.constraints()).unwrap()
            });
        prop_assert_eq!(validates(&g, &doc), exists, "{}", doc);
    }
}
