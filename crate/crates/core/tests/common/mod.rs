//! Small random instances over a fixed vocabulary: classes A, B; properties
//! p, q; nodes a, b, c; shape names s1..s3.

#![allow(dead_code)]

use std::collections::BTreeSet;

use proptest::prelude::*;
use shacq_core::{
    Atom, Constraint, DataGraph, Node, PathExpr, Pattern, ProblemInstance, Query, QueryAtom, ShapeAtom, ShapeExpr,
    ShapesDoc, Term, Var,
};

pub const NODES: [&str; 3] = ["a", "b", "c"];
pub const CLASSES: [&str; 2] = ["A", "B"];
pub const PROPS: [&str; 2] = ["p", "q"];
pub const VARS: [&str; 3] = ["x", "y", "z"];

pub fn shape_name(i: usize) -> String {
    format!("s{}", i + 1)
}

pub fn atom() -> BoxedStrategy<Atom> {
    prop_oneof![
        (0..2usize, 0..3usize).prop_map(|(c, n)| Atom::class(CLASSES[c], NODES[n])),
        (0..2usize, 0..3usize, 0..3usize).prop_map(|(p, s, o)| Atom::prop(PROPS[p], NODES[s], NODES[o])),
    ]
    .boxed()
}

/// Up to `max` distinct atoms.
pub fn graph(max: usize) -> BoxedStrategy<DataGraph> {
    prop::collection::vec(atom(), 0..=max)
        .prop_map(|v| v.into_iter().collect())
        .boxed()
}

pub fn path() -> BoxedStrategy<PathExpr> {
    let leaf = prop_oneof![
        3 => (0..2usize).prop_map(|p| PathExpr::prop(PROPS[p])),
        1 => (0..2usize).prop_map(|p| PathExpr::inverse(PROPS[p])),
    ];
    leaf.prop_recursive(1, 3, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| PathExpr::seq(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| PathExpr::alt(a, b)),
            inner.prop_map(PathExpr::star),
        ]
    })
    .boxed()
}

/// Expressions referring to the given shape names and constants.
pub fn expr(shapes: Vec<String>, consts: Vec<String>) -> BoxedStrategy<ShapeExpr> {
    let mut leaves: Vec<BoxedStrategy<ShapeExpr>> = vec![
        Just(ShapeExpr::Top).boxed(),
        (0..2usize).prop_map(|c| ShapeExpr::ClassRef(CLASSES[c].into())).boxed(),
        (0..2usize).prop_map(|c| ShapeExpr::ClassRef(CLASSES[c].into())).boxed(),
    ];
    if !shapes.is_empty() {
        let s = prop::sample::select(shapes).prop_map(|s| ShapeExpr::ShapeRef(s.as_str().into()));
        leaves.push(s.clone().boxed());
        leaves.push(s.boxed());
    }
    if !consts.is_empty() {
        leaves.push(
            prop::sample::select(consts)
                .prop_map(|c| ShapeExpr::Const(c.as_str().into()))
                .boxed(),
        );
    }
    let leaf = prop::strategy::Union::new(leaves);
    leaf.prop_recursive(2, 8, 2, |inner| {
        let f = inner.clone();
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| ShapeExpr::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| ShapeExpr::or(a, b)),
            inner.clone().prop_map(ShapeExpr::not),
            (path(), f.clone()).prop_map(|(p, e)| ShapeExpr::exists(p, e)),
            (path(), f.clone()).prop_map(|(p, e)| ShapeExpr::forall(p, e)),
            (1..=2u32, path(), f.clone()).prop_map(|(n, p, e)| ShapeExpr::at_least(n, p, e)),
            (0..=1u32, path(), f.clone()).prop_map(|(n, p, e)| ShapeExpr::at_most(n, p, e)),
            (path(), f).prop_map(|(p, e)| ShapeExpr::exactly(1, p, e)),
            (path(), path()).prop_map(|(p, q)| ShapeExpr::PathEq(p, q)),
        ]
    })
    .boxed()
}

fn targets(k: usize, nodes: Vec<String>) -> BoxedStrategy<BTreeSet<ShapeAtom>> {
    prop::collection::btree_set(
        (0..k, prop::sample::select(nodes)).prop_map(|(s, n)| ShapeAtom::new(shape_name(s).as_str(), n.as_str())),
        1..=2,
    )
    .boxed()
}

/// One to three constraints, possibly recursive, with one or two targets.
pub fn shapes_doc() -> BoxedStrategy<ShapesDoc> {
    let nodes: Vec<String> = NODES.iter().map(|s| s.to_string()).collect();
    (1..=3usize)
        .prop_flat_map(move |k| {
            let names: Vec<String> = (0..k).map(shape_name).collect();
            let bodies = prop::collection::vec(expr(names.clone(), nodes.clone()), k);
            (bodies, targets(k, nodes.clone()))
        })
        .prop_map(|(bodies, t)| doc(bodies, t))
        .boxed()
}

/// Constraints where `s_i` only refers to `s_j` with `j > i`; constants and
/// targets are drawn from `nodes`.
pub fn acyclic_doc(nodes: Vec<String>) -> BoxedStrategy<ShapesDoc> {
    (1..=3usize)
        .prop_flat_map(move |k| {
            let bodies: Vec<_> = (0..k)
                .map(|i| expr((i + 1..k).map(shape_name).collect(), nodes.clone()))
                .collect();
            (bodies, targets(k, nodes.clone()))
        })
        .prop_map(|(bodies, t)| doc(bodies, t))
        .boxed()
}

fn doc(bodies: Vec<ShapeExpr>, targets: BTreeSet<ShapeAtom>) -> ShapesDoc {
    let cs = bodies
        .into_iter()
        .enumerate()
        .map(|(i, b)| Constraint::new(shape_name(i).as_str(), b))
        .collect();
    ShapesDoc::new(cs, targets).expect("generated names are distinct")
}

/// `(G, C, T, H)` with `|G| + |H| <= 8`.
pub fn instance() -> BoxedStrategy<ProblemInstance> {
    (prop::collection::vec((atom(), any::<bool>()), 0..=8), shapes_doc())
        .prop_map(|(atoms, doc)| {
            let mut g = DataGraph::new();
            let mut h = DataGraph::new();
            for (a, hyp) in atoms {
                if !g.contains(&a) && !h.contains(&a) {
                    if hyp {
                        h.insert(a)
                    } else {
                        g.insert(a)
                    };
                }
            }
            ProblemInstance::new(g, doc, h).expect("fixed vocabulary has no clashes")
        })
        .boxed()
}

/// A nonempty graph with an acyclic shapes document over its nodes.
pub fn acyclic_instance() -> BoxedStrategy<(DataGraph, ShapesDoc)> {
    prop::collection::vec(atom(), 1..=8)
        .prop_flat_map(|atoms| {
            let g: DataGraph = atoms.into_iter().collect();
            let nodes: Vec<String> = g.nodes().iter().map(|n| n.to_string()).collect();
            (Just(g), acyclic_doc(nodes))
        })
        .boxed()
}

fn term() -> BoxedStrategy<Term> {
    prop_oneof![
        3 => (0..3usize).prop_map(|v| Term::Var(Var::new(VARS[v]))),
        1 => (0..3usize).prop_map(|n| Term::Node(Node::new(NODES[n]))),
    ]
    .boxed()
}

pub fn query_atom() -> BoxedStrategy<QueryAtom> {
    prop_oneof![
        (0..2usize, term()).prop_map(|(c, arg)| QueryAtom::Class {
            class: CLASSES[c].into(),
            arg
        }),
        (0..2usize, term(), term()).prop_map(|(p, subject, object)| QueryAtom::Prop {
            prop: PROPS[p].into(),
            subject,
            object
        }),
    ]
    .boxed()
}

pub fn bgp() -> BoxedStrategy<Pattern> {
    prop::collection::vec(query_atom(), 1..=3)
        .prop_map(Pattern::Bgp)
        .boxed()
}

/// Patterns built from BGPs with AND and OPT.
pub fn pattern() -> BoxedStrategy<Pattern> {
    bgp()
        .prop_recursive(2, 6, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Pattern::and(a, b)),
                (inner.clone(), inner).prop_map(|(a, b)| Pattern::opt(a, b)),
            ]
        })
        .boxed()
}

pub fn wd_pattern() -> BoxedStrategy<Pattern> {
    pattern()
        .prop_filter("well-designed", |p| {
            shacq_core::is_well_designed(&Query::new(p.clone()))
        })
        .boxed()
}

pub fn project(p: BoxedStrategy<Pattern>) -> BoxedStrategy<Query> {
    (p, prop::sample::subsequence(VARS.to_vec(), 0..=3))
        .prop_map(|(p, xs)| Query::projected(p, xs.into_iter().map(Var::new)))
        .boxed()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Language {
    Bgp,
    PiBgp,
    Wdq,
    PiWdq,
}

impl Language {
    pub const ALL: [Language; 4] = [Language::Bgp, Language::PiBgp, Language::Wdq, Language::PiWdq];

    pub fn query(self) -> BoxedStrategy<Query> {
        match self {
            Language::Bgp => bgp().prop_map(Query::new).boxed(),
            Language::PiBgp => project(bgp()),
            Language::Wdq => wd_pattern().prop_map(Query::new).boxed(),
            Language::PiWdq => project(wd_pattern()),
        }
    }
}
