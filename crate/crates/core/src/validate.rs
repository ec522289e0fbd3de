//! Path and shape evaluation, supported models and validation.

use alloc::collections::BTreeSet;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use crate::engine::{Labels, Program, Source, State};
use crate::error::{Error, Result};
use crate::graph::{Assignment, DataGraph, Node, ShapeAtom};
use crate::shapes::{Constraint, PathExpr, ShapeExpr, ShapesDoc};

fn label_source(i: &Assignment) -> (Vec<Node>, Vec<crate::graph::Symbol>) {
    let nodes = i.labels().iter().map(|l| l.node.clone()).collect();
    let shapes = i.labels().iter().map(|l| l.shape.clone()).collect();
    (nodes, shapes)
}

fn exact_labels(prog: &Program, i: &Assignment) -> Labels {
    let mut sets = vec![prog.empty_set(); prog.shapes.len()];
    for l in i.labels() {
        if let (Some(s), Some(n)) = (prog.shape(&l.shape), prog.node(&l.node)) {
            sets[s].insert(n);
        }
    }
    Labels {
        lo: sets.clone(),
        hi: sets,
    }
}

/// All pairs connected by `e` in the assignment's graph.
pub fn eval_path(e: &PathExpr, i: &Assignment) -> BTreeSet<(Node, Node)> {
    let prog = Program::compile(Source {
        graphs: vec![i.graph()],
        paths: vec![e],
        ..Source::default()
    });
    let mut st = State::exact(&prog, i.graph());
    let rel = st.rel(crate::engine::Side::Lo, prog.root_paths[0]);
    let mut out = BTreeSet::new();
    for (c, row) in rel.iter().enumerate() {
        for d in row.ones() {
            out.insert((prog.nodes[c].clone(), prog.nodes[d].clone()));
        }
    }
    out
}

/// The extension of `phi` in the assignment. Constants evaluate to themselves
/// even when they do not occur in the graph.
pub fn eval_shape(phi: &ShapeExpr, i: &Assignment) -> BTreeSet<Node> {
    let (nodes, shapes) = label_source(i);
    let prog = Program::compile(Source {
        graphs: vec![i.graph()],
        exprs: vec![phi],
        nodes,
        shapes,
        ..Source::default()
    });
    let labels = exact_labels(&prog, i);
    let mut st = State::exact(&prog, i.graph());
    let (value, _) = st.eval(&labels, prog.root_exprs[0]);
    prog.set_to_nodes(&value)
}

/// Whether every constraint body evaluates exactly to its name's labels.
pub fn is_supported_model(i: &Assignment, constraints: &[Constraint]) -> Result<bool> {
    let defined: BTreeSet<_> = constraints.iter().map(|c| &c.name).collect();
    if let Some(l) = i.labels().iter().find(|l| !defined.contains(&l.shape)) {
        return Err(Error::UndefinedShape(l.shape.to_string()));
    }
    let (nodes, shapes) = label_source(i);
    let prog = Program::compile(Source {
        graphs: vec![i.graph()],
        constraints,
        nodes,
        shapes,
        ..Source::default()
    });
    let labels = exact_labels(&prog, i);
    let mut st = State::exact(&prog, i.graph());
    for c in constraints {
        let s = prog.shape(&c.name).expect("constraint names are compiled");
        let body = prog.bodies[s].expect("constraint has a body");
        let (value, _) = st.eval(&labels, body);
        if value != labels.lo[s] {
            return Ok(false);
        }
    }
    Ok(true)
}

pub(crate) fn compile_doc<'a>(doc: &'a ShapesDoc, graphs: Vec<&'a DataGraph>) -> Program {
    Program::compile(Source {
        graphs,
        constraints: doc.constraints(),
        nodes: doc.targets().iter().map(|t| t.node.clone()).collect(),
        ..Source::default()
    })
}

pub(crate) fn compile_targets<'a>(
    prog: &Program,
    targets: impl IntoIterator<Item = &'a ShapeAtom>,
) -> Vec<(usize, usize)> {
    targets
        .into_iter()
        .map(|t| prog.target(t).expect("target compiled into program"))
        .collect()
}

/// A supported model of the constraints containing the targets, if one
/// exists. Among several, the one with fewest labels on recursive shape names
/// is returned, ties broken by canonical atom order.
pub fn find_validating_assignment(g: &DataGraph, doc: &ShapesDoc) -> Option<Assignment> {
    let prog = compile_doc(doc, vec![g]);
    let targets = compile_targets(&prog, doc.targets());
    let mut st = State::exact(&prog, g);
    let labels = st.initial_labels(&targets);
    let model = st.find_smallest_model(labels, &targets)?;
    let atoms = model.to_atoms(&prog);
    Some(Assignment::new(g.clone(), atoms).expect("model labels lie within the graph"))
}

pub fn validates(g: &DataGraph, doc: &ShapesDoc) -> bool {
    let prog = compile_doc(doc, vec![g]);
    let targets = compile_targets(&prog, doc.targets());
    let mut st = State::exact(&prog, g);
    let labels = st.initial_labels(&targets);
    st.find_model(labels, &targets).is_some()
}

/// Constants used in constraint bodies that are not nodes of `g`. They still
/// evaluate to themselves, which is rarely intended.
pub fn constants_outside(doc: &ShapesDoc, g: &DataGraph) -> BTreeSet<Node> {
    let nodes = g.nodes();
    let mut syms = crate::shapes::Symbols::default();
    for c in doc.constraints() {
        c.body.collect_symbols(&mut syms);
    }
    syms.constants.into_iter().filter(|c| !nodes.contains(c)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{parse_data_graph, Atom, Symbol};
    use crate::shapes::parse_shapes_doc;

    const G: &str = "Prof(Ann). worksWith(Lea,Ann). Student(Ben). id(Ben,ID1). id(Ben,ID2).
        enrolledIn(Ben,c). id(John,ID3). Student(John).";
    const C: &str = "shape Profshape := Prof | exists worksWith . Profshape .
        shape Studshape := Student & =1 id & exists enrolledIn .";

    fn nodes(names: &[&str]) -> BTreeSet<Node> {
        names.iter().map(|n| Node::new(n)).collect()
    }

    #[test]
    fn running_example_validation() {
        let g = parse_data_graph(G).unwrap();
        let doc = parse_shapes_doc(&(C.to_string() + "target Studshape(Ben). target Studshape(John).")).unwrap();
        assert!(!validates(&g, &doc));
        assert!(find_validating_assignment(&g, &doc).is_none());

        let doc = parse_shapes_doc(&(C.to_string() + "target Profshape(Lea).")).unwrap();
        let i = find_validating_assignment(&g, &doc).unwrap();
        assert_eq!(i.extension(&Symbol::new("Profshape")), nodes(&["Ann", "Lea"]));
        assert!(is_supported_model(&i, doc.constraints()).unwrap());
    }

    #[test]
    fn path_examples() {
        let g = parse_data_graph(G).unwrap();
        let i = Assignment::new(g, BTreeSet::new()).unwrap();
        let r = eval_path(&PathExpr::prop("worksWith"), &i);
        assert_eq!(r, [(Node::new("Lea"), Node::new("Ann"))].into_iter().collect());

        let g: DataGraph = [Atom::prop("p", "a", "b")].into_iter().collect();
        let i = Assignment::new(g, BTreeSet::new()).unwrap();
        let star = eval_path(&PathExpr::star(PathExpr::prop("p")), &i);
        let star: Vec<(&str, &str)> = star.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        assert_eq!(star, [("a", "a"), ("a", "b"), ("b", "b")]);
    }

    #[test]
    fn shape_examples() {
        let g = parse_data_graph(G).unwrap();
        let doc = parse_shapes_doc(C).unwrap();
        let labels = [ShapeAtom::new("Profshape", "Lea"), ShapeAtom::new("Profshape", "Ann")]
            .into_iter()
            .collect();
        let i = Assignment::new(g, labels).unwrap();
        assert_eq!(eval_shape(&ShapeExpr::Top, &i).len(), 8);
        assert!(eval_shape(&ShapeExpr::not(ShapeExpr::Top), &i).is_empty());
        let body = doc.body(&Symbol::new("Profshape")).unwrap();
        assert_eq!(eval_shape(body, &i), nodes(&["Ann", "Lea"]));
        assert_eq!(eval_shape(&ShapeExpr::Const(Node::new("zed")), &i), nodes(&["zed"]));
        let doc = parse_shapes_doc("shape s := const(zed) | const(Ann). target s(Ann).").unwrap();
        assert_eq!(constants_outside(&doc, i.graph()), nodes(&["zed"]));
    }

    #[test]
    fn supported_model_edge_cases() {
        let top = [Constraint::new("s", ShapeExpr::Top)];
        let g: DataGraph = [Atom::class("A", "a")].into_iter().collect();
        let i = Assignment::new(g, BTreeSet::new()).unwrap();
        assert!(!is_supported_model(&i, &top).unwrap());
        let empty = Assignment::new(DataGraph::new(), BTreeSet::new()).unwrap();
        assert!(is_supported_model(&empty, &top).unwrap());
        let labelled = Assignment::new(
            [Atom::class("A", "a")].into_iter().collect(),
            [ShapeAtom::new("t", "a")].into_iter().collect(),
        )
        .unwrap();
        assert!(matches!(
            is_supported_model(&labelled, &top),
            Err(Error::UndefinedShape(_))
        ));
    }

    #[test]
    fn self_negation_has_no_model() {
        let g = parse_data_graph("A(a).").unwrap();
        let doc = parse_shapes_doc("shape s := !s.").unwrap();
        assert!(find_validating_assignment(&g, &doc).is_none());
        assert!(find_validating_assignment(&DataGraph::new(), &doc).is_some());
    }
}
