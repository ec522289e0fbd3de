use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{CnfFormula, ColoringInstance, Gadget, Literal, PairList, QbfInstance};
use crate::cqa::Semantics;
use crate::error::{Error, Result};
use crate::graph::{Atom, DataGraph};
use crate::query::{parse_query, Mapping, Query};
use crate::repair::{MutabilityHints, PreferenceOrder, ProblemInstance};
use crate::shapes::parse_shapes_doc;

const LIT: &str = "shape lit := Lit & ((T & !F & exists dual . F) | (F & !T & exists dual . T)).\n";
const CL: &str = "shape cl := Cl & =3 ^or & =1 and & ((F & !T & forall ^or . F) | (T & !F & exists ^or . T)).\n";

#[derive(Default)]
struct Builder {
    g: DataGraph,
    h: DataGraph,
    hints: Vec<Atom>,
    hyp_hints: Vec<Atom>,
}

impl Builder {
    fn class(&mut self, c: &str, n: &str) {
        self.g.insert(Atom::class(c, n));
    }

    fn prop(&mut self, p: &str, s: &str, o: &str) {
        self.g.insert(Atom::prop(p, s, o));
    }

    fn mutable_class(&mut self, c: &str, n: &str) {
        let a = Atom::class(c, n);
        self.g.insert(a.clone());
        self.hints.push(a);
    }

    /// Both truth classes, each free to be dropped.
    fn truth(&mut self, n: &str) {
        self.mutable_class("T", n);
        self.mutable_class("F", n);
    }

    /// `prop` links `first`, the sorted `middle` nodes and `last` into one chain.
    fn chain(&mut self, prop: &str, first: &str, middle: &BTreeSet<String>, last: &str) {
        let nodes: Vec<&str> = core::iter::once(first)
            .chain(middle.iter().map(String::as_str))
            .chain(core::iter::once(last))
            .collect();
        for w in nodes.windows(2) {
            self.prop(prop, w[0], w[1]);
        }
    }

    fn finish(
        self,
        shapes: &str,
        query: &str,
        mapping: Mapping,
        order: PreferenceOrder,
        semantics: Semantics,
    ) -> Gadget {
        let doc = parse_shapes_doc(shapes).expect("gadget shapes parse");
        let budget = self.hints.len() + self.hyp_hints.len();
        let instance = ProblemInstance::new(self.g, doc, self.h)
            .and_then(|p| {
                p.with_hints(MutabilityHints {
                    graph: self.hints,
                    hypotheses: self.hyp_hints,
                })
            })
            .expect("gadget instance is well formed");
        Gadget {
            instance,
            query: parse_query(query).expect("gadget query parses"),
            mapping,
            order,
            semantics,
            budget,
        }
    }
}

fn literal_node(f: &CnfFormula, l: Literal) -> String {
    let sign = if l.positive { "pos" } else { "neg" };
    format!("{sign}_{}", f.variables()[l.var])
}

fn mapping(pairs: &[(&str, &str)]) -> Mapping {
    pairs
        .iter()
        .map(|(v, n)| (crate::query::Var::new(v), crate::graph::Node::new(n)))
        .collect()
}

/// Literal, clause and formula nodes of `f`, connected by `dual`, `or` and
/// `and`, all carrying both truth classes. Returns the nodes created.
fn encode(
    b: &mut Builder,
    f: &CnfFormula,
    prefix: &str,
    formula: &str,
    lit_class: &dyn Fn(usize) -> &'static str,
) -> BTreeSet<String> {
    let mut nodes = BTreeSet::new();
    for v in 0..f.variables().len() {
        let (p, n) = (literal_node(f, Literal::pos(v)), literal_node(f, Literal::neg(v)));
        for (a, d) in [(&p, &n), (&n, &p)] {
            b.class(lit_class(v), a);
            b.truth(a);
            b.prop("dual", a, d);
        }
        nodes.insert(p);
        nodes.insert(n);
    }
    for (j, clause) in f.clauses().iter().enumerate() {
        let c = format!("{prefix}c{}", j + 1);
        let mut used = BTreeSet::new();
        for (k, &l) in clause.iter().enumerate() {
            let mut node = literal_node(f, l);
            if !used.insert(l) {
                // A repeated literal gets its own node with the same dual, so
                // that the clause still has three distinct disjuncts.
                node = format!("{c}_l{}", k + 1);
                b.class(lit_class(l.var), &node);
                b.truth(&node);
                b.prop("dual", &node, &literal_node(f, l.negated()));
                nodes.insert(node.clone());
            }
            b.prop("or", &node, &c);
        }
        b.class("Cl", &c);
        b.truth(&c);
        b.prop("and", &c, formula);
        nodes.insert(c);
    }
    b.class("Phi", formula);
    b.truth(formula);
    nodes
}

fn sat_builder(f: &CnfFormula) -> Builder {
    let mut b = Builder::default();
    let nodes = encode(&mut b, f, "", "s", &|_| "Lit");
    b.chain("next", "s", &nodes, "e");
    b
}

const SAT_SHAPES: &str = "shape phi := Phi & (((forall ^and . T) & T & !F) | ((exists ^and . F) & F & !T)).
shape val := (forall next* . (const(e) | phi | lit | cl)) & exists next* . const(e).
target val(s).
";

/// Truth assignments of `f` as repairs; `T(s)` survives exactly when the
/// assignment satisfies `f`. Targets brave answers under the plain order.
pub fn gen_sat(f: &CnfFormula) -> Gadget {
    let b = sat_builder(f);
    let shapes = [LIT, CL, SAT_SHAPES].concat();
    b.finish(
        &shapes,
        "T(?x)",
        mapping(&[("x", "s")]),
        PreferenceOrder::Any,
        Semantics::Brave,
    )
}

const CARDMIN_SHAPES: &str =
    "shape copyx := CopyX & exists copy_var & ((F & exists copy_var . F) | (!F & exists copy_var . T)).
shape copys := CopyS & exists copy_phi & ((!T & exists copy_phi . F) | (T & exists copy_phi . T)).
shape xone := X1.
shape fin := E & ((T & !F & =2 ^nextp* . ((Phi & T) | (X1 & T))) | (F & !T & exists ^nextp* . ((Phi & F) | (X1 & F)))).
shape valp := (forall nextp* . (const(s) | fin | xone | copyx | copys)) & exists nextp* . const(e).
target valp(s).
";

/// The SAT gadget with copies that charge one change per true variable and
/// more than all of them for a falsified formula, so cardinality-minimal
/// repairs are the minimal models. `T(e)` survives iff `x1` is true.
pub fn gen_cardminsat(f: &CnfFormula, x1: usize) -> Result<Gadget> {
    if x1 >= f.variables().len() {
        return Err(Error::InvalidInstance(format!("no variable #{x1} in the formula")));
    }
    let mut b = sat_builder(f);
    let mut copies = BTreeSet::new();
    for v in f.variables() {
        let (xc, sc) = (format!("vcopy_{v}"), format!("scopy_{v}"));
        b.class("CopyX", &xc);
        b.mutable_class("F", &xc);
        b.prop("copy_var", &xc, &format!("pos_{v}"));
        b.class("CopyS", &sc);
        b.mutable_class("T", &sc);
        b.prop("copy_phi", &sc, "s");
        copies.insert(xc);
        copies.insert(sc);
    }
    b.class("CopyS", "scopy");
    b.mutable_class("T", "scopy");
    b.prop("copy_phi", "scopy", "s");
    copies.insert("scopy".to_string());
    let x1_node = literal_node(f, Literal::pos(x1));
    b.class("X1", &x1_node);
    copies.insert(x1_node);
    b.class("E", "e");
    b.truth("e");
    b.chain("nextp", "s", &copies, "e");
    let shapes = [LIT, CL, SAT_SHAPES, CARDMIN_SHAPES].concat();
    Ok(b.finish(
        &shapes,
        "T(?x)",
        mapping(&[("x", "e")]),
        PreferenceOrder::Card,
        Semantics::Brave,
    ))
}

const NO_EXT: &str = "(exists (next | ^next)* . NoExt)";

/// Repairs either fix only `X` and mark the formula `NoExt`, or fix `X` and
/// `Y` to a model. A `NoExt` repair is subset-minimal iff its `X` part has no
/// extension to a model.
pub fn gen_qbf2(q: &QbfInstance) -> Gadget {
    let f = q.matrix();
    let mut b = Builder::default();
    let lit_class = |v: usize| if q.is_x(v) { "LitX" } else { "LitY" };
    let nodes = encode(&mut b, f, "", "s", &lit_class);
    b.chain("next", "s", &nodes, "e");
    let no_ext = Atom::class("NoExt", "s");
    b.h.insert(no_ext.clone());
    b.hyp_hints.push(no_ext);
    let choice = "((T & !F & exists dual . F) | (F & !T & exists dual . T))";
    let shapes = format!(
        "shape litx := LitX & {choice}.
shape lity := LitY & (((!{NO_EXT}) & {choice}) | ({NO_EXT} & !F & !T)).
shape cl := Cl & =3 ^or & =1 and & (((!{NO_EXT}) & ((F & !T & forall ^or . F) | (T & !F & exists ^or . T))) | ({NO_EXT} & !F & !T)).
shape phi := Phi & ((!NoExt & T & !F & (forall ^and . T)) | (NoExt & !F & !T)).
shape val := (forall next* . (const(e) | phi | litx | lity | cl)) & exists next* . const(e).
target val(s).
"
    );
    b.finish(
        &shapes,
        "NoExt(?x)",
        mapping(&[("x", "s")]),
        PreferenceOrder::Subset,
        Semantics::Brave,
    )
}

const COLORS: [&str; 3] = ["r", "g", "b"];

const COLORING_SHAPES: &str = "shape leaf := L & =1 col.
shape inner := I & =3 col.
shape valv := (forall next* . (const(s) | const(e) | leaf | inner)) & exists next* . const(e).
shape valc := =2 neq.
target valv(s). target valc(r). target valc(g). target valc(b).
";

fn coloring_pattern(g: &ColoringInstance) -> String {
    let mut atoms: Vec<String> = g
        .vertices()
        .iter()
        .enumerate()
        .map(|(i, v)| format!("col({v},?x{})", i + 1))
        .collect();
    atoms.extend(g.edges().iter().map(|(i, j)| format!("neq(?x{},?x{})", i + 1, j + 1)));
    format!("{{ {} }}", atoms.join(", "))
}

/// Repairs pick one color per leaf. The answer `{}` to `⊤ OPT coloring`
/// holds in a repaired graph iff that leaf coloring has no proper extension.
pub fn gen_coloring2(g: &ColoringInstance) -> Result<Gadget> {
    let leaves = g.leaves();
    if leaves.is_empty() {
        return Err(Error::MalformedGraph("the graph has no leaf".to_string()));
    }
    for v in g.vertices() {
        if ["L", "I", "col", "neq", "next", "leaf", "inner", "valv", "valc"].contains(&v.as_str()) {
            return Err(Error::MalformedGraph(format!(
                "vertex name `{v}` clashes with the encoding"
            )));
        }
    }
    let mut b = Builder::default();
    for (i, v) in g.vertices().iter().enumerate() {
        let leaf = leaves.contains(&i);
        b.class(if leaf { "L" } else { "I" }, v);
        for c in COLORS {
            if leaf {
                b.g.insert(Atom::prop("col", v.as_str(), c));
                b.hints.push(Atom::prop("col", v.as_str(), c));
            } else {
                b.prop("col", v, c);
            }
        }
    }
    for c in COLORS {
        for d in COLORS.iter().filter(|d| **d != c) {
            b.prop("neq", c, d);
        }
    }
    // Colors stay off the chain: they satisfy none of the vertex shapes.
    let vertices: BTreeSet<String> = g.vertices().iter().cloned().collect();
    b.chain("next", "s", &vertices, "e");
    let query = format!("{{}} OPT {}", coloring_pattern(g));
    Ok(b.finish(
        COLORING_SHAPES,
        &query,
        Mapping::new(),
        PreferenceOrder::Any,
        Semantics::Brave,
    ))
}

/// The boolean query `π∅(coloring)` for the coloring gadget; under AR it holds
/// iff every leaf coloring extends.
pub fn coloring_boolean_query(g: &ColoringInstance) -> Query {
    parse_query(&format!("SELECT {}", coloring_pattern(g))).expect("coloring query parses")
}

const LISTPAIR_SHAPES: &str = "shape phi := Phi & ((F & !T & exists ^and . F) | (T & !F & (forall ^and . T))).
shape cnt := Cnt & =1 is_phi & =1 is_psi.
shape val := (forall next* . (const(s) | const(e) | lit | cl | phi | cnt)) & exists next* . const(e).
target val(s).
";

/// One SAT gadget per formula, indexed by counters. `F(φ)` lies in every
/// repaired graph iff `φ` is unsatisfiable.
pub fn gen_listpair_sat(pl: &PairList) -> Gadget {
    let mut b = Builder::default();
    let mut nodes = BTreeSet::new();
    for (i, (phi, psi)) in pl.pairs().iter().enumerate() {
        let (fp, fq, cnt) = (format!("phi{}", i + 1), format!("psi{}", i + 1), format!("i{}", i + 1));
        nodes.extend(encode(&mut b, phi, &format!("{fp}_"), &fp, &|_| "Lit"));
        nodes.extend(encode(&mut b, psi, &format!("{fq}_"), &fq, &|_| "Lit"));
        b.class("Cnt", &cnt);
        b.prop("is_phi", &cnt, &fp);
        b.prop("is_psi", &cnt, &fq);
        nodes.extend([fp, fq, cnt]);
    }
    b.chain("next", "s", &nodes, "e");
    let shapes = [LIT, CL, LISTPAIR_SHAPES].concat();
    b.finish(
        &shapes,
        "SELECT ?z {is_phi(?x,?y), F(?y)} OPT {is_psi(?x,?z), F(?z)}",
        Mapping::new(),
        PreferenceOrder::Any,
        Semantics::Iar,
    )
}
