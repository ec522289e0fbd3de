//! Nodes, atoms, data graphs and assignments, plus the fact format.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::error::{Error, ParseError, Result};
use crate::lexer::{is_identifier, Cursor, Tok};

macro_rules! name_type {
    ($(#[$m:meta])* $name:ident) => {
        $(#[$m])*
        #[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(Arc<str>);

        impl $name {
            /// Panics if `s` is not an identifier; use `try_new` for untrusted input.
            pub fn new(s: &str) -> Self {
                Self::try_new(s).unwrap_or_else(|| panic!("invalid identifier `{s}`"))
            }

            pub fn try_new(s: &str) -> Option<Self> {
                is_identifier(s).then(|| $name(Arc::from(s)))
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                $name::new(s)
            }
        }
    };
}

name_type!(
    /// A graph node.
    Node
);
name_type!(
    /// A class, property or shape name.
    Symbol
);

/// A ground class or property atom.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Atom {
    Class { class: Symbol, node: Node },
    Prop { prop: Symbol, subject: Node, object: Node },
}

impl Atom {
    pub fn class(class: impl Into<Symbol>, node: impl Into<Node>) -> Self {
        Atom::Class {
            class: class.into(),
            node: node.into(),
        }
    }

    pub fn prop(prop: impl Into<Symbol>, subject: impl Into<Node>, object: impl Into<Node>) -> Self {
        Atom::Prop {
            prop: prop.into(),
            subject: subject.into(),
            object: object.into(),
        }
    }

    pub fn predicate(&self) -> &Symbol {
        match self {
            Atom::Class { class, .. } => class,
            Atom::Prop { prop, .. } => prop,
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = &Node> {
        let (a, b) = match self {
            Atom::Class { node, .. } => (node, None),
            Atom::Prop { subject, object, .. } => (subject, Some(object)),
        };
        core::iter::once(a).chain(b)
    }

    // Bytes of the rendered form without the trailing dot.
    fn text_bytes(&self) -> impl Iterator<Item = u8> + '_ {
        let (pred, a, b) = match self {
            Atom::Class { class, node } => (class, node, None),
            Atom::Prop { prop, subject, object } => (prop, subject, Some(object)),
        };
        pred.as_str()
            .bytes()
            .chain(core::iter::once(b'('))
            .chain(a.as_str().bytes())
            .chain(
                b.into_iter()
                    .flat_map(|o| core::iter::once(b',').chain(o.as_str().bytes())),
            )
            .chain(core::iter::once(b')'))
    }
}

impl Ord for Atom {
    fn cmp(&self, other: &Self) -> Ordering {
        self.text_bytes().cmp(other.text_bytes())
    }
}

impl PartialOrd for Atom {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Class { class, node } => write!(f, "{class}({node})"),
            Atom::Prop { prop, subject, object } => write!(f, "{prop}({subject},{object})"),
        }
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A finite set of ground atoms.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DataGraph {
    atoms: BTreeSet<Atom>,
}

impl DataGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, atom: Atom) -> bool {
        self.atoms.insert(atom)
    }

    pub fn remove(&mut self, atom: &Atom) -> bool {
        self.atoms.remove(atom)
    }

    pub fn contains(&self, atom: &Atom) -> bool {
        self.atoms.contains(atom)
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Atom> {
        self.atoms.iter()
    }

    pub fn atoms(&self) -> &BTreeSet<Atom> {
        &self.atoms
    }

    /// V(G): every node occurring in some atom.
    pub fn nodes(&self) -> BTreeSet<Node> {
        self.atoms.iter().flat_map(|a| a.nodes().cloned()).collect()
    }

    pub fn union(&self, other: &DataGraph) -> DataGraph {
        self.atoms.union(&other.atoms).cloned().collect()
    }

    pub fn difference(&self, other: &DataGraph) -> DataGraph {
        self.atoms.difference(&other.atoms).cloned().collect()
    }

    pub fn intersection(&self, other: &DataGraph) -> DataGraph {
        self.atoms.intersection(&other.atoms).cloned().collect()
    }

    pub fn is_subset(&self, other: &DataGraph) -> bool {
        self.atoms.is_subset(&other.atoms)
    }

    pub fn is_disjoint(&self, other: &DataGraph) -> bool {
        self.atoms.is_disjoint(&other.atoms)
    }
}

impl FromIterator<Atom> for DataGraph {
    fn from_iter<I: IntoIterator<Item = Atom>>(iter: I) -> Self {
        DataGraph {
            atoms: iter.into_iter().collect(),
        }
    }
}

impl Extend<Atom> for DataGraph {
    fn extend<I: IntoIterator<Item = Atom>>(&mut self, iter: I) {
        self.atoms.extend(iter)
    }
}

impl IntoIterator for DataGraph {
    type Item = Atom;
    type IntoIter = alloc::collections::btree_set::IntoIter<Atom>;

    fn into_iter(self) -> Self::IntoIter {
        self.atoms.into_iter()
    }
}

impl<'a> IntoIterator for &'a DataGraph {
    type Item = &'a Atom;
    type IntoIter = alloc::collections::btree_set::Iter<'a, Atom>;

    fn into_iter(self) -> Self::IntoIter {
        self.atoms.iter()
    }
}

impl fmt::Debug for DataGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.atoms.iter()).finish()
    }
}

impl fmt::Display for DataGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for atom in &self.atoms {
            writeln!(f, "{atom}.")?;
        }
        Ok(())
    }
}

/// A shape atom `s(a)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ShapeAtom {
    pub shape: Symbol,
    pub node: Node,
}

impl ShapeAtom {
    pub fn new(shape: impl Into<Symbol>, node: impl Into<Node>) -> Self {
        ShapeAtom {
            shape: shape.into(),
            node: node.into(),
        }
    }
}

impl fmt::Display for ShapeAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.shape, self.node)
    }
}

impl fmt::Debug for ShapeAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A data graph together with a set of shape labels on its nodes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assignment {
    graph: DataGraph,
    labels: BTreeSet<ShapeAtom>,
}

impl Assignment {
    pub fn new(graph: DataGraph, labels: BTreeSet<ShapeAtom>) -> Result<Self> {
        let nodes = graph.nodes();
        if let Some(bad) = labels.iter().find(|l| !nodes.contains(&l.node)) {
            return Err(Error::LabelOutsideGraph(bad.to_string()));
        }
        Ok(Assignment { graph, labels })
    }

    pub fn graph(&self) -> &DataGraph {
        &self.graph
    }

    pub fn labels(&self) -> &BTreeSet<ShapeAtom> {
        &self.labels
    }

    /// Nodes labelled with `shape`.
    pub fn extension(&self, shape: &Symbol) -> BTreeSet<Node> {
        self.labels
            .iter()
            .filter(|l| &l.shape == shape)
            .map(|l| l.node.clone())
            .collect()
    }

    pub fn into_parts(self) -> (DataGraph, BTreeSet<ShapeAtom>) {
        (self.graph, self.labels)
    }
}

/// Identifier kinds tracked to keep the namespaces of one instance apart.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Node,
    Class,
    Property,
    Shape,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Node => "node",
            Kind::Class => "class",
            Kind::Property => "property",
            Kind::Shape => "shape",
        }
    }
}

/// First-use registry of identifier kinds.
#[derive(Clone, Debug, Default)]
pub struct Namespaces {
    seen: BTreeMap<String, Kind>,
}

impl Namespaces {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn claim(&mut self, name: &str, kind: Kind) -> Result<()> {
        match self.seen.get(name) {
            Some(&k) if k != kind => Err(Error::NamespaceClash {
                symbol: name.to_string(),
                first: k.name(),
                second: kind.name(),
            }),
            Some(_) => Ok(()),
            None => {
                self.seen.insert(name.to_string(), kind);
                Ok(())
            }
        }
    }

    pub fn claim_atom(&mut self, atom: &Atom) -> Result<()> {
        match atom {
            Atom::Class { class, node } => {
                self.claim(class.as_str(), Kind::Class)?;
                self.claim(node.as_str(), Kind::Node)
            }
            Atom::Prop { prop, subject, object } => {
                self.claim(prop.as_str(), Kind::Property)?;
                self.claim(subject.as_str(), Kind::Node)?;
                self.claim(object.as_str(), Kind::Node)
            }
        }
    }

    pub fn claim_graph(&mut self, graph: &DataGraph) -> Result<()> {
        graph.iter().try_for_each(|a| self.claim_atom(a))
    }
}

pub(crate) fn parse_atom_tokens(cur: &mut Cursor) -> core::result::Result<Atom, ParseError> {
    let pred = cur.ident()?;
    cur.expect(&Tok::LParen)?;
    let first = cur.ident()?;
    let atom = if cur.eat(&Tok::Comma) {
        let second = cur.ident()?;
        Atom::Prop {
            prop: Symbol::new(&pred),
            subject: Node::new(&first),
            object: Node::new(&second),
        }
    } else {
        Atom::Class {
            class: Symbol::new(&pred),
            node: Node::new(&first),
        }
    };
    cur.expect(&Tok::RParen)?;
    Ok(atom)
}

// Facts until end of input or until `stop` returns true on the next token.
pub(crate) fn parse_facts_until(
    cur: &mut Cursor,
    ns: &mut Namespaces,
    stop: impl Fn(&Tok) -> bool,
) -> Result<Vec<Atom>> {
    let mut g = Vec::new();
    while let Some(t) = cur.peek() {
        if stop(t) {
            break;
        }
        let (line, column) = cur.position();
        let atom = parse_atom_tokens(cur)?;
        cur.expect(&Tok::Dot)?;
        ns.claim_atom(&atom).map_err(|e| match e {
            Error::NamespaceClash { symbol, first, second } => Error::Syntax(ParseError::new(
                line,
                column,
                alloc::format!("`{symbol}` used as {first} and as {second}"),
            )),
            other => other,
        })?;
        g.push(atom);
    }
    Ok(g)
}

/// Parses the fact format: one `Class(node).` or `prop(a,b).` per line.
pub fn parse_data_graph(text: &str) -> Result<DataGraph> {
    let mut cur = Cursor::new(text)?;
    let mut ns = Namespaces::new();
    Ok(parse_facts_until(&mut cur, &mut ns, |_| false)?.into_iter().collect())
}

/// Canonical rendering, one fact per line in atom order.
pub fn serialize_data_graph(g: &DataGraph) -> String {
    g.to_string()
}

/// V(G) as a free function.
pub fn nodes_of(g: &DataGraph) -> BTreeSet<Node> {
    g.nodes()
}
