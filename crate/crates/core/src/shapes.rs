//! Shape and path expressions, the shapes document format, and recursion analysis.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, ParseError, Result};
use crate::graph::{Kind, Namespaces, Node, ShapeAtom, Symbol};
use crate::lexer::{Cursor, Tok};

/// Largest accepted counting argument.
pub const MAX_COUNT: u64 = (1 << 31) - 1;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PathExpr {
    Prop(Symbol),
    Inverse(Symbol),
    Seq(Box<PathExpr>, Box<PathExpr>),
    Alt(Box<PathExpr>, Box<PathExpr>),
    Star(Box<PathExpr>),
}

impl PathExpr {
    pub fn prop(p: impl Into<Symbol>) -> Self {
        PathExpr::Prop(p.into())
    }

    pub fn inverse(p: impl Into<Symbol>) -> Self {
        PathExpr::Inverse(p.into())
    }

    pub fn seq(a: PathExpr, b: PathExpr) -> Self {
        PathExpr::Seq(Box::new(a), Box::new(b))
    }

    pub fn alt(a: PathExpr, b: PathExpr) -> Self {
        PathExpr::Alt(Box::new(a), Box::new(b))
    }

    pub fn star(a: PathExpr) -> Self {
        PathExpr::Star(Box::new(a))
    }

    pub fn properties(&self, out: &mut BTreeSet<Symbol>) {
        match self {
            PathExpr::Prop(p) | PathExpr::Inverse(p) => {
                out.insert(p.clone());
            }
            PathExpr::Seq(a, b) | PathExpr::Alt(a, b) => {
                a.properties(out);
                b.properties(out);
            }
            PathExpr::Star(a) => a.properties(out),
        }
    }
}

impl fmt::Display for PathExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PathExpr::Prop(p) => write!(f, "{p}"),
            PathExpr::Inverse(p) => write!(f, "^{p}"),
            PathExpr::Seq(a, b) => write!(f, "({a} / {b})"),
            PathExpr::Alt(a, b) => write!(f, "({a} | {b})"),
            PathExpr::Star(a) => write!(f, "{a}*"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ShapeExpr {
    Top,
    ShapeRef(Symbol),
    ClassRef(Symbol),
    Const(Node),
    And(Box<ShapeExpr>, Box<ShapeExpr>),
    Not(Box<ShapeExpr>),
    AtLeast {
        n: u32,
        path: PathExpr,
        filler: Box<ShapeExpr>,
    },
    PathEq(PathExpr, PathExpr),
    Or(Box<ShapeExpr>, Box<ShapeExpr>),
    Exists(PathExpr, Box<ShapeExpr>),
    Forall(PathExpr, Box<ShapeExpr>),
    AtMost {
        n: u32,
        path: PathExpr,
        filler: Box<ShapeExpr>,
    },
    Exactly {
        n: u32,
        path: PathExpr,
        filler: Box<ShapeExpr>,
    },
}

/// Symbols referenced by an expression, split by namespace.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Symbols {
    pub shapes: BTreeSet<Symbol>,
    pub classes: BTreeSet<Symbol>,
    pub properties: BTreeSet<Symbol>,
    pub constants: BTreeSet<Node>,
}

impl ShapeExpr {
    pub fn and(a: ShapeExpr, b: ShapeExpr) -> Self {
        ShapeExpr::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: ShapeExpr, b: ShapeExpr) -> Self {
        ShapeExpr::Or(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: ShapeExpr) -> Self {
        ShapeExpr::Not(Box::new(a))
    }

    pub fn at_least(n: u32, path: PathExpr, filler: ShapeExpr) -> Self {
        ShapeExpr::AtLeast {
            n,
            path,
            filler: Box::new(filler),
        }
    }

    pub fn at_most(n: u32, path: PathExpr, filler: ShapeExpr) -> Self {
        ShapeExpr::AtMost {
            n,
            path,
            filler: Box::new(filler),
        }
    }

    pub fn exactly(n: u32, path: PathExpr, filler: ShapeExpr) -> Self {
        ShapeExpr::Exactly {
            n,
            path,
            filler: Box::new(filler),
        }
    }

    pub fn exists(path: PathExpr, filler: ShapeExpr) -> Self {
        ShapeExpr::Exists(path, Box::new(filler))
    }

    pub fn forall(path: PathExpr, filler: ShapeExpr) -> Self {
        ShapeExpr::Forall(path, Box::new(filler))
    }

    /// True if only core constructors occur.
    pub fn is_core(&self) -> bool {
        match self {
            ShapeExpr::Top | ShapeExpr::ShapeRef(_) | ShapeExpr::ClassRef(_) | ShapeExpr::Const(_) => true,
            ShapeExpr::PathEq(..) => true,
            ShapeExpr::And(a, b) => a.is_core() && b.is_core(),
            ShapeExpr::Not(a) => a.is_core(),
            ShapeExpr::AtLeast { filler, .. } => filler.is_core(),
            ShapeExpr::Or(..)
            | ShapeExpr::Exists(..)
            | ShapeExpr::Forall(..)
            | ShapeExpr::AtMost { .. }
            | ShapeExpr::Exactly { .. } => false,
        }
    }

    pub fn symbols(&self) -> Symbols {
        let mut out = Symbols::default();
        self.collect_symbols(&mut out);
        out
    }

    pub fn collect_symbols(&self, out: &mut Symbols) {
        match self {
            ShapeExpr::Top => {}
            ShapeExpr::ShapeRef(s) => {
                out.shapes.insert(s.clone());
            }
            ShapeExpr::ClassRef(c) => {
                out.classes.insert(c.clone());
            }
            ShapeExpr::Const(c) => {
                out.constants.insert(c.clone());
            }
            ShapeExpr::And(a, b) | ShapeExpr::Or(a, b) => {
                a.collect_symbols(out);
                b.collect_symbols(out);
            }
            ShapeExpr::Not(a) => a.collect_symbols(out),
            ShapeExpr::PathEq(p, q) => {
                p.properties(&mut out.properties);
                q.properties(&mut out.properties);
            }
            ShapeExpr::AtLeast { path, filler, .. }
            | ShapeExpr::AtMost { path, filler, .. }
            | ShapeExpr::Exactly { path, filler, .. }
            | ShapeExpr::Exists(path, filler)
            | ShapeExpr::Forall(path, filler) => {
                path.properties(&mut out.properties);
                filler.collect_symbols(out);
            }
        }
    }

    fn resolve_names(&mut self, shapes: &BTreeSet<Symbol>) {
        match self {
            ShapeExpr::ClassRef(c) if shapes.contains(c) => *self = ShapeExpr::ShapeRef(c.clone()),
            ShapeExpr::And(a, b) | ShapeExpr::Or(a, b) => {
                a.resolve_names(shapes);
                b.resolve_names(shapes);
            }
            ShapeExpr::Not(a) => a.resolve_names(shapes),
            ShapeExpr::AtLeast { filler, .. }
            | ShapeExpr::AtMost { filler, .. }
            | ShapeExpr::Exactly { filler, .. }
            | ShapeExpr::Exists(_, filler)
            | ShapeExpr::Forall(_, filler) => filler.resolve_names(shapes),
            _ => {}
        }
    }

    fn fmt_atomic(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShapeExpr::Top
            | ShapeExpr::ShapeRef(_)
            | ShapeExpr::ClassRef(_)
            | ShapeExpr::Const(_)
            | ShapeExpr::PathEq(..)
            | ShapeExpr::Not(_) => write!(f, "{self}"),
            _ => write!(f, "({self})"),
        }
    }
}

fn fmt_quant(f: &mut fmt::Formatter<'_>, head: &str, path: &PathExpr, filler: &ShapeExpr) -> fmt::Result {
    write!(f, "{head} {path}")?;
    if *filler != ShapeExpr::Top {
        f.write_str(" . ")?;
        filler.fmt_atomic(f)?;
    }
    Ok(())
}

impl fmt::Display for ShapeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShapeExpr::Top => f.write_str("top"),
            ShapeExpr::ShapeRef(s) | ShapeExpr::ClassRef(s) => write!(f, "{s}"),
            ShapeExpr::Const(c) => write!(f, "const({c})"),
            ShapeExpr::And(a, b) => {
                a.fmt_atomic(f)?;
                f.write_str(" & ")?;
                b.fmt_atomic(f)
            }
            ShapeExpr::Or(a, b) => {
                a.fmt_atomic(f)?;
                f.write_str(" | ")?;
                b.fmt_atomic(f)
            }
            ShapeExpr::Not(a) => {
                f.write_str("!")?;
                a.fmt_atomic(f)
            }
            ShapeExpr::PathEq(p, q) => write!(f, "eqp({p}, {q})"),
            ShapeExpr::AtLeast { n, path, filler } => fmt_quant(f, &alloc::format!(">= {n}"), path, filler),
            ShapeExpr::AtMost { n, path, filler } => fmt_quant(f, &alloc::format!("<= {n}"), path, filler),
            ShapeExpr::Exactly { n, path, filler } => fmt_quant(f, &alloc::format!("= {n}"), path, filler),
            ShapeExpr::Exists(path, filler) => fmt_quant(f, "exists", path, filler),
            ShapeExpr::Forall(path, filler) => fmt_quant(f, "forall", path, filler),
        }
    }
}

/// Rewrites derived forms into core constructors.
pub fn desugar(e: &ShapeExpr) -> ShapeExpr {
    use ShapeExpr as S;
    match e {
        S::Top | S::ShapeRef(_) | S::ClassRef(_) | S::Const(_) | S::PathEq(..) => e.clone(),
        S::And(a, b) => S::and(desugar(a), desugar(b)),
        S::Not(a) => S::not(desugar(a)),
        S::AtLeast { n, path, filler } => S::at_least(*n, path.clone(), desugar(filler)),
        S::Or(a, b) => S::not(S::and(S::not(desugar(a)), S::not(desugar(b)))),
        S::Exists(path, filler) => S::at_least(1, path.clone(), desugar(filler)),
        S::Forall(path, filler) => S::not(S::at_least(1, path.clone(), S::not(desugar(filler)))),
        S::AtMost { n, path, filler } => S::not(S::at_least(n + 1, path.clone(), desugar(filler))),
        S::Exactly { n, path, filler } => {
            let filler = desugar(filler);
            let at_most = S::not(S::at_least(n + 1, path.clone(), filler.clone()));
            if *n == 0 {
                at_most
            } else {
                S::and(at_most, S::at_least(*n, path.clone(), filler))
            }
        }
    }
}

/// A constraint `s <-> body`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub name: Symbol,
    pub body: ShapeExpr,
}

impl Constraint {
    pub fn new(name: impl Into<Symbol>, body: ShapeExpr) -> Self {
        Constraint {
            name: name.into(),
            body,
        }
    }
}

/// Constraints plus targets.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ShapesDoc {
    constraints: Vec<Constraint>,
    targets: BTreeSet<ShapeAtom>,
}

impl ShapesDoc {
    /// Checks that every shape name is defined exactly once.
    pub fn new(constraints: Vec<Constraint>, targets: BTreeSet<ShapeAtom>) -> Result<Self> {
        let mut defined = BTreeSet::new();
        for c in &constraints {
            if !defined.insert(c.name.clone()) {
                return Err(Error::DuplicateDefinition(c.name.to_string()));
            }
        }
        for c in &constraints {
            if let Some(s) = c.body.symbols().shapes.into_iter().find(|s| !defined.contains(s)) {
                return Err(Error::UndefinedShape(s.to_string()));
            }
        }
        if let Some(t) = targets.iter().find(|t| !defined.contains(&t.shape)) {
            return Err(Error::UndefinedShape(t.shape.to_string()));
        }
        Ok(ShapesDoc { constraints, targets })
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn targets(&self) -> &BTreeSet<ShapeAtom> {
        &self.targets
    }

    pub fn body(&self, name: &Symbol) -> Option<&ShapeExpr> {
        self.constraints.iter().find(|c| &c.name == name).map(|c| &c.body)
    }

    pub fn names(&self) -> BTreeSet<Symbol> {
        self.constraints.iter().map(|c| c.name.clone()).collect()
    }

    pub fn with_targets(&self, targets: BTreeSet<ShapeAtom>) -> Result<Self> {
        ShapesDoc::new(self.constraints.clone(), targets)
    }

    /// Symbols used by bodies and targets.
    pub fn symbols(&self) -> Symbols {
        let mut out = Symbols::default();
        for c in &self.constraints {
            out.shapes.insert(c.name.clone());
            c.body.collect_symbols(&mut out);
        }
        for t in &self.targets {
            out.constants.insert(t.node.clone());
        }
        out
    }

    pub fn claim_namespaces(&self, ns: &mut Namespaces) -> Result<()> {
        let syms = self.symbols();
        for s in &syms.shapes {
            ns.claim(s.as_str(), Kind::Shape)?;
        }
        for c in &syms.classes {
            ns.claim(c.as_str(), Kind::Class)?;
        }
        for p in &syms.properties {
            ns.claim(p.as_str(), Kind::Property)?;
        }
        for n in &syms.constants {
            ns.claim(n.as_str(), Kind::Node)?;
        }
        Ok(())
    }
}

impl fmt::Display for ShapesDoc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.constraints {
            writeln!(f, "shape {} := {} .", c.name, c.body)?;
        }
        for t in &self.targets {
            writeln!(f, "target {t} .")?;
        }
        Ok(())
    }
}

const RESERVED: &[&str] = &["shape", "target", "top", "const", "exists", "forall", "eqp"];

fn starts_expr(t: Option<&Tok>) -> bool {
    match t {
        Some(Tok::Ident(s)) => s != "shape" && s != "target",
        Some(Tok::LParen | Tok::Bang | Tok::Ge | Tok::Le | Tok::Eq) => true,
        _ => false,
    }
}

struct ShapeParser {
    cur: Cursor,
}

impl ShapeParser {
    fn name(&mut self, what: &str) -> core::result::Result<String, ParseError> {
        let s = self.cur.ident().map_err(|_| self.cur.unexpected(what))?;
        if RESERVED.contains(&s.as_str()) {
            return Err(self.cur.error(alloc::format!("`{s}` is a reserved word")));
        }
        Ok(s)
    }

    fn or(&mut self) -> core::result::Result<ShapeExpr, ParseError> {
        let mut e = self.and()?;
        while self.cur.eat(&Tok::Pipe) {
            let rhs = self.and()?;
            e = ShapeExpr::or(e, rhs);
        }
        Ok(e)
    }

    fn and(&mut self) -> core::result::Result<ShapeExpr, ParseError> {
        let mut e = self.unary()?;
        while self.cur.eat(&Tok::Amp) {
            let rhs = self.unary()?;
            e = ShapeExpr::and(e, rhs);
        }
        Ok(e)
    }

    fn count(&mut self) -> core::result::Result<u32, ParseError> {
        match self.cur.peek() {
            Some(Tok::Int(n)) if *n <= MAX_COUNT => {
                let n = *n as u32;
                self.cur.next();
                Ok(n)
            }
            Some(Tok::Int(_)) => Err(self.cur.error("count exceeds 2147483647")),
            _ => Err(self.cur.unexpected("count")),
        }
    }

    fn filler(&mut self) -> core::result::Result<ShapeExpr, ParseError> {
        if self.cur.peek() == Some(&Tok::Dot) && starts_expr(self.cur.peek_at(1)) {
            self.cur.next();
            self.or()
        } else {
            Ok(ShapeExpr::Top)
        }
    }

    fn unary(&mut self) -> core::result::Result<ShapeExpr, ParseError> {
        match self.cur.peek() {
            Some(Tok::Bang) => {
                self.cur.next();
                Ok(ShapeExpr::not(self.unary()?))
            }
            Some(Tok::Ge) => {
                self.cur.next();
                let at = self.cur.position();
                let n = self.count()?;
                if n == 0 {
                    return Err(ParseError::new(at.0, at.1, "`>=` needs a count of at least 1"));
                }
                let path = self.path()?;
                Ok(ShapeExpr::at_least(n, path, self.filler()?))
            }
            Some(Tok::Le) => {
                self.cur.next();
                let n = self.count()?;
                let path = self.path()?;
                Ok(ShapeExpr::at_most(n, path, self.filler()?))
            }
            Some(Tok::Eq) => {
                self.cur.next();
                let n = self.count()?;
                let path = self.path()?;
                Ok(ShapeExpr::exactly(n, path, self.filler()?))
            }
            Some(Tok::Ident(s)) if s == "exists" || s == "forall" => {
                let universal = s == "forall";
                self.cur.next();
                let path = self.path()?;
                let filler = self.filler()?;
                Ok(if universal {
                    ShapeExpr::forall(path, filler)
                } else {
                    ShapeExpr::exists(path, filler)
                })
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> core::result::Result<ShapeExpr, ParseError> {
        match self.cur.peek() {
            Some(Tok::LParen) => {
                self.cur.next();
                let e = self.or()?;
                self.cur.expect(&Tok::RParen)?;
                Ok(e)
            }
            Some(Tok::Ident(s)) if s == "top" => {
                self.cur.next();
                Ok(ShapeExpr::Top)
            }
            Some(Tok::Ident(s)) if s == "const" => {
                self.cur.next();
                self.cur.expect(&Tok::LParen)?;
                let c = self.name("node name")?;
                self.cur.expect(&Tok::RParen)?;
                Ok(ShapeExpr::Const(Node::new(&c)))
            }
            Some(Tok::Ident(s)) if s == "eqp" => {
                self.cur.next();
                self.cur.expect(&Tok::LParen)?;
                let p = self.path()?;
                self.cur.expect(&Tok::Comma)?;
                let q = self.path()?;
                self.cur.expect(&Tok::RParen)?;
                Ok(ShapeExpr::PathEq(p, q))
            }
            Some(Tok::Ident(_)) => {
                let n = self.name("shape expression")?;
                Ok(ShapeExpr::ClassRef(Symbol::new(&n)))
            }
            _ => Err(self.cur.unexpected("shape expression")),
        }
    }

    fn path(&mut self) -> core::result::Result<PathExpr, ParseError> {
        let mut p = self.path_seq()?;
        while self.cur.eat(&Tok::Pipe) {
            let rhs = self.path_seq()?;
            p = PathExpr::alt(p, rhs);
        }
        Ok(p)
    }

    fn path_seq(&mut self) -> core::result::Result<PathExpr, ParseError> {
        let mut p = self.path_postfix()?;
        while self.cur.eat(&Tok::Slash) {
            let rhs = self.path_postfix()?;
            p = PathExpr::seq(p, rhs);
        }
        Ok(p)
    }

    fn path_postfix(&mut self) -> core::result::Result<PathExpr, ParseError> {
        let mut p = match self.cur.peek() {
            Some(Tok::LParen) => {
                self.cur.next();
                let p = self.path()?;
                self.cur.expect(&Tok::RParen)?;
                p
            }
            Some(Tok::Caret) => {
                self.cur.next();
                PathExpr::Inverse(Symbol::new(&self.name("property name")?))
            }
            Some(Tok::Ident(_)) => PathExpr::Prop(Symbol::new(&self.name("property name")?)),
            _ => return Err(self.cur.unexpected("path expression")),
        };
        while self.cur.eat(&Tok::Star) {
            p = PathExpr::star(p);
        }
        Ok(p)
    }
}

/// Parses a shapes document of `shape s := e .` and `target s(a) .` statements.
pub fn parse_shapes_doc(text: &str) -> Result<ShapesDoc> {
    let mut p = ShapeParser {
        cur: Cursor::new(text)?,
    };
    let mut constraints = Vec::new();
    let mut targets = Vec::new();
    let mut defined = BTreeSet::new();
    while !p.cur.at_end() {
        if p.cur.peek_keyword("shape") {
            p.cur.next();
            let name = p.name("shape name")?;
            p.cur.expect(&Tok::Define)?;
            let body = p.or()?;
            p.cur.expect(&Tok::Dot)?;
            let name = Symbol::new(&name);
            if !defined.insert(name.clone()) {
                return Err(Error::DuplicateDefinition(name.to_string()));
            }
            constraints.push(Constraint { name, body });
        } else if p.cur.peek_keyword("target") {
            p.cur.next();
            let shape = p.name("shape name")?;
            p.cur.expect(&Tok::LParen)?;
            let node = p.name("node name")?;
            p.cur.expect(&Tok::RParen)?;
            p.cur.expect(&Tok::Dot)?;
            targets.push(ShapeAtom::new(Symbol::new(&shape), Node::new(&node)));
        } else {
            return Err(p.cur.unexpected("`shape` or `target`").into());
        }
    }
    for c in &mut constraints {
        c.body.resolve_names(&defined);
    }
    let doc = ShapesDoc::new(constraints, targets.into_iter().collect())?;
    doc.claim_namespaces(&mut Namespaces::new())?;
    Ok(doc)
}

/// Parses a single shape expression; bare names resolve to shapes if listed in `shapes`.
pub fn parse_shape_expr(text: &str, shapes: &BTreeSet<Symbol>) -> Result<ShapeExpr> {
    let mut p = ShapeParser {
        cur: Cursor::new(text)?,
    };
    let mut e = p.or()?;
    if !p.cur.at_end() {
        return Err(p.cur.unexpected("end of expression").into());
    }
    e.resolve_names(shapes);
    Ok(e)
}

/// Dependency structure of a constraint set.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DependencyInfo {
    /// `s -> s'` when `s'` occurs in the body of `s`.
    pub edges: BTreeMap<Symbol, BTreeSet<Symbol>>,
    pub recursive: bool,
    /// Names lying on some cycle.
    pub cyclic: BTreeSet<Symbol>,
    /// Remaining names, dependencies first, ties broken by name.
    pub order: Vec<Symbol>,
}

pub fn dependency_info(constraints: &[Constraint]) -> DependencyInfo {
    let mut edges: BTreeMap<Symbol, BTreeSet<Symbol>> = BTreeMap::new();
    for c in constraints {
        edges.entry(c.name.clone()).or_default().extend(c.body.symbols().shapes);
    }
    let reach = |from: &Symbol| -> BTreeSet<Symbol> {
        let mut seen = BTreeSet::new();
        let mut stack: Vec<Symbol> = edges.get(from).into_iter().flatten().cloned().collect();
        while let Some(s) = stack.pop() {
            if seen.insert(s.clone()) {
                stack.extend(edges.get(&s).into_iter().flatten().cloned());
            }
        }
        seen
    };
    let cyclic: BTreeSet<Symbol> = edges.keys().filter(|s| reach(s).contains(*s)).cloned().collect();

    let acyclic: BTreeSet<Symbol> = edges.keys().filter(|s| !cyclic.contains(*s)).cloned().collect();
    let mut pending: BTreeMap<Symbol, usize> = acyclic
        .iter()
        .map(|s| {
            let deps = edges[s].iter().filter(|d| acyclic.contains(*d)).count();
            (s.clone(), deps)
        })
        .collect();
    let mut ready: BTreeSet<Symbol> = pending
        .iter()
        .filter(|(_, &d)| d == 0)
        .map(|(s, _)| s.clone())
        .collect();
    let mut order = Vec::new();
    while let Some(s) = ready.pop_first() {
        pending.remove(&s);
        for (t, deps) in pending.iter_mut() {
            if edges[t].contains(&s) {
                *deps -= 1;
                if *deps == 0 {
                    ready.insert(t.clone());
                }
            }
        }
        order.push(s);
    }
    DependencyInfo {
        recursive: !cyclic.is_empty(),
        edges,
        cyclic,
        order,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EX1: &str = "
        shape Profshape := Prof | exists worksWith . Profshape .
        shape Studshape := Student & =1 id & exists enrolledIn .
        target Studshape(Ben) .
        target Studshape(John) .
    ";

    #[test]
    fn parses_running_example() {
        let doc = parse_shapes_doc(EX1).unwrap();
        assert_eq!(doc.constraints().len(), 2);
        assert_eq!(doc.targets().len(), 2);
        let prof = doc.body(&Symbol::new("Profshape")).unwrap();
        assert_eq!(
            *prof,
            ShapeExpr::or(
                ShapeExpr::ClassRef("Prof".into()),
                ShapeExpr::exists(PathExpr::prop("worksWith"), ShapeExpr::ShapeRef("Profshape".into()))
            )
        );
        let stud = doc.body(&Symbol::new("Studshape")).unwrap();
        let expected = ShapeExpr::and(
            ShapeExpr::and(
                ShapeExpr::ClassRef("Student".into()),
                ShapeExpr::exactly(1, PathExpr::prop("id"), ShapeExpr::Top),
            ),
            ShapeExpr::exists(PathExpr::prop("enrolledIn"), ShapeExpr::Top),
        );
        assert_eq!(*stud, expected);
    }

    #[test]
    fn trivial_doc() {
        let doc = parse_shapes_doc("shape s := top. target s(a).").unwrap();
        assert_eq!(doc.constraints().len(), 1);
        assert_eq!(doc.targets().len(), 1);
    }

    #[test]
    fn duplicate_and_undefined() {
        assert_eq!(
            parse_shapes_doc("shape s := top. shape s := top."),
            Err(Error::DuplicateDefinition("s".into()))
        );
        assert_eq!(
            parse_shapes_doc("shape s := top. target t(a)."),
            Err(Error::UndefinedShape("t".into()))
        );
    }

    #[test]
    fn count_bounds() {
        assert!(parse_shapes_doc("shape s := >= 2147483647 p.").is_ok());
        assert!(matches!(
            parse_shapes_doc("shape s := >= 2147483648 p."),
            Err(Error::Syntax(_))
        ));
        assert!(matches!(parse_shapes_doc("shape s := >= 0 p."), Err(Error::Syntax(_))));
    }

    #[test]
    fn filler_extends_right() {
        let shapes = BTreeSet::new();
        let e = parse_shape_expr("A & exists p . B & C", &shapes).unwrap();
        let inner = ShapeExpr::and(ShapeExpr::ClassRef("B".into()), ShapeExpr::ClassRef("C".into()));
        assert_eq!(
            e,
            ShapeExpr::and(
                ShapeExpr::ClassRef("A".into()),
                ShapeExpr::exists(PathExpr::prop("p"), inner)
            )
        );
    }

    #[test]
    fn path_syntax() {
        let e = parse_shape_expr("eqp(p / ^q | r*, (p | q)*)", &BTreeSet::new()).unwrap();
        let left = PathExpr::alt(
            PathExpr::seq(PathExpr::prop("p"), PathExpr::inverse("q")),
            PathExpr::star(PathExpr::prop("r")),
        );
        let right = PathExpr::star(PathExpr::alt(PathExpr::prop("p"), PathExpr::prop("q")));
        assert_eq!(e, ShapeExpr::PathEq(left, right));
    }

    #[test]
    fn display_round_trips() {
        let doc = parse_shapes_doc(EX1).unwrap();
        let again = parse_shapes_doc(&doc.to_string()).unwrap();
        assert_eq!(doc, again);
    }

    #[test]
    fn desugar_examples() {
        let p = PathExpr::prop("p");
        assert_eq!(
            desugar(&ShapeExpr::exists(p.clone(), ShapeExpr::Top)),
            ShapeExpr::at_least(1, p.clone(), ShapeExpr::Top)
        );
        assert_eq!(
            desugar(&ShapeExpr::exactly(1, PathExpr::prop("id"), ShapeExpr::Top)),
            ShapeExpr::and(
                ShapeExpr::not(ShapeExpr::at_least(2, PathExpr::prop("id"), ShapeExpr::Top)),
                ShapeExpr::at_least(1, PathExpr::prop("id"), ShapeExpr::Top)
            )
        );
        let core = ShapeExpr::not(ShapeExpr::and(ShapeExpr::Top, ShapeExpr::Const("a".into())));
        assert_eq!(desugar(&core), core);
    }

    #[test]
    fn dependencies() {
        let doc = parse_shapes_doc(EX1).unwrap();
        let info = dependency_info(doc.constraints());
        assert!(info.recursive);
        assert_eq!(info.cyclic, [Symbol::new("Profshape")].into_iter().collect());
        assert_eq!(info.order, [Symbol::new("Studshape")]);
        assert!(!dependency_info(&[]).recursive);

        let doc = parse_shapes_doc("shape c := b & a. shape b := a. shape a := top. shape d := c | top.").unwrap();
        let info = dependency_info(doc.constraints());
        assert!(!info.recursive);
        let names: Vec<&str> = info.order.iter().map(Symbol::as_str).collect();
        assert_eq!(names, ["a", "b", "c", "d"]);
    }
}
