//! Basic graph patterns with OPT and projection.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, ParseError, Result};
use crate::graph::{Atom, DataGraph, Node, Symbol};
use crate::lexer::{is_identifier, Cursor, Tok};

/// A query variable, written `?name`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(Arc<str>);

impl Var {
    /// Panics unless `name` is an identifier (without the `?`).
    pub fn new(name: &str) -> Self {
        assert!(is_identifier(name), "invalid variable name `{name}`");
        Var(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "?{}", self.0)
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(Var),
    Node(Node),
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Node(n) => write!(f, "{n}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum QueryAtom {
    Class { class: Symbol, arg: Term },
    Prop { prop: Symbol, subject: Term, object: Term },
}

impl QueryAtom {
    pub fn terms(&self) -> impl Iterator<Item = &Term> {
        let (a, b) = match self {
            QueryAtom::Class { arg, .. } => (arg, None),
            QueryAtom::Prop { subject, object, .. } => (subject, Some(object)),
        };
        core::iter::once(a).chain(b)
    }

    pub fn vars(&self) -> impl Iterator<Item = &Var> {
        self.terms().filter_map(|t| match t {
            Term::Var(v) => Some(v),
            Term::Node(_) => None,
        })
    }

    /// The ground atom under `m`, if every variable is bound.
    pub fn ground(&self, m: &Mapping) -> Option<Atom> {
        let term = |t: &Term| match t {
            Term::Var(v) => m.get(v).cloned(),
            Term::Node(n) => Some(n.clone()),
        };
        Some(match self {
            QueryAtom::Class { class, arg } => Atom::Class {
                class: class.clone(),
                node: term(arg)?,
            },
            QueryAtom::Prop { prop, subject, object } => Atom::Prop {
                prop: prop.clone(),
                subject: term(subject)?,
                object: term(object)?,
            },
        })
    }
}

impl fmt::Display for QueryAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QueryAtom::Class { class, arg } => write!(f, "{class}({arg})"),
            QueryAtom::Prop { prop, subject, object } => write!(f, "{prop}({subject},{object})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Pattern {
    /// A conjunction of atoms; empty means ⊤.
    Bgp(Vec<QueryAtom>),
    And(Box<Pattern>, Box<Pattern>),
    Opt(Box<Pattern>, Box<Pattern>),
}

impl Pattern {
    pub fn and(a: Pattern, b: Pattern) -> Self {
        Pattern::And(Box::new(a), Box::new(b))
    }

    pub fn opt(a: Pattern, b: Pattern) -> Self {
        Pattern::Opt(Box::new(a), Box::new(b))
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Pattern::Bgp(atoms) => out.extend(atoms.iter().flat_map(|a| a.vars().cloned())),
            Pattern::And(a, b) | Pattern::Opt(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    pub fn has_opt(&self) -> bool {
        match self {
            Pattern::Bgp(_) => false,
            Pattern::Opt(..) => true,
            Pattern::And(a, b) => a.has_opt() || b.has_opt(),
        }
    }

    fn fmt_group(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pattern::Opt(l, r) => {
                l.fmt_group(f)?;
                f.write_str(" OPT ")?;
                r.fmt_item(f)
            }
            _ => self.fmt_conj(f),
        }
    }

    fn fmt_conj(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pattern::And(a, b) => {
                a.fmt_conj(f)?;
                f.write_str(", ")?;
                b.fmt_conj(f)
            }
            _ => self.fmt_item(f),
        }
    }

    fn fmt_item(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pattern::Bgp(atoms) if atoms.is_empty() => f.write_str("{}"),
            Pattern::Bgp(atoms) => {
                f.write_str("{ ")?;
                for (i, a) in atoms.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(" }")
            }
            _ => {
                f.write_str("{ ")?;
                self.fmt_group(f)?;
                f.write_str(" }")
            }
        }
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_group(f)
    }
}

/// A pattern with optional projection `SELECT X`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Query {
    pub pattern: Pattern,
    pub projection: Option<BTreeSet<Var>>,
}

impl Query {
    pub fn new(pattern: Pattern) -> Self {
        Query {
            pattern,
            projection: None,
        }
    }

    pub fn projected(pattern: Pattern, vars: impl IntoIterator<Item = Var>) -> Self {
        Query {
            pattern,
            projection: Some(vars.into_iter().collect()),
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.pattern.vars()
    }

    /// Projected variables that do not occur in the pattern.
    pub fn unused_projection(&self) -> BTreeSet<Var> {
        let vars = self.vars();
        self.projection
            .iter()
            .flatten()
            .filter(|v| !vars.contains(*v))
            .cloned()
            .collect()
    }

    /// The variables answers are restricted to.
    pub fn output_vars(&self) -> BTreeSet<Var> {
        self.projection.clone().unwrap_or_else(|| self.vars())
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(x) = &self.projection {
            f.write_str("SELECT")?;
            for v in x {
                write!(f, " {v}")?;
            }
            f.write_str(" ")?;
        }
        write!(f, "{}", self.pattern)
    }
}

/// A partial function from variables to nodes.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mapping(BTreeMap<Var, Node>);

impl Mapping {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, v: &Var) -> Option<&Node> {
        self.0.get(v)
    }

    pub fn insert(&mut self, v: Var, n: Node) -> Option<Node> {
        self.0.insert(v, n)
    }

    pub fn domain(&self) -> BTreeSet<Var> {
        self.0.keys().cloned().collect()
    }

    pub fn values(&self) -> BTreeSet<Node> {
        self.0.values().cloned().collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &Node)> {
        self.0.iter()
    }

    pub fn restrict(&self, vars: &BTreeSet<Var>) -> Mapping {
        Mapping(
            self.0
                .iter()
                .filter(|(v, _)| vars.contains(*v))
                .map(|(v, n)| (v.clone(), n.clone()))
                .collect(),
        )
    }

    /// Union of two compatible mappings.
    pub fn merge(&self, other: &Mapping) -> Mapping {
        let mut out = self.clone();
        out.0.extend(other.0.iter().map(|(v, n)| (v.clone(), n.clone())));
        out
    }

    /// Parses `?x=a ?y=b`; `-` or blank is the empty mapping.
    pub fn parse(text: &str) -> Result<Mapping> {
        let text = text.trim();
        if text.is_empty() || text == "-" {
            return Ok(Mapping::new());
        }
        let mut cur = Cursor::new(text)?;
        let mut m = Mapping::new();
        while !cur.at_end() {
            let v = match cur.next() {
                Some(Tok::Var(v)) => Var::new(&v),
                _ => return Err(cur.error("expected `?var=node`").into()),
            };
            cur.expect(&Tok::Eq)?;
            let n = cur.ident()?;
            if let Some(old) = m.insert(v.clone(), Node::new(&n)) {
                if old.as_str() != n {
                    return Err(cur.error(alloc::format!("{v} bound twice")).into());
                }
            }
            cur.eat(&Tok::Comma);
        }
        Ok(m)
    }
}

impl FromIterator<(Var, Node)> for Mapping {
    fn from_iter<I: IntoIterator<Item = (Var, Node)>>(iter: I) -> Self {
        Mapping(iter.into_iter().collect())
    }
}

impl fmt::Display for Mapping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("-");
        }
        for (i, (v, n)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}={n}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Mapping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}")
    }
}

pub fn compatible(a: &Mapping, b: &Mapping) -> bool {
    a.0.iter().all(|(v, n)| b.0.get(v).is_none_or(|m| m == n))
}

struct QueryParser {
    cur: Cursor,
}

impl QueryParser {
    fn group(&mut self) -> core::result::Result<Pattern, ParseError> {
        let mut p = self.conj()?;
        while self.cur.peek_keyword("OPT") {
            self.cur.next();
            let r = self.conj()?;
            p = Pattern::opt(p, r);
        }
        Ok(p)
    }

    fn conj(&mut self) -> core::result::Result<Pattern, ParseError> {
        let mut p = self.item()?;
        while self.cur.eat(&Tok::Comma) {
            let r = self.item()?;
            p = match (p, r) {
                (Pattern::Bgp(mut a), Pattern::Bgp(b)) => {
                    a.extend(b);
                    Pattern::Bgp(a)
                }
                (a, b) => Pattern::and(a, b),
            };
        }
        Ok(p)
    }

    fn item(&mut self) -> core::result::Result<Pattern, ParseError> {
        if self.cur.eat(&Tok::LBrace) {
            if self.cur.eat(&Tok::RBrace) {
                return Ok(Pattern::Bgp(Vec::new()));
            }
            let p = self.group()?;
            self.cur.expect(&Tok::RBrace)?;
            return Ok(p);
        }
        Ok(Pattern::Bgp(alloc::vec![self.atom()?]))
    }

    fn term(&mut self) -> core::result::Result<Term, ParseError> {
        match self.cur.peek() {
            Some(Tok::Var(_)) => match self.cur.next() {
                Some(Tok::Var(v)) => Ok(Term::Var(Var::new(&v))),
                _ => unreachable!(),
            },
            Some(Tok::Ident(_)) => Ok(Term::Node(Node::new(&self.cur.ident()?))),
            _ => Err(self.cur.unexpected("variable or node")),
        }
    }

    fn atom(&mut self) -> core::result::Result<QueryAtom, ParseError> {
        if self.cur.peek_keyword("OPT") || self.cur.peek_keyword("SELECT") {
            return Err(self.cur.unexpected("atom"));
        }
        let pred = Symbol::new(&self.cur.ident().map_err(|_| self.cur.unexpected("atom"))?);
        self.cur.expect(&Tok::LParen)?;
        let first = self.term()?;
        let atom = if self.cur.eat(&Tok::Comma) {
            QueryAtom::Prop {
                prop: pred,
                subject: first,
                object: self.term()?,
            }
        } else {
            QueryAtom::Class {
                class: pred,
                arg: first,
            }
        };
        self.cur.expect(&Tok::RParen)?;
        Ok(atom)
    }
}

/// Parses `[SELECT ?x ...] group`, where groups are comma conjunctions of
/// atoms and braced groups, combined left to right with `OPT`.
pub fn parse_query(text: &str) -> Result<Query> {
    let mut p = QueryParser {
        cur: Cursor::new(text)?,
    };
    let projection = if p.cur.peek_keyword("SELECT") {
        p.cur.next();
        let mut vars = BTreeSet::new();
        while let Some(Tok::Var(_)) = p.cur.peek() {
            if let Some(Tok::Var(v)) = p.cur.next() {
                vars.insert(Var::new(&v));
            }
        }
        Some(vars)
    } else {
        None
    };
    let pattern = p.group()?;
    if !p.cur.at_end() {
        return Err(p.cur.unexpected("end of query").into());
    }
    Ok(Query { pattern, projection })
}

fn is_wd(p: &Pattern, outside: &BTreeSet<Var>) -> bool {
    match p {
        Pattern::Bgp(_) => true,
        Pattern::And(a, b) | Pattern::Opt(a, b) => {
            let (va, vb) = (a.vars(), b.vars());
            if matches!(p, Pattern::Opt(..)) && vb.iter().any(|x| outside.contains(x) && !va.contains(x)) {
                return false;
            }
            let out_a: BTreeSet<Var> = outside.union(&vb).cloned().collect();
            let out_b: BTreeSet<Var> = outside.union(&va).cloned().collect();
            is_wd(a, &out_a) && is_wd(b, &out_b)
        }
    }
}

/// No `P1 OPT P2` has a variable in `P2` that occurs elsewhere but not in `P1`.
pub fn is_well_designed(q: &Query) -> bool {
    is_wd(&q.pattern, &BTreeSet::new())
}

fn conjoin(a: Pattern, b: Pattern) -> Pattern {
    match (a, b) {
        (Pattern::Opt(q, r), p) => Pattern::Opt(Box::new(conjoin(*q, p)), r),
        (p, Pattern::Opt(q, r)) => Pattern::Opt(Box::new(conjoin(p, *q)), r),
        (Pattern::Bgp(mut x), Pattern::Bgp(y)) => {
            x.extend(y);
            Pattern::Bgp(x)
        }
        (a, b) => Pattern::and(a, b),
    }
}

fn normalize(p: &Pattern) -> Pattern {
    match p {
        Pattern::Bgp(_) => p.clone(),
        Pattern::Opt(a, b) => Pattern::opt(normalize(a), normalize(b)),
        Pattern::And(a, b) => conjoin(normalize(a), normalize(b)),
    }
}

/// Moves every OPT out of conjunctions.
pub fn to_opt_normal_form(q: &Query) -> Result<Query> {
    if !is_well_designed(q) {
        return Err(Error::NotWellDesigned);
    }
    Ok(Query {
        pattern: normalize(&q.pattern),
        projection: q.projection.clone(),
    })
}

struct Index<'g> {
    by_pred: BTreeMap<&'g Symbol, Vec<&'g Atom>>,
}

impl<'g> Index<'g> {
    fn new(g: &'g DataGraph) -> Self {
        let mut by_pred: BTreeMap<&Symbol, Vec<&Atom>> = BTreeMap::new();
        for a in g.iter() {
            by_pred.entry(a.predicate()).or_default().push(a);
        }
        Index { by_pred }
    }
}

fn bind(m: &mut Mapping, t: &Term, n: &Node, bound: &mut Vec<Var>) -> bool {
    match t {
        Term::Node(c) => c == n,
        Term::Var(v) => match m.get(v) {
            Some(x) => x == n,
            None => {
                m.insert(v.clone(), n.clone());
                bound.push(v.clone());
                true
            }
        },
    }
}

// Calls `f` on every extension of `m` matching all atoms; stops when `f` returns true.
fn match_atoms(atoms: &[QueryAtom], ix: &Index<'_>, m: &mut Mapping, f: &mut dyn FnMut(&Mapping) -> bool) -> bool {
    let Some((first, rest)) = atoms.split_first() else {
        return f(m);
    };
    let pred = match first {
        QueryAtom::Class { class, .. } => class,
        QueryAtom::Prop { prop, .. } => prop,
    };
    let Some(cands) = ix.by_pred.get(pred) else {
        return false;
    };
    for cand in cands {
        let mut bound = Vec::new();
        let ok = match (first, cand) {
            (QueryAtom::Class { arg, .. }, Atom::Class { node, .. }) => bind(m, arg, node, &mut bound),
            (
                QueryAtom::Prop { subject, object, .. },
                Atom::Prop {
                    subject: s, object: o, ..
                },
            ) => bind(m, subject, s, &mut bound) && bind(m, object, o, &mut bound),
            _ => false,
        };
        let stop = ok && match_atoms(rest, ix, m, f);
        for v in bound {
            m.0.remove(&v);
        }
        if stop {
            return true;
        }
    }
    false
}

fn eval_pattern(p: &Pattern, ix: &Index<'_>) -> BTreeSet<Mapping> {
    match p {
        Pattern::Bgp(atoms) => {
            let mut out = BTreeSet::new();
            match_atoms(atoms, ix, &mut Mapping::new(), &mut |m| {
                out.insert(m.clone());
                false
            });
            out
        }
        Pattern::And(a, b) => {
            let (ra, rb) = (eval_pattern(a, ix), eval_pattern(b, ix));
            let mut out = BTreeSet::new();
            for m1 in &ra {
                for m2 in rb.iter().filter(|m2| compatible(m1, m2)) {
                    out.insert(m1.merge(m2));
                }
            }
            out
        }
        Pattern::Opt(a, b) => {
            let (ra, rb) = (eval_pattern(a, ix), eval_pattern(b, ix));
            let mut out = BTreeSet::new();
            for m1 in &ra {
                let mut extended = false;
                for m2 in rb.iter().filter(|m2| compatible(m1, m2)) {
                    out.insert(m1.merge(m2));
                    extended = true;
                }
                if !extended {
                    out.insert(m1.clone());
                }
            }
            out
        }
    }
}

/// All answers of `q` over `g`, under set semantics.
pub fn eval_query(q: &Query, g: &DataGraph) -> BTreeSet<Mapping> {
    let ix = Index::new(g);
    let all = eval_pattern(&q.pattern, &ix);
    match &q.projection {
        None => all,
        Some(x) => all.iter().map(|m| m.restrict(x)).collect(),
    }
}

pub fn is_answer(mu: &Mapping, q: &Query, g: &DataGraph) -> bool {
    eval_query(q, g).contains(mu)
}

fn depth_one(p: &Pattern) -> Option<(&[QueryAtom], Vec<&[QueryAtom]>)> {
    match p {
        Pattern::Bgp(atoms) => Some((atoms, Vec::new())),
        Pattern::Opt(l, r) => match &**r {
            Pattern::Bgp(child) => {
                let (root, mut children) = depth_one(l)?;
                children.push(child);
                Some((root, children))
            }
            _ => None,
        },
        Pattern::And(..) => None,
    }
}

/// Answer check through the depth-one pattern tree `P OPT R1 ... OPT Rk`:
/// `mu` is an answer iff some `nu ⊇ mu` matching `P` extends to none of the
/// children that introduce output variables.
pub fn is_answer_via_pattern_tree(mu: &Mapping, q: &Query, g: &DataGraph) -> Result<bool> {
    let nf = to_opt_normal_form(q)?;
    let (root, children) = depth_one(&nf.pattern)
        .ok_or_else(|| Error::ShapeMismatch("normal form is not a root with leaf children".to_string()))?;
    let x = q.output_vars();
    let root_vars: BTreeSet<Var> = root.iter().flat_map(|a| a.vars().cloned()).collect();
    let shared: BTreeSet<Var> = root_vars.intersection(&x).cloned().collect();
    if shared != mu.domain() {
        return Err(Error::ShapeMismatch(alloc::format!(
            "mapping domain differs from the output variables of the root pattern {}",
            Pattern::Bgp(root.to_vec())
        )));
    }
    let relevant: Vec<&[QueryAtom]> = children
        .into_iter()
        .filter(|c| {
            c.iter()
                .flat_map(|a| a.vars())
                .any(|v| x.contains(v) && !root_vars.contains(v))
        })
        .collect();
    let ix = Index::new(g);
    let mut start = mu.clone();
    Ok(match_atoms(root, &ix, &mut start, &mut |nu| {
        relevant
            .iter()
            .all(|child| !match_atoms(child, &ix, &mut nu.clone(), &mut |_| true))
    }))
}

/// Renders a set of mappings one per line.
pub fn format_mappings(ms: &BTreeSet<Mapping>) -> String {
    let mut s = String::new();
    for m in ms {
        s.push_str(&m.to_string());
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_data_graph;

    fn q(text: &str) -> Query {
        parse_query(text).unwrap()
    }

    fn m(text: &str) -> Mapping {
        Mapping::parse(text).unwrap()
    }

    #[test]
    fn parse_forms() {
        let bgp = q("Student(?x), id(?x,?y)");
        assert!(matches!(&bgp.pattern, Pattern::Bgp(a) if a.len() == 2));
        let opt = q("{Student(?x)} OPT {id(?x,?y)}");
        assert!(matches!(opt.pattern, Pattern::Opt(..)));
        let top = q("SELECT {}");
        assert_eq!(top.pattern, Pattern::Bgp(Vec::new()));
        assert_eq!(top.projection, Some(BTreeSet::new()));
        assert!(parse_query("Student(?x) OPT").is_err());
    }

    #[test]
    fn display_round_trips() {
        for text in [
            "Student(?x), id(?x,?y)",
            "{Student(?x)} OPT {id(?x,?y)} OPT {email(?x,?z)}",
            "SELECT ?z {is_phi(?x,?y), F(?y)} OPT {is_psi(?x,?z), F(?z)}",
            "{} OPT {col(v1,?x1), neq(?x1,?x2)}",
            "{A(?x)}, {{B(?x)} OPT {p(?x,?y)}}",
            "SELECT {}",
        ] {
            let query = q(text);
            assert_eq!(q(&query.to_string()), query, "{text}");
        }
    }

    #[test]
    fn compatibility() {
        assert!(compatible(&m("?x=a"), &m("?y=b")));
        assert!(compatible(&m("?x=a"), &m("?x=a ?y=b")));
        assert!(!compatible(&m("?x=a"), &m("?x=b")));
    }

    #[test]
    fn well_designedness() {
        assert!(!is_well_designed(&q(
            "{Prof(?x)} OPT {knows(?x,?y)} OPT {email(?y,?z)}"
        )));
        assert!(is_well_designed(&q(
            "{Prof(?x)} OPT {teaches(?x,?y)} OPT {email(?x,?z)}"
        )));
        assert!(is_well_designed(&q("A(?x), p(?x,?y)")));
    }

    #[test]
    fn normal_form() {
        let query = q("{P(?x)}, {{Q(?x)} OPT {R(?x,?y)}}");
        let nf = to_opt_normal_form(&query).unwrap();
        assert_eq!(nf, q("{P(?x), Q(?x)} OPT {R(?x,?y)}"));
        let normal = q("{Q(?x)} OPT {R(?x,?y)}");
        assert_eq!(to_opt_normal_form(&normal).unwrap(), normal);
        let bad = q("{Prof(?x)} OPT {knows(?x,?y)} OPT {email(?y,?z)}");
        assert_eq!(to_opt_normal_form(&bad), Err(Error::NotWellDesigned));
    }

    #[test]
    fn evaluation() {
        let g = parse_data_graph("Student(Ben). Student(John). id(John,ID3).").unwrap();
        let q2 = q("{Student(?x)} OPT {id(?x,?y)}");
        let answers = eval_query(&q2, &g);
        assert_eq!(answers, [m("?x=Ben"), m("?x=John ?y=ID3")].into_iter().collect());
        assert!(!is_answer(&m("?x=Ben"), &q("Student(?x), id(?x,?y)"), &g));
        assert!(is_answer(&Mapping::new(), &q("{}"), &g));
        assert_eq!(eval_query(&q("{}"), &DataGraph::new()).len(), 1);
        let proj = q("SELECT ?x Student(?x), id(?x,?y)");
        assert!(is_answer(&m("?x=John"), &proj, &g));
    }

    #[test]
    fn pattern_tree_agrees_on_simple_cases() {
        let g = parse_data_graph("Student(Ben). Student(John). id(John,ID3). A(a). p(a,b).").unwrap();
        let q2 = q("{Student(?x)} OPT {id(?x,?y)}");
        for mu in ["?x=Ben", "?x=John", "?x=John ?y=ID3"] {
            let mu = m(mu);
            let expected = is_answer(&mu, &q2, &g);
            match is_answer_via_pattern_tree(&mu, &q2, &g) {
                Ok(got) => assert_eq!(got, expected, "{mu}"),
                Err(Error::ShapeMismatch(_)) => assert_ne!(mu.len(), 1),
                Err(e) => panic!("{e}"),
            }
        }
        let bgp = q("A(?x), p(?x,?y)");
        assert!(is_answer_via_pattern_tree(&m("?x=a ?y=b"), &bgp, &g).unwrap());
        assert!(!is_answer_via_pattern_tree(&m("?x=b ?y=a"), &bgp, &g).unwrap());
    }
}
