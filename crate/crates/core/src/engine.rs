//! Bitset evaluation of compiled shapes over lower/upper graph bounds.
//!
//! A `State` holds two indexed graphs, `lo` and `hi`, with `lo ⊆ hi`. Every
//! expression evaluates to an interval `[lo, hi]` of node sets that contains
//! its value on any graph between the bounds. With `lo == hi` this is exact
//! evaluation.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use fixedbitset::FixedBitSet;

use crate::graph::{Atom, DataGraph, Node, ShapeAtom, Symbol};
use crate::shapes::{dependency_info, desugar, Constraint, PathExpr, ShapeExpr};

pub(crate) type Set = FixedBitSet;
pub(crate) type Rel = Vec<Set>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) enum CAtom {
    Class(usize, usize),
    Prop(usize, usize, usize),
}

#[derive(Clone, Debug)]
enum CExpr {
    Top,
    Label(usize),
    Class(usize),
    Const(usize),
    And(usize, usize),
    Not(usize),
    AtLeast(u32, usize, usize),
    PathEq(usize, usize),
}

#[derive(Clone, Debug)]
enum CPath {
    Prop(usize),
    Inv(usize),
    Seq(usize, usize),
    Alt(usize, usize),
    Star(usize),
}

/// Everything a program is compiled from.
#[derive(Default)]
pub(crate) struct Source<'a> {
    pub graphs: Vec<&'a DataGraph>,
    pub constraints: &'a [Constraint],
    pub exprs: Vec<&'a ShapeExpr>,
    pub paths: Vec<&'a PathExpr>,
    pub nodes: Vec<Node>,
    pub shapes: Vec<Symbol>,
}

pub(crate) struct Program {
    pub nodes: Vec<Node>,
    node_ix: BTreeMap<Node, usize>,
    class_ix: BTreeMap<Symbol, usize>,
    prop_ix: BTreeMap<Symbol, usize>,
    pub shapes: Vec<Symbol>,
    shape_ix: BTreeMap<Symbol, usize>,
    exprs: Vec<CExpr>,
    paths: Vec<CPath>,
    pub bodies: Vec<Option<usize>>,
    pub cyclic: Vec<usize>,
    pub order: Vec<usize>,
    pub root_exprs: Vec<usize>,
    pub root_paths: Vec<usize>,
}

impl Program {
    pub fn compile(src: Source<'_>) -> Program {
        let desugared: Vec<ShapeExpr> = src.exprs.iter().map(|e| desugar(e)).collect();
        let bodies: Vec<(Symbol, ShapeExpr)> = src
            .constraints
            .iter()
            .map(|c| (c.name.clone(), desugar(&c.body)))
            .collect();

        let mut nodes: BTreeSet<Node> = src.nodes.iter().cloned().collect();
        let mut classes = BTreeSet::new();
        let mut props = BTreeSet::new();
        let mut shapes: BTreeSet<Symbol> = src.shapes.iter().cloned().collect();
        for g in &src.graphs {
            for a in g.iter() {
                nodes.extend(a.nodes().cloned());
                match a {
                    Atom::Class { class, .. } => classes.insert(class.clone()),
                    Atom::Prop { prop, .. } => props.insert(prop.clone()),
                };
            }
        }
        let all_exprs = bodies.iter().map(|(_, b)| b).chain(desugared.iter());
        for e in all_exprs {
            let s = e.symbols();
            nodes.extend(s.constants);
            classes.extend(s.classes);
            props.extend(s.properties);
            shapes.extend(s.shapes);
        }
        for p in &src.paths {
            p.properties(&mut props);
        }
        for (name, _) in &bodies {
            shapes.insert(name.clone());
        }

        let node_ix: BTreeMap<Node, usize> = index(&nodes);
        let class_ix: BTreeMap<Symbol, usize> = index(&classes);
        let prop_ix: BTreeMap<Symbol, usize> = index(&props);
        let shape_ix: BTreeMap<Symbol, usize> = index(&shapes);

        let mut prog = Program {
            nodes: nodes.into_iter().collect(),
            node_ix,
            class_ix,
            prop_ix,
            shapes: shapes.into_iter().collect(),
            shape_ix,
            exprs: Vec::new(),
            paths: Vec::new(),
            bodies: Vec::new(),
            cyclic: Vec::new(),
            order: Vec::new(),
            root_exprs: Vec::new(),
            root_paths: Vec::new(),
        };
        prog.bodies = vec![None; prog.shapes.len()];
        for (name, body) in &bodies {
            let id = prog.compile_expr(body);
            let s = prog.shape_ix[name];
            prog.bodies[s] = Some(id);
        }
        prog.root_exprs = desugared.iter().map(|e| prog.compile_expr(e)).collect();
        prog.root_paths = src.paths.iter().map(|p| prog.compile_path(p)).collect();

        let info = dependency_info(src.constraints);
        prog.cyclic = info.cyclic.iter().map(|s| prog.shape_ix[s]).collect();
        prog.cyclic.sort_unstable();
        prog.order = info.order.iter().map(|s| prog.shape_ix[s]).collect();
        prog
    }

    fn compile_expr(&mut self, e: &ShapeExpr) -> usize {
        let c = match e {
            ShapeExpr::Top => CExpr::Top,
            ShapeExpr::ShapeRef(s) => CExpr::Label(self.shape_ix[s]),
            ShapeExpr::ClassRef(c) => CExpr::Class(self.class_ix[c]),
            ShapeExpr::Const(n) => CExpr::Const(self.node_ix[n]),
            ShapeExpr::And(a, b) => {
                let (a, b) = (self.compile_expr(a), self.compile_expr(b));
                CExpr::And(a, b)
            }
            ShapeExpr::Not(a) => CExpr::Not(self.compile_expr(a)),
            ShapeExpr::AtLeast { n, path, filler } => {
                let p = self.compile_path(path);
                let f = self.compile_expr(filler);
                CExpr::AtLeast(*n, p, f)
            }
            ShapeExpr::PathEq(p, q) => {
                let (p, q) = (self.compile_path(p), self.compile_path(q));
                CExpr::PathEq(p, q)
            }
            other => unreachable!("compiled expressions are desugared: {other:?}"),
        };
        self.exprs.push(c);
        self.exprs.len() - 1
    }

    fn compile_path(&mut self, p: &PathExpr) -> usize {
        let c = match p {
            PathExpr::Prop(p) => CPath::Prop(self.prop_ix[p]),
            PathExpr::Inverse(p) => CPath::Inv(self.prop_ix[p]),
            PathExpr::Seq(a, b) => {
                let (a, b) = (self.compile_path(a), self.compile_path(b));
                CPath::Seq(a, b)
            }
            PathExpr::Alt(a, b) => {
                let (a, b) = (self.compile_path(a), self.compile_path(b));
                CPath::Alt(a, b)
            }
            PathExpr::Star(a) => CPath::Star(self.compile_path(a)),
        };
        self.paths.push(c);
        self.paths.len() - 1
    }

    pub fn n(&self) -> usize {
        self.nodes.len()
    }

    pub fn node(&self, n: &Node) -> Option<usize> {
        self.node_ix.get(n).copied()
    }

    pub fn shape(&self, s: &Symbol) -> Option<usize> {
        self.shape_ix.get(s).copied()
    }

    pub fn atom(&self, a: &Atom) -> Option<CAtom> {
        Some(match a {
            Atom::Class { class, node } => CAtom::Class(*self.class_ix.get(class)?, self.node(node)?),
            Atom::Prop { prop, subject, object } => {
                CAtom::Prop(*self.prop_ix.get(prop)?, self.node(subject)?, self.node(object)?)
            }
        })
    }

    pub fn target(&self, t: &ShapeAtom) -> Option<(usize, usize)> {
        Some((self.shape(&t.shape)?, self.node(&t.node)?))
    }

    pub fn set_to_nodes(&self, s: &Set) -> BTreeSet<Node> {
        s.ones().map(|i| self.nodes[i].clone()).collect()
    }

    pub fn empty_set(&self) -> Set {
        Set::with_capacity(self.n())
    }

    pub fn is_cyclic(&self, s: usize) -> bool {
        self.cyclic.binary_search(&s).is_ok()
    }
}

/// One indexed graph.
#[derive(Clone, Debug)]
pub(crate) struct Bound {
    classes: Vec<Set>,
    props: Vec<Rel>,
    counts: Vec<u32>,
    pub vmask: Set,
}

impl Bound {
    fn new(prog: &Program) -> Bound {
        let n = prog.n();
        Bound {
            classes: vec![Set::with_capacity(n); prog.class_ix.len()],
            props: vec![vec![Set::with_capacity(n); n]; prog.prop_ix.len()],
            counts: vec![0; n],
            vmask: Set::with_capacity(n),
        }
    }

    fn touch(&mut self, node: usize, up: bool) -> bool {
        let c = &mut self.counts[node];
        if up {
            *c += 1;
            if *c == 1 {
                self.vmask.insert(node);
                return true;
            }
        } else {
            *c -= 1;
            if *c == 0 {
                self.vmask.set(node, false);
                return true;
            }
        }
        false
    }

    /// Returns true if path relations may have changed.
    fn set(&mut self, a: CAtom, present: bool) -> bool {
        match a {
            CAtom::Class(c, n) => {
                if self.classes[c].contains(n) == present {
                    return false;
                }
                self.classes[c].set(n, present);
                self.touch(n, present)
            }
            CAtom::Prop(p, s, o) => {
                if self.props[p][s].contains(o) == present {
                    return false;
                }
                self.props[p][s].set(o, present);
                self.touch(s, present);
                self.touch(o, present);
                true
            }
        }
    }
}

fn index<T: Ord + Clone>(set: &BTreeSet<T>) -> BTreeMap<T, usize> {
    set.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Side {
    Lo = 0,
    Hi = 1,
}

/// Label intervals per shape index.
#[derive(Clone, Debug)]
pub(crate) struct Labels {
    pub lo: Vec<Set>,
    pub hi: Vec<Set>,
}

impl Labels {
    pub fn cyclic_counts(&self, prog: &Program) -> (usize, usize) {
        prog.cyclic.iter().fold((0, 0), |(l, h), &s| {
            (l + self.lo[s].count_ones(..), h + self.hi[s].count_ones(..))
        })
    }

    pub fn to_atoms(&self, prog: &Program) -> BTreeSet<ShapeAtom> {
        let mut out = BTreeSet::new();
        for (s, set) in self.lo.iter().enumerate() {
            for n in set.ones() {
                out.insert(ShapeAtom {
                    shape: prog.shapes[s].clone(),
                    node: prog.nodes[n].clone(),
                });
            }
        }
        out
    }
}

#[derive(Clone)]
pub(crate) struct State<'p> {
    pub prog: &'p Program,
    pub lo: Bound,
    pub hi: Bound,
    cache: [Vec<Option<Rel>>; 2],
}

impl<'p> State<'p> {
    /// Bounds from atom lists; callers ensure `lo ⊆ hi`.
    pub fn new<'a>(
        prog: &'p Program,
        lo: impl IntoIterator<Item = &'a Atom>,
        hi: impl IntoIterator<Item = &'a Atom>,
    ) -> State<'p> {
        let mut st = State {
            prog,
            lo: Bound::new(prog),
            hi: Bound::new(prog),
            cache: [vec![None; prog.paths.len()], vec![None; prog.paths.len()]],
        };
        for a in lo {
            let c = prog.atom(a).expect("atom compiled into program");
            st.lo.set(c, true);
        }
        for a in hi {
            let c = prog.atom(a).expect("atom compiled into program");
            st.hi.set(c, true);
        }
        st
    }

    pub fn exact(prog: &'p Program, g: &DataGraph) -> State<'p> {
        State::new(prog, g.iter(), g.iter())
    }

    pub fn set(&mut self, side: Side, a: CAtom, present: bool) {
        let bound = match side {
            Side::Lo => &mut self.lo,
            Side::Hi => &mut self.hi,
        };
        if bound.set(a, present) {
            self.cache[side as usize].iter_mut().for_each(|c| *c = None);
        }
    }

    fn bound(&self, side: Side) -> &Bound {
        match side {
            Side::Lo => &self.lo,
            Side::Hi => &self.hi,
        }
    }

    pub fn rel(&mut self, side: Side, pid: usize) -> Rel {
        if let Some(r) = &self.cache[side as usize][pid] {
            return r.clone();
        }
        let n = self.prog.n();
        let r = match self.prog.paths[pid] {
            CPath::Prop(p) => self.bound(side).props[p].clone(),
            CPath::Inv(p) => {
                let src = &self.bound(side).props[p];
                let mut r = vec![Set::with_capacity(n); n];
                for (s, row) in src.iter().enumerate() {
                    for o in row.ones() {
                        r[o].insert(s);
                    }
                }
                r
            }
            CPath::Seq(a, b) => {
                let ra = self.rel(side, a);
                let rb = self.rel(side, b);
                ra.iter()
                    .map(|row| {
                        let mut out = Set::with_capacity(n);
                        for d in row.ones() {
                            out.union_with(&rb[d]);
                        }
                        out
                    })
                    .collect()
            }
            CPath::Alt(a, b) => {
                let mut ra = self.rel(side, a);
                let rb = self.rel(side, b);
                for (x, y) in ra.iter_mut().zip(&rb) {
                    x.union_with(y);
                }
                ra
            }
            CPath::Star(a) => {
                let mut r = self.rel(side, a);
                for c in self.bound(side).vmask.ones() {
                    r[c].insert(c);
                }
                for k in 0..n {
                    let rk = r[k].clone();
                    for row in r.iter_mut() {
                        if row.contains(k) {
                            row.union_with(&rk);
                        }
                    }
                }
                r
            }
        };
        self.cache[side as usize][pid] = Some(r.clone());
        r
    }

    pub fn eval(&mut self, labels: &Labels, e: usize) -> (Set, Set) {
        let n = self.prog.n();
        match self.prog.exprs[e] {
            CExpr::Top => (self.lo.vmask.clone(), self.hi.vmask.clone()),
            CExpr::Label(s) => (labels.lo[s].clone(), labels.hi[s].clone()),
            CExpr::Class(c) => (self.lo.classes[c].clone(), self.hi.classes[c].clone()),
            CExpr::Const(c) => {
                let mut s = Set::with_capacity(n);
                s.insert(c);
                (s.clone(), s)
            }
            CExpr::And(a, b) => {
                let (mut alo, mut ahi) = self.eval(labels, a);
                let (blo, bhi) = self.eval(labels, b);
                alo.intersect_with(&blo);
                ahi.intersect_with(&bhi);
                (alo, ahi)
            }
            CExpr::Not(a) => {
                let (alo, ahi) = self.eval(labels, a);
                let mut lo = self.lo.vmask.clone();
                lo.difference_with(&ahi);
                let mut hi = self.hi.vmask.clone();
                hi.difference_with(&alo);
                (lo, hi)
            }
            CExpr::AtLeast(k, p, f) => {
                let (flo, fhi) = self.eval(labels, f);
                let k = k as usize;
                let count = |rel: &Rel, filler: &Set| -> Set {
                    let mut out = Set::with_capacity(n);
                    for (c, row) in rel.iter().enumerate() {
                        if row.count_ones(..) >= k && row.intersection_count(filler) >= k {
                            out.insert(c);
                        }
                    }
                    out
                };
                let rlo = self.rel(Side::Lo, p);
                let lo = count(&rlo, &flo);
                let rhi = self.rel(Side::Hi, p);
                let hi = count(&rhi, &fhi);
                (lo, hi)
            }
            CExpr::PathEq(p, q) => {
                let (plo, phi) = (self.rel(Side::Lo, p), self.rel(Side::Hi, p));
                let (qlo, qhi) = (self.rel(Side::Lo, q), self.rel(Side::Hi, q));
                let mut lo = Set::with_capacity(n);
                for c in self.lo.vmask.ones() {
                    if phi[c].is_subset(&qlo[c]) && qhi[c].is_subset(&plo[c]) {
                        lo.insert(c);
                    }
                }
                let mut hi = Set::with_capacity(n);
                for c in self.hi.vmask.ones() {
                    if plo[c].is_subset(&qhi[c]) && qlo[c].is_subset(&phi[c]) {
                        hi.insert(c);
                    }
                }
                (lo, hi)
            }
        }
    }

    /// Labels with every shape undetermined within V and cyclic targets forced in.
    pub fn initial_labels(&self, targets: &[(usize, usize)]) -> Labels {
        let k = self.prog.shapes.len();
        let mut labels = Labels {
            lo: vec![self.prog.empty_set(); k],
            hi: vec![self.hi.vmask.clone(); k],
        };
        for &(s, a) in targets {
            if self.prog.is_cyclic(s) {
                labels.lo[s].insert(a);
            }
        }
        labels
    }

    /// Narrows label intervals to a fixpoint. Returns false if no supported
    /// model with the targets lies within the current bounds.
    pub fn propagate(&mut self, labels: &mut Labels, targets: &[(usize, usize)]) -> bool {
        let prog = self.prog;
        loop {
            for &s in &prog.order {
                let body = prog.bodies[s].expect("ordered names have bodies");
                let (lo, mut hi) = self.eval(labels, body);
                if !lo.is_subset(&self.hi.vmask) {
                    return false;
                }
                hi.intersect_with(&self.hi.vmask);
                labels.lo[s] = lo;
                labels.hi[s] = hi;
            }
            let mut changed = false;
            for &s in &prog.cyclic {
                let body = prog.bodies[s].expect("cyclic names have bodies");
                let (blo, bhi) = self.eval(labels, body);
                let mut lo = labels.lo[s].clone();
                lo.union_with(&blo);
                let mut hi = labels.hi[s].clone();
                hi.intersect_with(&bhi);
                hi.intersect_with(&self.hi.vmask);
                if !lo.is_subset(&hi) {
                    return false;
                }
                if lo != labels.lo[s] || hi != labels.hi[s] {
                    changed = true;
                    labels.lo[s] = lo;
                    labels.hi[s] = hi;
                }
            }
            if !changed {
                break;
            }
        }
        targets.iter().all(|&(s, a)| labels.hi[s].contains(a))
    }

    fn first_undecided(&self, labels: &Labels) -> Option<(usize, usize)> {
        self.prog.cyclic.iter().find_map(|&s| {
            let mut open = labels.hi[s].clone();
            open.difference_with(&labels.lo[s]);
            open.minimum().map(|a| (s, a))
        })
    }

    fn search(&mut self, mut labels: Labels, targets: &[(usize, usize)], size: Option<usize>) -> Option<Labels> {
        if !self.propagate(&mut labels, targets) {
            return None;
        }
        if let Some(k) = size {
            let (l, h) = labels.cyclic_counts(self.prog);
            if l > k || h < k {
                return None;
            }
        }
        let Some((s, a)) = self.first_undecided(&labels) else {
            return Some(labels);
        };
        let mut with = labels.clone();
        with.lo[s].insert(a);
        if let Some(found) = self.search(with, targets, size) {
            return Some(found);
        }
        labels.hi[s].set(a, false);
        self.search(labels, targets, size)
    }

    /// Some supported model within the bounds, if any. The graph bounds
    /// should be exact for the result to be a model of a single graph.
    pub fn find_model(&mut self, labels: Labels, targets: &[(usize, usize)]) -> Option<Labels> {
        self.search(labels, targets, None)
    }

    /// The first model by label count, then canonical atom order.
    pub fn find_smallest_model(&mut self, mut labels: Labels, targets: &[(usize, usize)]) -> Option<Labels> {
        if !self.propagate(&mut labels, targets) {
            return None;
        }
        let (l, h) = labels.cyclic_counts(self.prog);
        (l..=h).find_map(|k| self.search(labels.clone(), targets, Some(k)))
    }
}
