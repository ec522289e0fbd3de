//! Repairs, preference orders, minimum-size search and max-repairs.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::engine::{CAtom, Program, Side, State};
use crate::error::{Error, Result};
use crate::graph::{parse_facts_until, Atom, DataGraph, Namespaces, ShapeAtom};
use crate::lexer::{Cursor, Tok};
use crate::shapes::ShapesDoc;
use crate::validate::{compile_doc, compile_targets, validates};

/// Default cap on the number of atoms a search may toggle.
pub const DEFAULT_BUDGET: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PreferenceOrder {
    /// No preference: every repair counts.
    Any,
    /// Componentwise inclusion-minimal repairs.
    Subset,
    /// Repairs of minimum total size.
    Card,
}

impl PreferenceOrder {
    pub const ALL: [PreferenceOrder; 3] = [PreferenceOrder::Any, PreferenceOrder::Subset, PreferenceOrder::Card];
}

impl fmt::Display for PreferenceOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PreferenceOrder::Any => "any",
            PreferenceOrder::Subset => "subset",
            PreferenceOrder::Card => "card",
        })
    }
}

/// Atoms a search may touch. Listing order is the search's decision order,
/// hypotheses first.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MutabilityHints {
    pub graph: Vec<Atom>,
    pub hypotheses: Vec<Atom>,
}

impl MutabilityHints {
    /// Parses facts grouped under `[graph]` and `[hypotheses]` headers.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cur = Cursor::new(text)?;
        let mut ns = Namespaces::new();
        let mut hints = MutabilityHints::default();
        while !cur.at_end() {
            cur.expect(&Tok::LBracket)?;
            let section = cur.ident()?;
            let target = match section.as_str() {
                "graph" => &mut hints.graph,
                "hypotheses" => &mut hints.hypotheses,
                _ => return Err(cur.error(format!("unknown section `{section}`")).into()),
            };
            cur.expect(&Tok::RBracket)?;
            target.extend(parse_facts_until(&mut cur, &mut ns, |t| *t == Tok::LBracket)?);
        }
        Ok(hints)
    }
}

impl fmt::Display for MutabilityHints {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[graph]")?;
        for a in &self.graph {
            writeln!(f, "{a}.")?;
        }
        writeln!(f, "[hypotheses]")?;
        for a in &self.hypotheses {
            writeln!(f, "{a}.")?;
        }
        Ok(())
    }
}

/// The input `(G, C, T, H)` with optional mutability hints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProblemInstance {
    graph: DataGraph,
    shapes: ShapesDoc,
    hypotheses: DataGraph,
    hints: Option<MutabilityHints>,
}

impl ProblemInstance {
    pub fn new(graph: DataGraph, shapes: ShapesDoc, hypotheses: DataGraph) -> Result<Self> {
        if let Some(a) = graph.intersection(&hypotheses).iter().next() {
            return Err(Error::InvalidInstance(alloc::format!(
                "`{a}` is both a fact and a hypothesis"
            )));
        }
        let mut ns = Namespaces::new();
        ns.claim_graph(&graph)?;
        ns.claim_graph(&hypotheses)?;
        shapes.claim_namespaces(&mut ns)?;
        Ok(ProblemInstance {
            graph,
            shapes,
            hypotheses,
            hints: None,
        })
    }

    pub fn with_hints(mut self, hints: MutabilityHints) -> Result<Self> {
        if let Some(a) = hints.graph.iter().find(|a| !self.graph.contains(a)) {
            return Err(Error::InvalidInstance(alloc::format!("hint `{a}` is not in the graph")));
        }
        if let Some(a) = hints.hypotheses.iter().find(|a| !self.hypotheses.contains(a)) {
            return Err(Error::InvalidInstance(alloc::format!("hint `{a}` is not a hypothesis")));
        }
        self.hints = Some(hints);
        Ok(self)
    }

    pub fn without_hints(mut self) -> Self {
        self.hints = None;
        self
    }

    pub fn graph(&self) -> &DataGraph {
        &self.graph
    }

    pub fn shapes(&self) -> &ShapesDoc {
        &self.shapes
    }

    pub fn hypotheses(&self) -> &DataGraph {
        &self.hypotheses
    }

    pub fn hints(&self) -> Option<&MutabilityHints> {
        self.hints.as_ref()
    }

    pub fn targets(&self) -> &BTreeSet<ShapeAtom> {
        self.shapes.targets()
    }

    /// The same instance with a different target set.
    pub fn with_targets(&self, targets: BTreeSet<ShapeAtom>) -> Result<Self> {
        Ok(ProblemInstance {
            shapes: self.shapes.with_targets(targets)?,
            ..self.clone()
        })
    }

    /// `(G \ D) ∪ A`, checking `A ⊆ H` and `D ⊆ G`.
    pub fn apply(&self, r: &Repair) -> Result<DataGraph> {
        if let Some(a) = r.additions.iter().find(|a| !self.hypotheses.contains(a)) {
            return Err(Error::ConstraintViolation(alloc::format!(
                "addition `{a}` is not a hypothesis"
            )));
        }
        apply_repair(&self.graph, r)
    }

    // Decision order: hints as listed, else hypotheses then facts grouped by first node.
    fn mutable_atoms(&self) -> Vec<(Atom, bool)> {
        match &self.hints {
            Some(h) => h
                .hypotheses
                .iter()
                .map(|a| (a.clone(), false))
                .chain(h.graph.iter().map(|a| (a.clone(), true)))
                .collect(),
            None => {
                let by_node = |g: &DataGraph| {
                    let mut v: Vec<Atom> = g.iter().cloned().collect();
                    v.sort_by(|a, b| a.nodes().next().cmp(&b.nodes().next()).then_with(|| a.cmp(b)));
                    v
                };
                let h = by_node(&self.hypotheses).into_iter().map(|a| (a, false));
                let g = by_node(&self.graph).into_iter().map(|a| (a, true));
                h.chain(g).collect()
            }
        }
    }
}

/// Additions `A ⊆ H` and deletions `D ⊆ G`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Repair {
    pub additions: DataGraph,
    pub deletions: DataGraph,
}

impl Repair {
    pub fn new(additions: DataGraph, deletions: DataGraph) -> Self {
        Repair { additions, deletions }
    }

    pub fn size(&self) -> usize {
        self.additions.len() + self.deletions.len()
    }

    /// Componentwise inclusion.
    pub fn is_subset(&self, other: &Repair) -> bool {
        self.additions.is_subset(&other.additions) && self.deletions.is_subset(&other.deletions)
    }
}

impl Ord for Repair {
    fn cmp(&self, other: &Self) -> Ordering {
        self.size()
            .cmp(&other.size())
            .then_with(|| self.additions.cmp(&other.additions))
            .then_with(|| self.deletions.cmp(&other.deletions))
    }
}

impl PartialOrd for Repair {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Repair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        let mut first = true;
        for a in &self.additions {
            write!(f, "{}+{a}", if first { "" } else { " " })?;
            first = false;
        }
        f.write_str(if first { "|" } else { " |" })?;
        for d in &self.deletions {
            write!(f, " -{d}")?;
        }
        f.write_str(")")
    }
}

/// `(G \ D) ∪ A`. Fails if `D ⊄ G` or `A` overlaps `G`.
pub fn apply_repair(g: &DataGraph, r: &Repair) -> Result<DataGraph> {
    if let Some(d) = r.deletions.iter().find(|d| !g.contains(d)) {
        return Err(Error::ConstraintViolation(alloc::format!(
            "deletion `{d}` is not in the graph"
        )));
    }
    if let Some(a) = r.additions.iter().find(|a| g.contains(a)) {
        return Err(Error::ConstraintViolation(alloc::format!(
            "addition `{a}` is already in the graph"
        )));
    }
    Ok(g.difference(&r.deletions).union(&r.additions))
}

pub fn is_repair(psi: &ProblemInstance, r: &Repair) -> Result<bool> {
    let repaired = psi.apply(r)?;
    Ok(validates(&repaired, psi.shapes()))
}

/// Drops every repair that has a strictly smaller repair below it.
pub fn subset_minimal(repairs: &[Repair]) -> Vec<Repair> {
    repairs
        .iter()
        .filter(|r| !repairs.iter().any(|o| o != *r && o.is_subset(r)))
        .cloned()
        .collect()
}

fn card_minimal(repairs: &[Repair]) -> Vec<Repair> {
    let min = repairs.iter().map(Repair::size).min();
    repairs.iter().filter(|r| Some(r.size()) == min).cloned().collect()
}

/// Applies a preference order to an already complete repair family.
pub fn filter_preferred(repairs: &[Repair], order: PreferenceOrder) -> Vec<Repair> {
    match order {
        PreferenceOrder::Any => repairs.to_vec(),
        PreferenceOrder::Subset => subset_minimal(repairs),
        PreferenceOrder::Card => card_minimal(repairs),
    }
}

struct Search<'p> {
    st: State<'p>,
    mutable: Vec<(CAtom, bool)>,
    targets: Vec<(usize, usize)>,
    cap: Option<usize>,
    first_only: bool,
    changed: Vec<bool>,
    found: Vec<Vec<bool>>,
}

impl Search<'_> {
    // Returns true once the search should stop.
    fn dfs(&mut self, i: usize, changes: usize) -> bool {
        if self.cap.is_some_and(|c| changes > c) {
            return false;
        }
        let mut labels = self.st.initial_labels(&self.targets);
        if !self.st.propagate(&mut labels, &self.targets) {
            return false;
        }
        if i == self.mutable.len() {
            if self.st.find_model(labels, &self.targets).is_some() {
                self.found.push(self.changed.clone());
                return self.first_only;
            }
            return false;
        }
        let (atom, in_graph) = self.mutable[i];
        // Unchanged branch first: keep a fact, leave a hypothesis out.
        let (keep_side, change_side) = if in_graph {
            ((Side::Lo, true), (Side::Hi, false))
        } else {
            ((Side::Hi, false), (Side::Lo, true))
        };
        self.st.set(keep_side.0, atom, keep_side.1);
        let stop = self.dfs(i + 1, changes);
        self.st.set(keep_side.0, atom, !keep_side.1);
        if stop {
            return true;
        }
        self.st.set(change_side.0, atom, change_side.1);
        self.changed[i] = true;
        let stop = self.dfs(i + 1, changes + 1);
        self.changed[i] = false;
        self.st.set(change_side.0, atom, !change_side.1);
        stop
    }
}

/// Max-repairs together with the largest satisfiable target count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxRepairs {
    pub max_targets: usize,
    pub repairs: Vec<Repair>,
    /// For each repair, the target subsets of maximum size it validates.
    pub witnesses: BTreeMap<Repair, Vec<BTreeSet<ShapeAtom>>>,
}

/// Exhaustive repair search over the mutable atoms of an instance.
pub struct RepairEnumerator<'a> {
    instance: &'a ProblemInstance,
    budget: usize,
    prog: Program,
    mutable: Vec<(Atom, bool)>,
}

impl<'a> RepairEnumerator<'a> {
    pub fn new(instance: &'a ProblemInstance) -> Self {
        Self::with_budget(instance, DEFAULT_BUDGET)
    }

    pub fn with_budget(instance: &'a ProblemInstance, budget: usize) -> Self {
        let prog = compile_doc(instance.shapes(), vec![instance.graph(), instance.hypotheses()]);
        RepairEnumerator {
            instance,
            budget,
            prog,
            mutable: instance.mutable_atoms(),
        }
    }

    pub fn instance(&self) -> &ProblemInstance {
        self.instance
    }

    fn check_budget(&self) -> Result<()> {
        if self.mutable.len() > self.budget {
            return Err(Error::BudgetExceeded {
                mutable: self.mutable.len(),
                budget: self.budget,
            });
        }
        Ok(())
    }

    fn run(&self, targets: &BTreeSet<ShapeAtom>, cap: Option<usize>, first_only: bool) -> Result<Vec<Repair>> {
        self.check_budget()?;
        let g = self.instance.graph();
        let h = self.instance.hypotheses();
        let mutable_graph: BTreeSet<&Atom> = self.mutable.iter().filter(|m| m.1).map(|m| &m.0).collect();
        let mutable_hyps: BTreeSet<&Atom> = self.mutable.iter().filter(|m| !m.1).map(|m| &m.0).collect();
        let lo = g.iter().filter(|a| !mutable_graph.contains(a));
        let hi = g.iter().chain(h.iter().filter(|a| mutable_hyps.contains(a)));
        let st = State::new(&self.prog, lo, hi);
        let mut search = Search {
            st,
            mutable: self
                .mutable
                .iter()
                .map(|(a, in_graph)| (self.prog.atom(a).expect("atom compiled"), *in_graph))
                .collect(),
            targets: compile_targets(&self.prog, targets),
            cap,
            first_only,
            changed: vec![false; self.mutable.len()],
            found: Vec::new(),
        };
        search.dfs(0, 0);
        let mut out: Vec<Repair> = search
            .found
            .iter()
            .map(|changed| {
                let mut r = Repair::default();
                for ((a, in_graph), &c) in self.mutable.iter().zip(changed) {
                    if c {
                        if *in_graph {
                            r.deletions.insert(a.clone());
                        } else {
                            r.additions.insert(a.clone());
                        }
                    }
                }
                r
            })
            .collect();
        out.sort();
        out.dedup();
        Ok(out)
    }

    /// All repairs over the mutable atoms, by size then canonical order.
    pub fn enumerate(&self) -> Result<Vec<Repair>> {
        self.run(self.instance.targets(), None, false)
    }

    /// Whether some repair has at most `c` changes.
    pub fn exists_repair_within(&self, c: usize) -> Result<bool> {
        Ok(!self.run(self.instance.targets(), Some(c), true)?.is_empty())
    }

    pub fn min_repair_size(&self) -> Result<Option<usize>> {
        self.check_budget()?;
        if self.run(self.instance.targets(), None, true)?.is_empty() {
            return Ok(None);
        }
        for c in 0..=self.mutable.len() {
            if self.exists_repair_within(c)? {
                return Ok(Some(c));
            }
        }
        unreachable!("a repair exists within the mutable atoms")
    }

    pub fn preferred(&self, order: PreferenceOrder) -> Result<Vec<Repair>> {
        match order {
            PreferenceOrder::Any => self.enumerate(),
            PreferenceOrder::Subset => Ok(subset_minimal(&self.enumerate()?)),
            PreferenceOrder::Card => match self.min_repair_size()? {
                None => Ok(Vec::new()),
                Some(c) => self.run(self.instance.targets(), Some(c), false),
            },
        }
    }

    fn target_subsets(&self, k: usize) -> Vec<BTreeSet<ShapeAtom>> {
        let all: Vec<&ShapeAtom> = self.instance.targets().iter().collect();
        let mut out = Vec::new();
        let mut pick = Vec::new();
        fn rec<'t>(
            all: &[&'t ShapeAtom],
            start: usize,
            k: usize,
            pick: &mut Vec<&'t ShapeAtom>,
            out: &mut Vec<BTreeSet<ShapeAtom>>,
        ) {
            if pick.len() == k {
                out.push(pick.iter().map(|t| (*t).clone()).collect());
                return;
            }
            for i in start..all.len() {
                pick.push(all[i]);
                rec(all, i + 1, k, pick, out);
                pick.pop();
            }
        }
        rec(&all, 0, k, &mut pick, &mut out);
        out
    }

    /// Largest `|T'|` with `T' ⊆ T` admitting a repair.
    pub fn max_target_cardinality(&self) -> Result<usize> {
        self.check_budget()?;
        for k in (0..=self.instance.targets().len()).rev() {
            for t in self.target_subsets(k) {
                if !self.run(&t, None, true)?.is_empty() {
                    return Ok(k);
                }
            }
        }
        Err(Error::NoModel)
    }

    /// Repairs for any target subset of maximum achievable size.
    pub fn max_repairs(&self) -> Result<MaxRepairs> {
        let k = self.max_target_cardinality()?;
        let mut witnesses: BTreeMap<Repair, Vec<BTreeSet<ShapeAtom>>> = BTreeMap::new();
        for t in self.target_subsets(k) {
            for r in self.run(&t, None, false)? {
                witnesses.entry(r).or_default().push(t.clone());
            }
        }
        let mut repairs: Vec<Repair> = witnesses.keys().cloned().collect();
        repairs.sort();
        Ok(MaxRepairs {
            max_targets: k,
            repairs,
            witnesses,
        })
    }

    /// Max-repairs filtered by a preference order.
    pub fn preferred_max(&self, order: PreferenceOrder) -> Result<MaxRepairs> {
        let mut m = self.max_repairs()?;
        m.repairs = filter_preferred(&m.repairs, order);
        let keep: BTreeSet<&Repair> = m.repairs.iter().collect();
        m.witnesses = m
            .witnesses
            .iter()
            .filter(|(r, _)| keep.contains(r))
            .map(|(r, w)| (r.clone(), w.clone()))
            .collect();
        Ok(m)
    }
}

pub fn enumerate_repairs(psi: &ProblemInstance) -> Result<Vec<Repair>> {
    RepairEnumerator::new(psi).enumerate()
}

pub fn preferred_repairs(psi: &ProblemInstance, order: PreferenceOrder) -> Result<Vec<Repair>> {
    RepairEnumerator::new(psi).preferred(order)
}

pub fn min_repair_size(psi: &ProblemInstance) -> Result<Option<usize>> {
    RepairEnumerator::new(psi).min_repair_size()
}

pub fn max_target_cardinality(psi: &ProblemInstance) -> Result<usize> {
    RepairEnumerator::new(psi).max_target_cardinality()
}

pub fn max_repairs(psi: &ProblemInstance) -> Result<Vec<Repair>> {
    Ok(RepairEnumerator::new(psi).max_repairs()?.repairs)
}
