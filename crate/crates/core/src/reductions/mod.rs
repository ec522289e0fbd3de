//! Hardness gadgets as problem instances, and brute-force oracles to check
//! them against.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::cqa::Semantics;
use crate::error::{Error, Result};
use crate::lexer::is_identifier;
use crate::query::{Mapping, Query};
use crate::repair::{PreferenceOrder, ProblemInstance};

mod gadgets;
mod oracle;

pub use gadgets::{coloring_boolean_query, gen_cardminsat, gen_coloring2, gen_listpair_sat, gen_qbf2, gen_sat};
pub use oracle::{
    oracle_cardminsat, oracle_coloring2, oracle_listpair, oracle_qbf2, oracle_sat, MAX_ORACLE_VARS, MAX_ORACLE_VERTICES,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    /// Index into the formula's variable list.
    pub var: usize,
    pub positive: bool,
}

impl Literal {
    pub fn pos(var: usize) -> Self {
        Literal { var, positive: true }
    }

    pub fn neg(var: usize) -> Self {
        Literal { var, positive: false }
    }

    pub fn negated(self) -> Self {
        Literal {
            var: self.var,
            positive: !self.positive,
        }
    }
}

/// A formula in 3-CNF over named variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CnfFormula {
    variables: Vec<String>,
    clauses: Vec<[Literal; 3]>,
}

fn check_names<'a>(names: impl IntoIterator<Item = &'a String>) -> Result<()> {
    let mut seen = BTreeSet::new();
    for v in names {
        if !is_identifier(v) {
            return Err(Error::InvalidInstance(format!("`{v}` is not an identifier")));
        }
        if !seen.insert(v) {
            return Err(Error::InvalidInstance(format!("variable `{v}` listed twice")));
        }
    }
    Ok(())
}

impl CnfFormula {
    pub fn new(variables: Vec<String>, clauses: Vec<[Literal; 3]>) -> Result<Self> {
        check_names(&variables)?;
        if let Some(l) = clauses.iter().flatten().find(|l| l.var >= variables.len()) {
            return Err(Error::InvalidInstance(format!("literal refers to variable #{}", l.var)));
        }
        Ok(CnfFormula { variables, clauses })
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn clauses(&self) -> &[[Literal; 3]] {
        &self.clauses
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v == name)
    }
}

impl fmt::Display for CnfFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.clauses.is_empty() {
            return f.write_str("true");
        }
        for (j, c) in self.clauses.iter().enumerate() {
            if j > 0 {
                f.write_str(" & ")?;
            }
            f.write_str("(")?;
            for (k, l) in c.iter().enumerate() {
                if k > 0 {
                    f.write_str(" | ")?;
                }
                if !l.positive {
                    f.write_str("!")?;
                }
                f.write_str(&self.variables[l.var])?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// `∃X ∀Y ¬φ(X, Y)`: some assignment of `X` extends to no model of the matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QbfInstance {
    x_count: usize,
    matrix: CnfFormula,
}

impl QbfInstance {
    /// Clause literals index `x_vars` followed by `y_vars`.
    pub fn new(x_vars: Vec<String>, y_vars: Vec<String>, clauses: Vec<[Literal; 3]>) -> Result<Self> {
        let x_count = x_vars.len();
        let mut vars = x_vars;
        vars.extend(y_vars);
        Ok(QbfInstance {
            x_count,
            matrix: CnfFormula::new(vars, clauses)?,
        })
    }

    pub fn x_vars(&self) -> &[String] {
        &self.matrix.variables[..self.x_count]
    }

    pub fn y_vars(&self) -> &[String] {
        &self.matrix.variables[self.x_count..]
    }

    pub fn matrix(&self) -> &CnfFormula {
        &self.matrix
    }

    pub fn is_x(&self, var: usize) -> bool {
        var < self.x_count
    }
}

/// A simple undirected graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ColoringInstance {
    vertices: Vec<String>,
    edges: BTreeSet<(usize, usize)>,
}

const COLORING_RESERVED: [&str; 5] = ["r", "g", "b", "s", "e"];

impl ColoringInstance {
    pub fn new(vertices: Vec<String>, edges: Vec<(usize, usize)>) -> Result<Self> {
        check_names(&vertices).map_err(|e| Error::MalformedGraph(format!("{e}")))?;
        if let Some(v) = vertices.iter().find(|v| COLORING_RESERVED.contains(&v.as_str())) {
            return Err(Error::MalformedGraph(format!("vertex name `{v}` is reserved")));
        }
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a >= vertices.len() || b >= vertices.len() {
                return Err(Error::MalformedGraph(format!("edge ({a},{b}) leaves the vertex list")));
            }
            if a == b {
                return Err(Error::MalformedGraph(format!("self-loop on `{}`", vertices[a])));
            }
            if !set.insert((a.min(b), a.max(b))) {
                return Err(Error::MalformedGraph(format!(
                    "edge `{}`-`{}` listed twice",
                    vertices[a], vertices[b]
                )));
            }
        }
        Ok(ColoringInstance { vertices, edges: set })
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    /// Edges as index pairs `(i, j)` with `i < j`.
    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|(a, b)| *a == v || *b == v).count()
    }

    pub fn leaves(&self) -> Vec<usize> {
        (0..self.vertices.len()).filter(|&v| self.degree(v) == 1).collect()
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return true;
        }
        let mut seen = alloc::vec![false; self.vertices.len()];
        let mut stack = alloc::vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(a, b) in &self.edges {
                let w = if a == v {
                    b
                } else if b == v {
                    a
                } else {
                    continue;
                };
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.iter().all(|&s| s)
    }
}

/// Pairs `(φ_i, ψ_i)`; a yes-instance has some `φ_i` unsatisfiable and `ψ_i`
/// satisfiable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PairList {
    pairs: Vec<(CnfFormula, CnfFormula)>,
}

impl PairList {
    pub fn new(pairs: Vec<(CnfFormula, CnfFormula)>) -> Result<Self> {
        check_names(pairs.iter().flat_map(|(a, b)| a.variables.iter().chain(&b.variables)))?;
        Ok(PairList { pairs })
    }

    pub fn pairs(&self) -> &[(CnfFormula, CnfFormula)] {
        &self.pairs
    }
}

/// A generated instance with the query, mapping and setting it targets.
#[derive(Clone, Debug)]
pub struct Gadget {
    pub instance: ProblemInstance,
    pub query: Query,
    pub mapping: Mapping,
    pub order: PreferenceOrder,
    pub semantics: Semantics,
    /// Enough budget to branch on every hinted atom.
    pub budget: usize,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cqa::{answer_cqa, CqaRequest, Verdict};
    use crate::query::parse_query;
    use alloc::string::ToString;
    use alloc::vec;

    fn vars(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn run(g: &Gadget) -> Verdict {
        run_with(g, g.query.clone(), g.order, g.semantics)
    }

    fn run_with(g: &Gadget, q: Query, order: PreferenceOrder, s: Semantics) -> Verdict {
        let req = CqaRequest::new(q, g.mapping.clone(), order, s).budget(g.budget);
        answer_cqa(&g.instance, &req).unwrap().verdict
    }

    fn yes(b: bool) -> Verdict {
        if b {
            Verdict::Yes
        } else {
            Verdict::No
        }
    }

    #[test]
    fn sat_gadget() {
        let x = Literal::pos(0);
        let f = CnfFormula::new(vars(&["x"]), vec![[x; 3]]).unwrap();
        assert!(oracle_sat(&f).unwrap());
        assert_eq!(run(&gen_sat(&f)), Verdict::Yes);

        let g = CnfFormula::new(vars(&["x"]), vec![[x; 3], [x.negated(); 3]]).unwrap();
        assert!(!oracle_sat(&g).unwrap());
        let gadget = gen_sat(&g);
        assert_eq!(run(&gadget), Verdict::No);
        let ar = run_with(
            &gadget,
            parse_query("F(?x)").unwrap(),
            PreferenceOrder::Any,
            Semantics::Ar,
        );
        assert_eq!(ar, Verdict::Yes);

        let h = CnfFormula::new(
            vars(&["x", "y", "z"]),
            vec![[Literal::pos(0), Literal::neg(1), Literal::pos(2)]],
        )
        .unwrap();
        assert_eq!(gen_sat(&h).instance.graph().nodes().len(), 2 * 3 + 1 + 2);
    }

    #[test]
    fn cardminsat_gadget() {
        // (x | y | y): minimal models set exactly one of x, y.
        let f = CnfFormula::new(
            vars(&["x", "y"]),
            vec![[Literal::pos(0), Literal::pos(1), Literal::pos(1)]],
        )
        .unwrap();
        assert!(oracle_cardminsat(&f, 0).unwrap());
        assert_eq!(run(&gen_cardminsat(&f, 0).unwrap()), Verdict::Yes);
        // (x | !x | x) is a tautology whose least model sets x false.
        let t = CnfFormula::new(vars(&["x"]), vec![[Literal::pos(0), Literal::neg(0), Literal::pos(0)]]).unwrap();
        assert!(!oracle_cardminsat(&t, 0).unwrap());
        assert_eq!(run(&gen_cardminsat(&t, 0).unwrap()), Verdict::No);
        let u = CnfFormula::new(vars(&["x"]), vec![[Literal::pos(0); 3], [Literal::neg(0); 3]]).unwrap();
        let gadget = gen_cardminsat(&u, 0).unwrap();
        let ar = run_with(
            &gadget,
            parse_query("F(?x)").unwrap(),
            PreferenceOrder::Card,
            Semantics::Ar,
        );
        assert_eq!(ar, Verdict::Yes);
        assert!(gen_cardminsat(&u, 3).is_err());
    }

    #[test]
    fn qbf_gadget() {
        // ∃x ∀y ¬(x | x | y): x false, y false falsifies, but y true satisfies.
        let q = QbfInstance::new(
            vars(&["x"]),
            vars(&["y"]),
            vec![[Literal::pos(0), Literal::pos(0), Literal::pos(1)]],
        )
        .unwrap();
        assert!(!oracle_qbf2(&q).unwrap());
        let gadget = gen_qbf2(&q);
        assert_eq!(run(&gadget), Verdict::No);
        let ar = run_with(
            &gadget,
            parse_query("T(?x)").unwrap(),
            PreferenceOrder::Subset,
            Semantics::Ar,
        );
        assert_eq!(ar, Verdict::Yes);
        // (x | x | x) & (!y | !y | !y) can never hold with x false.
        let q = QbfInstance::new(
            vars(&["x"]),
            vars(&["y"]),
            vec![[Literal::pos(0); 3], [Literal::neg(1); 3]],
        )
        .unwrap();
        assert!(oracle_qbf2(&q).unwrap());
        assert_eq!(run(&gen_qbf2(&q)), Verdict::Yes);
    }

    #[test]
    fn coloring_gadget() {
        let path = ColoringInstance::new(vars(&["v1", "v2", "v3"]), vec![(0, 1), (1, 2)]).unwrap();
        let expected = oracle_coloring2(&path).unwrap();
        assert!(!expected);
        let gadget = gen_coloring2(&path).unwrap();
        assert_eq!(run(&gadget), yes(expected));
        let ar = run_with(
            &gadget,
            coloring_boolean_query(&path),
            PreferenceOrder::Any,
            Semantics::Ar,
        );
        assert_eq!(ar, yes(!expected));

        // A triangle with a pendant vertex: the leaf color can always be avoided.
        let tri = ColoringInstance::new(vars(&["v1", "v2", "v3", "v4"]), vec![(0, 1), (1, 2), (0, 2), (2, 3)]).unwrap();
        assert_eq!(run(&gen_coloring2(&tri).unwrap()), yes(oracle_coloring2(&tri).unwrap()));

        let cycle = ColoringInstance::new(vars(&["v1", "v2", "v3"]), vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(matches!(gen_coloring2(&cycle), Err(Error::MalformedGraph(_))));
        assert!(ColoringInstance::new(vars(&["v1"]), vec![(0, 0)]).is_err());
    }

    #[test]
    fn listpair_gadget() {
        let unsat = |v: &str| CnfFormula::new(vars(&[v]), vec![[Literal::pos(0); 3], [Literal::neg(0); 3]]).unwrap();
        let sat = |v: &str| CnfFormula::new(vars(&[v]), vec![[Literal::pos(0); 3]]).unwrap();
        let yes_list = PairList::new(vec![(unsat("a"), sat("b"))]).unwrap();
        assert!(oracle_listpair(&yes_list).unwrap());
        assert_eq!(run(&gen_listpair_sat(&yes_list)), Verdict::Yes);
        let no_list = PairList::new(vec![(sat("a"), sat("b"))]).unwrap();
        assert!(!oracle_listpair(&no_list).unwrap());
        assert_eq!(run(&gen_listpair_sat(&no_list)), Verdict::No);
        assert!(PairList::new(vec![(sat("a"), sat("a"))]).is_err());
    }

    #[test]
    fn oracle_limits() {
        let names: Vec<String> = (0..11).map(|i| alloc::format!("x{i}")).collect();
        let f = CnfFormula::new(names, Vec::new()).unwrap();
        assert!(matches!(oracle_sat(&f), Err(Error::SizeExceeded(_))));
        let names: Vec<String> = (0..7).map(|i| alloc::format!("v{i}")).collect();
        let g = ColoringInstance::new(names, vec![(0, 1)]).unwrap();
        assert!(matches!(oracle_coloring2(&g), Err(Error::SizeExceeded(_))));
    }
}
