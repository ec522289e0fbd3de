//! Seeded random instances for the generators and tests.

use rand::Rng;
use shacq_core::{CnfFormula, ColoringInstance, Literal, PairList, QbfInstance};

fn clauses(rng: &mut impl Rng, vars: usize, count: usize) -> Vec<[Literal; 3]> {
    (0..count)
        .map(|_| {
            [(); 3].map(|_| Literal {
                var: rng.gen_range(0..vars),
                positive: rng.gen_bool(0.5),
            })
        })
        .collect()
}

fn names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

/// A 3-CNF formula over `x1..xn` with uniformly drawn literals.
pub fn formula(rng: &mut impl Rng, vars: usize, clause_count: usize) -> CnfFormula {
    formula_named(rng, names("x", vars), clause_count)
}

pub fn formula_named(rng: &mut impl Rng, vars: Vec<String>, clause_count: usize) -> CnfFormula {
    let c = clauses(rng, vars.len(), clause_count);
    CnfFormula::new(vars, c).expect("sampled formula is well formed")
}

pub fn qbf(rng: &mut impl Rng, x: usize, y: usize, clause_count: usize) -> QbfInstance {
    let c = clauses(rng, x + y, clause_count);
    QbfInstance::new(names("x", x), names("y", y), c).expect("sampled instance is well formed")
}

/// A connected graph on `v1..vn` whose last vertex is a leaf. Needs `n >= 2`.
pub fn coloring(rng: &mut impl Rng, n: usize) -> ColoringInstance {
    assert!(n >= 2, "a leaf needs at least two vertices");
    let mut edges: Vec<(usize, usize)> = (1..n).map(|v| (rng.gen_range(0..v), v)).collect();
    // Extra edges avoid the last vertex so it keeps degree one.
    for a in 0..n - 1 {
        for b in a + 1..n - 1 {
            if !edges.contains(&(a, b)) && rng.gen_bool(0.3) {
                edges.push((a, b));
            }
        }
    }
    ColoringInstance::new(names("v", n), edges).expect("sampled graph is simple")
}

/// Pairs of formulas with disjoint variables `p<i>x<k>` and `q<i>x<k>`.
pub fn pair_list(rng: &mut impl Rng, pairs: usize, vars: usize, clause_count: usize) -> PairList {
    let list = (1..=pairs)
        .map(|i| {
            let phi = formula_named(rng, names(&format!("p{i}x"), vars), clause_count);
            let psi = formula_named(rng, names(&format!("q{i}x"), vars), clause_count);
            (phi, psi)
        })
        .collect();
    PairList::new(list).expect("sampled variables are disjoint")
}
