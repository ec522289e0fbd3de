//! Truth-table and game-tree checks, written without reference to the
//! gadgets.

use alloc::format;
use alloc::vec;

use super::{CnfFormula, ColoringInstance, PairList, QbfInstance};
use crate::error::{Error, Result};

pub const MAX_ORACLE_VARS: usize = 10;
pub const MAX_ORACLE_VERTICES: usize = 6;

fn check_vars(n: usize) -> Result<()> {
    if n > MAX_ORACLE_VARS {
        return Err(Error::SizeExceeded(format!(
            "{n} variables, at most {MAX_ORACLE_VARS} supported"
        )));
    }
    Ok(())
}

/// Bit `v` of `bits` is the value of variable `v`.
fn satisfies(f: &CnfFormula, bits: u32) -> bool {
    f.clauses()
        .iter()
        .all(|c| c.iter().any(|l| (bits >> l.var & 1 == 1) == l.positive))
}

fn models(f: &CnfFormula) -> impl Iterator<Item = u32> + '_ {
    (0..1u32 << f.variables().len()).filter(move |&bits| satisfies(f, bits))
}

pub fn oracle_sat(f: &CnfFormula) -> Result<bool> {
    check_vars(f.variables().len())?;
    Ok(models(f).next().is_some())
}

/// Whether `x1` is true in some model with the fewest true variables.
pub fn oracle_cardminsat(f: &CnfFormula, x1: usize) -> Result<bool> {
    check_vars(f.variables().len())?;
    let Some(min) = models(f).map(u32::count_ones).min() else {
        return Ok(false);
    };
    Ok(models(f).any(|m| m.count_ones() == min && m >> x1 & 1 == 1))
}

/// Whether some assignment of the `X` variables extends to no model.
pub fn oracle_qbf2(q: &QbfInstance) -> Result<bool> {
    let (nx, ny) = (q.x_vars().len(), q.y_vars().len());
    check_vars(nx + ny)?;
    Ok((0..1u32 << nx).any(|x| (0..1u32 << ny).all(|y| !satisfies(q.matrix(), x | y << nx))))
}

fn proper(g: &ColoringInstance, colors: &[u8]) -> bool {
    g.edges().iter().all(|&(a, b)| colors[a] != colors[b])
}

/// Whether player one, coloring the degree-one vertices first, can leave
/// player two without a proper 3-coloring of the rest.
pub fn oracle_coloring2(g: &ColoringInstance) -> Result<bool> {
    let n = g.vertices().len();
    if n > MAX_ORACLE_VERTICES {
        return Err(Error::SizeExceeded(format!(
            "{n} vertices, at most {MAX_ORACLE_VERTICES} supported"
        )));
    }
    let leaves = g.leaves();
    let rest: alloc::vec::Vec<usize> = (0..n).filter(|v| !leaves.contains(v)).collect();
    let mut colors = vec![0u8; n];
    for first in 0..3usize.pow(leaves.len() as u32) {
        let mut code = first;
        for &v in &leaves {
            colors[v] = (code % 3) as u8;
            code /= 3;
        }
        let extends = (0..3usize.pow(rest.len() as u32)).any(|second| {
            let mut code = second;
            for &v in &rest {
                colors[v] = (code % 3) as u8;
                code /= 3;
            }
            proper(g, &colors)
        });
        if !extends {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Whether some pair has an unsatisfiable first and satisfiable second formula.
pub fn oracle_listpair(pl: &PairList) -> Result<bool> {
    for (phi, psi) in pl.pairs() {
        if !oracle_sat(phi)? && oracle_sat(psi)? {
            return Ok(true);
        }
    }
    Ok(false)
}
