//! Instance directories for the hardness gadgets.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use shacq_core::{
    gen_cardminsat, gen_coloring2, gen_listpair_sat, gen_qbf2, gen_sat, oracle_cardminsat, oracle_coloring2,
    oracle_listpair, oracle_qbf2, oracle_sat, serialize_data_graph, Gadget,
};

use crate::sample;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Family {
    Sat,
    Cardminsat,
    Qbf2,
    Coloring2,
    Listpair,
}

#[derive(Clone, Debug)]
pub struct GenParams {
    pub vars: usize,
    pub xvars: usize,
    pub yvars: usize,
    pub clauses: usize,
    pub vertices: usize,
    pub pairs: usize,
    pub seed: u64,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            vars: 3,
            xvars: 1,
            yvars: 1,
            clauses: 2,
            vertices: 4,
            pairs: 2,
            seed: 0,
        }
    }
}

/// A gadget together with the oracle's verdict and a readable source.
pub struct Generated {
    pub family: Family,
    pub gadget: Gadget,
    pub expected: bool,
    pub source: String,
}

pub fn generate(family: Family, p: &GenParams) -> Result<Generated> {
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let (gadget, expected, source) = match family {
        Family::Sat => {
            let f = sample::formula(&mut rng, p.vars.max(1), p.clauses);
            (gen_sat(&f), oracle_sat(&f)?, f.to_string())
        }
        Family::Cardminsat => {
            let f = sample::formula(&mut rng, p.vars.max(1), p.clauses);
            (gen_cardminsat(&f, 0)?, oracle_cardminsat(&f, 0)?, f.to_string())
        }
        Family::Qbf2 => {
            if p.xvars == 0 || p.yvars == 0 {
                bail!("qbf2 needs at least one X and one Y variable");
            }
            let q = sample::qbf(&mut rng, p.xvars, p.yvars, p.clauses);
            let src = format!(
                "exists {} forall {} not {}",
                q.x_vars().join(" "),
                q.y_vars().join(" "),
                q.matrix()
            );
            (gen_qbf2(&q), oracle_qbf2(&q)?, src)
        }
        Family::Coloring2 => {
            if p.vertices < 2 {
                bail!("coloring2 needs at least two vertices");
            }
            let g = sample::coloring(&mut rng, p.vertices);
            let edges: Vec<String> = g
                .edges()
                .iter()
                .map(|&(a, b)| format!("{}-{}", g.vertices()[a], g.vertices()[b]))
                .collect();
            (gen_coloring2(&g)?, oracle_coloring2(&g)?, edges.join(" "))
        }
        Family::Listpair => {
            let pl = sample::pair_list(&mut rng, p.pairs.max(1), p.vars.max(1), p.clauses);
            let src: Vec<String> = pl.pairs().iter().map(|(a, b)| format!("[{a}] / [{b}]")).collect();
            (gen_listpair_sat(&pl), oracle_listpair(&pl)?, src.join(" ; "))
        }
    };
    Ok(Generated {
        family,
        gadget,
        expected,
        source,
    })
}

fn family_name(f: Family) -> &'static str {
    match f {
        Family::Sat => "sat",
        Family::Cardminsat => "cardminsat",
        Family::Qbf2 => "qbf2",
        Family::Coloring2 => "coloring2",
        Family::Listpair => "listpair",
    }
}

/// `key = value` lines describing how to run the instance and what to expect.
pub fn meta(g: &Generated, p: &GenParams) -> String {
    let mut s = String::new();
    let gd = &g.gadget;
    let _ = writeln!(s, "family = {}", family_name(g.family));
    let _ = writeln!(s, "seed = {}", p.seed);
    let _ = writeln!(s, "source = {}", g.source);
    let _ = writeln!(s, "order = {}", gd.order);
    let _ = writeln!(s, "semantics = {}", gd.semantics);
    let _ = writeln!(s, "max = false");
    let _ = writeln!(s, "budget = {}", gd.budget);
    let _ = writeln!(s, "oracle = {}", g.expected);
    let _ = writeln!(s, "expected = {}", if g.expected { "YES" } else { "NO" });
    s
}

/// Writes `graph.facts`, `doc.shapes`, `query.query`, `mapping.txt`,
/// `hints.mutable`, `meta.txt`, and `hyps.facts` when there are hypotheses.
pub fn write_dir(dir: &Path, g: &Generated, p: &GenParams) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let psi = &g.gadget.instance;
    let mut files = vec![
        ("graph.facts", serialize_data_graph(psi.graph())),
        ("doc.shapes", psi.shapes().to_string()),
        ("query.query", format!("{}\n", g.gadget.query)),
        ("mapping.txt", format!("{}\n", g.gadget.mapping)),
        ("hints.mutable", psi.hints().cloned().unwrap_or_default().to_string()),
        ("meta.txt", meta(g, p)),
    ];
    if !psi.hypotheses().is_empty() {
        files.push(("hyps.facts", serialize_data_graph(psi.hypotheses())));
    }
    for (name, text) in files {
        let path = dir.join(name);
        fs::write(&path, text).with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(())
}
