//! Reading and writing the text formats.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use shacq_core::{
    parse_data_graph, parse_query, parse_shapes_doc, DataGraph, Mapping, MutabilityHints, ProblemInstance, Query,
    ShapesDoc,
};

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

pub fn read_graph(path: &Path) -> Result<DataGraph> {
    parse_data_graph(&read(path)?).with_context(|| format!("in {}", path.display()))
}

pub fn read_shapes(path: &Path) -> Result<ShapesDoc> {
    parse_shapes_doc(&read(path)?).with_context(|| format!("in {}", path.display()))
}

pub fn read_query(path: &Path) -> Result<Query> {
    parse_query(&read(path)?).with_context(|| format!("in {}", path.display()))
}

pub fn read_hints(path: &Path) -> Result<MutabilityHints> {
    MutabilityHints::parse(&read(path)?).with_context(|| format!("in {}", path.display()))
}

pub fn read_mapping(path: &Path) -> Result<Mapping> {
    Mapping::parse(&read(path)?).with_context(|| format!("in {}", path.display()))
}

/// Builds `(G, C, T, H)` from files; a missing hypotheses file means `H = ∅`.
pub fn load_instance(
    graph: &Path,
    shapes: &Path,
    hypotheses: Option<&Path>,
    hints: Option<&Path>,
) -> Result<ProblemInstance> {
    let h = match hypotheses {
        Some(p) => read_graph(p)?,
        None => DataGraph::new(),
    };
    let mut psi = ProblemInstance::new(read_graph(graph)?, read_shapes(shapes)?, h)?;
    if let Some(p) = hints {
        psi = psi.with_hints(read_hints(p)?)?;
    }
    Ok(psi)
}
