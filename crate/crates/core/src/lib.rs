//! Consistent query answering over data graphs under shape constraints.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

mod engine;
mod error;
mod lexer;

pub mod cqa;
pub mod graph;
pub mod query;
pub mod reductions;
pub mod repair;
pub mod shapes;
pub mod validate;

pub use cqa::{
    answer_cqa, answer_mcqa, intersection_graph, repaired_graphs, CqaOutcome, CqaRequest, Semantics, Verdict,
};
pub use error::{Error, ParseError, Result};
pub use graph::{
    nodes_of, parse_data_graph, serialize_data_graph, Assignment, Atom, DataGraph, Kind, Namespaces, Node, ShapeAtom,
    Symbol,
};
pub use lexer::is_identifier;
pub use query::{
    compatible, eval_query, is_answer, is_answer_via_pattern_tree, is_well_designed, parse_query, to_opt_normal_form,
    Mapping, Pattern, Query, QueryAtom, Term, Var,
};
pub use reductions::{
    coloring_boolean_query, gen_cardminsat, gen_coloring2, gen_listpair_sat, gen_qbf2, gen_sat, oracle_cardminsat,
    oracle_coloring2, oracle_listpair, oracle_qbf2, oracle_sat, CnfFormula, ColoringInstance, Gadget, Literal,
    PairList, QbfInstance,
};
pub use repair::{
    apply_repair, enumerate_repairs, filter_preferred, is_repair, max_repairs, max_target_cardinality, min_repair_size,
    preferred_repairs, MaxRepairs, MutabilityHints, PreferenceOrder, ProblemInstance, Repair, RepairEnumerator,
    DEFAULT_BUDGET,
};
pub use shapes::{
    dependency_info, desugar, parse_shape_expr, parse_shapes_doc, Constraint, DependencyInfo, PathExpr, ShapeExpr,
    ShapesDoc, Symbols,
};
pub use validate::{
    constants_outside, eval_path, eval_shape, find_validating_assignment, is_supported_model, validates,
};
