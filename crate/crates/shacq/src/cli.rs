//! Subcommands and the exit-code contract: 0 yes/valid/nonempty, 1
//! no/invalid/empty, 2 error, 3 no repair.

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::Result;
use clap::{Args, Parser, Subcommand, ValueEnum};
use shacq_core::{
    answer_cqa, constants_outside, find_validating_assignment, CqaRequest, Error, Mapping, PreferenceOrder,
    ProblemInstance, RepairEnumerator, Semantics, Verdict, DEFAULT_BUDGET,
};

use crate::files;
use crate::generate::{self, Family, GenParams};

pub const EXIT_YES: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_ERROR: i32 = 2;
pub const EXIT_NO_REPAIR: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "shacq",
    version,
    about = "Consistent query answering under shape constraints"
)]
pub struct Cli {
    /// Print diagnostics to stderr; repeat for more.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check whether a graph validates against a shapes document.
    Validate { graph: PathBuf, shapes: PathBuf },
    /// List preferred repairs (or max-repairs).
    Repairs {
        #[command(flatten)]
        instance: InstanceArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Decide whether a mapping is a consistent answer.
    Cqa {
        #[command(flatten)]
        instance: InstanceArgs,
        query: PathBuf,
        /// Mapping such as `?x=a ?y=b`; `-` is the empty mapping.
        #[arg(long, default_value = "-", conflicts_with = "mapping_file")]
        mapping: String,
        #[arg(long)]
        mapping_file: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = SemanticsArg::Brave)]
        semantics: SemanticsArg,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Write a generated hardness instance to a directory.
    Gen {
        #[arg(value_enum)]
        family: Family,
        #[arg(long, short)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        vars: usize,
        #[arg(long, default_value_t = 1)]
        xvars: usize,
        #[arg(long, default_value_t = 1)]
        yvars: usize,
        #[arg(long, default_value_t = 2)]
        clauses: usize,
        #[arg(long, default_value_t = 4)]
        vertices: usize,
        #[arg(long, default_value_t = 2)]
        pairs: usize,
    },
}

#[derive(Args, Debug)]
pub struct InstanceArgs {
    pub graph: PathBuf,
    pub shapes: PathBuf,
    /// Hypotheses `H`; empty when omitted.
    #[arg(long)]
    pub hyps: Option<PathBuf>,
    /// Mutability hints restricting which atoms repairs may touch.
    #[arg(long)]
    pub hints: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct RunArgs {
    #[arg(long, value_enum, default_value_t = OrderArg::Any)]
    pub order: OrderArg,
    /// Use max-repairs instead of repairs.
    #[arg(long)]
    pub max: bool,
    /// Largest number of mutable atoms to enumerate over.
    #[arg(long, env = "SHACQ_BUDGET", default_value_t = DEFAULT_BUDGET as u64, value_parser = clap::value_parser!(u64).range(1..))]
    pub budget: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OrderArg {
    Any,
    Subset,
    Card,
}

impl From<OrderArg> for PreferenceOrder {
    fn from(o: OrderArg) -> Self {
        match o {
            OrderArg::Any => PreferenceOrder::Any,
            OrderArg::Subset => PreferenceOrder::Subset,
            OrderArg::Card => PreferenceOrder::Card,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SemanticsArg {
    Brave,
    Ar,
    Iar,
}

impl From<SemanticsArg> for Semantics {
    fn from(s: SemanticsArg) -> Self {
        match s {
            SemanticsArg::Brave => Semantics::Brave,
            SemanticsArg::Ar => Semantics::Ar,
            SemanticsArg::Iar => Semantics::Iar,
        }
    }
}

/// Settings shared by the repair-based subcommands.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub budget: usize,
    pub order: PreferenceOrder,
    pub semantics: Semantics,
    pub max_mode: bool,
    pub verbosity: u8,
}

impl RunConfig {
    fn new(run: &RunArgs, semantics: Semantics, verbosity: u8) -> Self {
        RunConfig {
            budget: usize::try_from(run.budget).unwrap_or(usize::MAX),
            order: run.order.into(),
            semantics,
            max_mode: run.max,
            verbosity,
        }
    }
}

fn load(args: &InstanceArgs) -> Result<ProblemInstance> {
    let psi = files::load_instance(&args.graph, &args.shapes, args.hyps.as_deref(), args.hints.as_deref())?;
    warn_constants(&psi);
    Ok(psi)
}

fn warn_constants(psi: &ProblemInstance) {
    let all = psi.graph().union(psi.hypotheses());
    for c in constants_outside(psi.shapes(), &all) {
        eprintln!("warning: constant `{c}` does not occur in the data");
    }
}

/// Runs one command, writing results to `out`; returns the exit code.
pub fn run(cli: &Cli, out: &mut impl Write) -> Result<i32> {
    match &cli.command {
        Command::Validate { graph, shapes } => validate(graph, shapes, cli.verbose, out),
        Command::Repairs { instance, run } => {
            let cfg = RunConfig::new(run, Semantics::Brave, cli.verbose);
            repairs(&load(instance)?, &cfg, out)
        }
        Command::Cqa {
            instance,
            query,
            mapping,
            mapping_file,
            semantics,
            run,
        } => {
            let cfg = RunConfig::new(run, (*semantics).into(), cli.verbose);
            let psi = load(instance)?;
            let query = files::read_query(query)?;
            for v in query.unused_projection() {
                eprintln!("warning: projected variable {v} does not occur in the pattern");
            }
            let mapping = match mapping_file {
                Some(p) => files::read_mapping(p)?,
                None => Mapping::parse(mapping)?,
            };
            cqa(&psi, query, mapping, &cfg, out)
        }
        Command::Gen {
            family,
            out: dir,
            seed,
            vars,
            xvars,
            yvars,
            clauses,
            vertices,
            pairs,
        } => {
            let p = GenParams {
                vars: *vars,
                xvars: *xvars,
                yvars: *yvars,
                clauses: *clauses,
                vertices: *vertices,
                pairs: *pairs,
                seed: *seed,
            };
            let g = generate::generate(*family, &p)?;
            generate::write_dir(dir, &g, &p)?;
            writeln!(out, "{}", dir.display())?;
            Ok(EXIT_YES)
        }
    }
}

fn validate(graph: &Path, shapes: &Path, verbosity: u8, out: &mut impl Write) -> Result<i32> {
    let g = files::read_graph(graph)?;
    let doc = files::read_shapes(shapes)?;
    for c in constants_outside(&doc, &g) {
        eprintln!("warning: constant `{c}` does not occur in the graph");
    }
    match find_validating_assignment(&g, &doc) {
        Some(i) => {
            writeln!(out, "VALID")?;
            if verbosity > 0 {
                for l in i.labels() {
                    writeln!(out, "{l}")?;
                }
            }
            Ok(EXIT_YES)
        }
        None => {
            writeln!(out, "INVALID")?;
            Ok(EXIT_NO)
        }
    }
}

fn repairs(psi: &ProblemInstance, cfg: &RunConfig, out: &mut impl Write) -> Result<i32> {
    let en = RepairEnumerator::with_budget(psi, cfg.budget);
    let list = if cfg.max_mode {
        match en.preferred_max(cfg.order) {
            Ok(m) => {
                if cfg.verbosity > 0 {
                    eprintln!("max-targets: {}", m.max_targets);
                }
                for r in &m.repairs {
                    writeln!(out, "{r}")?;
                    if cfg.verbosity > 0 {
                        for t in &m.witnesses[r] {
                            let t: Vec<String> = t.iter().map(ToString::to_string).collect();
                            eprintln!("  {r} validates {{{}}}", t.join(", "));
                        }
                    }
                }
                m.repairs
            }
            Err(Error::NoModel) => Vec::new(),
            Err(e) => return Err(e.into()),
        }
    } else {
        let list = en.preferred(cfg.order)?;
        for r in &list {
            writeln!(out, "{r}")?;
        }
        list
    };
    if cfg.verbosity > 0 {
        eprintln!("{} repairs", list.len());
    }
    Ok(if list.is_empty() { EXIT_NO } else { EXIT_YES })
}

fn cqa(
    psi: &ProblemInstance,
    query: shacq_core::Query,
    mapping: Mapping,
    cfg: &RunConfig,
    out: &mut impl Write,
) -> Result<i32> {
    let req = CqaRequest::new(query, mapping, cfg.order, cfg.semantics)
        .max(cfg.max_mode)
        .budget(cfg.budget);
    let outcome = match answer_cqa(psi, &req) {
        Ok(o) => o,
        Err(Error::NoModel) => {
            writeln!(out, "{}", Verdict::NoRepair)?;
            return Ok(EXIT_NO_REPAIR);
        }
        Err(e) => return Err(e.into()),
    };
    writeln!(out, "{}", outcome.verdict)?;
    writeln!(out, "repairs: {}", outcome.repair_count)?;
    if let Some(k) = outcome.intersection_size {
        writeln!(out, "intersection: {k}")?;
    }
    if let Some(k) = outcome.max_targets {
        writeln!(out, "max-targets: {k}")?;
    }
    Ok(match outcome.verdict {
        Verdict::Yes => EXIT_YES,
        Verdict::No => EXIT_NO,
        Verdict::NoRepair => EXIT_NO_REPAIR,
    })
}
