//! Consistent query answering over preferred repairs and max-repairs.

use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::graph::DataGraph;
use crate::query::{is_answer, Mapping, Query};
use crate::repair::{apply_repair, PreferenceOrder, ProblemInstance, RepairEnumerator, DEFAULT_BUDGET};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Semantics {
    /// Some preferred repaired graph.
    Brave,
    /// Every preferred repaired graph.
    Ar,
    /// The intersection of the preferred repaired graphs.
    Iar,
}

impl Semantics {
    pub const ALL: [Semantics; 3] = [Semantics::Brave, Semantics::Ar, Semantics::Iar];
}

impl fmt::Display for Semantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Semantics::Brave => "brave",
            Semantics::Ar => "ar",
            Semantics::Iar => "iar",
        })
    }
}

#[derive(Clone, Debug)]
pub struct CqaRequest {
    pub query: Query,
    pub mapping: Mapping,
    pub order: PreferenceOrder,
    pub semantics: Semantics,
    pub max_mode: bool,
    /// Largest number of mutable atoms the enumeration may branch on.
    pub budget: usize,
}

impl CqaRequest {
    pub fn new(query: Query, mapping: Mapping, order: PreferenceOrder, semantics: Semantics) -> Self {
        CqaRequest {
            query,
            mapping,
            order,
            semantics,
            max_mode: false,
            budget: DEFAULT_BUDGET,
        }
    }

    pub fn max(mut self, max_mode: bool) -> Self {
        self.max_mode = max_mode;
        self
    }

    pub fn budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Yes,
    No,
    NoRepair,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Yes => "YES",
            Verdict::No => "NO",
            Verdict::NoRepair => "NO-REPAIR",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CqaOutcome {
    pub verdict: Verdict,
    /// Number of distinct preferred repaired graphs.
    pub repair_count: usize,
    /// Size of the intersection, under IAR when some repair exists.
    pub intersection_size: Option<usize>,
    /// Largest satisfiable target count, in max mode.
    pub max_targets: Option<usize>,
}

/// The preferred repaired graphs, deduplicated and sorted.
pub fn repaired_graphs(psi: &ProblemInstance, order: PreferenceOrder, max_mode: bool) -> Result<Vec<DataGraph>> {
    repaired_graphs_with(&RepairEnumerator::new(psi), order, max_mode).map(|(gs, _)| gs)
}

fn repaired_graphs_with(
    en: &RepairEnumerator<'_>,
    order: PreferenceOrder,
    max_mode: bool,
) -> Result<(Vec<DataGraph>, Option<usize>)> {
    let (repairs, k) = if max_mode {
        let m = en.preferred_max(order)?;
        (m.repairs, Some(m.max_targets))
    } else {
        (en.preferred(order)?, None)
    };
    let g = en.instance().graph();
    let mut graphs = repairs.iter().map(|r| apply_repair(g, r)).collect::<Result<Vec<_>>>()?;
    graphs.sort();
    graphs.dedup();
    Ok((graphs, k))
}

pub fn intersection_graph(graphs: &[DataGraph]) -> Result<DataGraph> {
    let (first, rest) = graphs.split_first().ok_or(Error::EmptyFamily)?;
    Ok(rest.iter().fold(first.clone(), |acc, g| acc.intersection(g)))
}

fn decide(family: &[DataGraph], req: &CqaRequest, max_targets: Option<usize>) -> Result<CqaOutcome> {
    let mut out = CqaOutcome {
        verdict: Verdict::NoRepair,
        repair_count: family.len(),
        intersection_size: None,
        max_targets,
    };
    if family.is_empty() {
        return Ok(out);
    }
    let (q, mu) = (&req.query, &req.mapping);
    let yes = match req.semantics {
        Semantics::Brave => family.iter().any(|g| is_answer(mu, q, g)),
        Semantics::Ar => family.iter().all(|g| is_answer(mu, q, g)),
        Semantics::Iar => {
            let meet = intersection_graph(family)?;
            out.intersection_size = Some(meet.len());
            is_answer(mu, q, &meet)
        }
    };
    out.verdict = if yes { Verdict::Yes } else { Verdict::No };
    Ok(out)
}

/// Decides the request over preferred repairs, or over preferred max-repairs
/// when `max_mode` is set.
pub fn answer_cqa(psi: &ProblemInstance, req: &CqaRequest) -> Result<CqaOutcome> {
    let en = RepairEnumerator::with_budget(psi, req.budget);
    let (family, k) = repaired_graphs_with(&en, req.order, req.max_mode)?;
    decide(&family, req, k)
}

/// Decides the request over preferred max-repairs.
pub fn answer_mcqa(psi: &ProblemInstance, req: &CqaRequest) -> Result<CqaOutcome> {
    let req = req.clone().max(true);
    answer_cqa(psi, &req)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_data_graph;
    use crate::query::parse_query;
    use crate::shapes::parse_shapes_doc;

    const G: &str = "Prof(Ann). worksWith(Lea,Ann). Student(Ben). id(Ben,ID1). id(Ben,ID2).
        enrolledIn(Ben,c). id(John,ID3). Student(John).";
    const C: &str = "shape Profshape := Prof | exists worksWith . Profshape .
        shape Studshape := Student & =1 id & exists enrolledIn .
        target Studshape(Ben). target Studshape(John).";
    const H: &str = "enrolledIn(John,c1). enrolledIn(Ben,c2).";

    fn example() -> ProblemInstance {
        ProblemInstance::new(
            parse_data_graph(G).unwrap(),
            parse_shapes_doc(C).unwrap(),
            parse_data_graph(H).unwrap(),
        )
        .unwrap()
    }

    fn verdict(psi: &ProblemInstance, q: &str, mu: &str, order: PreferenceOrder, s: Semantics) -> Verdict {
        let req = CqaRequest::new(parse_query(q).unwrap(), Mapping::parse(mu).unwrap(), order, s);
        answer_cqa(psi, &req).unwrap().verdict
    }

    #[test]
    fn intersection_of_example_repairs() {
        let gs = repaired_graphs(&example(), PreferenceOrder::Subset, false).unwrap();
        assert_eq!(gs.len(), 2);
        let meet = intersection_graph(&gs).unwrap();
        let expected = parse_data_graph(
            "Prof(Ann). worksWith(Lea,Ann). Student(Ben). enrolledIn(Ben,c). id(John,ID3).
             Student(John). enrolledIn(John,c1).",
        )
        .unwrap();
        assert_eq!(meet, expected);
        assert_eq!(intersection_graph(&[]), Err(Error::EmptyFamily));
    }

    #[test]
    fn example_answers() {
        let psi = example();
        let q = "Student(?x), id(?x,?y)";
        let q2 = "{Student(?x)} OPT {id(?x,?y)}";
        for order in PreferenceOrder::ALL {
            for s in Semantics::ALL {
                assert_eq!(verdict(&psi, q, "?x=John ?y=ID3", order, s), Verdict::Yes);
            }
            assert_eq!(verdict(&psi, q, "?x=Ben ?y=ID1", order, Semantics::Brave), Verdict::Yes);
            assert_eq!(verdict(&psi, q, "?x=Ben ?y=ID1", order, Semantics::Ar), Verdict::No);
            assert_eq!(verdict(&psi, q, "?x=Ben ?y=ID1", order, Semantics::Iar), Verdict::No);
        }
        for order in [PreferenceOrder::Subset, PreferenceOrder::Card] {
            assert_eq!(verdict(&psi, q2, "?x=Ben", order, Semantics::Iar), Verdict::Yes);
            assert_eq!(verdict(&psi, q2, "?x=Ben", order, Semantics::Brave), Verdict::No);
            assert_eq!(verdict(&psi, q2, "?x=Ben", order, Semantics::Ar), Verdict::No);
        }
    }

    #[test]
    fn no_repair_and_max_mode() {
        let psi = ProblemInstance::new(
            DataGraph::new(),
            parse_shapes_doc("shape s1 := B. shape s2 := !B. target s1(a). target s2(a).").unwrap(),
            parse_data_graph("B(a).").unwrap(),
        )
        .unwrap();
        let req = CqaRequest::new(
            parse_query("B(?x)").unwrap(),
            Mapping::parse("?x=a").unwrap(),
            PreferenceOrder::Any,
            Semantics::Brave,
        );
        let plain = answer_cqa(&psi, &req).unwrap();
        assert_eq!(plain.verdict, Verdict::NoRepair);
        assert_eq!(plain.repair_count, 0);
        let max = answer_mcqa(&psi, &req).unwrap();
        assert_eq!(max.verdict, Verdict::Yes);
        assert_eq!(max.max_targets, Some(1));
    }
}
