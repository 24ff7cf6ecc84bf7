//! Link-by-link check of the edge-counting argument behind the claimed
//! bound, on a concrete MIN run and a concrete maximum independent set `X`.
//!
//! With `d_j` the chosen degree and `k_j = |deleted_j ∩ X|` at iteration `j`
//! of a run with `k` iterations, the links are:
//!
//! - `edge_sum_link`: `m >= sum_j [C(1+d_j, 2) + C(k_j, 2) + (j < k)]`
//! - `inequality2_link`: `2m >= 4k - 2 + sum_j (1+d_j) d_j`
//! - `inequality2_corrected_link`: `2m >= 2k - 2 + sum_j (1+d_j) d_j`
//! - `inequality1_link`: `k >= n^2 / (2m + n - sum_i (d_G(i) - delta_j(i)))`
//! - `claimed_bound_link`, `repaired_bound_link`, `harant_link`:
//!   `alpha >= bound`
//!
//! A failed link is data, never an error. Everything except the quoted
//! closed-form values is exact.

use std::fmt;

use num_rational::Ratio;
use rayon::prelude::*;
use thiserror::Error;

use crate::bounds::{bound_holds_exact, evaluate, inequality1_rhs, BoundError, BoundKind, Verdict};
use crate::exact::{alpha_exact, all_maximum_independent_sets, ExactError};
use crate::graph::{Graph, VertexId};
use crate::min_greedy::{MinTrace, TraceError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChainError {
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("graph is not connected")]
    NotConnected,
    #[error("trace does not match the graph: {0}")]
    Trace(#[from] TraceError),
    #[error("supplied set is not independent")]
    NotIndependent,
    #[error("supplied set is not a maximum independent set (size {size}, alpha {alpha})")]
    NotMaximumSet { size: usize, alpha: usize },
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Bound(#[from] BoundError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Link {
    EdgeSum,
    Inequality2,
    Inequality2Corrected,
    Inequality1,
    ClaimedBound,
    RepairedBound,
    HarantBound,
}

impl Link {
    pub const ALL: [Link; 7] = [
        Link::EdgeSum,
        Link::Inequality2,
        Link::Inequality2Corrected,
        Link::Inequality1,
        Link::ClaimedBound,
        Link::RepairedBound,
        Link::HarantBound,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Link::EdgeSum => "edge_sum_link",
            Link::Inequality2 => "inequality2_link",
            Link::Inequality2Corrected => "inequality2_corrected_link",
            Link::Inequality1 => "inequality1_link",
            Link::ClaimedBound => "claimed_bound_link",
            Link::RepairedBound => "repaired_bound_link",
            Link::HarantBound => "harant_link",
        }
    }

    fn bound_kind(self) -> Option<BoundKind> {
        match self {
            Link::ClaimedBound => Some(BoundKind::Claimed),
            Link::RepairedBound => Some(BoundKind::Repaired),
            Link::HarantBound => Some(BoundKind::Harant),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LinkStatus {
    Holds,
    Violated,
    NotApplicable,
}

impl LinkStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            LinkStatus::Holds => "holds",
            LinkStatus::Violated => "violated",
            LinkStatus::NotApplicable => "not_applicable",
        }
    }
}

/// Left side minus right side of a link's inequality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Slack {
    Integer(i64),
    Rational(Ratio<i64>),
    /// `alpha - value` for closed-form bounds; the status comes from the
    /// integer predicate, not from this number.
    Real(f64),
    None,
}

impl fmt::Display for Slack {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slack::Integer(i) => write!(f, "{i}"),
            Slack::Rational(r) => write!(f, "{r}"),
            Slack::Real(x) => write!(f, "{x:?}"),
            Slack::None => f.write_str("none"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkResult {
    pub link: Link,
    pub status: LinkStatus,
    pub slack: Slack,
}

impl LinkResult {
    fn from_integers(link: Link, lhs: i64, rhs: i64) -> Self {
        LinkResult {
            link,
            status: if lhs >= rhs { LinkStatus::Holds } else { LinkStatus::Violated },
            slack: Slack::Integer(lhs - rhs),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainIteration {
    /// 1-based.
    pub j: usize,
    pub chosen_degree: usize,
    pub k_j: usize,
    pub edges_removed: usize,
    pub edges_lower_bound: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainReport {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub alpha: usize,
    pub iterations: Vec<ChainIteration>,
    /// One entry per [`Link::ALL`], same order.
    pub links: Vec<LinkResult>,
}

impl ChainReport {
    pub fn link(&self, link: Link) -> &LinkResult {
        self.links.iter().find(|r| r.link == link).expect("every link is evaluated")
    }
}

impl fmt::Display for ChainReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "chain n={} m={} k={} alpha={}", self.n, self.m, self.k, self.alpha)?;
        for it in &self.iterations {
            writeln!(
                f,
                "iteration j={} degree={} k_j={} edges_removed={} lower_bound={}",
                it.j, it.chosen_degree, it.k_j, it.edges_removed, it.edges_lower_bound
            )?;
        }
        for r in &self.links {
            writeln!(f, "{} {} slack={}", r.link.name(), r.status.as_str(), r.slack)?;
        }
        Ok(())
    }
}

fn choose2(x: usize) -> usize {
    x * x.saturating_sub(1) / 2
}

fn check_inputs(g: &Graph, trace: &MinTrace) -> Result<(), ChainError> {
    if g.n() == 0 {
        return Err(ChainError::EmptyGraph);
    }
    if !g.is_connected() {
        return Err(ChainError::NotConnected);
    }
    trace.check(g)?;
    Ok(())
}

/// The links that depend only on the run: `inequality2_link`,
/// `inequality2_corrected_link` and `inequality1_link`, in that order.
pub fn trace_links(g: &Graph, trace: &MinTrace) -> Result<[LinkResult; 3], ChainError> {
    check_inputs(g, trace)?;
    let two_m = 2 * g.m() as i64;
    let k = trace.k() as i64;
    let degree_term: i64 = trace
        .iterations
        .iter()
        .map(|it| ((1 + it.chosen_degree) * it.chosen_degree) as i64)
        .sum();

    let ineq1 = match inequality1_rhs(trace, g) {
        Ok(rhs) => {
            let slack = Ratio::from_integer(k) - rhs;
            LinkResult {
                link: Link::Inequality1,
                status: if slack >= Ratio::from_integer(0) {
                    LinkStatus::Holds
                } else {
                    LinkStatus::Violated
                },
                slack: Slack::Rational(slack),
            }
        }
        Err(BoundError::NonpositiveDenominator(_)) => LinkResult {
            link: Link::Inequality1,
            status: LinkStatus::NotApplicable,
            slack: Slack::None,
        },
        Err(e) => return Err(e.into()),
    };

    Ok([
        LinkResult::from_integers(Link::Inequality2, two_m, 4 * k - 2 + degree_term),
        LinkResult::from_integers(Link::Inequality2Corrected, two_m, 2 * k - 2 + degree_term),
        ineq1,
    ])
}

fn bound_link(link: Link, n: usize, m: usize, alpha: usize) -> Result<LinkResult, ChainError> {
    let kind = link.bound_kind().expect("bound link");
    let verdict = bound_holds_exact(kind, n as u64, m as u64, alpha as u64)?;
    let value = evaluate(kind, n as u64, m as u64)?.value;
    Ok(LinkResult {
        link,
        status: match verdict {
            Verdict::Holds => LinkStatus::Holds,
            Verdict::Violated => LinkStatus::Violated,
            Verdict::NotReal => LinkStatus::NotApplicable,
        },
        slack: value.map_or(Slack::None, |v| Slack::Real(alpha as f64 - v)),
    })
}

/// Evaluates every link for an independent set `x`, taking `|x|` as alpha
/// without checking maximality. [`verify_chain`] adds that check.
pub fn evaluate_chain(g: &Graph, trace: &MinTrace, x: &[VertexId]) -> Result<ChainReport, ChainError> {
    let [ineq2, ineq2_corr, ineq1] = trace_links(g, trace)?;
    let alpha = x.len();
    if !g.is_independent(x) {
        return Err(ChainError::NotIndependent);
    }
    let mut in_x = vec![false; g.n()];
    for &v in x {
        in_x[v] = true;
    }

    let k = trace.k();
    let iterations: Vec<ChainIteration> = trace
        .iterations
        .iter()
        .enumerate()
        .map(|(idx, it)| {
            let k_j = it.deleted_vertices.iter().filter(|&&v| in_x[v]).count();
            let connector = usize::from(idx + 1 < k);
            ChainIteration {
                j: idx + 1,
                chosen_degree: it.chosen_degree,
                k_j,
                edges_removed: it.edges_removed,
                edges_lower_bound: choose2(1 + it.chosen_degree) + choose2(k_j) + connector,
            }
        })
        .collect();
    debug_assert_eq!(iterations.iter().map(|it| it.k_j).sum::<usize>(), alpha);

    let lower_total: usize = iterations.iter().map(|it| it.edges_lower_bound).sum();
    let (n, m) = (g.n(), g.m());
    let links = vec![
        LinkResult::from_integers(Link::EdgeSum, m as i64, lower_total as i64),
        ineq2,
        ineq2_corr,
        ineq1,
        bound_link(Link::ClaimedBound, n, m, alpha)?,
        bound_link(Link::RepairedBound, n, m, alpha)?,
        bound_link(Link::HarantBound, n, m, alpha)?,
    ];
    Ok(ChainReport {
        n,
        m,
        k,
        alpha,
        iterations,
        links,
    })
}

/// Evaluates every link after confirming that `x` is a maximum independent
/// set of `g`.
pub fn verify_chain(g: &Graph, trace: &MinTrace, x: &[VertexId]) -> Result<ChainReport, ChainError> {
    check_inputs(g, trace)?;
    let alpha = alpha_exact(g).alpha;
    let mut sorted = x.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != x.len() || x.len() != alpha || !g.is_independent(x) {
        return Err(ChainError::NotMaximumSet { size: x.len(), alpha });
    }
    evaluate_chain(g, trace, x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Aggregate {
    HoldsForAll,
    HoldsForSome,
    ViolatedForAll,
    NotApplicable,
}

impl Aggregate {
    pub fn as_str(self) -> &'static str {
        match self {
            Aggregate::HoldsForAll => "holds_for_all",
            Aggregate::HoldsForSome => "holds_for_some",
            Aggregate::ViolatedForAll => "violated_for_all",
            Aggregate::NotApplicable => "not_applicable",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AllXSummary {
    pub sets: Vec<Vec<VertexId>>,
    /// Same order as `sets`.
    pub reports: Vec<ChainReport>,
    /// One entry per [`Link::ALL`], same order.
    pub aggregates: Vec<(Link, Aggregate)>,
}

impl AllXSummary {
    pub fn aggregate(&self, link: Link) -> Aggregate {
        self.aggregates
            .iter()
            .find(|(l, _)| *l == link)
            .map(|&(_, a)| a)
            .expect("every link is aggregated")
    }
}

impl fmt::Display for AllXSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "maximum_sets={}", self.sets.len())?;
        for (link, agg) in &self.aggregates {
            writeln!(f, "{} {}", link.name(), agg.as_str())?;
        }
        Ok(())
    }
}

/// Runs the chain against every maximum independent set of `g`.
pub fn verify_chain_all_x(g: &Graph, trace: &MinTrace) -> Result<AllXSummary, ChainError> {
    check_inputs(g, trace)?;
    let sets = all_maximum_independent_sets(g)?;
    let reports = sets
        .par_iter()
        .map(|x| evaluate_chain(g, trace, x))
        .collect::<Result<Vec<_>, _>>()?;
    let aggregates = Link::ALL
        .iter()
        .map(|&link| {
            let statuses: Vec<LinkStatus> = reports.iter().map(|r| r.link(link).status).collect();
            let agg = if statuses.iter().all(|&s| s == LinkStatus::NotApplicable) {
                Aggregate::NotApplicable
            } else if statuses.iter().all(|&s| s == LinkStatus::Holds) {
                Aggregate::HoldsForAll
            } else if statuses.contains(&LinkStatus::Holds) {
                Aggregate::HoldsForSome
            } else {
                Aggregate::ViolatedForAll
            };
            (link, agg)
        })
        .collect();
    Ok(AllXSummary {
        sets,
        reports,
        aggregates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_named, Named};
    use crate::min_greedy::{run_min, TieBreak};

    fn lowest(g: &Graph) -> MinTrace {
        run_min(g, TieBreak::LowestIndex)
    }

    #[test]
    fn path_report() {
        let g = gen_named(Named::Path(4)).unwrap();
        let r = verify_chain(&g, &lowest(&g), &[0, 2]).unwrap();
        let k_j: Vec<_> = r.iterations.iter().map(|i| i.k_j).collect();
        let lower: Vec<_> = r.iterations.iter().map(|i| i.edges_lower_bound).collect();
        let actual: Vec<_> = r.iterations.iter().map(|i| i.edges_removed).collect();
        assert_eq!(k_j, vec![1, 1]);
        assert_eq!(lower, vec![2, 1]);
        assert_eq!(actual, vec![2, 1]);
        assert_eq!(r.link(Link::EdgeSum).status, LinkStatus::Holds);
        assert_eq!(r.link(Link::EdgeSum).slack, Slack::Integer(0));
        assert_eq!(r.link(Link::Inequality2).status, LinkStatus::Violated);
        assert_eq!(r.link(Link::Inequality2).slack, Slack::Integer(-4));
        assert_eq!(r.link(Link::Inequality2Corrected).status, LinkStatus::Holds);
        assert_eq!(r.link(Link::Inequality2Corrected).slack, Slack::Integer(0));
        assert_eq!(r.link(Link::ClaimedBound).status, LinkStatus::NotApplicable);
    }

    #[test]
    fn complete_report() {
        let g = gen_named(Named::Complete(4)).unwrap();
        let r = verify_chain(&g, &lowest(&g), &[0]).unwrap();
        assert_eq!(r.iterations[0].edges_lower_bound, 6);
        assert_eq!(r.link(Link::EdgeSum).status, LinkStatus::Holds);
        assert_eq!(r.link(Link::Inequality2).slack, Slack::Integer(-2));
        assert_eq!(r.link(Link::ClaimedBound).status, LinkStatus::Violated);
        assert_eq!(r.link(Link::HarantBound).status, LinkStatus::Holds);
        assert_eq!(r.link(Link::HarantBound).slack, Slack::Real(0.0));
        assert_eq!(r.link(Link::RepairedBound).status, LinkStatus::Holds);
        assert_eq!(r.link(Link::RepairedBound).slack, Slack::Real(0.0));
    }

    #[test]
    fn single_vertex() {
        // 2m = 0 against 4k - 2 = 2: the 4k - 2 step fails even here.
        let g = Graph::empty(1);
        let r = verify_chain(&g, &lowest(&g), &[0]).unwrap();
        assert_eq!(r.iterations[0].edges_lower_bound, 0);
        for link in Link::ALL {
            let expected = match link {
                Link::Inequality2 => LinkStatus::Violated,
                Link::ClaimedBound => LinkStatus::NotApplicable,
                _ => LinkStatus::Holds,
            };
            assert_eq!(r.link(link).status, expected, "{}", link.name());
        }
        assert_eq!(r.link(Link::Inequality2).slack, Slack::Integer(-2));
    }

    #[test]
    fn rejects_bad_sets() {
        let g = gen_named(Named::Path(4)).unwrap();
        let t = lowest(&g);
        assert_eq!(
            verify_chain(&g, &t, &[0]).unwrap_err(),
            ChainError::NotMaximumSet { size: 1, alpha: 2 }
        );
        assert!(matches!(
            verify_chain(&g, &t, &[1, 2]),
            Err(ChainError::NotMaximumSet { .. })
        ));
        assert!(matches!(
            verify_chain(&g, &t, &[0, 0]),
            Err(ChainError::NotMaximumSet { .. })
        ));
        let split = Graph::new(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(
            verify_chain(&split, &lowest(&split), &[0, 2]).unwrap_err(),
            ChainError::NotConnected
        );
        let other = gen_named(Named::Path(5)).unwrap();
        assert!(matches!(
            verify_chain(&g, &lowest(&other), &[0, 2]),
            Err(ChainError::Trace(_))
        ));
    }

    #[test]
    fn all_x_on_small_graphs() {
        let p4 = gen_named(Named::Path(4)).unwrap();
        let s = verify_chain_all_x(&p4, &lowest(&p4)).unwrap();
        assert_eq!(s.sets.len(), 3);
        assert_eq!(s.aggregate(Link::Inequality2), Aggregate::ViolatedForAll);

        let k4 = gen_named(Named::Complete(4)).unwrap();
        let s = verify_chain_all_x(&k4, &lowest(&k4)).unwrap();
        assert_eq!(s.sets.len(), 4);
        assert_eq!(s.aggregate(Link::Inequality2), Aggregate::ViolatedForAll);
        assert_eq!(s.aggregate(Link::HarantBound), Aggregate::HoldsForAll);
    }

    #[test]
    fn report_text() {
        let g = gen_named(Named::Path(4)).unwrap();
        let r = verify_chain(&g, &lowest(&g), &[0, 2]).unwrap();
        let text = r.to_string();
        assert!(text.starts_with("chain n=4 m=3 k=2 alpha=2\n"));
        assert!(text.contains("inequality2_link violated slack=-4\n"));
        assert!(text.contains("claimed_bound_link not_applicable slack=none\n"));
        assert_eq!(text, verify_chain(&g, &lowest(&g), &[0, 2]).unwrap().to_string());
    }
}
