//! Experiment campaigns: sweep a graph family over a parameter grid, measure
//! each instance (exact alpha, a MIN run, `k_MIN`, every bound, the proof
//! chain) and emit one CSV row per instance plus a per-cell summary.
//!
//! A campaign is described by a flat TOML file:
//!
//! ```toml
//! family = "gnm"        # exhaustive | gnm | gnp
//! n = [10, 12]
//! m = [15]              # gnm: absolute edge counts
//! density = [0.3]       # gnm: fraction of all vertex pairs (optional)
//! p = [0.2]             # gnp only
//! instances = 100       # per cell; ignored by exhaustive
//! seed = 1
//! policy = "lowest"     # lowest | random | exhaustive
//! alpha_budget = 60     # no exact alpha above this many vertices
//! kmin_budget = 14      # no exhaustive k_MIN above this many vertices
//! restarts = 8          # multistart runs when k_MIN is only estimated
//! max_retries = 100     # gnp resampling limit
//! ```
//!
//! Instance `i` (global, 0-based, in cell order) uses seed
//! `Seed(seed).derive(i)`. Output depends only on the campaign spec.

use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::{bound_holds_exact, evaluate, BoundKind, BoundValue};
use crate::chain::{evaluate_chain, trace_links, Link, LinkStatus};
use crate::exact::alpha_exact;
use crate::generators::{enumerate_connected_graphs, gen_gnm_connected, gen_gnp_connected, MAX_ENUMERATION_N};
use crate::graph::Graph;
use crate::min_greedy::{k_min_exhaustive, k_min_multistart, run_min, PolicyKind, TieBreak};
use crate::rng::Seed;

pub const CSV_HEADER: &str = "id,n,m,seed,alpha,k_run,k_min,k_min_exact,harant,harant_status,claimed,claimed_status,repaired,repaired_status,edge_sum,ineq2,ineq2_corr,ineq1,claimed_valid,repaired_valid,harant_valid";

const CHUNK: usize = 4096;

#[derive(Debug, Error)]
pub enum CampaignError {
    #[error("cannot read campaign spec {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("invalid campaign spec {path}: {message}")]
    Parse { path: String, message: String },
    #[error("bad campaign parameters: {0}")]
    BadParams(String),
    #[error("csv output failed: {0}")]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Exhaustive,
    Gnm,
    Gnp,
}

fn default_instances() -> usize {
    1
}
fn default_policy() -> PolicyKind {
    PolicyKind::Lowest
}
fn default_alpha_budget() -> usize {
    60
}
fn default_kmin_budget() -> usize {
    crate::min_greedy::DEFAULT_KMIN_BUDGET
}
fn default_restarts() -> usize {
    8
}
fn default_max_retries() -> usize {
    100
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CampaignSpec {
    pub family: Family,
    pub n: Vec<usize>,
    #[serde(default)]
    pub m: Vec<usize>,
    #[serde(default)]
    pub density: Vec<f64>,
    #[serde(default)]
    pub p: Vec<f64>,
    #[serde(default = "default_instances")]
    pub instances: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_policy")]
    pub policy: PolicyKind,
    #[serde(default = "default_alpha_budget")]
    pub alpha_budget: usize,
    #[serde(default = "default_kmin_budget")]
    pub kmin_budget: usize,
    #[serde(default = "default_restarts")]
    pub restarts: usize,
    #[serde(default = "default_max_retries")]
    pub max_retries: usize,
}

impl CampaignSpec {
    /// Spec with defaults for everything except the family and sizes.
    pub fn new(family: Family, n: Vec<usize>) -> Self {
        CampaignSpec {
            family,
            n,
            m: Vec::new(),
            density: Vec::new(),
            p: Vec::new(),
            instances: default_instances(),
            seed: 0,
            policy: default_policy(),
            alpha_budget: default_alpha_budget(),
            kmin_budget: default_kmin_budget(),
            restarts: default_restarts(),
            max_retries: default_max_retries(),
        }
    }

    pub fn load(path: &Path) -> Result<Self, CampaignError> {
        let text = std::fs::read_to_string(path).map_err(|source| CampaignError::Read {
            path: path.display().to_string(),
            source,
        })?;
        toml::from_str(&text).map_err(|e| CampaignError::Parse {
            path: path.display().to_string(),
            message: e.to_string(),
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("spec is plain data")
    }

    fn cells(&self) -> Result<Vec<Cell>, CampaignError> {
        let bad = |msg: String| Err(CampaignError::BadParams(msg));
        if self.n.is_empty() {
            return bad("n list is empty".into());
        }
        if self.n.contains(&0) {
            return bad("n must be >= 1".into());
        }
        let mut cells = Vec::new();
        match self.family {
            Family::Exhaustive => {
                for &n in &self.n {
                    if n > MAX_ENUMERATION_N {
                        return bad(format!("exhaustive family needs n <= {MAX_ENUMERATION_N}, got {n}"));
                    }
                    cells.push(Cell::Exhaustive { n });
                }
            }
            Family::Gnm => {
                if self.m.is_empty() && self.density.is_empty() {
                    return bad("gnm needs an m or density list".into());
                }
                for &n in &self.n {
                    let max = n * (n - 1) / 2;
                    for &m in &self.m {
                        if m + 1 < n || m > max {
                            return bad(format!("m = {m} outside [{}, {max}] for n = {n}", n - 1));
                        }
                        cells.push(Cell::Gnm { n, m });
                    }
                    for &d in &self.density {
                        if !(0.0..=1.0).contains(&d) {
                            return bad(format!("density {d} outside [0, 1]"));
                        }
                        let m = ((d * max as f64).round() as usize).clamp(n - 1, max);
                        cells.push(Cell::Gnm { n, m });
                    }
                }
            }
            Family::Gnp => {
                if self.p.is_empty() {
                    return bad("gnp needs a p list".into());
                }
                for &n in &self.n {
                    for &p in &self.p {
                        if !(0.0..=1.0).contains(&p) {
                            return bad(format!("p = {p} outside [0, 1]"));
                        }
                        cells.push(Cell::Gnp { n, p });
                    }
                }
            }
        }
        Ok(cells)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Cell {
    Exhaustive { n: usize },
    Gnm { n: usize, m: usize },
    Gnp { n: usize, p: f64 },
}

impl Cell {
    fn label(&self) -> String {
        match self {
            Cell::Exhaustive { n } => format!("exhaustive n={n}"),
            Cell::Gnm { n, m } => format!("gnm n={n} m={m}"),
            Cell::Gnp { n, p } => format!("gnp n={n} p={p}"),
        }
    }
}

/// One measured instance. Field order is the CSV column order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CampaignRow {
    pub id: usize,
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    /// `None` when the graph is above the exact-alpha budget.
    pub alpha: Option<usize>,
    pub k_run: usize,
    pub k_min: usize,
    pub k_min_exact: bool,
    pub harant: Option<f64>,
    pub harant_status: &'static str,
    pub claimed: Option<f64>,
    pub claimed_status: &'static str,
    pub repaired: Option<f64>,
    pub repaired_status: &'static str,
    pub edge_sum: Option<&'static str>,
    pub ineq2: Option<&'static str>,
    pub ineq2_corr: Option<&'static str>,
    pub ineq1: Option<&'static str>,
    pub claimed_valid: Option<&'static str>,
    pub repaired_valid: Option<&'static str>,
    pub harant_valid: Option<&'static str>,
}

impl CampaignRow {
    pub fn link_status(&self, link: Link) -> Option<&'static str> {
        match link {
            Link::EdgeSum => self.edge_sum,
            Link::Inequality2 => self.ineq2,
            Link::Inequality2Corrected => self.ineq2_corr,
            Link::Inequality1 => self.ineq1,
            Link::ClaimedBound => self.claimed_valid,
            Link::RepairedBound => self.repaired_valid,
            Link::HarantBound => self.harant_valid,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellSummary {
    pub label: String,
    pub instances: usize,
    pub generation_failures: usize,
    pub alpha_unknown: usize,
    pub claimed_not_real: usize,
    /// Rows where each link (in [`Link::ALL`] order) was violated.
    pub violations: [usize; 7],
    /// Mean `alpha - ceil(bound)` over rows with known alpha and a real
    /// bound, for harant, claimed, repaired.
    pub mean_gap: [Option<f64>; 3],
}

#[derive(Debug, Clone, PartialEq)]
pub struct CampaignOutput {
    pub rows: Vec<CampaignRow>,
    pub cells: Vec<CellSummary>,
}

impl CampaignOutput {
    pub fn to_csv(&self) -> Result<String, CampaignError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        if self.rows.is_empty() {
            w.write_record(CSV_HEADER.split(','))?;
        }
        for row in &self.rows {
            w.serialize(row)?;
        }
        let bytes = w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    /// Aligned text table, one line per cell.
    pub fn summary_table(&self) -> String {
        let mut header = vec![
            "cell".to_string(),
            "instances".into(),
            "gen_failed".into(),
            "alpha_unknown".into(),
            "claimed_not_real".into(),
        ];
        header.extend(Link::ALL.iter().map(|l| format!("viol_{}", column_name(*l))));
        header.extend(["gap_harant", "gap_claimed", "gap_repaired"].map(String::from));

        let mut table = vec![header];
        for c in &self.cells {
            let mut line = vec![
                c.label.clone(),
                c.instances.to_string(),
                c.generation_failures.to_string(),
                c.alpha_unknown.to_string(),
                c.claimed_not_real.to_string(),
            ];
            line.extend(c.violations.iter().map(|v| v.to_string()));
            line.extend(c.mean_gap.iter().map(|g| g.map_or("-".into(), |g| format!("{g:.3}"))));
            table.push(line);
        }
        let widths: Vec<usize> = (0..table[0].len())
            .map(|i| table.iter().map(|r| r[i].len()).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for line in &table {
            let cells: Vec<String> = line
                .iter()
                .zip(&widths)
                .enumerate()
                .map(|(i, (s, &w))| if i == 0 { format!("{s:<w$}") } else { format!("{s:>w$}") })
                .collect();
            let _ = writeln!(out, "{}", cells.join("  ").trim_end());
        }
        out
    }
}

fn column_name(link: Link) -> &'static str {
    match link {
        Link::EdgeSum => "edge_sum",
        Link::Inequality2 => "ineq2",
        Link::Inequality2Corrected => "ineq2_corr",
        Link::Inequality1 => "ineq1",
        Link::ClaimedBound => "claimed",
        Link::RepairedBound => "repaired",
        Link::HarantBound => "harant",
    }
}

/// Measures one connected graph.
pub fn measure(spec: &CampaignSpec, id: usize, seed: Seed, g: &Graph) -> CampaignRow {
    let n = g.n();
    let alpha = (n <= spec.alpha_budget).then(|| alpha_exact(g));

    let exhaustive = (n <= spec.kmin_budget).then(|| k_min_exhaustive(g, spec.kmin_budget).expect("within budget"));
    let trace = match spec.policy {
        PolicyKind::Lowest => run_min(g, TieBreak::LowestIndex),
        PolicyKind::Random => run_min(g, TieBreak::Random(seed)),
        PolicyKind::Exhaustive => match &exhaustive {
            Some((_, t)) => t.clone(),
            None => k_min_multistart(g, spec.restarts, seed).1,
        },
    };
    let (k_min, k_min_exact) = match &exhaustive {
        Some((k, _)) => (*k, true),
        None => {
            let (best, _) = k_min_multistart(g, spec.restarts, seed.derive(1));
            (best.min(trace.k()), false)
        }
    };

    let bound = |kind| evaluate(kind, n as u64, g.m() as u64).expect("connected input");
    let [harant, claimed, repaired]: [BoundValue; 3] = BoundKind::ALL.map(bound);
    let valid = |kind| {
        alpha.as_ref().map(|a| {
            bound_holds_exact(kind, n as u64, g.m() as u64, a.alpha as u64)
                .expect("connected input")
                .as_str()
        })
    };

    let status = |s: LinkStatus| Some(s.as_str());
    let (edge_sum, ineq2, ineq2_corr, ineq1) = match &alpha {
        Some(a) => {
            let report = evaluate_chain(g, &trace, &a.witness).expect("campaign inputs are valid");
            (
                status(report.link(Link::EdgeSum).status),
                status(report.link(Link::Inequality2).status),
                status(report.link(Link::Inequality2Corrected).status),
                status(report.link(Link::Inequality1).status),
            )
        }
        None => {
            let [a, b, c] = trace_links(g, &trace).expect("campaign inputs are valid");
            (None, status(a.status), status(b.status), status(c.status))
        }
    };

    CampaignRow {
        id,
        n,
        m: g.m(),
        seed: seed.0,
        alpha: alpha.as_ref().map(|a| a.alpha),
        k_run: trace.k(),
        k_min,
        k_min_exact,
        harant: harant.value,
        harant_status: harant.status.as_str(),
        claimed: claimed.value,
        claimed_status: claimed.status.as_str(),
        repaired: repaired.value,
        repaired_status: repaired.status.as_str(),
        edge_sum,
        ineq2,
        ineq2_corr,
        ineq1,
        claimed_valid: valid(BoundKind::Claimed),
        repaired_valid: valid(BoundKind::Repaired),
        harant_valid: valid(BoundKind::Harant),
    }
}

enum Source {
    Fixed(Graph),
    Gnm { n: usize, m: usize },
    Gnp { n: usize, p: f64 },
}

fn realize(spec: &CampaignSpec, source: Source, seed: Seed) -> Option<Graph> {
    match source {
        Source::Fixed(g) => Some(g),
        Source::Gnm { n, m } => Some(gen_gnm_connected(n, m, seed).expect("validated parameters")),
        Source::Gnp { n, p } => gen_gnp_connected(n, p, seed, spec.max_retries).ok(),
    }
}

fn summarize(label: String, rows: &[CampaignRow], failures: usize) -> CellSummary {
    let mut violations = [0; 7];
    for (i, link) in Link::ALL.iter().enumerate() {
        violations[i] = rows
            .iter()
            .filter(|r| r.link_status(*link) == Some("violated"))
            .count();
    }
    let gap = |pick: fn(&CampaignRow) -> Option<f64>| {
        let gaps: Vec<f64> = rows
            .iter()
            .filter_map(|r| Some(r.alpha? as f64 - pick(r)?.ceil()))
            .collect();
        (!gaps.is_empty()).then(|| gaps.iter().sum::<f64>() / gaps.len() as f64)
    };
    CellSummary {
        label,
        instances: rows.len(),
        generation_failures: failures,
        alpha_unknown: rows.iter().filter(|r| r.alpha.is_none()).count(),
        claimed_not_real: rows.iter().filter(|r| r.claimed_status == "not_real").count(),
        violations,
        mean_gap: [gap(|r| r.harant), gap(|r| r.claimed), gap(|r| r.repaired)],
    }
}

pub fn run_campaign(spec: &CampaignSpec) -> Result<CampaignOutput, CampaignError> {
    let root = Seed(spec.seed);
    let mut rows = Vec::new();
    let mut cells = Vec::new();
    let mut next_id = 0usize;

    for cell in spec.cells()? {
        let sources: Box<dyn Iterator<Item = Source>> = match cell {
            Cell::Exhaustive { n } => Box::new(
                enumerate_connected_graphs(n)
                    .expect("validated n")
                    .map(Source::Fixed),
            ),
            Cell::Gnm { n, m } => Box::new((0..spec.instances).map(move |_| Source::Gnm { n, m })),
            Cell::Gnp { n, p } => Box::new((0..spec.instances).map(move |_| Source::Gnp { n, p })),
        };

        let mut cell_rows = Vec::new();
        let mut failures = 0;
        let mut sources = sources;
        loop {
            let batch: Vec<Source> = sources.by_ref().take(CHUNK).collect();
            if batch.is_empty() {
                break;
            }
            let first = next_id;
            next_id += batch.len();
            let measured: Vec<Option<CampaignRow>> = batch
                .into_par_iter()
                .enumerate()
                .map(|(i, source)| {
                    let id = first + i;
                    let seed = root.derive(id as u64);
                    realize(spec, source, seed).map(|g| measure(spec, id, seed, &g))
                })
                .collect();
            for r in measured {
                match r {
                    Some(row) => cell_rows.push(row),
                    None => failures += 1,
                }
            }
        }
        cells.push(summarize(cell.label(), &cell_rows, failures));
        rows.extend(cell_rows);
    }
    Ok(CampaignOutput { rows, cells })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_defaults_and_round_trip() {
        let spec: CampaignSpec = toml::from_str("family = \"gnm\"\nn = [10]\nm = [15]\n").unwrap();
        assert_eq!(spec.instances, 1);
        assert_eq!(spec.policy, PolicyKind::Lowest);
        assert_eq!(spec.kmin_budget, 14);
        let again: CampaignSpec = toml::from_str(&spec.to_toml()).unwrap();
        assert_eq!(again, spec);
    }

    #[test]
    fn spec_rejects_unknown_keys() {
        assert!(toml::from_str::<CampaignSpec>("family = \"gnm\"\nn = [4]\nbogus = 1\n").is_err());
    }

    #[test]
    fn bad_params() {
        let mut spec = CampaignSpec::new(Family::Gnm, vec![5]);
        assert!(matches!(run_campaign(&spec), Err(CampaignError::BadParams(_))));
        spec.m = vec![3];
        assert!(matches!(run_campaign(&spec), Err(CampaignError::BadParams(_))));
        let spec = CampaignSpec::new(Family::Exhaustive, vec![8]);
        assert!(matches!(run_campaign(&spec), Err(CampaignError::BadParams(_))));
    }

    #[test]
    fn density_maps_to_edge_count() {
        let mut spec = CampaignSpec::new(Family::Gnm, vec![10]);
        spec.density = vec![0.0, 0.5, 1.0];
        let cells = spec.cells().unwrap();
        assert_eq!(
            cells,
            vec![
                Cell::Gnm { n: 10, m: 9 },
                Cell::Gnm { n: 10, m: 23 },
                Cell::Gnm { n: 10, m: 45 }
            ]
        );
    }

    #[test]
    fn small_exhaustive_campaign() {
        let spec = CampaignSpec::new(Family::Exhaustive, vec![1, 2, 3]);
        let out = run_campaign(&spec).unwrap();
        assert_eq!(out.rows.len(), 1 + 1 + 4);
        assert!(out.rows.iter().enumerate().all(|(i, r)| r.id == i));
        let csv = out.to_csv().unwrap();
        assert_eq!(csv.lines().next().unwrap(), CSV_HEADER);
        assert_eq!(out.cells.len(), 3);
        assert!(out.summary_table().starts_with("cell"));
    }

    #[test]
    fn unknown_alpha_leaves_validity_empty() {
        let mut spec = CampaignSpec::new(Family::Gnm, vec![12]);
        spec.m = vec![20];
        spec.alpha_budget = 10;
        spec.kmin_budget = 10;
        let out = run_campaign(&spec).unwrap();
        let row = &out.rows[0];
        assert_eq!(row.alpha, None);
        assert_eq!(row.harant_valid, None);
        assert_eq!(row.edge_sum, None);
        assert!(row.ineq2.is_some());
        assert!(!row.k_min_exact);
        assert!(row.k_min <= row.k_run);
        assert_eq!(out.cells[0].alpha_unknown, 1);
    }

    #[test]
    fn gnp_failures_are_counted() {
        let mut spec = CampaignSpec::new(Family::Gnp, vec![12]);
        spec.p = vec![0.0];
        spec.instances = 3;
        spec.max_retries = 2;
        let out = run_campaign(&spec).unwrap();
        assert!(out.rows.is_empty());
        assert_eq!(out.cells[0].generation_failures, 3);
        assert_eq!(out.to_csv().unwrap().trim_end(), CSV_HEADER);
    }
}
