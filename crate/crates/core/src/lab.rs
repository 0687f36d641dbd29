//! Graph enumeration, seeded sampling, and verification campaigns.
//!
//! Every campaign produces a [`Report`]. Rows are sorted by `(graph6, k, x)`
//! before they leave the runner, and sampled campaigns draw graph `i` from
//! ChaCha stream `i` of the campaign seed, so reports are byte-identical
//! across reruns and across worker counts.

use std::collections::BTreeMap;
use std::io::Write;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fs::{FsError, FsSpace, DEFAULT_COMPONENT_CAP};
use crate::graph::{make_dandelion, make_lollipop, make_spider, write_graph6, Graph, GraphError};
use crate::theory::{
    corollary_k5_predicate, decide_lollipop_fs_connected, find_disconnected_k_subset, TheoryError,
};

/// Largest order for exhaustive enumeration and for FS-oracle campaigns.
pub const ORACLE_MAX_ORDER: usize = 6;
/// Attempts before [`sample_graph_with_min_degree`] gives up.
pub const SAMPLE_RETRY_BUDGET: usize = 20_000;
/// Graphs evaluated between time-budget checkpoints.
const CHECKPOINT_CHUNK: usize = 2048;

#[derive(Debug, Error)]
pub enum LabError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Fs(#[from] FsError),
    #[error(transparent)]
    Theory(#[from] TheoryError),
    #[error("invalid campaign: {0}")]
    InvalidCampaign(String),
    #[error("no graph with n = {n} and min degree {delta} after {attempts} attempts")]
    RetryBudgetExhausted { n: usize, delta: usize, attempts: usize },
    #[error("csv output failed: {0}")]
    Csv(#[from] csv::Error),
    #[error("json output failed: {0}")]
    Json(#[from] serde_json::Error),
}

/// All `2^C(n,2)` labelled graphs on `n <= 6` vertices in ascending
/// edge-bitmask order.
pub fn enumerate_labeled_graphs(n: usize) -> Result<impl Iterator<Item = Graph>, LabError> {
    if n == 0 || n > ORACLE_MAX_ORDER {
        return Err(LabError::InvalidCampaign(format!(
            "exhaustive enumeration supports 1 <= n <= {ORACLE_MAX_ORDER}, got {n}"
        )));
    }
    let pairs = n * (n - 1) / 2;
    Ok((0u128..1 << pairs).map(move |mask| Graph::from_edge_mask(n, mask).expect("order checked")))
}

pub fn labeled_graph_count(n: usize) -> u64 {
    1u64 << (n * n.saturating_sub(1) / 2)
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniformly random labelled graph (each pair an edge with probability 1/2).
pub fn sample_uniform_graph(n: usize, seed: u64, stream: u64) -> Result<Graph, LabError> {
    let mut rng = stream_rng(seed, stream);
    let pairs = n * n.saturating_sub(1) / 2;
    let mut mask = 0u128;
    for e in 0..pairs {
        if rng.gen::<bool>() {
            mask |= 1 << e;
        }
    }
    Ok(Graph::from_edge_mask(n, mask)?)
}

/// Random graph with minimum degree exactly `delta`, by rejection.
///
/// Each attempt draws a Bernoulli edge set with density near
/// `(delta + 1) / (n - 1)`; uniform `G(n, 1/2)` almost never hits the
/// extreme degree classes.
pub fn sample_graph_with_min_degree(n: usize, delta: usize, rng_seed: u64) -> Result<Graph, LabError> {
    sample_graph_with_min_degree_stream(n, delta, rng_seed, 0)
}

pub fn sample_graph_with_min_degree_stream(n: usize, delta: usize, seed: u64, stream: u64) -> Result<Graph, LabError> {
    Graph::empty(n)?;
    if delta >= n {
        return Err(LabError::InvalidCampaign(format!(
            "min degree {delta} impossible on {n} vertices"
        )));
    }
    if n == 1 {
        return Ok(Graph::empty(1)?);
    }
    let mut rng = stream_rng(seed, stream);
    let pairs = n * (n - 1) / 2;
    for _ in 0..SAMPLE_RETRY_BUDGET {
        let density = ((delta as f64 + rng.gen_range(0.5..1.5)) / (n - 1) as f64).min(1.0);
        let mut mask = 0u128;
        for e in 0..pairs {
            if rng.gen_bool(density) {
                mask |= 1 << e;
            }
        }
        let g = Graph::from_edge_mask(n, mask)?;
        if g.min_degree() == delta {
            return Ok(g);
        }
    }
    Err(LabError::RetryBudgetExhausted {
        n,
        delta,
        attempts: SAMPLE_RETRY_BUDGET,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Mode {
    Exhaustive,
    Sampled { count: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    pub component_cap: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub time_budget_ms: Option<u64>,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            component_cap: DEFAULT_COMPONENT_CAP,
            time_budget_ms: None,
        }
    }
}

/// Campaign configuration, echoed verbatim into its report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Campaign {
    pub name: String,
    pub n_range: (usize, usize),
    pub k_range: (usize, usize),
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub pairs: Vec<(usize, usize)>,
    pub mode: Mode,
    pub caps: Caps,
}

impl Campaign {
    fn oracle_order_ok(&self, uses_oracle: bool) -> Result<(), LabError> {
        if uses_oracle && self.n_range.1 > ORACLE_MAX_ORDER {
            return Err(LabError::InvalidCampaign(format!(
                "{}: FS-oracle campaigns require n <= {ORACLE_MAX_ORDER}, got {}",
                self.name, self.n_range.1
            )));
        }
        if self.mode == Mode::Exhaustive && self.n_range.1 > ORACLE_MAX_ORDER {
            return Err(LabError::InvalidCampaign(format!(
                "{}: exhaustive mode requires n <= {ORACLE_MAX_ORDER}",
                self.name
            )));
        }
        if self.n_range.1 > self.caps.component_cap && uses_oracle {
            return Err(LabError::InvalidCampaign(format!(
                "{}: n = {} exceeds component cap {}",
                self.name, self.n_range.1, self.caps.component_cap
            )));
        }
        Ok(())
    }
}

/// Options that do not affect report content (apart from `truncated` and
/// `timing`).
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub caps: Caps,
    /// Include wall-clock phase timings in the report. Off by default so that
    /// reports compare byte-for-byte.
    pub record_timing: bool,
}

impl RunOptions {
    fn budget(&self) -> Option<Duration> {
        self.caps.time_budget_ms.map(Duration::from_millis)
    }
}

/// One `(Y, k)` record. Which columns are present depends on the campaign.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub graph6: String,
    pub k: usize,
    /// Position graph family, when it is not `lollipop:(n-k),k`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub x: Option<String>,
    pub min_degree: usize,
    /// Subset-criterion verdict (or, for spiders, the predicted connectivity).
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub theory: Option<bool>,
    /// Explicit FS connectivity.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub oracle: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub corollary: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub dandelion_oracle: Option<bool>,
    /// All present verdict columns agree; absent unless at least two are present.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub agreement: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub status: Option<String>,
}

impl Verdict {
    fn new(y: &Graph, k: usize) -> Self {
        Verdict {
            graph6: write_graph6(y),
            k,
            x: None,
            min_degree: y.min_degree(),
            theory: None,
            oracle: None,
            corollary: None,
            dandelion_oracle: None,
            agreement: None,
            status: None,
        }
    }

    fn settle(mut self) -> Self {
        let present: Vec<bool> = [self.theory, self.oracle, self.corollary].into_iter().flatten().collect();
        self.agreement = (present.len() >= 2).then(|| present.iter().all(|&v| v == present[0]));
        self
    }
}

/// Minimal data to reproduce a failing or noteworthy row.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Reproducer {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub graph6: Option<String>,
    pub k: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub x: Option<String>,
    pub reason: String,
}

impl Reproducer {
    fn of(v: &Verdict, reason: impl Into<String>) -> Self {
        Reproducer {
            graph6: Some(v.graph6.clone()),
            k: v.k,
            x: v.x.clone(),
            reason: reason.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseTiming {
    pub phase: String,
    pub millis: u128,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub rows: usize,
    pub comparisons: usize,
    pub disagreements: usize,
    pub violations: usize,
    pub skipped: usize,
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub counters: BTreeMap<String, u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub campaign: Campaign,
    pub summary: Summary,
    pub verdicts: Vec<Verdict>,
    pub counterexamples: Vec<Reproducer>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub findings: Vec<Reproducer>,
    pub truncated: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timing: Option<Vec<PhaseTiming>>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }

    pub fn to_json(&self) -> Result<String, LabError> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// One CSV row per verdict.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), LabError> {
        #[derive(Serialize)]
        struct Row<'a> {
            graph6: &'a str,
            k: usize,
            x: &'a str,
            min_degree: usize,
            theory: Option<bool>,
            oracle: Option<bool>,
            corollary: Option<bool>,
            dandelion_oracle: Option<bool>,
            agreement: Option<bool>,
            status: &'a str,
        }
        let mut w = csv::Writer::from_writer(out);
        for v in &self.verdicts {
            w.serialize(Row {
                graph6: &v.graph6,
                k: v.k,
                x: v.x.as_deref().unwrap_or(""),
                min_degree: v.min_degree,
                theory: v.theory,
                oracle: v.oracle,
                corollary: v.corollary,
                dandelion_oracle: v.dandelion_oracle,
                agreement: v.agreement,
                status: v.status.as_deref().unwrap_or(""),
            })?;
        }
        w.flush().map_err(csv::Error::from)?;
        Ok(())
    }

    /// Line-oriented summary for terminals.
    pub fn summary_line(&self) -> String {
        let s = &self.summary;
        format!(
            "{}: {} comparisons, {} disagreements, {} violations{}",
            self.campaign.name,
            s.comparisons,
            s.disagreements,
            s.violations,
            if self.truncated { " (truncated)" } else { "" }
        )
    }
}

struct Timer {
    enabled: bool,
    phases: Vec<PhaseTiming>,
    last: Instant,
}

impl Timer {
    fn new(enabled: bool) -> Self {
        Timer {
            enabled,
            phases: Vec::new(),
            last: Instant::now(),
        }
    }

    fn lap(&mut self, phase: &str) {
        let now = Instant::now();
        if self.enabled {
            self.phases.push(PhaseTiming {
                phase: phase.to_string(),
                millis: (now - self.last).as_millis(),
            });
        }
        self.last = now;
    }

    fn finish(self) -> Option<Vec<PhaseTiming>> {
        self.enabled.then_some(self.phases)
    }
}

/// Evaluate `items` in parallel, checking the time budget between chunks.
/// Output order follows input order.
fn evaluate<T, F>(items: &[T], budget: Option<Duration>, eval: F) -> Result<(Vec<Verdict>, bool), LabError>
where
    T: Sync,
    F: Fn(&T) -> Result<Vec<Verdict>, LabError> + Sync,
{
    let start = Instant::now();
    let mut out = Vec::new();
    for chunk in items.chunks(CHECKPOINT_CHUNK) {
        if budget.is_some_and(|b| start.elapsed() > b) {
            return Ok((out, true));
        }
        let rows: Vec<Vec<Verdict>> = chunk.par_iter().map(&eval).collect::<Result<_, _>>()?;
        out.extend(rows.into_iter().flatten());
    }
    Ok((out, false))
}

fn finalize(
    campaign: Campaign,
    mut verdicts: Vec<Verdict>,
    truncated: bool,
    timer: Timer,
    judge: impl Fn(&Verdict) -> Option<Reproducer>,
) -> Report {
    verdicts.sort_by(|a, b| (&a.graph6, a.k, &a.x).cmp(&(&b.graph6, b.k, &b.x)));
    let counterexamples: Vec<Reproducer> = verdicts.iter().filter_map(&judge).collect();
    let summary = Summary {
        rows: verdicts.len(),
        comparisons: verdicts.iter().filter(|v| v.agreement.is_some()).count(),
        disagreements: verdicts.iter().filter(|v| v.agreement == Some(false)).count(),
        violations: counterexamples.len(),
        skipped: verdicts
            .iter()
            .filter(|v| v.status.as_deref().is_some_and(|s| s.starts_with("skipped")))
            .count(),
        counters: BTreeMap::new(),
    };
    let mut timer = timer;
    timer.lap("aggregate");
    Report {
        campaign,
        summary,
        verdicts,
        counterexamples,
        findings: Vec::new(),
        truncated,
        timing: timer.finish(),
    }
}

fn disagreement(v: &Verdict) -> Option<Reproducer> {
    (v.agreement == Some(false)).then(|| Reproducer::of(v, "verdict columns disagree"))
}

fn lollipop_spaces(n: usize, cap: usize) -> Result<Vec<FsSpace>, LabError> {
    (2..=n)
        .map(|k| Ok(FsSpace::new(&make_lollipop(n - k, k)?, cap)?))
        .collect()
}

/// Exhaustive comparison of the subset criterion with the FS oracle for
/// every labelled `Y` of order `n` and every `2 <= k <= n`.
pub fn run_main_verification(n: usize, opts: &RunOptions) -> Result<Report, LabError> {
    let campaign = Campaign {
        name: "main".into(),
        n_range: (n, n),
        k_range: (2, n),
        pairs: Vec::new(),
        mode: Mode::Exhaustive,
        caps: opts.caps.clone(),
    };
    if n < 2 {
        return Err(LabError::InvalidCampaign("main verification needs n >= 2".into()));
    }
    campaign.oracle_order_ok(true)?;
    let mut timer = Timer::new(opts.record_timing);
    let spaces = lollipop_spaces(n, opts.caps.component_cap)?;
    let ys: Vec<Graph> = enumerate_labeled_graphs(n)?.collect();
    timer.lap("enumerate");
    let (verdicts, truncated) = evaluate(&ys, opts.budget(), |y| {
        (2..=n)
            .map(|k| {
                let mut v = Verdict::new(y, k);
                v.theory = Some(decide_lollipop_fs_connected(y, k)?);
                v.oracle = Some(spaces[k - 2].components(y)?.is_connected());
                Ok(v.settle())
            })
            .collect()
    })?;
    timer.lap("evaluate");
    Ok(finalize(campaign, verdicts, truncated, timer, disagreement))
}

/// Corollary predicate against the subset criterion (and the FS oracle when
/// `n` is within oracle range) over graphs with `δ(Y) = n - 4`.
pub fn run_corollary_campaign(n: usize, mode: Mode, opts: &RunOptions) -> Result<Report, LabError> {
    if n < 6 {
        return Err(LabError::InvalidCampaign(format!("corollary campaign needs n >= 6, got {n}")));
    }
    let with_oracle = n <= ORACLE_MAX_ORDER;
    let campaign = Campaign {
        name: "corollary".into(),
        n_range: (n, n),
        k_range: (5, 5),
        pairs: Vec::new(),
        mode: mode.clone(),
        caps: opts.caps.clone(),
    };
    campaign.oracle_order_ok(with_oracle)?;
    let mut timer = Timer::new(opts.record_timing);
    let delta = n - 4;
    let ys: Vec<Graph> = match mode {
        Mode::Exhaustive => enumerate_labeled_graphs(n)?.filter(|y| y.min_degree() == delta).collect(),
        Mode::Sampled { count, seed } => (0..count as u64)
            .into_par_iter()
            .map(|i| sample_graph_with_min_degree_stream(n, delta, seed, i))
            .collect::<Result<_, _>>()?,
    };
    let space = if with_oracle {
        Some(FsSpace::new(&make_lollipop(n - 5, 5)?, opts.caps.component_cap)?)
    } else {
        None
    };
    timer.lap("generate");
    let (verdicts, truncated) = evaluate(&ys, opts.budget(), |y| {
        let mut v = Verdict::new(y, 5);
        v.theory = Some(decide_lollipop_fs_connected(y, 5)?);
        v.corollary = Some(corollary_k5_predicate(y)?);
        if let Some(space) = &space {
            v.oracle = Some(space.components(y)?.is_connected());
        }
        v.status = Some(if v.corollary == Some(true) { "pattern_free" } else { "has_pattern" }.into());
        Ok(vec![v.settle()])
    })?;
    timer.lap("evaluate");
    let mut report = finalize(campaign, verdicts, truncated, timer, disagreement);
    let with_pattern = report.verdicts.iter().filter(|v| v.corollary == Some(false)).count();
    let counters = &mut report.summary.counters;
    counters.insert("graphs".into(), report.verdicts.len() as u64);
    counters.insert("with_pattern".into(), with_pattern as u64);
    counters.insert("pattern_free".into(), (report.verdicts.len() - with_pattern) as u64);
    Ok(report)
}

/// Sampled check of the `k = 5` degree bounds: `δ >= n-3` forces connected,
/// `δ <= n-5` forces disconnected, `δ = n-4` is classified by the corollary.
pub fn run_k5_bounds_campaign(n: usize, samples: usize, seed: u64, opts: &RunOptions) -> Result<Report, LabError> {
    if n < 6 {
        return Err(LabError::InvalidCampaign(format!("k5 bounds campaign needs n >= 6, got {n}")));
    }
    let campaign = Campaign {
        name: "k5bounds".into(),
        n_range: (n, n),
        k_range: (5, 5),
        pairs: Vec::new(),
        mode: Mode::Sampled { count: samples, seed },
        caps: opts.caps.clone(),
    };
    let mut timer = Timer::new(opts.record_timing);
    let jobs: Vec<(usize, u64)> = (0..n)
        .flat_map(|delta| (0..samples as u64).map(move |i| (delta, i)))
        .collect();
    let ys: Vec<Graph> = jobs
        .par_iter()
        .map(|&(delta, i)| sample_graph_with_min_degree_stream(n, delta, seed, (delta as u64) << 32 | i))
        .collect::<Result<_, _>>()?;
    timer.lap("generate");
    let (verdicts, truncated) = evaluate(&ys, opts.budget(), |y| {
        let mut v = Verdict::new(y, 5);
        v.theory = Some(decide_lollipop_fs_connected(y, 5)?);
        let delta = y.min_degree();
        v.status = Some(
            if delta + 3 >= n {
                "bound_connected"
            } else if delta + 5 <= n {
                "bound_disconnected"
            } else {
                v.corollary = Some(corollary_k5_predicate(y)?);
                "gap"
            }
            .into(),
        );
        Ok(vec![v.settle()])
    })?;
    timer.lap("evaluate");
    let mut report = finalize(campaign, verdicts, truncated, timer, |v| match v.status.as_deref() {
        Some("bound_connected") if v.theory != Some(true) => Some(Reproducer::of(v, "min degree >= n-3 but disconnected")),
        Some("bound_disconnected") if v.theory != Some(false) => {
            Some(Reproducer::of(v, "min degree <= n-5 but connected"))
        }
        _ => disagreement(v),
    });
    let counters = &mut report.summary.counters;
    for v in &report.verdicts {
        let key = format!("{}:{}", v.status.as_deref().unwrap_or(""), if v.theory == Some(true) { "connected" } else { "disconnected" });
        *counters.entry(key).or_default() += 1;
    }
    Ok(report)
}

/// Compare `FS(Lollipop_{n-k,k}, Y)` with `FS(Dand_{n-k,k}, Y)` by explicit
/// oracle. Differences are findings; they become violations where none are
/// expected (`n >= 2k-1`), and their absence is a violation at `n = k` in
/// exhaustive mode.
pub fn run_problem1_scan(pairs: &[(usize, usize)], mode: Mode, opts: &RunOptions) -> Result<Report, LabError> {
    if pairs.is_empty() {
        return Err(LabError::InvalidCampaign("problem1 scan needs at least one (n, k) pair".into()));
    }
    for &(n, k) in pairs {
        if k < 2 || k > n {
            return Err(LabError::InvalidCampaign(format!("pair ({n}, {k}) needs 2 <= k <= n")));
        }
    }
    let n_max = pairs.iter().map(|p| p.0).max().unwrap();
    let n_min = pairs.iter().map(|p| p.0).min().unwrap();
    let campaign = Campaign {
        name: "problem1".into(),
        n_range: (n_min, n_max),
        k_range: (
            pairs.iter().map(|p| p.1).min().unwrap(),
            pairs.iter().map(|p| p.1).max().unwrap(),
        ),
        pairs: pairs.to_vec(),
        mode: mode.clone(),
        caps: opts.caps.clone(),
    };
    campaign.oracle_order_ok(true)?;
    let mut timer = Timer::new(opts.record_timing);
    let mut verdicts = Vec::new();
    let mut truncated = false;
    let mut counters = BTreeMap::new();
    let mut extra_violations = Vec::new();
    for (pair_index, &(n, k)) in pairs.iter().enumerate() {
        let lolli = FsSpace::new(&make_lollipop(n - k, k)?, opts.caps.component_cap)?;
        let dand = FsSpace::new(&make_dandelion(n - k, k)?, opts.caps.component_cap)?;
        let ys: Vec<Graph> = match &mode {
            Mode::Exhaustive => enumerate_labeled_graphs(n)?.collect(),
            Mode::Sampled { count, seed } => (0..*count as u64)
                .map(|i| sample_uniform_graph(n, *seed, (pair_index as u64) << 32 | i))
                .collect::<Result<_, _>>()?,
        };
        let x_label = format!("lollipop:{},{}|dandelion:{},{}", n - k, k, n - k, k);
        let (rows, cut) = evaluate(&ys, opts.budget(), |y| {
            let mut v = Verdict::new(y, k);
            v.x = Some(x_label.clone());
            v.theory = Some(decide_lollipop_fs_connected(y, k)?);
            v.oracle = Some(lolli.components(y)?.is_connected());
            v.dandelion_oracle = Some(dand.components(y)?.is_connected());
            if v.oracle != v.dandelion_oracle {
                v.status = Some("differs".into());
            }
            Ok(vec![v.settle()])
        })?;
        truncated |= cut;
        let differences = rows.iter().filter(|v| v.status.as_deref() == Some("differs")).count();
        counters.insert(format!("graphs:{n},{k}"), rows.len() as u64);
        counters.insert(format!("differences:{n},{k}"), differences as u64);
        if n == k && differences == 0 && mode == Mode::Exhaustive && !cut {
            extra_violations.push(Reproducer {
                graph6: None,
                k,
                x: Some(x_label.clone()),
                reason: format!("expected some Y with differing verdicts at n = k = {n}, found none"),
            });
        }
        verdicts.extend(rows);
        if truncated {
            break;
        }
    }
    timer.lap("evaluate");
    let mut report = finalize(campaign, verdicts, truncated, timer, disagreement);
    // Differences where n >= 2k-1 are violations; all differences are findings.
    for v in &report.verdicts {
        if v.status.as_deref() == Some("differs") {
            let n = graph6_order(&v.graph6);
            let k = v.k;
            report.findings.push(Reproducer::of(v, "lollipop and dandelion verdicts differ"));
            if n + 1 >= 2 * k {
                report
                    .counterexamples
                    .push(Reproducer::of(v, format!("difference at n = {n} >= 2k-1 = {}", 2 * k - 1)));
            }
        }
    }
    report.counterexamples.extend(extra_violations);
    report.counterexamples.sort();
    report.summary.violations = report.counterexamples.len();
    report.summary.counters = counters;
    Ok(report)
}

fn graph6_order(s: &str) -> usize {
    s.as_bytes().first().map_or(0, |&b| b.saturating_sub(63) as usize)
}

/// Non-increasing leg lists summing to `total` (integer partitions).
pub fn spider_leg_sets(total: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            cur.push(part);
            go(rest - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if total > 0 {
        go(total, total, &mut Vec::new(), &mut out);
    }
    out
}

fn spider_label(legs: &[usize]) -> String {
    let parts: Vec<String> = legs.iter().map(|l| l.to_string()).collect();
    format!("spider:{}", parts.join(","))
}

/// Whenever `Y` has a disconnected `(n - λ1)`-subset, `FS(Spider(λ), Y)` must
/// be disconnected. Exhaustive mode covers every spider of order `n` against
/// every labelled `Y`; sampled mode draws both at random.
pub fn run_spider_subsumption(n: usize, mode: Mode, opts: &RunOptions) -> Result<Report, LabError> {
    if n < 2 {
        return Err(LabError::InvalidCampaign("spider campaign needs n >= 2".into()));
    }
    let campaign = Campaign {
        name: "spider".into(),
        n_range: (n, n),
        k_range: (1, n - 1),
        pairs: Vec::new(),
        mode: mode.clone(),
        caps: opts.caps.clone(),
    };
    campaign.oracle_order_ok(true)?;
    let mut timer = Timer::new(opts.record_timing);
    let leg_sets = spider_leg_sets(n - 1);
    let spaces: Vec<FsSpace> = leg_sets
        .iter()
        .map(|legs| Ok(FsSpace::new(&make_spider(legs)?, opts.caps.component_cap)?))
        .collect::<Result<_, LabError>>()?;
    let jobs: Vec<(usize, Graph)> = match &mode {
        Mode::Exhaustive => enumerate_labeled_graphs(n)?
            .flat_map(|y| (0..leg_sets.len()).map(move |s| (s, y)))
            .collect(),
        Mode::Sampled { count, seed } => (0..*count as u64)
            .map(|i| {
                let mut rng = stream_rng(*seed, u64::MAX - i);
                let s = rng.gen_range(0..leg_sets.len());
                Ok((s, sample_uniform_graph(n, *seed, i)?))
            })
            .collect::<Result<_, LabError>>()?,
    };
    timer.lap("generate");
    let (verdicts, truncated) = evaluate(&jobs, opts.budget(), |(s, y)| {
        let legs = &leg_sets[*s];
        let size = n - legs[0];
        let mut v = Verdict::new(y, size);
        v.x = Some(spider_label(legs));
        if size < 2 {
            v.status = Some("skipped: subset size < 2".into());
            return Ok(vec![v]);
        }
        if find_disconnected_k_subset(y, size)?.is_some() {
            v.theory = Some(false);
            v.oracle = Some(spaces[*s].components(y)?.is_connected());
        } else {
            v.status = Some("no_witness".into());
        }
        Ok(vec![v.settle()])
    })?;
    timer.lap("evaluate");
    Ok(finalize(campaign, verdicts, truncated, timer, |v| {
        (v.agreement == Some(false)).then(|| Reproducer::of(v, "disconnected subset exists but FS(spider, Y) is connected"))
    }))
}
