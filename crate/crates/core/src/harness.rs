//! Instance generation and oracle-equivalence campaigns.
//!
//! A campaign runs one check over every `(g, h)` pair drawn from a
//! [`GeneratorSpec`], comparing BFS reachability on both sides of a
//! reduction and replaying every constructed path. Pairs are independent
//! and run on the rayon pool; reports merge in any order to the same value.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::error::{OracleError, ReductionError};
use crate::format::serialize_instance;
use crate::graph::Graph;
use crate::hom::{
    enumerate_homomorphisms, hom_adjacent, hom_edge_to_col_path, is_col_move, verify_path,
    Homomorphism, RecoloringPath, DEFAULT_ENUMERATION_BUDGET,
};
use crate::oracle::{hom_graph_components, ColComponents, DEFAULT_STATE_BUDGET};
use crate::reductions::{
    build_clique_incidence, build_edge_incidence, expand_move, expand_move_reflexive, lift_hom,
    lift_to_product, product_project, product_sides, product_with_k2, reflexive_path_to_original,
    retract_false_cliques, retract_hom, transfer_path_backward, unloop_sequence,
};
use crate::structure::{dismantle, fold_retraction_path, DismantlingSequence};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HarnessError {
    #[error("{candidates} candidate graphs exceed the budget of {budget}")]
    CandidateBudget { candidates: u64, budget: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Predicate {
    Reflexive,
    Irreflexive,
    Bipartite,
    SquareFree,
    DiamondFree,
    Connected,
}

impl Predicate {
    pub fn holds(self, g: &Graph) -> bool {
        match self {
            Predicate::Reflexive => g.is_reflexive(),
            Predicate::Irreflexive => g.is_irreflexive(),
            Predicate::Bipartite => g.is_bipartite(),
            Predicate::SquareFree => g.is_square_free(),
            Predicate::DiamondFree => !g.has_induced_diamond(),
            Predicate::Connected => g.is_connected(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Predicate::Reflexive => "reflexive",
            Predicate::Irreflexive => "irreflexive",
            Predicate::Bipartite => "bipartite",
            Predicate::SquareFree => "square-free",
            Predicate::DiamondFree => "diamond-free",
            Predicate::Connected => "connected",
        }
    }
}

impl FromStr for Predicate {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [
            Predicate::Reflexive,
            Predicate::Irreflexive,
            Predicate::Bipartite,
            Predicate::SquareFree,
            Predicate::DiamondFree,
            Predicate::Connected,
        ]
        .into_iter()
        .find(|p| p.name() == s)
        .ok_or_else(|| format!("unknown predicate `{}`", s))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Every labelled graph up to the vertex bound, in canonical order.
    Exhaustive,
    /// `count` graphs drawn with a seeded generator; campaigns pair the
    /// i-th `g` with the i-th `h`.
    Random { seed: u64, count: usize },
}

pub const DEFAULT_CANDIDATE_BUDGET: u64 = 1 << 22;
pub const DEFAULT_PAIR_LIMIT: usize = 10_000;

#[derive(Debug, Clone)]
pub struct GeneratorSpec {
    pub max_g_vertices: usize,
    pub max_h_vertices: usize,
    pub g_predicates: Vec<Predicate>,
    pub h_predicates: Vec<Predicate>,
    pub mode: Mode,
    /// Cap on labelled candidates examined per side in exhaustive mode.
    pub candidate_budget: u64,
    /// Homomorphism pairs checked per instance before switching to sampling.
    pub pair_limit: usize,
    pub state_budget: usize,
}

impl GeneratorSpec {
    pub fn new(max_g_vertices: usize, max_h_vertices: usize) -> Self {
        GeneratorSpec {
            max_g_vertices,
            max_h_vertices,
            g_predicates: Vec::new(),
            h_predicates: Vec::new(),
            mode: Mode::Exhaustive,
            candidate_budget: DEFAULT_CANDIDATE_BUDGET,
            pair_limit: DEFAULT_PAIR_LIMIT,
            state_budget: DEFAULT_STATE_BUDGET,
        }
    }

    pub fn g(mut self, predicates: &[Predicate]) -> Self {
        self.g_predicates = predicates.to_vec();
        self
    }

    pub fn h(mut self, predicates: &[Predicate]) -> Self {
        self.h_predicates = predicates.to_vec();
        self
    }

    pub fn mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    fn pair_seed(&self) -> u64 {
        match self.mode {
            Mode::Exhaustive => 0,
            Mode::Random { seed, .. } => seed,
        }
    }

    /// The `(g, h)` pairs a campaign runs over.
    pub fn cases(&self) -> Result<Vec<(Graph, Graph)>, HarnessError> {
        match self.mode {
            Mode::Exhaustive => {
                let gs = generate_graphs(
                    self.max_g_vertices,
                    &self.g_predicates,
                    self.mode,
                    self.candidate_budget,
                )?;
                let hs = generate_graphs(
                    self.max_h_vertices,
                    &self.h_predicates,
                    self.mode,
                    self.candidate_budget,
                )?;
                Ok(gs
                    .iter()
                    .flat_map(|g| hs.iter().map(move |h| (g.clone(), h.clone())))
                    .collect())
            }
            Mode::Random { seed, count } => {
                let gs = generate_graphs(
                    self.max_g_vertices,
                    &self.g_predicates,
                    self.mode,
                    self.candidate_budget,
                )?;
                let h_mode = Mode::Random {
                    seed: seed.wrapping_add(1),
                    count,
                };
                let hs = generate_graphs(
                    self.max_h_vertices,
                    &self.h_predicates,
                    h_mode,
                    self.candidate_budget,
                )?;
                Ok(gs.into_iter().zip(hs).collect())
            }
        }
    }
}

fn loop_masks(n: usize, predicates: &[Predicate]) -> Vec<u32> {
    let all = (1u32 << n) - 1;
    let reflexive = predicates.contains(&Predicate::Reflexive);
    let irreflexive =
        predicates.contains(&Predicate::Irreflexive) || predicates.contains(&Predicate::Bipartite);
    match (reflexive, irreflexive) {
        (true, true) => Vec::new(),
        (true, false) => vec![all],
        (false, true) => vec![0],
        (false, false) => (0..=all).collect(),
    }
}

fn vertex_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect()
}

fn build(
    name: String,
    n: usize,
    loops: u32,
    pairs: &[(usize, usize)],
    edges: impl Fn(usize) -> bool,
) -> Graph {
    let loop_list = (0..n).filter(|v| loops & (1 << v) != 0);
    let edge_list = pairs
        .iter()
        .enumerate()
        .filter(|(i, _)| edges(*i))
        .map(|(_, &e)| e);
    Graph::from_edges(name, n, loop_list, edge_list).expect("generated edges are in range")
}

/// Graphs on `1..=max_vertices` vertices satisfying every predicate.
///
/// Exhaustive mode lists labelled graphs by vertex count, then loop mask,
/// then edge mask (bit `i` is the `i`-th pair in lexicographic order), and
/// fails up front if that would examine more than `budget` candidates.
/// Random mode rejection-samples `count` graphs from a seeded ChaCha stream.
pub fn generate_graphs(
    max_vertices: usize,
    predicates: &[Predicate],
    mode: Mode,
    budget: u64,
) -> Result<Vec<Graph>, HarnessError> {
    match mode {
        Mode::Exhaustive => {
            let mut candidates = 0u64;
            for n in 1..=max_vertices {
                let pairs = (n * (n - 1) / 2) as u32;
                let per_loops = 1u64.checked_shl(pairs).unwrap_or(u64::MAX);
                let n_loops = loop_masks(n.min(31), predicates).len() as u64;
                candidates = candidates.saturating_add(per_loops.saturating_mul(n_loops));
            }
            if candidates > budget || max_vertices > 31 {
                return Err(HarnessError::CandidateBudget { candidates, budget });
            }
            let mut out = Vec::new();
            for n in 1..=max_vertices {
                let pairs = vertex_pairs(n);
                for loops in loop_masks(n, predicates) {
                    for mask in 0u64..(1u64 << pairs.len()) {
                        let name = format!("n{}-l{:x}-e{:x}", n, loops, mask);
                        let g = build(name, n, loops, &pairs, |i| mask & (1 << i) != 0);
                        if predicates.iter().all(|p| p.holds(&g)) {
                            out.push(g);
                        }
                    }
                }
            }
            Ok(out)
        }
        Mode::Random { seed, count } => {
            let mut out = Vec::new();
            if max_vertices == 0 {
                return Ok(out);
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let attempts = (count as u64).saturating_mul(1000);
            let mut tries = 0u64;
            while out.len() < count && tries < attempts {
                tries += 1;
                let n = rng.gen_range(1..=max_vertices.min(31));
                let pairs = vertex_pairs(n);
                let masks = loop_masks(n, predicates);
                if masks.is_empty() {
                    break;
                }
                let loops = if masks.len() == 1 {
                    masks[0]
                } else {
                    rng.gen_range(0..=masks[masks.len() - 1])
                };
                let bits: Vec<bool> = pairs.iter().map(|_| rng.gen_bool(0.5)).collect();
                let name = format!("r{}-n{}", out.len(), n);
                let g = build(name, n, loops, &pairs, |i| bits[i]);
                if predicates.iter().all(|p| p.holds(&g)) {
                    out.push(g);
                }
            }
            Ok(out)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Mismatch {
    pub reason: String,
    /// The offending instance in the text format, endpoints set to the first
    /// failing pair.
    pub instance: String,
}

#[derive(Debug, Clone, Default)]
pub struct CampaignReport {
    pub campaign: String,
    pub instances_run: u64,
    pub agreements: u64,
    pub mismatches: Vec<Mismatch>,
    pub budget_skips: u64,
    /// Instances skipped because a precondition failed, by reason.
    pub skips: BTreeMap<String, u64>,
    pub stats: BTreeMap<String, u64>,
    pub wall_time: Duration,
}

impl CampaignReport {
    pub fn new(campaign: &str) -> Self {
        CampaignReport {
            campaign: campaign.to_string(),
            ..Default::default()
        }
    }

    pub fn skipped(&self) -> u64 {
        self.budget_skips + self.skips.values().sum::<u64>()
    }

    pub fn is_consistent(&self) -> bool {
        self.agreements + self.mismatches.len() as u64 + self.skipped() == self.instances_run
    }

    pub fn stat(&self, key: &str) -> u64 {
        self.stats.get(key).copied().unwrap_or(0)
    }

    pub fn merge(mut self, other: CampaignReport) -> CampaignReport {
        self.instances_run += other.instances_run;
        self.agreements += other.agreements;
        self.budget_skips += other.budget_skips;
        self.mismatches.extend(other.mismatches);
        self.mismatches.sort();
        for (k, v) in other.skips {
            *self.skips.entry(k).or_default() += v;
        }
        for (k, v) in other.stats {
            *self.stats.entry(k).or_default() += v;
        }
        self.wall_time += other.wall_time;
        if self.campaign.is_empty() {
            self.campaign = other.campaign;
        }
        self
    }

    /// Deterministic text form; wall time is left out.
    pub fn render(&self) -> String {
        let mut s = String::new();
        writeln!(s, "campaign {}", self.campaign).unwrap();
        writeln!(s, "instances {}", self.instances_run).unwrap();
        writeln!(s, "agreements {}", self.agreements).unwrap();
        writeln!(s, "mismatches {}", self.mismatches.len()).unwrap();
        writeln!(s, "budget-skips {}", self.budget_skips).unwrap();
        for (k, v) in &self.skips {
            writeln!(s, "skip {} {}", v, k).unwrap();
        }
        for (k, v) in &self.stats {
            writeln!(s, "stat {} {}", k, v).unwrap();
        }
        for (i, m) in self.mismatches.iter().enumerate() {
            writeln!(s, "mismatch {}: {}", i, m.reason).unwrap();
        }
        s
    }

    pub fn render_timed(&self) -> String {
        format!(
            "{}wall-time {:.3}s\n",
            self.render(),
            self.wall_time.as_secs_f64()
        )
    }

    /// Writes `report.txt` and one `mismatch-NNNN.instance` per mismatch.
    pub fn write_counterexamples(&self, dir: &Path) -> std::io::Result<()> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("report.txt"), self.render())?;
        for (i, m) in self.mismatches.iter().enumerate() {
            let body = format!("# {}\n{}", m.reason.replace('\n', " "), m.instance);
            std::fs::write(dir.join(format!("mismatch-{:04}.instance", i)), body)?;
        }
        Ok(())
    }
}

enum Outcome {
    Agree,
    Mismatch(Mismatch),
    Skip(String),
    Budget,
}

/// Per-instance scratch: counters plus the first failure seen.
struct Check<'a> {
    g: &'a Graph,
    h: &'a Graph,
    stats: BTreeMap<String, u64>,
    failures: u64,
    first: Option<Mismatch>,
}

impl<'a> Check<'a> {
    fn new(g: &'a Graph, h: &'a Graph) -> Self {
        Check {
            g,
            h,
            stats: BTreeMap::new(),
            failures: 0,
            first: None,
        }
    }

    fn count(&mut self, key: &str, by: u64) {
        *self.stats.entry(key.to_string()).or_default() += by;
    }

    fn fail(&mut self, reason: String, alpha: &Homomorphism, beta: &Homomorphism) {
        self.failures += 1;
        if self.first.is_none() {
            self.first = Some(Mismatch {
                reason,
                instance: serialize_instance(self.g, self.h, alpha, beta),
            });
        }
    }

    fn finish(self) -> (Outcome, BTreeMap<String, u64>) {
        let outcome = match self.first {
            None => Outcome::Agree,
            Some(mut m) => {
                m.reason = format!(
                    "{} [{} failures; g = {}, h = {}]",
                    m.reason,
                    self.failures,
                    self.g.name(),
                    self.h.name()
                );
                Outcome::Mismatch(m)
            }
        };
        (outcome, self.stats)
    }
}

fn report_for(campaign: &str, outcome: Outcome, stats: BTreeMap<String, u64>) -> CampaignReport {
    let mut r = CampaignReport::new(campaign);
    r.instances_run = 1;
    r.stats = stats;
    match outcome {
        Outcome::Agree => r.agreements = 1,
        Outcome::Mismatch(m) => r.mismatches.push(m),
        Outcome::Skip(reason) => {
            r.skips.insert(reason, 1);
        }
        Outcome::Budget => r.budget_skips = 1,
    }
    r
}

fn run_cases<T: Sync>(
    campaign: &str,
    cases: &[T],
    check: impl Fn(usize, &T) -> (Outcome, BTreeMap<String, u64>) + Sync,
) -> CampaignReport {
    let started = Instant::now();
    let mut report = cases
        .par_iter()
        .enumerate()
        .map(|(i, case)| {
            let (o, s) = check(i, case);
            report_for(campaign, o, s)
        })
        .reduce(|| CampaignReport::new(campaign), CampaignReport::merge);
    report.wall_time = started.elapsed();
    report
}

/// Index pairs `i < j` to check: all of them when there are at most
/// `limit`, otherwise `limit` seeded random pairs.
pub fn select_pairs(n: usize, limit: usize, seed: u64, case: usize) -> Vec<(usize, usize)> {
    let total = n * n.saturating_sub(1) / 2;
    if total <= limit {
        return vertex_pairs(n);
    }
    let mut rng =
        ChaCha8Rng::seed_from_u64(seed ^ (case as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    (0..limit)
        .map(|_| {
            let i = rng.gen_range(0..n);
            let mut j = rng.gen_range(0..n - 1);
            if j >= i {
                j += 1;
            }
            (i.min(j), i.max(j))
        })
        .collect()
}

/// First pair on which two component labellings disagree.
fn partition_witness(a: &[usize], b: &[usize]) -> Option<(usize, usize)> {
    let mut first_a = BTreeMap::new();
    let mut first_b = BTreeMap::new();
    for k in 0..a.len() {
        let fa = *first_a.entry(a[k]).or_insert(k);
        let fb = *first_b.entry(b[k]).or_insert(k);
        if fa != fb {
            return Some(if b[fa] != b[k] { (fa, k) } else { (fb, k) });
        }
    }
    None
}

fn labels(comp: &ColComponents, homs: &[Homomorphism]) -> Vec<usize> {
    homs.iter()
        .map(|h| {
            comp.component_of(h.map())
                .expect("seeded components cover their seeds")
        })
        .collect()
}

fn enumerate(g: &Graph, h: &Graph, state_budget: usize) -> Result<Vec<Homomorphism>, OracleError> {
    let homs = enumerate_homomorphisms(g, h, DEFAULT_ENUMERATION_BUDGET)?;
    if homs.len() > state_budget {
        return Err(OracleError::BudgetExceeded {
            budget: state_budget,
        });
    }
    Ok(homs)
}

macro_rules! try_budget {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(_) => return (Outcome::Budget, BTreeMap::new()),
        }
    };
}

fn skip_reason(e: &ReductionError) -> String {
    match e {
        ReductionError::Diamond { .. } => "h has an induced diamond".into(),
        ReductionError::NotReflexive(_) => "graph not reflexive".into(),
        ReductionError::NotIrreflexive(_) => "graph not irreflexive".into(),
        ReductionError::NotBipartite(_) => "g not bipartite".into(),
        ReductionError::NotSquareFree(_) => "h not square-free".into(),
        other => other.to_string(),
    }
}

/// Col(g, h) against Col(E(g), B'(h)) on lifted endpoints, with forward,
/// backward and retracted paths replayed and the expansion bound counted.
pub fn campaign_eqtowro(spec: &GeneratorSpec) -> Result<CampaignReport, HarnessError> {
    let cases = spec.cases()?;
    Ok(run_cases("eqtowro", &cases, |i, (g, h)| {
        check_eqtowro(spec, i, g, h)
    }))
}

fn check_eqtowro(
    spec: &GeneratorSpec,
    case: usize,
    g: &Graph,
    h: &Graph,
) -> (Outcome, BTreeMap<String, u64>) {
    let ei = match build_edge_incidence(g) {
        Ok(e) => e,
        Err(e) => return (Outcome::Skip(skip_reason(&e)), BTreeMap::new()),
    };
    let ci = match build_clique_incidence(h, true) {
        Ok(c) => c,
        Err(e) => return (Outcome::Skip(skip_reason(&e)), BTreeMap::new()),
    };
    let b = ci.without_false_cliques();
    let homs = try_budget!(enumerate(g, h, spec.state_budget));
    let col = try_budget!(ColComponents::build(g, h, &homs, spec.state_budget));
    let mut c = Check::new(g, h);
    let lifted: Vec<Homomorphism> = homs
        .iter()
        .map(|a| lift_hom(a, &ei, &ci).expect("valid input"))
        .collect();
    for (a, l) in homs.iter().zip(&lifted) {
        if !crate::hom::is_homomorphism(&ei.incidence, &ci.incidence, l.map()) {
            c.fail("lift is not a homomorphism".into(), a, a);
        }
    }
    let colk = try_budget!(ColComponents::build(
        &ei.incidence,
        &ci.incidence,
        &lifted,
        spec.state_budget
    ));
    c.count("homomorphisms", homs.len() as u64);
    c.count("reduced-states", colk.total_states() as u64);

    let (la, lb) = (labels(&col, &homs), labels(&colk, &lifted));
    if let Some((i, j)) = partition_witness(&la, &lb) {
        let r = la[i] == la[j];
        c.fail(
            format!(
                "reachability differs: Col(g, h) {}, Col(E(g), B'(h)) {}",
                r, !r
            ),
            &homs[i],
            &homs[j],
        );
    }

    for (i, j) in select_pairs(homs.len(), spec.pair_limit, spec.pair_seed(), case) {
        c.count("pairs", 1);
        let (alpha, beta) = (&homs[i], &homs[j]);
        let Some(path) = col.path(alpha, beta) else {
            continue;
        };
        c.count("reachable-pairs", 1);

        let mut fwd = RecoloringPath::empty(lifted[i].clone());
        let mut cur = alpha.clone();
        let mut bound = 0usize;
        let mut ok = true;
        for &s in &path.steps {
            match expand_move(&cur, s, &ei, &ci) {
                Ok(piece) => {
                    c.count("expanded-moves", 1);
                    let limit = g.degree(s.vertex) + 1;
                    bound += limit;
                    if piece.len() > limit {
                        c.count("bound-violations", 1);
                        c.fail(
                            format!(
                                "expansion of {:?} has {} steps, bound {}",
                                s,
                                piece.len(),
                                limit
                            ),
                            alpha,
                            beta,
                        );
                    }
                    fwd.steps.extend(piece.steps);
                }
                Err(e) => {
                    c.fail(format!("expand_move failed: {}", e), alpha, beta);
                    ok = false;
                    break;
                }
            }
            cur.set(s.vertex, s.to);
        }
        if !ok {
            continue;
        }
        if fwd.len() > bound {
            c.count("bound-violations", 1);
            c.fail(
                format!("forward path has {} steps, bound {}", fwd.len(), bound),
                alpha,
                beta,
            );
        }
        if !verify_path(&ei.incidence, &ci.incidence, &fwd, &lifted[j]) {
            c.fail("forward path does not verify".into(), alpha, beta);
            continue;
        }
        match transfer_path_backward(&fwd, &ei, &ci) {
            Ok(back) if verify_path(g, h, &back, beta) => {}
            Ok(_) => c.fail("round trip does not verify".into(), alpha, beta),
            Err(e) => c.fail(format!("round trip failed: {}", e), alpha, beta),
        }
        let retracted = retract_false_cliques(&fwd, &ci);
        if !verify_path(&ei.incidence, &b, &retracted, &retract_hom(&lifted[j], &ci)) {
            c.fail("retracted path does not verify in B(h)".into(), alpha, beta);
        }
        let reduced = colk
            .path(&lifted[i], &lifted[j])
            .expect("agreement checked above");
        match transfer_path_backward(&reduced, &ei, &ci) {
            Ok(back) if verify_path(g, h, &back, beta) => {}
            Ok(_) => c.fail("backward path does not verify".into(), alpha, beta),
            Err(e) => c.fail(format!("backward transfer failed: {}", e), alpha, beta),
        }
    }
    c.finish()
}

/// Col(g, h) against Col(g°, h): every Col-adjacent pair must expand to at
/// most two valid moves, and the component structures must agree.
pub fn campaign_closure(spec: &GeneratorSpec) -> Result<CampaignReport, HarnessError> {
    let cases = spec.cases()?;
    Ok(run_cases("closure", &cases, |_, (g, h)| {
        check_closure(spec, g, h)
    }))
}

fn check_closure(spec: &GeneratorSpec, g: &Graph, h: &Graph) -> (Outcome, BTreeMap<String, u64>) {
    if !h.is_reflexive() {
        return (Outcome::Skip("graph not reflexive".into()), BTreeMap::new());
    }
    if !h.is_square_free() {
        return (Outcome::Skip("h not square-free".into()), BTreeMap::new());
    }
    let closed = g.reflexive_closure();
    let homs = try_budget!(enumerate(g, h, spec.state_budget));
    let mut c = Check::new(g, h);
    for alpha in &homs {
        for w in g.vertices() {
            for to in alpha.get(w) + 1..h.n() {
                if !is_col_move(g, h, alpha.map(), w, to) {
                    continue;
                }
                c.count("adjacent-pairs", 1);
                let mut beta = alpha.clone();
                beta.set(w, to);
                match expand_move_reflexive(g, h, alpha, &beta) {
                    Ok(p) if p.len() <= 2 && verify_path(&closed, h, &p, &beta) => {
                        if p.len() == 2 {
                            c.count("two-step-expansions", 1);
                        }
                    }
                    Ok(p) => c.fail(
                        format!("expansion of length {} does not verify", p.len()),
                        alpha,
                        &beta,
                    ),
                    Err(e) => {
                        c.count("expansion-failures", 1);
                        if g.degree(w) == 0 {
                            c.count("expansion-failures-isolated", 1);
                        }
                        c.fail(e.to_string(), alpha, &beta);
                    }
                }
            }
        }
    }
    let col = try_budget!(ColComponents::build(g, h, &homs, spec.state_budget));
    let colc = try_budget!(ColComponents::build(&closed, h, &homs, spec.state_budget));
    if let Some((i, j)) = partition_witness(&labels(&col, &homs), &labels(&colc, &homs)) {
        c.count("reachability-mismatches", 1);
        if g.vertices().any(|v| g.degree(v) == 0) {
            c.count("reachability-mismatches-isolated", 1);
        }
        c.fail(
            "reachability differs between Col(g, h) and Col(g°, h)".into(),
            &homs[i],
            &homs[j],
        );
    }
    c.finish()
}

/// Col(g, h x K2) against Col(g, (h x K2)°) on aligned endpoints, with
/// every reflexive path unlooped and replayed.
pub fn campaign_unloop(spec: &GeneratorSpec) -> Result<CampaignReport, HarnessError> {
    let cases = spec.cases()?;
    Ok(run_cases("unloop", &cases, |i, (g, h)| {
        check_unloop(spec, i, g, h)
    }))
}

fn check_unloop(
    spec: &GeneratorSpec,
    case: usize,
    g: &Graph,
    h: &Graph,
) -> (Outcome, BTreeMap<String, u64>) {
    let Some(g_sides) = g.bipartition() else {
        return (Outcome::Skip("g not bipartite".into()), BTreeMap::new());
    };
    if !h.is_irreflexive() {
        return (
            Outcome::Skip("graph not irreflexive".into()),
            BTreeMap::new(),
        );
    }
    if !h.is_square_free() {
        return (Outcome::Skip("h not square-free".into()), BTreeMap::new());
    }
    let hk = product_with_k2(h);
    let hk_sides = product_sides(h);
    let hr = hk.reflexive_closure();
    let homs = try_budget!(enumerate(g, h, spec.state_budget));
    let lifted: Vec<Homomorphism> = homs.iter().map(|a| lift_to_product(a, &g_sides)).collect();
    let plain = try_budget!(ColComponents::build(g, &hk, &lifted, spec.state_budget));
    let looped = try_budget!(ColComponents::build(g, &hr, &lifted, spec.state_budget));
    let mut c = Check::new(g, &hk);
    if let Some((i, j)) = partition_witness(&labels(&plain, &lifted), &labels(&looped, &lifted)) {
        c.fail(
            "reachability differs between Col(g, hxK2) and Col(g, (hxK2)°)".into(),
            &lifted[i],
            &lifted[j],
        );
    }
    for (i, j) in select_pairs(lifted.len(), spec.pair_limit, spec.pair_seed(), case) {
        c.count("pairs", 1);
        let Some(p) = looped.path(&lifted[i], &lifted[j]) else {
            continue;
        };
        c.count("certificates", 1);
        c.count("looped-steps", p.len() as u64);
        match unloop_sequence(g, &g_sides, &hk, &hk_sides, &p) {
            Ok(out) if verify_path(g, &hk, &out, &lifted[j]) => {
                c.count("unlooped-steps", out.len() as u64)
            }
            Ok(_) => c.fail(
                "unlooped path does not verify".into(),
                &lifted[i],
                &lifted[j],
            ),
            Err(e) => c.fail(
                format!("unloop_sequence failed: {}", e),
                &lifted[i],
                &lifted[j],
            ),
        }
    }
    c.finish()
}

/// Col(g, h) against Col(g, h x K2), and for square-free `h` also against
/// Col(g, (h x K2)°) with the certificate projected back.
pub fn campaign_product(spec: &GeneratorSpec) -> Result<CampaignReport, HarnessError> {
    let cases = spec.cases()?;
    Ok(run_cases("product", &cases, |i, (g, h)| {
        check_product(spec, i, g, h)
    }))
}

fn check_product(
    spec: &GeneratorSpec,
    case: usize,
    g: &Graph,
    h: &Graph,
) -> (Outcome, BTreeMap<String, u64>) {
    let Some(g_sides) = g.bipartition() else {
        return (Outcome::Skip("g not bipartite".into()), BTreeMap::new());
    };
    let hk = product_with_k2(h);
    let homs = try_budget!(enumerate(g, h, spec.state_budget));
    let lifted: Vec<Homomorphism> = homs.iter().map(|a| lift_to_product(a, &g_sides)).collect();
    let col = try_budget!(ColComponents::build(g, h, &homs, spec.state_budget));
    let colk = try_budget!(ColComponents::build(g, &hk, &lifted, spec.state_budget));
    let base = labels(&col, &homs);
    let mut c = Check::new(g, h);
    if let Some((i, j)) = partition_witness(&base, &labels(&colk, &lifted)) {
        c.fail(
            "reachability differs between Col(g, h) and Col(g, hxK2)".into(),
            &homs[i],
            &homs[j],
        );
    }
    let reflexive = h.is_irreflexive() && h.is_square_free();
    let colr = if reflexive {
        let hr = hk.reflexive_closure();
        let colr = try_budget!(ColComponents::build(g, &hr, &lifted, spec.state_budget));
        if let Some((i, j)) = partition_witness(&base, &labels(&colr, &lifted)) {
            c.fail(
                "reachability differs between Col(g, h) and Col(g, (hxK2)°)".into(),
                &homs[i],
                &homs[j],
            );
        }
        Some(colr)
    } else {
        None
    };
    for (i, j) in select_pairs(homs.len(), spec.pair_limit, spec.pair_seed(), case) {
        c.count("pairs", 1);
        let (alpha, beta) = (&homs[i], &homs[j]);
        if let Some(p) = colk.path(&lifted[i], &lifted[j]) {
            if !verify_path(g, h, &product_project(&p), beta) {
                c.fail("projected path does not verify".into(), alpha, beta);
            }
        }
        if let Some(p) = colr
            .as_ref()
            .and_then(|colr| colr.path(&lifted[i], &lifted[j]))
        {
            c.count("certificates", 1);
            match reflexive_path_to_original(g, h, &p) {
                Ok(back) if verify_path(g, h, &back, beta) => {}
                Ok(_) => c.fail("certificate does not verify".into(), alpha, beta),
                Err(e) => c.fail(format!("certificate failed: {}", e), alpha, beta),
            }
        }
    }
    c.finish()
}

/// Col(g, h) against Col(g, core) after pushing both endpoints onto the
/// core along the folds of `dismantle(h)`.
pub fn campaign_dismantle(spec: &GeneratorSpec) -> Result<CampaignReport, HarnessError> {
    let cases: Vec<(Graph, DismantlingSequence)> = spec
        .cases()?
        .into_iter()
        .map(|(g, h)| {
            let seq = dismantle(&h);
            (g, seq)
        })
        .collect();
    Ok(campaign_dismantle_sequences(spec, &cases))
}

/// As [`campaign_dismantle`], over explicit fold sequences (which need not
/// reach a stiff graph).
pub fn campaign_dismantle_sequences(
    spec: &GeneratorSpec,
    cases: &[(Graph, DismantlingSequence)],
) -> CampaignReport {
    run_cases("dismantle", cases, |_, (g, seq)| {
        check_dismantle(spec, g, seq)
    })
}

fn check_dismantle(
    spec: &GeneratorSpec,
    g: &Graph,
    seq: &DismantlingSequence,
) -> (Outcome, BTreeMap<String, u64>) {
    let h = &seq.graph;
    if !seq.folds_valid() {
        return (
            Outcome::Skip("invalid fold sequence".into()),
            BTreeMap::new(),
        );
    }
    let core = seq.core();
    let keep = seq.core_vertices();
    let mut position = vec![usize::MAX; h.n()];
    for (i, &v) in keep.iter().enumerate() {
        position[v] = i;
    }
    let homs = try_budget!(enumerate(g, h, spec.state_budget));
    let mut c = Check::new(g, h);
    c.count("folds", seq.folds.len() as u64);
    let mut images = Vec::with_capacity(homs.len());
    for alpha in &homs {
        let r = fold_retraction_path(g, alpha, seq).expect("enumerated maps are homomorphisms");
        if !verify_path(g, h, &r.path, &r.image) {
            c.fail(
                "fold retraction path does not verify".into(),
                alpha,
                &r.image,
            );
        }
        c.count("fold-steps", r.path.len() as u64);
        let on_core: Vec<usize> = r.image.map().iter().map(|&x| position[x]).collect();
        if on_core.contains(&usize::MAX) || !crate::hom::is_homomorphism(g, &core, &on_core) {
            c.fail(
                "retracted map does not land in the core".into(),
                alpha,
                &r.image,
            );
            return c.finish();
        }
        images.push(Homomorphism::from_map_unchecked(on_core));
    }
    let col = try_budget!(ColComponents::build(g, h, &homs, spec.state_budget));
    let colc = try_budget!(ColComponents::build(g, &core, &images, spec.state_budget));
    if let Some((i, j)) = partition_witness(&labels(&col, &homs), &labels(&colc, &images)) {
        c.fail(
            "reachability differs between Col(g, h) and Col(g, core)".into(),
            &homs[i],
            &homs[j],
        );
    }
    c.finish()
}

/// Components of Hom(g, h) against components of Col(g, h), with every
/// Hom edge turned into a Col path and replayed.
pub fn campaign_recon(spec: &GeneratorSpec) -> Result<CampaignReport, HarnessError> {
    let cases = spec.cases()?;
    Ok(run_cases("recon", &cases, |_, (g, h)| {
        check_recon(spec, g, h)
    }))
}

fn check_recon(spec: &GeneratorSpec, g: &Graph, h: &Graph) -> (Outcome, BTreeMap<String, u64>) {
    let homs = try_budget!(enumerate(g, h, spec.state_budget));
    let col = try_budget!(ColComponents::build(g, h, &homs, spec.state_budget));
    let mut c = Check::new(g, h);
    if let Some((i, j)) =
        partition_witness(&hom_graph_components(g, h, &homs), &labels(&col, &homs))
    {
        c.fail(
            "Hom-edge and Col-edge reachability differ".into(),
            &homs[i],
            &homs[j],
        );
    }
    for i in 0..homs.len() {
        for j in i + 1..homs.len() {
            if !hom_adjacent(g, h, &homs[i], &homs[j]) {
                continue;
            }
            c.count("hom-edges", 1);
            match hom_edge_to_col_path(g, h, &homs[i], &homs[j]) {
                Ok(p) if verify_path(g, h, &p, &homs[j]) => {}
                Ok(_) => c.fail(
                    "Col path from a Hom edge does not verify".into(),
                    &homs[i],
                    &homs[j],
                ),
                Err(e) => c.fail(e.to_string(), &homs[i], &homs[j]),
            }
        }
    }
    c.finish()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Campaign {
    Eqtowro,
    Unloop,
    Dismantle,
    Product,
    Closure,
    Recon,
}

impl Campaign {
    pub const ALL: [Campaign; 6] = [
        Campaign::Eqtowro,
        Campaign::Unloop,
        Campaign::Dismantle,
        Campaign::Product,
        Campaign::Closure,
        Campaign::Recon,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Campaign::Eqtowro => "eqtowro",
            Campaign::Unloop => "unloop",
            Campaign::Dismantle => "dismantle",
            Campaign::Product => "product",
            Campaign::Closure => "closure",
            Campaign::Recon => "recon",
        }
    }

    /// The generator filters matching the campaign's preconditions.
    pub fn default_spec(self, max_g: usize, max_h: usize) -> GeneratorSpec {
        use Predicate::*;
        let spec = GeneratorSpec::new(max_g, max_h);
        match self {
            Campaign::Eqtowro => {
                spec.g(&[Reflexive, Connected])
                    .h(&[Reflexive, Connected, DiamondFree])
            }
            Campaign::Unloop => spec
                .g(&[Bipartite, Connected])
                .h(&[Irreflexive, SquareFree]),
            Campaign::Dismantle => spec.g(&[Connected]),
            Campaign::Product => spec.g(&[Bipartite, Connected]).h(&[Irreflexive]),
            Campaign::Closure => spec
                .g(&[Irreflexive, Connected])
                .h(&[Reflexive, SquareFree]),
            Campaign::Recon => spec.g(&[Connected]),
        }
    }

    pub fn run(self, spec: &GeneratorSpec) -> Result<CampaignReport, HarnessError> {
        match self {
            Campaign::Eqtowro => campaign_eqtowro(spec),
            Campaign::Unloop => campaign_unloop(spec),
            Campaign::Dismantle => campaign_dismantle(spec),
            Campaign::Product => campaign_product(spec),
            Campaign::Closure => campaign_closure(spec),
            Campaign::Recon => campaign_recon(spec),
        }
    }
}

impl FromStr for Campaign {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Campaign::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown campaign `{}`", s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;
    use Predicate::*;

    #[test]
    fn tiny_reflexive_connected() {
        let gs = generate_graphs(2, &[Reflexive, Connected], Mode::Exhaustive, 100).unwrap();
        assert_eq!(gs.len(), 2);
        assert_eq!(
            gs[0].edge_set(),
            Graph::from_edges("", 1, [0], []).unwrap().edge_set()
        );
        assert!(gs[0].is_reflexive() && gs[0].n() == 1);
        assert_eq!(gs[1].edge_set(), complete(2).edge_set());
        assert!(gs[1].is_reflexive());
    }

    #[test]
    fn square_free_excludes_c4() {
        let gs = generate_graphs(
            4,
            &[Irreflexive, SquareFree, Connected],
            Mode::Exhaustive,
            1 << 20,
        )
        .unwrap();
        assert!(gs.iter().all(|g| g.is_square_free() && g.is_connected()));
        let c4 = cycle(4).edge_set();
        assert!(!gs.iter().any(|g| g.edge_set() == c4));
        // the labelled paths on four vertices are all present: 12 of them
        let paths = gs
            .iter()
            .filter(|g| g.n() == 4 && g.edge_count() == 3 && g.vertices().all(|v| g.degree(v) <= 2))
            .count();
        assert_eq!(paths, 12);
    }

    #[test]
    fn diamond_free_filter() {
        let gs = generate_graphs(5, &[Reflexive, DiamondFree], Mode::Exhaustive, 1 << 20).unwrap();
        let diamond =
            Graph::from_edges("d", 4, 0..4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
        assert!(!gs.iter().any(|g| g.edge_set() == diamond.edge_set()));
        // a clique tree: two triangles sharing a vertex
        let bowtie = Graph::from_edges(
            "b",
            5,
            0..5,
            [(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)],
        )
        .unwrap();
        assert!(gs.iter().any(|g| g.edge_set() == bowtie.edge_set()));
    }

    #[test]
    fn exhaustive_counts_and_budget() {
        // labelled graphs with arbitrary loops: 2 + 2*4 + 8*8
        assert_eq!(
            generate_graphs(3, &[], Mode::Exhaustive, 1000)
                .unwrap()
                .len(),
            74
        );
        assert_eq!(
            generate_graphs(3, &[], Mode::Exhaustive, 10),
            Err(HarnessError::CandidateBudget {
                candidates: 74,
                budget: 10
            })
        );
    }

    #[test]
    fn random_mode_is_deterministic() {
        let a = generate_graphs(6, &[Connected], Mode::Random { seed: 7, count: 20 }, 0).unwrap();
        let b = generate_graphs(6, &[Connected], Mode::Random { seed: 7, count: 20 }, 0).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 20);
        assert!(a.iter().all(Graph::is_connected));
        let c = generate_graphs(6, &[Connected], Mode::Random { seed: 8, count: 20 }, 0).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn pair_selection() {
        assert_eq!(select_pairs(3, 100, 0, 0), vec![(0, 1), (0, 2), (1, 2)]);
        let s = select_pairs(1000, 50, 3, 4);
        assert_eq!(s.len(), 50);
        assert!(s.iter().all(|&(i, j)| i < j && j < 1000));
        assert_eq!(s, select_pairs(1000, 50, 3, 4));
    }

    #[test]
    fn partition_witnesses() {
        assert_eq!(partition_witness(&[0, 0, 1], &[5, 5, 2]), None);
        let (i, j) = partition_witness(&[0, 0, 1], &[0, 1, 1]).unwrap();
        assert_ne!([0, 0, 1][i] == [0, 0, 1][j], [0, 1, 1][i] == [0, 1, 1][j]);
        let (i, j) = partition_witness(&[0, 1, 1], &[0, 0, 1]).unwrap();
        assert_ne!([0, 1, 1][i] == [0, 1, 1][j], [0, 0, 1][i] == [0, 0, 1][j]);
    }

    #[test]
    fn empty_spec_gives_zero_report() {
        let r = campaign_eqtowro(&Campaign::Eqtowro.default_spec(0, 0)).unwrap();
        assert_eq!(r.instances_run, 0);
        assert!(r.mismatches.is_empty());
        assert!(r.is_consistent());
    }

    #[test]
    fn diamonds_are_skipped() {
        let spec = GeneratorSpec::new(2, 4)
            .g(&[Reflexive, Connected])
            .h(&[Reflexive, Connected]);
        let r = campaign_eqtowro(&spec).unwrap();
        assert!(r.mismatches.is_empty(), "{}", r.render());
        assert!(
            r.skips
                .get("h has an induced diamond")
                .copied()
                .unwrap_or(0)
                > 0
        );
        assert!(r.is_consistent());
    }

    #[test]
    fn small_campaigns_agree() {
        for c in [
            Campaign::Eqtowro,
            Campaign::Unloop,
            Campaign::Dismantle,
            Campaign::Product,
            Campaign::Recon,
        ] {
            let r = c.run(&c.default_spec(2, 3)).unwrap();
            assert!(r.mismatches.is_empty(), "{}", r.render());
            assert!(r.is_consistent());
            assert!(r.agreements > 0, "{}", r.render());
        }
    }

    #[test]
    fn reports_are_reproducible() {
        let spec = Campaign::Unloop.default_spec(3, 3);
        let a = campaign_unloop(&spec).unwrap();
        let b = campaign_unloop(&spec).unwrap();
        assert_eq!(a.render(), b.render());
    }

    #[test]
    fn merge_is_order_independent() {
        let mk = |reason: &str, n: u64| {
            let mut r = CampaignReport::new("x");
            r.instances_run = n + 1;
            r.agreements = n;
            r.mismatches.push(Mismatch {
                reason: reason.into(),
                instance: String::new(),
            });
            r.stats.insert("pairs".into(), n);
            r
        };
        let ab = mk("a", 1).merge(mk("b", 2));
        let ba = mk("b", 2).merge(mk("a", 1));
        assert_eq!(ab.render(), ba.render());
        assert!(ab.is_consistent());
    }

    #[test]
    fn counterexample_directory() {
        let dir = std::env::temp_dir().join(format!("homrecol-harness-{}", std::process::id()));
        let mut r = CampaignReport::new("x");
        r.instances_run = 1;
        let inst = serialize_instance(
            &complete(3),
            &complete(3),
            &Homomorphism::from_map_unchecked(vec![0, 1, 2]),
            &Homomorphism::from_map_unchecked(vec![1, 2, 0]),
        );
        r.mismatches.push(Mismatch {
            reason: "example".into(),
            instance: inst,
        });
        r.write_counterexamples(&dir).unwrap();
        let text = std::fs::read_to_string(dir.join("mismatch-0000.instance")).unwrap();
        let parsed = crate::format::parse_instance(&text).unwrap();
        assert_eq!(parsed.beta.map(), &[1, 2, 0]);
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
