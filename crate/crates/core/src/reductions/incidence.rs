//! Vertex-edge and vertex-clique incidence graphs, and the transfer of
//! recoloring paths between Col(G, H) and Col(E(G), B'(H)).
//!
//! For reflexive `G` and reflexive `H` without an induced diamond, a
//! homomorphism `alpha: G -> H` lifts to `E(G) -> B'(H)` by sending each
//! edge `uv` of `G` to the unique maximal clique containing
//! `alpha(u) alpha(v)`, or to the pendant "false clique" `{a}` when both ends
//! land on `a`. Paths transfer in both directions, so the two recoloring
//! questions have the same answer.

use std::collections::HashMap;

use crate::error::ReductionError;
use crate::graph::Graph;
use crate::hom::{check_homomorphism, is_col_move, Homomorphism, RecoloringPath, RecoloringStep};

/// B(H) or B'(H) together with the bookkeeping needed to lift maps into it.
///
/// Side 0 keeps the vertices of `host` with their indices. Side 1 holds the
/// maximal cliques in lexicographic order, followed (in B'(H)) by one false
/// clique `{a}` per host vertex in vertex order.
#[derive(Debug, Clone)]
pub struct CliqueIncidence {
    pub host: Graph,
    pub incidence: Graph,
    members: Vec<Vec<usize>>,
    true_cliques: usize,
    with_false: bool,
    edge_clique: HashMap<(usize, usize), usize>,
}

impl CliqueIncidence {
    pub fn host_n(&self) -> usize {
        self.host.n()
    }

    pub fn true_clique_count(&self) -> usize {
        self.true_cliques
    }

    pub fn has_false_cliques(&self) -> bool {
        self.with_false
    }

    /// Members of clique-vertex `k`, or `None` for a side-0 vertex.
    pub fn clique_members(&self, k: usize) -> Option<&[usize]> {
        k.checked_sub(self.host.n())
            .and_then(|i| self.members.get(i))
            .map(Vec::as_slice)
    }

    pub fn is_clique_vertex(&self, k: usize) -> bool {
        k >= self.host.n() && k < self.incidence.n()
    }

    pub fn is_false_clique(&self, k: usize) -> bool {
        self.with_false && k >= self.host.n() + self.true_cliques && k < self.incidence.n()
    }

    /// The false clique `{a}`, if present.
    pub fn false_clique(&self, a: usize) -> Option<usize> {
        (self.with_false && a < self.host.n()).then(|| self.host.n() + self.true_cliques + a)
    }

    /// The clique vertex an image pair `(a, b)` is sent to: the unique
    /// maximal clique containing the edge `ab`, or the false clique `{a}`
    /// when `a == b`.
    pub fn clique_of(&self, a: usize, b: usize) -> Option<usize> {
        if a == b {
            self.false_clique(a)
        } else {
            self.edge_clique.get(&(a.min(b), a.max(b))).copied()
        }
    }

    /// Least true maximal clique containing host vertex `a`.
    pub fn least_clique_containing(&self, a: usize) -> usize {
        let i = self.members[..self.true_cliques]
            .iter()
            .position(|m| m.contains(&a))
            .expect("every host vertex lies in a maximal clique");
        self.host.n() + i
    }

    /// B(H) as a graph: the false cliques dropped, indices otherwise unchanged.
    pub fn without_false_cliques(&self) -> Graph {
        let keep: Vec<usize> = (0..self.host.n() + self.true_cliques).collect();
        let mut b = self.incidence.induced_subgraph(&keep);
        b.set_name(format!("B_{}", self.host.name()));
        b
    }

    /// Sends each false clique `{a}` to the least maximal clique containing `a`.
    pub fn retract_colour(&self, c: usize) -> usize {
        if self.is_false_clique(c) {
            self.least_clique_containing(c - self.host.n() - self.true_cliques)
        } else {
            c
        }
    }
}

fn set_label(s: &[usize]) -> String {
    let items: Vec<String> = s.iter().map(|v| v.to_string()).collect();
    format!("{{{}}}", items.join(","))
}

fn side0_label(g: &Graph, v: usize) -> String {
    g.label(v)
        .map_or_else(|| format!("vertex {}", v), str::to_string)
}

/// Builds B(h), or B'(h) when `with_false_cliques` is set.
pub fn build_clique_incidence(
    h: &Graph,
    with_false_cliques: bool,
) -> Result<CliqueIncidence, ReductionError> {
    if !h.is_reflexive() {
        return Err(ReductionError::NotReflexive(h.name().to_string()));
    }
    if let Some(witness) = h.find_induced_diamond() {
        return Err(ReductionError::Diamond {
            name: h.name().to_string(),
            witness,
        });
    }
    let n = h.n();
    let mut members = h.maximal_cliques();
    let true_cliques = members.len();
    if with_false_cliques {
        members.extend(h.vertices().map(|a| vec![a]));
    }
    let prefix = if with_false_cliques { "B'" } else { "B" };
    let mut b = Graph::new(format!("{}_{}", prefix, h.name()), n + members.len());
    for v in h.vertices() {
        b.set_label(v, side0_label(h, v)).expect("in range");
    }
    let mut edge_clique = HashMap::new();
    for (i, m) in members.iter().enumerate() {
        let k = n + i;
        let kind = if i < true_cliques {
            "clique"
        } else {
            "false clique"
        };
        b.set_label(k, format!("{} {}", kind, set_label(m)))
            .expect("in range");
        for &v in m {
            b.add_edge(v, k).expect("in range");
        }
        if i < true_cliques {
            for (x, &p) in m.iter().enumerate() {
                for &q in &m[x + 1..] {
                    let prev = edge_clique.insert((p, q), k);
                    debug_assert!(
                        prev.is_none(),
                        "diamond-free: each edge lies in one maximal clique"
                    );
                }
            }
        }
    }
    Ok(CliqueIncidence {
        host: h.clone(),
        incidence: b,
        members,
        true_cliques,
        with_false: with_false_cliques,
        edge_clique,
    })
}

/// E(G): one side-1 vertex per non-loop edge of `source`, numbered after the
/// vertices in lexicographic edge order. Loops get no edge-vertex.
#[derive(Debug, Clone)]
pub struct EdgeIncidence {
    pub source: Graph,
    pub incidence: Graph,
    edges: Vec<(usize, usize)>,
    edge_index: HashMap<(usize, usize), usize>,
}

impl EdgeIncidence {
    pub fn source_n(&self) -> usize {
        self.source.n()
    }

    /// Incidence-graph vertex of the edge `{u, v}`.
    pub fn edge_vertex(&self, u: usize, v: usize) -> Option<usize> {
        self.edge_index.get(&(u.min(v), u.max(v))).copied()
    }

    /// Endpoints of edge-vertex `e`, or `None` for a side-0 vertex.
    pub fn endpoints(&self, e: usize) -> Option<(usize, usize)> {
        e.checked_sub(self.source.n())
            .and_then(|i| self.edges.get(i))
            .copied()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }
}

pub fn build_edge_incidence(g: &Graph) -> Result<EdgeIncidence, ReductionError> {
    if !g.is_reflexive() {
        return Err(ReductionError::NotReflexive(g.name().to_string()));
    }
    let n = g.n();
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let mut e = Graph::new(format!("E_{}", g.name()), n + edges.len());
    for v in g.vertices() {
        e.set_label(v, side0_label(g, v)).expect("in range");
    }
    let mut edge_index = HashMap::new();
    for (i, &(u, v)) in edges.iter().enumerate() {
        let k = n + i;
        e.add_edge(u, k).expect("in range");
        e.add_edge(v, k).expect("in range");
        e.set_label(k, format!("edge ({},{})", u, v))
            .expect("in range");
        edge_index.insert((u, v), k);
    }
    Ok(EdgeIncidence {
        source: g.clone(),
        incidence: e,
        edges,
        edge_index,
    })
}

fn require_false_cliques(ci: &CliqueIncidence) -> Result<(), ReductionError> {
    if ci.with_false {
        Ok(())
    } else {
        Err(ReductionError::Precondition(
            "the lift needs B'(H), built with false cliques".into(),
        ))
    }
}

/// The lift `alpha^K: E(G) -> B'(H)`.
pub fn lift_hom(
    alpha: &Homomorphism,
    ei: &EdgeIncidence,
    ci: &CliqueIncidence,
) -> Result<Homomorphism, ReductionError> {
    require_false_cliques(ci)?;
    check_homomorphism(&ei.source, &ci.host, alpha.map())?;
    let mut map = alpha.map().to_vec();
    for &(u, v) in &ei.edges {
        let k = ci
            .clique_of(alpha.get(u), alpha.get(v))
            .expect("images of an edge are adjacent, hence in a clique");
        map.push(k);
    }
    Ok(Homomorphism::from_map_unchecked(map))
}

/// Restriction of `sigma: E(G) -> B'(H)` to the vertices of `G`.
pub fn restrict_hom(
    sigma: &Homomorphism,
    ei: &EdgeIncidence,
    ci: &CliqueIncidence,
) -> Result<Homomorphism, ReductionError> {
    let n = ei.source.n();
    if sigma.len() != ei.incidence.n() {
        return Err(ReductionError::Precondition(format!(
            "map has {} entries, E(G) has {} vertices",
            sigma.len(),
            ei.incidence.n()
        )));
    }
    for v in 0..n {
        if sigma.get(v) >= ci.host.n() {
            return Err(ReductionError::SideSwap {
                vertex: v,
                image: sigma.get(v),
            });
        }
    }
    let map = sigma.map()[..n].to_vec();
    check_homomorphism(&ei.source, &ci.host, &map)?;
    Ok(Homomorphism::from_map_unchecked(map))
}

/// Replays one Col(G, H) move `alpha -> beta` (at `step.vertex`) inside
/// Col(E(G), B'(H)), from `alpha^K` to `beta^K`.
///
/// Incident edge-vertices whose target clique already contains the old
/// colour of `u` move first; then `u` moves; then the remaining incident
/// edge-vertices follow. The output has at most `deg(u) + 1` steps.
pub fn expand_move(
    alpha: &Homomorphism,
    step: RecoloringStep,
    ei: &EdgeIncidence,
    ci: &CliqueIncidence,
) -> Result<RecoloringPath, ReductionError> {
    require_false_cliques(ci)?;
    let (g, h) = (&ei.source, &ci.host);
    check_homomorphism(g, h, alpha.map())?;
    let u = step.vertex;
    if u >= g.n() || alpha.get(u) != step.from || !is_col_move(g, h, alpha.map(), u, step.to) {
        return Err(ReductionError::Precondition(format!(
            "({} : {} -> {}) is not a Col move from {:?}",
            u, step.from, step.to, alpha
        )));
    }
    let start = lift_hom(alpha, ei, ci)?;
    if step.is_noop() {
        return Ok(RecoloringPath::empty(start));
    }
    let (old, new) = (step.from, step.to);
    let targets: Vec<(usize, usize)> = g
        .neighbors(u)
        .iter()
        .map(|&v| {
            let e = ei.edge_vertex(u, v).expect("edge of g");
            let t = ci
                .clique_of(new, alpha.get(v))
                .expect("new colour is adjacent to neighbours");
            (e, t)
        })
        .collect();

    let (e_graph, b_graph) = (&ei.incidence, &ci.incidence);
    let mut cur = start.map().to_vec();
    let mut steps = Vec::new();
    let mut push = |cur: &mut Vec<usize>, vertex: usize, to: usize| -> Result<(), ReductionError> {
        if !is_col_move(e_graph, b_graph, cur, vertex, to) {
            return Err(ReductionError::Precondition(format!(
                "expanded move ({} : {} -> {}) is invalid; is the target free of induced diamonds?",
                vertex, cur[vertex], to
            )));
        }
        steps.push(RecoloringStep::new(vertex, cur[vertex], to));
        cur[vertex] = to;
        Ok(())
    };

    for &(e, t) in &targets {
        if cur[e] != t && ci.clique_members(t).is_some_and(|m| m.contains(&old)) {
            push(&mut cur, e, t)?;
        }
    }
    push(&mut cur, u, new)?;
    for &(e, t) in &targets {
        if cur[e] != t {
            push(&mut cur, e, t)?;
        }
    }
    Ok(RecoloringPath { start, steps })
}

/// Maps a path in Col(G, H) to a path in Col(E(G), B'(H)) between the lifts
/// of its endpoints.
pub fn transfer_path_forward(
    path: &RecoloringPath,
    ei: &EdgeIncidence,
    ci: &CliqueIncidence,
) -> Result<RecoloringPath, ReductionError> {
    let start = lift_hom(&path.start, ei, ci)?;
    let mut out = RecoloringPath::empty(start);
    let mut cur = path.start.clone();
    for &s in &path.steps {
        let piece = expand_move(&cur, s, ei, ci)?;
        out.steps.extend(piece.steps);
        cur.set(s.vertex, s.to);
    }
    Ok(out)
}

/// Maps a path in Col(E(G), B'(H)) (or Col(E(G), B(H))) back to Col(G, H)
/// by restriction: moves of edge-vertices vanish.
///
/// A vertex of `G` without neighbours is unconstrained in E(G) and may jump
/// between non-adjacent colours or visit clique-vertices; such a jump is
/// replaced by a shortest walk in `H`.
pub fn transfer_path_backward(
    path: &RecoloringPath,
    ei: &EdgeIncidence,
    ci: &CliqueIncidence,
) -> Result<RecoloringPath, ReductionError> {
    let (g, h) = (&ei.source, &ci.host);
    let start = restrict_hom(&path.start, ei, ci)?;
    let mut cur = start.map().to_vec();
    let mut steps = Vec::new();
    for s in &path.steps {
        if s.vertex >= g.n() {
            continue;
        }
        let u = s.vertex;
        if s.to >= h.n() {
            if g.degree(u) == 0 {
                continue;
            }
            return Err(ReductionError::SideSwap {
                vertex: u,
                image: s.to,
            });
        }
        if s.to == cur[u] {
            continue;
        }
        if is_col_move(g, h, &cur, u, s.to) {
            steps.push(RecoloringStep::new(u, cur[u], s.to));
            cur[u] = s.to;
        } else if g.degree(u) == 0 {
            let walk = h.shortest_path(cur[u], s.to).ok_or_else(|| {
                ReductionError::Precondition(format!(
                    "colours {} and {} lie in different components of {}",
                    cur[u],
                    s.to,
                    h.name()
                ))
            })?;
            for w in walk.windows(2) {
                steps.push(RecoloringStep::new(u, w[0], w[1]));
            }
            cur[u] = s.to;
        } else {
            return Err(ReductionError::Precondition(format!(
                "restricted move ({} : {} -> {}) is not a Col(G, H) move",
                u, cur[u], s.to
            )));
        }
    }
    Ok(RecoloringPath { start, steps })
}

/// Composes every map of a Col(E(G), B'(H)) path with the retraction of
/// B'(H) onto B(H), giving a path in Col(E(G), B(H)).
pub fn retract_false_cliques(path: &RecoloringPath, ci: &CliqueIncidence) -> RecoloringPath {
    let start = Homomorphism::from_map_unchecked(
        path.start
            .map()
            .iter()
            .map(|&c| ci.retract_colour(c))
            .collect(),
    );
    let steps = path
        .steps
        .iter()
        .map(|s| RecoloringStep::new(s.vertex, ci.retract_colour(s.from), ci.retract_colour(s.to)))
        .filter(|s| !s.is_noop())
        .collect();
    RecoloringPath { start, steps }
}

/// Retraction of a single map, as used for endpoints.
pub fn retract_hom(sigma: &Homomorphism, ci: &CliqueIncidence) -> Homomorphism {
    Homomorphism::from_map_unchecked(sigma.map().iter().map(|&c| ci.retract_colour(c)).collect())
}
